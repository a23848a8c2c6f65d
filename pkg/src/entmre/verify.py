"""Randomized property suites behind the ``verify`` command.

Each property draws a configurable number of samples from a seeded
generator, records the worst residual and the sample realizing it, and
passes iff the residual stays within the property's tolerance.  Failing
samples are serialized so a run can be replayed.
"""

import zlib
from dataclasses import dataclass, field

import numpy as np

from . import channels, entropy, io, mixed, pure, re_oracle, states


@dataclass
class PropertyResult:
    name: str
    samples: int
    tolerance: float
    max_residual: float
    passed: bool
    worst_sample: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name,
            "samples": self.samples,
            "tolerance": self.tolerance,
            "max_residual": self.max_residual,
            "passed": self.passed,
            "worst_sample": self.worst_sample,
        }


def _track(worst, residual, payload):
    if residual > worst[0]:
        worst[0] = residual
        worst[1] = payload
    return worst


def _pure_payload(psi):
    return {"psi": io.encode_vector(psi)}


def _density_payload(rho):
    return {"density": io.encode_matrix(rho)}


# ---------------------------------------------------------------------------
# Property implementations.  Each returns (max_residual, worst_payload).
# ---------------------------------------------------------------------------


def _prop_pauli_roundtrip(rng, samples):
    worst = [0.0, {}]
    for _ in range(samples):
        rho = states.random_density(rng, rank=int(rng.integers(1, 5)))
        table = states.pauli_expand(rho)
        back = states.pauli_reconstruct(table)
        _track(worst, float(np.max(np.abs(back - rho))), _density_payload(rho))
    return worst


def _prop_purity_identity(rng, samples):
    # (1/4) sum a_{mu nu}^2 equals Tr(rho^2); pure states pin both at 1.
    worst = [0.0, {}]
    for i in range(samples):
        if i % 2:
            rho = states.pure_to_density(states.random_pure_state(rng))
        else:
            rho = states.random_density(rng, rank=int(rng.integers(2, 5)))
        table = states.pauli_expand(rho)
        residual = abs(0.25 * float(np.sum(table**2)) - float((rho @ rho).trace().real))
        _track(worst, residual, _density_payload(rho))
    return worst


def _prop_lemma_two(rng, samples):
    worst = [0.0, {}]
    for _ in range(samples):
        psi = states.random_pure_state(rng)
        _track(worst, states.lemma_two_residual(psi), _pure_payload(psi))
    return worst


def _prop_xi_concurrence(rng, samples):
    worst = [0.0, {}]
    for _ in range(samples):
        psi = states.random_pure_state(rng)
        c = pure.concurrence_pure(psi)
        x = pure.xi_norm(psi)
        _track(worst, abs(c * c + x * x - 1.0), _pure_payload(psi))
    return worst


def _prop_pure_identity(rng, samples):
    # The measure of a pure state equals its entanglement of formation and
    # the entropy of either reduced state.
    worst = [0.0, {}]
    for _ in range(samples):
        psi = states.random_pure_state(rng)
        rho = states.pure_to_density(psi)
        m = pure.mre_pure(psi)
        residual = max(
            abs(m - pure.ef_pure(psi)),
            abs(m - entropy.von_neumann(states.reduced(rho, "A"))),
            abs(m - entropy.von_neumann(states.reduced(rho, "B"))),
        )
        _track(worst, residual, _pure_payload(psi))
    return worst


def _prop_relative_matrix(rng, samples):
    # Reference state is separable (PPT), unit trace, and its spectrum
    # matches the overlap spectrum.
    worst = [0.0, {}]
    for _ in range(samples):
        psi = states.random_pure_state(rng)
        parts = pure.relative_matrix_pure(psi)
        r = parts.matrix
        residual = abs(float(r.trace().real) - 1.0)
        residual = max(residual, float(np.max(np.abs(r - r.conj().T))))
        pt = r.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
        residual = max(residual, max(0.0, -float(np.linalg.eigvalsh(pt)[0])))
        evs = np.sort(np.linalg.eigvalsh(r))[::-1]
        om = np.sort(pure.omega_spectrum(psi))[::-1]
        residual = max(residual, float(np.max(np.abs(evs - om))))
        _track(worst, residual, _pure_payload(psi))
    return worst


def _prop_lemma_one(rng, samples):
    # The eigen-form evaluator agrees with the direct definition.
    worst = [0.0, {}]
    for _ in range(samples):
        rho = states.random_density(rng, rank=int(rng.integers(1, 5)))
        sigma = states.random_density(rng, rank=4)
        w, v = np.linalg.eigh(sigma)
        direct = entropy.relative_entropy_direct(rho, sigma)
        eig_form = entropy.relative_entropy_lemma1(rho, (w, v))
        _track(
            worst,
            abs(direct - eig_form),
            {"rho": io.encode_matrix(rho), "sigma": io.encode_matrix(sigma)},
        )
    return worst


def _prop_klein(rng, samples):
    # Relative entropy is nonnegative and vanishes only on equal states.
    worst = [0.0, {}]
    for _ in range(samples):
        rho = states.random_density(rng, rank=int(rng.integers(1, 5)))
        sigma = states.random_density(rng, rank=4)
        val = entropy.relative_entropy_direct(rho, sigma)
        residual = max(0.0, -val)
        residual = max(residual, abs(entropy.relative_entropy_direct(rho, rho)))
        _track(
            worst,
            residual,
            {"rho": io.encode_matrix(rho), "sigma": io.encode_matrix(sigma)},
        )
    return worst


def _prop_joint_convexity(rng, samples):
    worst = [0.0, {}]
    for _ in range(samples):
        n = int(rng.integers(2, 5))
        p = rng.dirichlet(np.ones(n))
        rhos = [states.random_density(rng, rank=int(rng.integers(1, 5))) for _ in range(n)]
        sigmas = [states.random_density(rng, rank=4) for _ in range(n)]
        lhs = entropy.relative_entropy_direct(
            sum(pi * r for pi, r in zip(p, rhos)),
            sum(pi * s for pi, s in zip(p, sigmas)),
        )
        rhs = sum(
            pi * entropy.relative_entropy_direct(r, s)
            for pi, r, s in zip(p, rhos, sigmas)
        )
        _track(
            worst,
            max(0.0, lhs - rhs),
            {"p": list(map(float, p)), "rho0": io.encode_matrix(rhos[0])},
        )
    return worst


def _prop_entropy_monotone(rng, samples):
    # Relative entropy contracts under the partial trace and under the
    # product-measurement channels.
    worst = [0.0, {}]
    for _ in range(samples):
        rho = states.random_density(rng, rank=int(rng.integers(1, 5)))
        sigma = states.random_density(rng, rank=4)
        base = entropy.relative_entropy_direct(rho, sigma)
        reduced_gap = (
            entropy.relative_entropy_direct(states.reduced(rho, "A"), states.reduced(sigma, "A"))
            - base
        )
        kset = channels.random_kraus_set(rng)
        out_rho, _ = channels.apply_mixed(kset, rho)
        out_sigma, _ = channels.apply_mixed(kset, sigma)
        out_rho = 0.5 * (out_rho + out_rho.conj().T)
        out_sigma = 0.5 * (out_sigma + out_sigma.conj().T)
        channel_gap = entropy.relative_entropy_direct(out_rho, out_sigma) - base
        _track(
            worst,
            max(0.0, reduced_gap, channel_gap),
            {"rho": io.encode_matrix(rho), "sigma": io.encode_matrix(sigma)},
        )
    return worst


def _prop_hjw_reconstruction(rng, samples):
    worst = [0.0, {}]
    for _ in range(samples):
        rank = int(rng.integers(1, 5))
        rho = states.random_density(rng, rank=rank)
        m = int(rng.integers(rank, 2 * rank + 1))
        z = rng.standard_normal((m, rank)) + 1j * rng.standard_normal((m, rank))
        u, _ = np.linalg.qr(z)
        ens = states.hjw_ensemble(rho, u)
        _track(
            worst,
            float(np.max(np.abs(states.ensemble_to_density(ens) - rho))),
            _density_payload(rho),
        )
    return worst


def _prop_determinant_identity(rng, samples):
    # The 2x2 minor ad - bc picks up det A det B under every product branch.
    worst = [0.0, {}]
    for _ in range(samples):
        psi = states.random_pure_state(rng)
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        phi = np.kron(a, b) @ psi
        lhs = phi[0] * phi[3] - phi[1] * phi[2]
        rhs = (psi[0] * psi[3] - psi[1] * psi[2]) * np.linalg.det(a) * np.linalg.det(b)
        _track(worst, abs(lhs - rhs), _pure_payload(psi))
    return worst


def _prop_lemma_four(rng, samples):
    # Closed form for the transformed Bloch norm vs direct recomputation.
    worst = [0.0, {}]
    for _ in range(samples):
        psi = states.random_pure_state(rng)
        kset = channels.random_kraus_set(rng)
        for pair in kset:
            op = np.kron(pair.a, pair.b)
            phi = op @ psi
            q = float(np.vdot(phi, phi).real)
            if q <= channels.BRANCH_FLOOR:
                continue
            closed = channels.xi_after_lgm(psi, pair)
            direct = pure.xi_norm(phi / np.sqrt(q)) ** 2
            _track(worst, abs(closed - direct), _pure_payload(psi))
    return worst


def _prop_lemma_five(rng, samples):
    # Proportional-type branches preserve the Bloch norm and the pure
    # measure.
    worst = [0.0, {}]
    for _ in range(samples):
        psi = states.random_pure_state(rng)
        kset = channels.random_proportional_kraus_set(rng, branches=int(rng.integers(1, 4)))
        x0 = pure.xi_norm(psi) ** 2
        e0 = pure.ef_pure(psi)
        for pair in kset:
            branch = channels.apply_pure(pair, psi)
            residual = max(
                abs(pure.xi_norm(branch.state) ** 2 - x0),
                abs(pure.ef_pure(branch.state) - e0),
            )
            _track(worst, residual, _pure_payload(psi))
    return worst


def _prop_lemma_six(rng, samples):
    # No product channel creates entanglement from a separable state.
    worst = [0.0, {}]
    for _ in range(samples):
        rho = states.random_separable_density(rng, terms=int(rng.integers(1, 7)))
        kset = channels.random_kraus_set(rng)
        total, branches = channels.apply_mixed(kset, rho)
        total = 0.5 * (total + total.conj().T)
        residual = mixed.wootters_ef(total)
        for q, out in branches:
            residual = max(residual, mixed.wootters_ef(0.5 * (out + out.conj().T)))
        _track(worst, residual, _density_payload(rho))
    return worst


def _prop_theorem_two(rng, samples):
    # Any mixture's objective is at most its members' average entanglement.
    worst = [0.0, {}]
    for _ in range(samples):
        n = int(rng.integers(2, 6))
        p = rng.dirichlet(np.ones(n))
        members = np.array([states.random_pure_state(rng) for _ in range(n)])
        ens = states.Ensemble(p, members)
        rho = states.ensemble_to_density(ens)
        rho = 0.5 * (rho + rho.conj().T)
        lhs = mixed.mre_for_decomposition(rho, ens)
        rhs = sum(pi * pure.ef_pure(psi) for pi, psi in ens)
        _track(worst, max(0.0, lhs - rhs), {"p": list(map(float, p))})
    return worst


def _prop_theorem_four(rng, samples):
    # The probability-averaged measure never grows under a complete set.
    # (Individual branches can concentrate entanglement; the branchwise gap
    # is surfaced in the monotonicity reports, not asserted here.)
    worst = [0.0, {}]
    for _ in range(samples):
        psi = states.random_pure_state(rng)
        kset = channels.random_kraus_set(
            rng, n_a=int(rng.integers(1, 4)), n_b=int(rng.integers(1, 4))
        )
        report = channels.check_monotone_pure(psi, kset)
        _track(worst, max(0.0, -report.mre_gap), _pure_payload(psi))
    return worst


def _prop_branch_probabilities(rng, samples):
    worst = [0.0, {}]
    for _ in range(samples):
        psi = states.random_pure_state(rng)
        kset = channels.random_kraus_set(rng)
        total = sum(
            float(np.vdot(np.kron(a, b) @ psi, np.kron(a, b) @ psi).real)
            for a, b in kset
        )
        _track(worst, abs(total - 1.0), _pure_payload(psi))
    return worst


def _random_entangled_bell_weights(rng):
    b_max = float(rng.uniform(0.5, 0.98))
    rest = rng.dirichlet(np.ones(3)) * (1.0 - b_max)
    weights = np.empty(4)
    idx = int(rng.integers(0, 4))
    others = [k for k in range(4) if k != idx]
    weights[idx] = b_max
    for slot, w in zip(others, rest):
        weights[slot] = w
    return weights


def _prop_bell_closed(rng, samples):
    # Closed-form reference matrix and measure value vs the constructed
    # mixture, on entangled Bell-diagonal states.
    worst = [0.0, {}]
    for _ in range(samples):
        b = _random_entangled_bell_weights(rng)
        rho = mixed.bell_mixture_state(b)
        ens = mixed.bell_mixture_mpsd(b)
        residual = float(
            np.max(
                np.abs(mixed.bell_mixture_relative_matrix(b) - mixed.total_relative_matrix(ens))
            )
        )
        residual = max(
            residual,
            abs(mixed.mre_for_decomposition(rho, ens) - mixed.bell_mixture_mre_closed(b.max())),
        )
        _track(worst, residual, {"weights": list(map(float, b))})
    return worst


def _prop_departure_closed(rng, samples):
    worst = [0.0, {}]
    for _ in range(samples):
        g = float(rng.uniform(0.02, 0.98))
        index = int(rng.integers(1, 5))
        rho = mixed.departure_state(index, g)
        ens = mixed.departure_mpsd(index, g)
        residual = float(
            np.max(
                np.abs(
                    mixed.departure_relative_matrix(index, g)
                    - mixed.total_relative_matrix(ens)
                )
            )
        )
        residual = max(
            residual,
            abs(mixed.mre_for_decomposition(rho, ens) - mixed.departure_mre_closed(index, g)),
        )
        _track(worst, residual, {"index": index, "weight": g})
    return worst


def _prop_separable_mre(rng, samples):
    # The searched measure vanishes on separable states.
    worst = [0.0, {}]
    for i in range(samples):
        rho = states.random_separable_density(rng, terms=4)
        res = mixed.mre_search(rho, mixed.SearchConfig(restarts=8, seed=1000 + i))
        _track(worst, max(0.0, res.value), _density_payload(rho))
    return worst


def _prop_theorem_five(rng, samples):
    worst = [0.0, {}]
    for i in range(samples):
        b = _random_entangled_bell_weights(rng)
        rho = mixed.bell_mixture_state(b)
        kset = channels.random_proportional_kraus_set(rng, branches=3)
        report = channels.check_monotone_mixed(
            rho, kset, mixed.SearchConfig(restarts=4, seed=2000 + i)
        )
        _track(worst, max(0.0, -report.gap), {"weights": list(map(float, b))})
    return worst


def _prop_bound_chain(rng, samples):
    worst = [0.0, {}]
    for i in range(samples):
        rho = states.random_density(rng, rank=2)
        report = re_oracle.verify_bound_chain(
            rho,
            mixed.SearchConfig(restarts=8, seed=3000 + i),
            re_oracle.ReConfig(restarts=8, seed=3000 + i),
        )
        residual = max(
            0.0,
            report.re_value - report.mre_value,
            report.mre_value - report.ef_value,
        )
        _track(worst, residual, _density_payload(rho))
    return worst


# name -> (runner, default sample count, tolerance)
PROPERTIES = {
    "pauli-roundtrip": (_prop_pauli_roundtrip, 200, 1e-12),
    "purity-identity": (_prop_purity_identity, 200, 1e-10),
    "lemma-two": (_prop_lemma_two, 1000, 1e-10),
    "xi-concurrence": (_prop_xi_concurrence, 1000, 1e-10),
    "pure-identity": (_prop_pure_identity, 1000, 1e-9),
    "relative-matrix": (_prop_relative_matrix, 500, 1e-10),
    "lemma-one": (_prop_lemma_one, 300, 1e-9),
    "klein": (_prop_klein, 300, 1e-9),
    "joint-convexity": (_prop_joint_convexity, 200, 1e-9),
    "entropy-monotone": (_prop_entropy_monotone, 100, 1e-9),
    "hjw-reconstruction": (_prop_hjw_reconstruction, 200, 1e-10),
    "determinant-identity": (_prop_determinant_identity, 500, 1e-12),
    "lemma-four": (_prop_lemma_four, 300, 1e-9),
    "lemma-five": (_prop_lemma_five, 300, 1e-10),
    "lemma-six": (_prop_lemma_six, 100, 1e-9),
    "theorem-two": (_prop_theorem_two, 200, 1e-9),
    "theorem-four": (_prop_theorem_four, 200, 1e-9),
    "branch-probabilities": (_prop_branch_probabilities, 200, 1e-10),
    "bell-closed": (_prop_bell_closed, 100, 1e-9),
    "departure-closed": (_prop_departure_closed, 100, 1e-9),
    "separable-mre": (_prop_separable_mre, 3, 1e-6),
    "theorem-five": (_prop_theorem_five, 3, 1e-4),
    "bound-chain": (_prop_bound_chain, 2, 1e-4),
}


def run_properties(names=None, seed=0, samples=None, tol_overrides=None):
    """Run the selected property suites and return their results.

    ``samples`` overrides every property's sample count; ``tol_overrides``
    maps property names to replacement tolerances.
    """
    tol_overrides = tol_overrides or {}
    selected = list(PROPERTIES) if names is None else list(names)
    results = []
    for name in selected:
        if name not in PROPERTIES:
            raise KeyError(f"unknown property {name!r}; known: {', '.join(PROPERTIES)}")
        runner, default_samples, default_tol = PROPERTIES[name]
        n = samples if samples is not None else default_samples
        tol = float(tol_overrides.get(name, default_tol))
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(zlib.crc32(name.encode()),))
        )
        max_residual, worst = runner(rng, n)
        results.append(
            PropertyResult(
                name=name,
                samples=n,
                tolerance=tol,
                max_residual=float(max_residual),
                passed=bool(max_residual <= tol),
                worst_sample=worst,
            )
        )
    return results
