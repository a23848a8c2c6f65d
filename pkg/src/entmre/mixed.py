"""Mixed-state measures: the decomposition-based relative-entropy measure
with its reference-state construction, the Wootters entanglement of
formation, and closed-form evaluators for the Bell-mixture, Werner and
departure families.

The mixed-state measure minimizes S(rho || R(mixture)) over pure-state
mixtures of rho, where R(mixture) averages the members' separable reference
states.  The search walks the isometry parametrization of all mixtures
(random restarts refined by a derivative-free descent, then a simplex
polish) and is deterministic for a given seed.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy import optimize

from . import _kernels
from .entropy import binary_entropy, relative_entropy_direct
from .errors import DecompositionError, DomainError, RegimeError
from .states import (
    BELL_PHI_MINUS,
    BELL_PHI_PLUS,
    BELL_PSI_MINUS,
    BELL_PSI_PLUS,
    Ensemble,
    RANK_TOL,
    ensemble_to_density,
    pure_state,
    validate_density,
)

PPT_TOL = -1e-9
RECONSTRUCTION_TOL = 1e-9

_BELL = (BELL_PHI_PLUS, BELL_PHI_MINUS, BELL_PSI_PLUS, BELL_PSI_MINUS)
_BASIS_KETS = np.eye(4, dtype=complex)

# Search budget knobs: restart count and tolerance live in SearchConfig; the
# per-restart descent budget scales with the parameter count.
_ES_ITERS_BASE = 600
_ES_ITERS_PER_PARAM = 55
_ES_SIGMA0 = 0.45
_POLISH_MAXITER_PER_PARAM = 60


@dataclass
class SearchConfig:
    """Budget and reproducibility knobs for the decomposition search."""

    restarts: int = 32
    m_max: int | None = None
    seed: int = 0
    tol: float = 1e-8


@dataclass
class MreResult:
    """Outcome of the decomposition search."""

    value: float
    best_ensemble: Ensemble
    best_relative_matrix: np.ndarray
    restarts_used: int
    converged: bool


def total_relative_matrix(ensemble):
    """Weighted average of the members' separable reference states."""
    table = _kernels.mixture_reference_table(ensemble.probs, ensemble.states)
    return _kernels.table_to_matrix(table)


def mre_for_decomposition(rho, ensemble):
    """Relative entropy of rho against the reference state of one mixture.

    The mixture must reconstruct rho; may return inf on support mismatch.
    """
    rho = validate_density(rho)
    recon = ensemble_to_density(ensemble)
    if np.max(np.abs(recon - rho)) > RECONSTRUCTION_TOL:
        raise DecompositionError("mixture does not reconstruct the target state")
    return relative_entropy_direct(rho, total_relative_matrix(ensemble))


def _ensemble_from_isometry(scaled_vecs, u):
    probs, states = _kernels.hjw_members(scaled_vecs, u)
    keep = probs > _kernels.MEMBER_WEIGHT_FLOOR
    probs = probs[keep]
    return Ensemble(probs / probs.sum(), states[keep])


def _isometry_from_ensemble(ensemble, evals, evecs):
    """Isometry mapping the eigen-mixture onto the given mixture of rho."""
    r = evals.size
    m = len(ensemble)
    u = np.empty((m, r), dtype=complex)
    for i, (p, psi) in enumerate(ensemble):
        u[i] = (evecs.conj().T @ (np.sqrt(p) * psi)) / np.sqrt(evals)
    return u


def _params_from_isometry(u):
    return np.concatenate([u.real.ravel(), u.imag.ravel()])


def mre_search(rho, cfg=None, warm_ensembles=()):
    """Minimize the decomposition-based measure over pure-state mixtures.

    Parameters
    ----------
    rho : array_like
        Two-qubit density matrix.
    cfg : SearchConfig, optional
        Restart count, largest mixture size (default twice the rank), seed
        and objective tolerance.
    warm_ensembles : sequence of Ensemble, optional
        Known mixtures of ``rho`` to evaluate (and possibly refine) before
        the random restarts; the result is never worse than the best of them.

    Returns
    -------
    MreResult
        Best value found, the realizing mixture, its reference state, the
        number of restarts consumed and a convergence flag.  Deterministic
        for a given seed; the value is an upper bound on the true minimum.
    """
    rho = validate_density(rho)
    cfg = cfg or SearchConfig()
    evals_all, evecs_all = np.linalg.eigh(rho)
    order = np.argsort(evals_all)[::-1]
    evals = evals_all[order]
    evecs = evecs_all[:, order]
    keep = evals > RANK_TOL
    evals = evals[keep]
    evecs = evecs[:, keep]
    r = evals.size
    s_rho = float(_kernels.entropy_bits(evals))
    scaled = evecs * np.sqrt(evals)

    if r == 1:
        psi = evecs[:, 0]
        ensemble = Ensemble(np.array([1.0]), psi[None, :])
        ref = total_relative_matrix(ensemble)
        value = float(_kernels.rel_entropy_to(rho, ref, s_rho))
        return MreResult(value, ensemble, ref, 0, True)

    m_max = cfg.m_max if cfg.m_max is not None else 2 * r
    if m_max < r:
        raise DomainError(f"m_max = {m_max} is below the rank {r}")

    def polish(params, m):
        """Simplex refinement on the real parametrization."""
        n = params.size
        return optimize.minimize(
            _kernels.mre_objective_params,
            params,
            args=(m, r, rho, s_rho, scaled),
            method="Nelder-Mead",
            options={
                "fatol": cfg.tol,
                "xatol": 1e-8,
                "maxiter": _POLISH_MAXITER_PER_PARAM * n,
                "maxfev": 2 * _POLISH_MAXITER_PER_PARAM * n,
            },
        )

    # Candidates are processed online, best-so-far: a candidate that beats the
    # running best is simplex-polished.  This keeps the result non-increasing
    # in the restart budget (earlier candidates do not depend on later ones).
    best_val = np.inf
    best_params = None
    best_m = r
    converged = True

    def consider(val, params, m):
        nonlocal best_val, best_params, best_m, converged
        if not np.isfinite(val) or val >= best_val:
            return
        best_val, best_params, best_m = val, params, m
        res = polish(params, m)
        if res.fun <= best_val:
            best_val = float(res.fun)
            best_params = res.x
        converged = bool(res.success)

    # Structured starts: the eigen-mixture and any caller-provided mixtures.
    u0 = np.eye(r, dtype=complex)
    consider(
        float(_kernels.mre_objective_u(rho, s_rho, scaled, u0)), _params_from_isometry(u0), r
    )
    for ens in warm_ensembles:
        recon = ensemble_to_density(ens)
        if np.max(np.abs(recon - rho)) > RECONSTRUCTION_TOL:
            raise DecompositionError("warm-start mixture does not reconstruct the state")
        uw = _isometry_from_ensemble(ens, evals, evecs)
        val = float(_kernels.mre_objective_u(rho, s_rho, scaled, uw))
        consider(val, _params_from_isometry(uw), uw.shape[0])

    # Random restarts, each refined by the evolution-strategy descent.
    seeds = np.random.SeedSequence(cfg.seed)
    sizes = list(range(r, m_max + 1))
    restarts_used = 0
    for i, child in enumerate(seeds.spawn(max(cfg.restarts, 0))):
        m = sizes[i % len(sizes)] if i % 2 else m_max
        rng = np.random.default_rng(child)
        params = rng.standard_normal(2 * m * r)
        n = params.size
        iters = _ES_ITERS_BASE + _ES_ITERS_PER_PARAM * n
        es_seed = int(child.generate_state(1, np.uint64)[0] >> np.uint64(1))
        val = float(
            _kernels.es_refine_mre(params, m, r, rho, s_rho, scaled, iters, _ES_SIGMA0, es_seed)
        )
        consider(val, params, m)
        restarts_used += 1

    if best_params is None:
        # Every start hit a support mismatch; report the eigen-mixture as-is.
        best_params = _params_from_isometry(u0)
        best_m = r
        converged = False

    u_best = _kernels.isometry_from_params(best_params, best_m, r)
    ensemble = _ensemble_from_isometry(scaled, u_best)
    ref = total_relative_matrix(ensemble)
    value = float(_kernels.rel_entropy_to(rho, ref, s_rho))
    return MreResult(value, ensemble, ref, restarts_used, converged)


def wootters_ef(rho):
    """Entanglement of formation via the spin-flip concurrence.

    C = max(0, l1 - l2 - l3 - l4) with l_i the descending square roots of the
    eigenvalues of rho (Y x Y) rho* (Y x Y), then
    EF = H((1 + sqrt(1 - C^2)) / 2).
    """
    rho = validate_density(rho)
    yy = np.kron(_kernels.PAULI[2], _kernels.PAULI[2]).real
    rho_tilde = yy @ rho.conj() @ yy
    w, v = np.linalg.eigh(rho)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    m = sqrt_rho @ rho_tilde @ sqrt_rho
    lams = np.sqrt(np.clip(np.linalg.eigvalsh(m), 0.0, None))[::-1]
    c = max(0.0, lams[0] - lams[1] - lams[2] - lams[3])
    return binary_entropy(0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c))))


def concurrence_mixed(rho):
    """Wootters concurrence of an arbitrary two-qubit density matrix."""
    rho = validate_density(rho)
    yy = np.kron(_kernels.PAULI[2], _kernels.PAULI[2]).real
    rho_tilde = yy @ rho.conj() @ yy
    w, v = np.linalg.eigh(rho)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    m = sqrt_rho @ rho_tilde @ sqrt_rho
    lams = np.sqrt(np.clip(np.linalg.eigvalsh(m), 0.0, None))[::-1]
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def is_ppt(rho):
    """Partial-transpose test; for two qubits this decides separability."""
    rho = validate_density(rho)
    pt = rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    return bool(np.linalg.eigvalsh(pt)[0] >= PPT_TOL)


# ---------------------------------------------------------------------------
# Bell mixtures
# ---------------------------------------------------------------------------


def _validate_bell_weights(b):
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.shape != (4,):
        raise DomainError(f"need 4 Bell weights, got shape {b.shape}")
    if np.any(b < -1e-12):
        raise DomainError("Bell weights must be nonnegative")
    if abs(b.sum() - 1.0) > 1e-12:
        raise DomainError(f"Bell weights sum to {b.sum()!r}, expected 1")
    return np.clip(b, 0.0, 1.0)


def bell_mixture_state(b):
    """Bell-diagonal state sum_k b_k |Bell_k><Bell_k|.

    Weight order: Phi+, Phi-, Psi+, Psi-.
    """
    b = _validate_bell_weights(b)
    rho = np.zeros((4, 4), complex)
    for bk, ket in zip(b, _BELL):
        rho += bk * np.outer(ket, ket.conj())
    return rho


# Per dominant Bell component: which components pick up a factor i in the
# minimizing mixture members (so every member's concurrence is 2 b_max - 1).
_MPSD_I_FACTORS = {0: (3,), 1: (2,), 2: (1,), 3: (1, 2, 3)}


def bell_mixture_mpsd(b):
    """Minimizing pure-state mixture of an entangled Bell-diagonal state.

    Eight equal-weight members sqrt(b_1)|Phi+> + s_1 f_1 sqrt(b_2)|Phi-> +
    s_2 f_2 sqrt(b_3)|Psi+> + s_3 f_3 sqrt(b_4)|Psi->, over all sign choices
    s_k in {+1, -1}; the factors f_k in {1, i} depend on which weight
    dominates.  Only defined in the entangled regime b_max >= 1/2.
    """
    b = _validate_bell_weights(b)
    idx = int(np.argmax(b))
    if b[idx] < 0.5 - 1e-12:
        raise RegimeError(
            f"largest Bell weight {b[idx]!r} is below 1/2; the state is separable"
        )
    factors = np.ones(4, complex)
    for k in _MPSD_I_FACTORS[idx]:
        factors[k] = 1j
    roots = np.sqrt(b)
    states = []
    for s1, s2, s3 in product((1.0, -1.0), repeat=3):
        signs = np.array([1.0, s1, s2, s3])
        coeff = roots * signs * factors
        psi = sum(c * ket for c, ket in zip(coeff, _BELL))
        states.append(psi)
    probs = np.full(8, 1.0 / 8.0)
    return Ensemble(probs, np.array(states))


def bell_mixture_relative_matrix(b):
    """Closed-form reference state of an entangled Bell-diagonal state.

    Matches ``total_relative_matrix(bell_mixture_mpsd(b))``.  At b_max = 1
    the closed form has a 0/0 limit; the reference state of the surviving
    Bell projector is returned, consistent with the degenerate mixture.
    """
    b = _validate_bell_weights(b)
    idx = int(np.argmax(b))
    if b[idx] < 0.5 - 1e-12:
        raise RegimeError(
            f"largest Bell weight {b[idx]!r} is below 1/2; the state is separable"
        )
    rest = 1.0 - b[idx]
    if rest < 1e-15:
        return _kernels.pure_reference_matrix(_BELL[idx])
    b1, b2, b3, b4 = b

    out = np.zeros((4, 4), complex)
    if idx in (0, 1):
        beta = (b2 if idx == 0 else b1) / rest
        gamma = (b3 - b4) / rest
        corner = (1.0 - beta) if idx == 0 else (beta - 1.0)
        out[0, 0] = out[3, 3] = 1.0 + beta
        out[1, 1] = out[2, 2] = 1.0 - beta
        out[0, 3] = out[3, 0] = corner
        out[1, 2] = out[2, 1] = gamma
    else:
        beta = (b4 if idx == 2 else b3) / rest
        gamma = (b1 - b2) / rest
        middle = (1.0 - beta) if idx == 2 else (beta - 1.0)
        out[0, 0] = out[3, 3] = 1.0 - beta
        out[1, 1] = out[2, 2] = 1.0 + beta
        out[0, 3] = out[3, 0] = gamma
        out[1, 2] = out[2, 1] = middle
    return 0.25 * out


def bell_mixture_mre_closed(b_max):
    """1 + b log2 b + (1-b) log2(1-b) for the dominant weight b >= 1/2."""
    b_max = float(b_max)
    if not 0.5 - 1e-12 <= b_max <= 1.0 + 1e-12:
        raise RegimeError(f"closed form needs b_max in [1/2, 1], got {b_max!r}")
    return 1.0 - binary_entropy(min(max(b_max, 0.5), 1.0))


def bell_mixture_ef_closed(b_max):
    """H((1 + 2 sqrt(b(1-b))) / 2) for the dominant weight b >= 1/2."""
    b_max = float(b_max)
    if not 0.5 - 1e-12 <= b_max <= 1.0 + 1e-12:
        raise RegimeError(f"closed form needs b_max in [1/2, 1], got {b_max!r}")
    b_max = min(max(b_max, 0.5), 1.0)
    return binary_entropy(0.5 * (1.0 + 2.0 * np.sqrt(b_max * (1.0 - b_max))))


# ---------------------------------------------------------------------------
# Werner family
# ---------------------------------------------------------------------------


def werner_state(fidelity):
    """F |Psi-><Psi-| + (1-F)/3 (other three Bell projectors)."""
    fidelity = float(fidelity)
    if not -1e-12 <= fidelity <= 1.0 + 1e-12:
        raise DomainError(f"fidelity {fidelity!r} outside [0, 1]")
    f = min(max(fidelity, 0.0), 1.0)
    rest = (1.0 - f) / 3.0
    return bell_mixture_state([rest, rest, rest, f])


def werner_mre_closed(fidelity):
    """1 + F log2 F + (1-F) log2(1-F), for F >= 1/2."""
    fidelity = float(fidelity)
    if fidelity < 0.5 - 1e-12:
        raise RegimeError(f"closed form needs F >= 1/2, got {fidelity!r}")
    return bell_mixture_mre_closed(min(fidelity, 1.0))


def werner_ef_closed(fidelity):
    """H((1 + 2 sqrt(F(1-F))) / 2), for F >= 1/2."""
    fidelity = float(fidelity)
    if fidelity < 0.5 - 1e-12:
        raise RegimeError(f"closed form needs F >= 1/2, got {fidelity!r}")
    return bell_mixture_ef_closed(min(fidelity, 1.0))


# ---------------------------------------------------------------------------
# Departure family: rank-2 mixtures of |Psi-> with a basis projector
# ---------------------------------------------------------------------------


def _validate_departure(index, weight):
    index = int(index)
    if index not in (1, 2, 3, 4):
        raise DomainError(f"departure family index must be 1..4, got {index}")
    weight = float(weight)
    if not -1e-12 <= weight <= 1.0 + 1e-12:
        raise DomainError(f"weight {weight!r} outside [0, 1]")
    return index, min(max(weight, 0.0), 1.0)


def departure_state(index, weight):
    """G |Psi-><Psi-| + (1-G) |i><i| with |i> a computational basis ket."""
    index, g = _validate_departure(index, weight)
    ket = _BASIS_KETS[index - 1]
    return g * np.outer(BELL_PSI_MINUS, BELL_PSI_MINUS.conj()) + (1.0 - g) * np.outer(
        ket, ket.conj()
    )


def departure_mpsd(index, weight):
    """Two-member minimizing mixture sqrt(1-G)|i> +/- sqrt(G)|Psi->.

    The raw members carry weight 1/2 each; for families 2 and 3 they are not
    orthogonal to |Psi->, so the returned normalized members carry the
    corresponding subnormalization as their weights.
    """
    index, g = _validate_departure(index, weight)
    ket = _BASIS_KETS[index - 1]
    raw_plus = np.sqrt(1.0 - g) * ket + np.sqrt(g) * BELL_PSI_MINUS
    raw_minus = np.sqrt(1.0 - g) * ket - np.sqrt(g) * BELL_PSI_MINUS
    p_plus = 0.5 * float(np.vdot(raw_plus, raw_plus).real)
    p_minus = 0.5 * float(np.vdot(raw_minus, raw_minus).real)
    states = np.array(
        [raw_plus / np.sqrt(2.0 * p_plus), raw_minus / np.sqrt(2.0 * p_minus)]
    )
    return Ensemble(np.array([p_plus, p_minus]), states)


def departure_relative_matrix(index, weight):
    """Closed-form reference state of a departure state."""
    index, g = _validate_departure(index, weight)
    if index in (2, 3):
        out = np.zeros((4, 4), complex)
        if index == 2:
            out[1, 1] = 1.0 - 0.5 * g
            out[2, 2] = 0.5 * g
        else:
            out[1, 1] = 0.5 * g
            out[2, 2] = 1.0 - 0.5 * g
        return out
    k = 1.0 / (2.0 * (1.0 + g))
    out = np.zeros((4, 4), complex)
    big, small = 2.0 - g * g, g * g
    if index == 1:
        out[0, 0] = big
        out[3, 3] = small
    else:
        out[0, 0] = small
        out[3, 3] = big
    out[1, 1] = out[2, 2] = g
    out[1, 2] = out[2, 1] = -g
    out[0, 3] = out[3, 0] = -g
    return k * out


def _departure_mre_14_series(weight):
    """Explicit logarithmic form of the family-1/4 curve (cross-check only)."""
    g = float(weight)
    if g <= 0.0:
        return 0.0
    if g >= 1.0:
        return 1.0
    s = np.sqrt(1.0 - g * g + g**4)
    out = 0.5 * (1.0 - g) * np.log2(1.0 - g) + 0.5 * (1.0 + g) * np.log2(1.0 + g)
    out += (1.0 - g) * (1.0 - g * g) / (2.0 * s) * np.log2((1.0 - s) / (1.0 + s))
    out -= (1.0 - g) * np.log2(0.5 * g)
    return float(out)


def departure_mre_closed(index, weight):
    """Measure value of a departure state against its closed-form reference.

    Families 2 and 3 use the explicit two-term logarithmic expression;
    families 1 and 4 evaluate the relative entropy against the closed-form
    reference matrix directly (the authoritative path, which the explicit
    series form reproduces).

    Note: for families 1 and 4 the two-member mixture behind this closed
    form is not the global minimizer; mixtures of sqrt(1-G)|i> +
    e^{i phi} sqrt(G)|psi-> over three or more equally spaced phases give a
    strictly lower value, which ``mre_search`` finds.  This function returns
    the closed form of the two-member construction.
    """
    index, g = _validate_departure(index, weight)
    if index in (2, 3):
        if g <= 0.0 or g >= 1.0:
            return 0.0 if g <= 0.0 else 1.0
        v = np.sqrt(1.0 - 2.0 * g * (1.0 - g))
        out = (1.0 - v) * np.log2(1.0 - v) + (1.0 + v) * np.log2(1.0 + v)
        out -= g * np.log2(g) + (2.0 - g) * np.log2(2.0 - g)
        return float(0.5 * out)
    rho = departure_state(index, g)
    return relative_entropy_direct(rho, departure_relative_matrix(index, g))


def departure_ef_closed(weight):
    """H((1 + sqrt(1 - G^2)) / 2): entanglement of formation, families 1/4."""
    weight = float(weight)
    if not -1e-12 <= weight <= 1.0 + 1e-12:
        raise DomainError(f"weight {weight!r} outside [0, 1]")
    g = min(max(weight, 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - g * g))))


def departure_avg_reduced_entropy(index, weight):
    """Weighted average of the members' reduced entropies, families 2/3.

    The two mixture members are weighted by their mixture probabilities
    (1 +/- sqrt(2G(1-G)))/2 and their Bloch norms are computed directly, so
    the average always dominates the family's measure value.
    """
    index, g = _validate_departure(index, weight)
    if index not in (2, 3):
        raise DomainError("the averaged reduced entropy is defined for families 2 and 3")
    from .pure import xi_norm

    ensemble = departure_mpsd(index, g)
    out = 0.0
    for p, psi in ensemble:
        out += p * binary_entropy(0.5 * (1.0 + xi_norm(pure_state(psi))))
    return float(out)
