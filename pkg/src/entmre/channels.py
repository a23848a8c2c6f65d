"""Local general measurement plus classical communication on two qubits.

A channel is a set of product operator pairs (A_l, B_l) acting as
rho -> sum_l (A_l x B_l) rho (A_l x B_l)^dagger with the joint completeness
relation sum_l A_l^dagger A_l (x) B_l^dagger B_l = I.  The module provides the
branch transformations, the closed form for the transformed Bloch norm, and
the monotonicity checks of the decomposition-based measure under such
channels.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels, mixed
from .errors import (
    AnnihilatedBranchError,
    CompletenessError,
    RestrictionError,
    StateError,
)
from .pure import mre_pure, xi_norm
from .states import Ensemble, pure_state, validate_density

COMPLETENESS_TOL = 1e-10
BRANCH_FLOOR = 1e-14
PROPORTIONAL_TOL = 1e-9
SHIFT_EPSILON = 1e-6


class KrausPair(NamedTuple):
    """One product branch operator (A acts on party A, B on party B)."""

    a: np.ndarray
    b: np.ndarray


class PureBranch(NamedTuple):
    """Branch probability and the normalized transformed pure state."""

    probability: float
    state: np.ndarray


class BranchOutcome(NamedTuple):
    """Branch probability and the normalized transformed density matrix."""

    probability: float
    state: np.ndarray


def kraus_pair(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise StateError("branch operators must be 2x2 matrices")
    return KrausPair(a, b)


@dataclass
class KrausSet:
    """Complete collection of product branch operators."""

    pairs: list = field(default_factory=list)

    def __post_init__(self):
        self.pairs = [kraus_pair(p[0], p[1]) for p in self.pairs]
        total = np.zeros((4, 4), complex)
        for a, b in self.pairs:
            total += np.kron(a.conj().T @ a, b.conj().T @ b)
        if np.max(np.abs(total - np.eye(4))) > COMPLETENESS_TOL:
            raise CompletenessError(
                "sum of A^dag A (x) B^dag B deviates from the identity by "
                f"{np.max(np.abs(total - np.eye(4))):.3e}"
            )

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def apply_pure(pair, psi):
    """One branch acting on a pure state: probability and transformed state."""
    psi = pure_state(psi)
    phi = np.kron(pair.a, pair.b) @ psi
    q = float(np.vdot(phi, phi).real)
    if q <= BRANCH_FLOOR:
        raise AnnihilatedBranchError(f"branch probability {q!r} is numerically zero")
    return PureBranch(q, phi / np.sqrt(q))


def xi_after_lgm(psi, pair):
    """Squared Bloch norm of the transformed state, in closed form.

    xi''^2 = 1 - 4 |ad - bc|^2 det(A^dag A B^dag B) / q^2, where q is the
    branch probability.  Agrees with recomputing the norm on the transformed
    state directly.
    """
    psi = pure_state(psi)
    phi = np.kron(pair.a, pair.b) @ psi
    q = float(np.vdot(phi, phi).real)
    if q <= BRANCH_FLOOR:
        raise AnnihilatedBranchError(f"branch probability {q!r} is numerically zero")
    det_factor = float(
        (np.linalg.det(pair.a.conj().T @ pair.a) * np.linalg.det(pair.b.conj().T @ pair.b)).real
    )
    minor = abs(psi[0] * psi[3] - psi[1] * psi[2]) ** 2
    return 1.0 - 4.0 * minor * det_factor / (q * q)


def apply_mixed(kraus_set, rho):
    """Full channel on a density matrix: total output and branch outcomes.

    Branches below the probability floor are dropped; their weight is
    negligible by construction.
    """
    rho = validate_density(rho)
    if not isinstance(kraus_set, KrausSet):
        kraus_set = KrausSet(list(kraus_set))
    total = np.zeros((4, 4), complex)
    branches = []
    for a, b in kraus_set:
        op = np.kron(a, b)
        out = op @ rho @ op.conj().T
        q = float(out.trace().real)
        total += out
        if q > BRANCH_FLOOR:
            branches.append(BranchOutcome(q, out / q))
    if abs(total.trace().real - 1.0) > COMPLETENESS_TOL:
        raise CompletenessError("channel output trace deviates from 1")
    return total, branches


# ---------------------------------------------------------------------------
# Monotonicity checks
# ---------------------------------------------------------------------------


@dataclass
class PureMonotonicityReport:
    """Branchwise behavior of a pure state under one complete channel."""

    xi_sq_before: float
    mre_before: float
    branch_probabilities: np.ndarray
    branch_xi_sq: np.ndarray
    averaged_mre: float
    min_xi_gap: float
    mre_gap: float
    tolerance: float
    passed: bool


def check_monotone_pure(psi, kraus_set, tol=1e-9):
    """Check that no branch lowers the Bloch norm and the averaged measure
    does not exceed the input's.

    Violations are reported through the ``passed`` flag and the two gap
    fields, not raised.
    """
    psi = pure_state(psi)
    if not isinstance(kraus_set, KrausSet):
        kraus_set = KrausSet(list(kraus_set))
    xi_sq = xi_norm(psi) ** 2
    mre_in = mre_pure(psi)
    probs = []
    xi_after = []
    avg = 0.0
    for pair in kraus_set:
        op = np.kron(pair.a, pair.b)
        phi = op @ psi
        q = float(np.vdot(phi, phi).real)
        if q <= BRANCH_FLOOR:
            continue
        phi = phi / np.sqrt(q)
        probs.append(q)
        xi_after.append(xi_norm(phi) ** 2)
        avg += q * mre_pure(phi)
    probs = np.array(probs)
    xi_after = np.array(xi_after)
    min_gap = float(np.min(xi_after - xi_sq)) if xi_after.size else 0.0
    mre_gap = mre_in - avg
    passed = min_gap >= -tol and mre_gap >= -tol
    return PureMonotonicityReport(
        xi_sq_before=xi_sq,
        mre_before=mre_in,
        branch_probabilities=probs,
        branch_xi_sq=xi_after,
        averaged_mre=avg,
        min_xi_gap=min_gap,
        mre_gap=mre_gap,
        tolerance=tol,
        passed=passed,
    )


@dataclass
class ShiftCheck:
    """Stability of the measure under a small Schmidt-coefficient shift
    applied to maximally entangled mixture members."""

    epsilon: float
    value_at_epsilon: float
    value_at_half_epsilon: float
    extrapolated: float
    reference: float
    stable: bool


@dataclass
class MixedMonotonicityReport:
    """Search-based monotonicity check for proportional-type channels."""

    mre_before: float
    mre_after: float
    gap: float
    tolerance: float
    passed: bool
    shift_check: ShiftCheck | None


@dataclass
class ChannelSurvey:
    """Measured (not asserted) behavior of the measure under one channel.

    For channels outside the proportional type no monotonicity statement is
    made; this simply reports both search values and their gap.
    """

    mre_before: float
    mre_after: float
    gap: float


def schmidt_shifted(psi, epsilon):
    """Rebalance a (nearly) maximally entangled state's Schmidt weights to
    (1 - eps)/2 and (1 + eps)/2, keeping its Schmidt bases."""
    psi = pure_state(psi)
    amp = psi.reshape(2, 2)
    u, s, vh = np.linalg.svd(amp)
    new_s = np.array([np.sqrt(0.5 * (1.0 - epsilon)), np.sqrt(0.5 * (1.0 + epsilon))])
    # Keep the dominant coefficient on the dominant Schmidt vector.
    new_s = np.sort(new_s)[::-1]
    shifted = (u * new_s) @ vh
    return shifted.reshape(4)


def _shifted_objective(ensemble, epsilon):
    """Measure objective with maximally entangled members Schmidt-shifted.

    Both the reconstructed state and the reference average use the shifted
    members, so the value converges to the unshifted one as eps -> 0.
    """
    states = []
    for psi in ensemble.states:
        if xi_norm(pure_state(psi)) < _kernels.DEGENERATE_XI:
            states.append(schmidt_shifted(psi, epsilon))
        else:
            states.append(psi)
    shifted = Ensemble(ensemble.probs, np.array(states))
    rho_eps = shifted.density()
    ref = mixed.total_relative_matrix(shifted)
    s_rho = float(_kernels.entropy_bits(np.linalg.eigvalsh(rho_eps)))
    return float(_kernels.rel_entropy_to(rho_eps, ref, s_rho))


def _pushforward_ensemble(ensemble, kraus_set):
    """Image of a mixture under the channel, branch by branch.

    The branch images of the members, weighted by p_i times the branchwise
    transition probability, decompose the channel output for every complete
    set (the weights are renormalized against dropped null branches).
    """
    probs = []
    states = []
    for pair in kraus_set:
        op = np.kron(pair.a, pair.b)
        for p, psi in ensemble:
            phi = op @ psi
            q = float(np.vdot(phi, phi).real)
            if p * q <= _kernels.MEMBER_WEIGHT_FLOOR:
                continue
            probs.append(p * q)
            states.append(phi / np.sqrt(q))
    probs = np.array(probs)
    return Ensemble(probs / probs.sum(), np.array(states))


def proportionality_constants(kraus_set, tol=PROPORTIONAL_TOL):
    """Per-pair constants (alpha, beta) with A^dag A = alpha I, B^dag B = beta I.

    Raises RestrictionError when a pair is not of proportional type.
    """
    constants = []
    for a, b in kraus_set:
        aa = a.conj().T @ a
        bb = b.conj().T @ b
        alpha = float(aa.trace().real) / 2.0
        beta = float(bb.trace().real) / 2.0
        if (
            np.max(np.abs(aa - alpha * np.eye(2))) > tol
            or np.max(np.abs(bb - beta * np.eye(2))) > tol
        ):
            raise RestrictionError(
                "branch operators are not of proportional type (A^dag A and "
                "B^dag B must be multiples of the identity)"
            )
        constants.append((alpha, beta))
    return constants


def check_monotone_mixed(rho, kraus_set, cfg=None, tol=1e-4):
    """Check that a proportional-type channel does not increase the measure.

    Both sides are evaluated with the same search budget and seed; the
    channel output's search is additionally warm-started with the image of
    the input's best mixture, which realizes the theoretical bound.  When the
    input's best mixture contains maximally entangled members, a two-point
    Schmidt-shift extrapolation confirms the value is stable in the shift.
    """
    rho = validate_density(rho)
    if not isinstance(kraus_set, KrausSet):
        kraus_set = KrausSet(list(kraus_set))
    proportionality_constants(kraus_set)
    cfg = cfg or mixed.SearchConfig()

    before = mixed.mre_search(rho, cfg)
    rho_after, _ = apply_mixed(kraus_set, rho)
    rho_after = 0.5 * (rho_after + rho_after.conj().T)
    push = _pushforward_ensemble(before.best_ensemble, kraus_set)
    after = mixed.mre_search(rho_after, cfg, warm_ensembles=(push,))

    shift_check = None
    if any(
        xi_norm(pure_state(psi)) < _kernels.DEGENERATE_XI
        for psi in before.best_ensemble.states
    ):
        v1 = _shifted_objective(before.best_ensemble, SHIFT_EPSILON)
        v2 = _shifted_objective(before.best_ensemble, 0.5 * SHIFT_EPSILON)
        extrapolated = 2.0 * v2 - v1
        shift_check = ShiftCheck(
            epsilon=SHIFT_EPSILON,
            value_at_epsilon=v1,
            value_at_half_epsilon=v2,
            extrapolated=extrapolated,
            reference=before.value,
            stable=abs(extrapolated - before.value) <= 1e-6,
        )

    gap = before.value - after.value
    return MixedMonotonicityReport(
        mre_before=before.value,
        mre_after=after.value,
        gap=gap,
        tolerance=tol,
        passed=gap >= -tol,
        shift_check=shift_check,
    )


def survey_channel(rho, kraus_set, cfg=None):
    """Search values before and after an arbitrary complete channel.

    Unlike ``check_monotone_mixed`` this accepts any complete set and makes
    no claim about the sign of the gap; the image of the input's best
    mixture still seeds the output search (it is a valid mixture of the
    output for every complete set).
    """
    rho = validate_density(rho)
    if not isinstance(kraus_set, KrausSet):
        kraus_set = KrausSet(list(kraus_set))
    cfg = cfg or mixed.SearchConfig()
    before = mixed.mre_search(rho, cfg)
    rho_after, _ = apply_mixed(kraus_set, rho)
    rho_after = 0.5 * (rho_after + rho_after.conj().T)
    push = _pushforward_ensemble(before.best_ensemble, kraus_set)
    after = mixed.mre_search(rho_after, cfg, warm_ensembles=(push,))
    return ChannelSurvey(
        mre_before=before.value,
        mre_after=after.value,
        gap=before.value - after.value,
    )


# ---------------------------------------------------------------------------
# Random channel constructions (used by the verification suites and tests)
# ---------------------------------------------------------------------------


def random_unitary(rng, dim=2):
    """Haar-random unitary via QR of a Ginibre matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def _random_local_kraus(rng, count):
    """Operators {K_i} with sum K_i^dag K_i = I, from a random isometry."""
    z = rng.standard_normal((2 * count, 2)) + 1j * rng.standard_normal((2 * count, 2))
    q, _ = np.linalg.qr(z)
    return [q[2 * i : 2 * i + 2, :] for i in range(count)]


def random_kraus_set(rng, n_a=2, n_b=2):
    """Random complete product set: all pairs of two local channels."""
    ops_a = _random_local_kraus(rng, n_a)
    ops_b = _random_local_kraus(rng, n_b)
    return KrausSet([(a, b) for a in ops_a for b in ops_b])


def random_proportional_kraus_set(rng, branches=3):
    """Random complete set with every A^dag A and B^dag B proportional to I."""
    w = rng.dirichlet(np.ones(branches))
    scale = np.exp(rng.standard_normal(branches) * 0.3)
    pairs = []
    for lam in range(branches):
        ua = random_unitary(rng)
        ub = random_unitary(rng)
        pairs.append((np.sqrt(w[lam]) * scale[lam] * ua, (1.0 / scale[lam]) * ub))
    return KrausSet(pairs)
