"""Two-qubit state representations and basic algebra.

Pure states are length-4 complex amplitude arrays over the computational
basis |00>, |01>, |10>, |11| with the first factor belonging to party A.
Density matrices are plain 4x4 (or 2x2 for reduced states) complex arrays.
The Pauli index convention is sigma_0 = I, sigma_1 = X, sigma_2 = Y,
sigma_3 = Z, and tensor products are ordered A (x) B with A leftmost.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, ParametrizationError, StateError

NORM_TOL = 1e-12
DENSITY_TOL = 1e-10
PSD_TOL = -1e-9
RANK_TOL = 1e-12

PAULI = _kernels.PAULI

# sigma_mu (x) sigma_nu, indexed [mu, nu], used by the Pauli expansion.
PAULI_PRODUCTS = np.array(
    [[np.kron(PAULI[mu], PAULI[nu]) for nu in range(4)] for mu in range(4)]
)

_SQRT_HALF = 1.0 / np.sqrt(2.0)
BELL_PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], complex) * _SQRT_HALF
BELL_PHI_MINUS = np.array([1.0, 0.0, 0.0, -1.0], complex) * _SQRT_HALF
BELL_PSI_PLUS = np.array([0.0, 1.0, 1.0, 0.0], complex) * _SQRT_HALF
BELL_PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0], complex) * _SQRT_HALF
BELL_STATES = (BELL_PHI_PLUS, BELL_PHI_MINUS, BELL_PSI_PLUS, BELL_PSI_MINUS)


def pure_state(amplitudes):
    """Validate and return a normalized 4-amplitude pure state."""
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if psi.shape != (4,):
        raise StateError(f"pure state needs 4 amplitudes, got shape {psi.shape}")
    norm_sq = float(np.vdot(psi, psi).real)
    if abs(norm_sq - 1.0) > NORM_TOL:
        raise StateError(f"pure state is not normalized: |psi|^2 = {norm_sq!r}")
    return psi


def normalized(amplitudes):
    """Rescale an amplitude array to unit norm."""
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n = np.linalg.norm(psi)
    if n == 0.0:
        raise StateError("cannot normalize the zero vector")
    return psi / n


def pure_to_density(psi):
    """Projector |psi><psi| of a normalized pure state."""
    psi = pure_state(psi)
    return np.outer(psi, psi.conj())


def validate_density(rho, dim=4):
    """Check hermiticity, unit trace and positivity; return as complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise StateError(f"expected a {dim}x{dim} matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > DENSITY_TOL:
        raise StateError("matrix is not Hermitian")
    tr = float(rho.trace().real)
    if abs(tr - 1.0) > DENSITY_TOL:
        raise StateError(f"matrix has trace {tr!r}, expected 1")
    if float(np.linalg.eigvalsh(rho)[0]) < PSD_TOL:
        raise StateError("matrix has a negative eigenvalue beyond tolerance")
    return rho


def pauli_expand(rho):
    """Coefficient table a_{mu nu} = Tr(rho sigma_mu (x) sigma_nu)."""
    rho = validate_density(rho)
    table = np.einsum("ij,mnji->mn", rho, PAULI_PRODUCTS).real
    return table


def pauli_reconstruct(table):
    """Rebuild rho = (1/4) sum a_{mu nu} sigma_mu (x) sigma_nu from its table."""
    table = np.asarray(table, dtype=float)
    if table.shape != (4, 4):
        raise DomainError(f"coefficient table must be 4x4, got {table.shape}")
    if abs(table[0, 0] - 1.0) > DENSITY_TOL:
        raise DomainError(f"table[0, 0] must be 1 (unit trace), got {table[0, 0]!r}")
    rho = _kernels.table_to_matrix(table)
    if float(np.linalg.eigvalsh(rho)[0]) < PSD_TOL:
        raise StateError("coefficient table does not describe a physical state")
    return rho


def reduced(rho, party):
    """Partial trace onto one party; ``party`` is "A" or "B"."""
    rho = validate_density(rho)
    r4 = rho.reshape(2, 2, 2, 2)
    if party == "A":
        return np.trace(r4, axis1=1, axis2=3)
    if party == "B":
        return np.trace(r4, axis1=0, axis2=2)
    raise DomainError(f"party must be 'A' or 'B', got {party!r}")


def bloch_vector(rho2):
    """Bloch vector of a single-qubit density matrix."""
    rho2 = np.asarray(rho2, dtype=complex)
    return np.array(
        [
            2.0 * rho2[0, 1].real,
            -2.0 * rho2[0, 1].imag,
            (rho2[0, 0] - rho2[1, 1]).real,
        ]
    )


def polarized_vectors(rho):
    """Bloch vectors (xi_A, xi_B) of both reduced states."""
    rho = validate_density(rho)
    return bloch_vector(reduced(rho, "A")), bloch_vector(reduced(rho, "B"))


def lemma_two_residual(psi):
    """Worst violation of the pure-state relations tying xi_A, xi_B and a_{ij}.

    For a pure state the Bloch vectors satisfy xi_A = a xi_B and
    a^T xi_A = xi_B componentwise, where a is the 3x3 correlation block.
    Returns the largest absolute residual over both relations.
    """
    psi = pure_state(psi)
    table = pauli_expand(np.outer(psi, psi.conj()))
    xa = table[1:, 0]
    xb = table[0, 1:]
    block = table[1:, 1:]
    r1 = np.max(np.abs(xa - block @ xb))
    r2 = np.max(np.abs(block.T @ xa - xb))
    return float(max(r1, r2))


@dataclass
class Ensemble:
    """Probability-weighted mixture of pure states.

    ``probs`` is a length-m array of strictly positive weights summing to 1;
    ``states`` is (m, 4) with normalized rows.
    """

    probs: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float).reshape(-1)
        self.states = np.asarray(self.states, dtype=complex)
        if self.states.shape != (self.probs.size, 4):
            raise StateError(
                f"states shape {self.states.shape} does not match {self.probs.size} weights"
            )
        if np.any(self.probs <= 0.0):
            raise StateError("ensemble weights must be strictly positive")
        if abs(self.probs.sum() - 1.0) > NORM_TOL:
            raise StateError(f"ensemble weights sum to {self.probs.sum()!r}, expected 1")
        norms = np.linalg.norm(self.states, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise StateError("ensemble member states must be normalized")

    def __len__(self):
        return self.probs.size

    def __iter__(self):
        return iter(zip(self.probs, self.states))

    def density(self):
        return ensemble_to_density(self)


def ensemble_to_density(ensemble):
    """Sum of weighted projectors of the ensemble members."""
    rho = np.zeros((4, 4), complex)
    for p, psi in ensemble:
        rho += p * np.outer(psi, psi.conj())
    return rho


def _spectral_decomposition(rho):
    """Eigenvalues (descending) and eigenvectors of the support of rho."""
    evals, evecs = np.linalg.eigh(rho)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    evecs = evecs[:, order]
    keep = evals > RANK_TOL
    return evals[keep], evecs[:, keep]


def hjw_ensemble(rho, u):
    """All pure-state mixtures of rho, parametrized by an isometry.

    Given the spectral decomposition rho = sum_k lam_k |e_k><e_k| of rank r
    and an m x r matrix ``u`` with orthonormal columns (m >= r), the members
    |psi_i~> = sum_k u_{ik} sqrt(lam_k) |e_k> form a mixture reproducing rho.
    Members with negligible weight are dropped.
    """
    rho = validate_density(rho)
    evals, evecs = _spectral_decomposition(rho)
    r = evals.size
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[1] != r or u.shape[0] < r:
        raise ParametrizationError(
            f"need an m x {r} matrix with m >= {r} for a rank-{r} state, got {u.shape}"
        )
    if np.max(np.abs(u.conj().T @ u - np.eye(r))) > 1e-10:
        raise ParametrizationError("columns are not orthonormal")
    scaled = evecs * np.sqrt(evals)
    probs, states = _kernels.hjw_members(scaled, u)
    keep = probs > _kernels.MEMBER_WEIGHT_FLOOR
    probs = probs[keep]
    return Ensemble(probs / probs.sum(), states[keep])


def random_pure_state(rng):
    """Haar-random pure two-qubit state."""
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return z / np.linalg.norm(z)


def random_product_state(rng):
    """Random product pure state |alpha>_A (x) |beta>_B."""
    za = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    zb = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    za /= np.linalg.norm(za)
    zb /= np.linalg.norm(zb)
    return np.kron(za, zb)


def random_density(rng, rank=4):
    """Random density matrix of the given rank (partial-trace construction)."""
    g = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    rho = g @ g.conj().T
    return rho / rho.trace()


def random_separable_density(rng, terms=6):
    """Random mixture of product pure states."""
    w = rng.dirichlet(np.ones(terms))
    rho = np.zeros((4, 4), complex)
    for k in range(terms):
        psi = random_product_state(rng)
        rho += w[k] * np.outer(psi, psi.conj())
    return rho
