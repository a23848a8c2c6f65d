"""Entropy functionals, all in bits (base-2 logarithms).

Two relative-entropy evaluators are provided on purpose: the direct
definition Tr(rho log rho - rho log sigma) and the eigen-form
-S(rho) - sum_a log(lam_a) <v_a|rho|v_a>, which takes the reference state's
eigensystem as input.  They act as cross-checking oracles for each other.
"""

import numpy as np

from ._kernels import SUPPORT_OVERLAP, ZERO_EIGENVALUE, entropy_bits
from .errors import DomainError
from .states import validate_density

DOMAIN_TOL = 1e-12


def binary_entropy(x):
    """H(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0."""
    if not -DOMAIN_TOL <= x <= 1.0 + DOMAIN_TOL:
        raise DomainError(f"binary entropy argument {x!r} outside [0, 1]")
    x = min(max(float(x), 0.0), 1.0)
    out = 0.0
    if x > 0.0:
        out -= x * np.log2(x)
    if x < 1.0:
        out -= (1.0 - x) * np.log2(1.0 - x)
    return out


def von_neumann(rho):
    """Von Neumann entropy -sum lam log2 lam over the spectrum of rho."""
    rho = validate_density(rho, dim=rho.shape[0] if hasattr(rho, "shape") else 4)
    return float(entropy_bits(np.linalg.eigvalsh(rho)))


def relative_entropy_direct(rho, sigma):
    """Tr(rho log2 rho - rho log2 sigma), evaluated in the two eigenbases.

    Returns inf when rho has support outside the support of sigma (weight
    above the tolerance on a null eigenvector of sigma).
    """
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    rho = validate_density(rho, dim=dim)
    sigma = validate_density(sigma, dim=dim)

    evals_rho = np.linalg.eigvalsh(rho)
    tr_rho_log_rho = float(
        sum(lam * np.log2(lam) for lam in evals_rho if lam > ZERO_EIGENVALUE)
    )

    evals, evecs = np.linalg.eigh(sigma)
    overlaps = np.einsum("ik,ij,jk->k", evecs.conj(), rho, evecs).real
    overlaps = np.clip(overlaps, 0.0, None)
    tr_rho_log_sigma = 0.0
    for lam, ov in zip(evals, overlaps):
        if lam <= ZERO_EIGENVALUE:
            if ov > SUPPORT_OVERLAP:
                return float("inf")
        elif ov > 1e-12:
            tr_rho_log_sigma += np.log2(lam) * ov
    return tr_rho_log_rho - tr_rho_log_sigma


def relative_entropy_lemma1(rho, sigma_eigs):
    """Eigen-form relative entropy: -S(rho) - sum log2(lam_a) <v_a|rho|v_a>.

    ``sigma_eigs`` is the reference state's complete orthonormal eigensystem,
    as a sequence of (eigenvalue, eigenvector) pairs or an (values, vectors)
    array pair with vectors in columns.  Terms whose overlap is below 1e-12
    are skipped; weight above tolerance on a null eigenvector gives inf.
    """
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    rho = validate_density(rho, dim=dim)

    if isinstance(sigma_eigs, tuple) and len(sigma_eigs) == 2:
        evals = np.asarray(sigma_eigs[0], dtype=float).reshape(-1)
        evecs = np.asarray(sigma_eigs[1], dtype=complex)
    else:
        pairs = list(sigma_eigs)
        evals = np.array([float(np.real(lam)) for lam, _ in pairs])
        evecs = np.column_stack([np.asarray(v, dtype=complex).reshape(-1) for _, v in pairs])

    if evecs.shape != (dim, dim) or evals.size != dim:
        raise DomainError(
            f"eigensystem must be complete for dimension {dim}, got "
            f"{evals.size} values and vector shape {evecs.shape}"
        )
    gram = evecs.conj().T @ evecs
    if np.max(np.abs(gram - np.eye(dim))) > 1e-8:
        raise DomainError("eigensystem is not orthonormal")

    s_rho = float(entropy_bits(np.linalg.eigvalsh(rho)))
    overlaps = np.einsum("ik,ij,jk->k", evecs.conj(), rho, evecs).real
    overlaps = np.clip(overlaps, 0.0, None)
    acc = 0.0
    for lam, ov in zip(evals, overlaps):
        if lam <= ZERO_EIGENVALUE:
            if ov > SUPPORT_OVERLAP:
                return float("inf")
        elif ov > 1e-12:
            acc += np.log2(lam) * ov
    return -s_rho - acc
