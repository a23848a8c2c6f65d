"""Entanglement quantities of pure two-qubit states and the construction of
their separable reference states.

For a pure state with amplitudes (a, b, c, d) the concurrence is
C = 2|ad - bc| and the shared Bloch-vector norm of the reduced states obeys
xi^2 = 1 - C^2.  The reference state is the two-term mixture

    R = q1 * P(-eta_A) (x) P(-eta_B) + q2 * P(+eta_A) (x) P(+eta_B)

with q1 = (1 - xi)/2, q2 = 1 - q1 and unit axes eta following the Bloch
vectors (or, at maximal entanglement, the singular-axis rule described in
``_kernels.eta_axes``; extending the conventional choice made for the four
standard maximally entangled states to the whole xi = 0 family is a
convention of this package).  The relative entropy of the state against R
reproduces the entanglement of formation.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .entropy import binary_entropy, relative_entropy_lemma1
from .states import pure_state

XI_DEGENERATE_TOL = _kernels.DEGENERATE_XI


@dataclass
class RelativeMatrixParts:
    """Ingredients and assembly of a pure state's separable reference state."""

    q1: float
    q2: float
    eta_a: np.ndarray
    eta_b: np.ndarray
    matrix: np.ndarray


def concurrence_pure(psi):
    """C = 2|ad - bc|, clipped into [0, 1]."""
    psi = pure_state(psi)
    c = 2.0 * abs(psi[0] * psi[3] - psi[1] * psi[2])
    return float(min(max(c, 0.0), 1.0))


def xi_norm(psi):
    """Shared norm of the reduced-state Bloch vectors.

    Computed from the Bloch components directly (not as sqrt(1 - C^2), which
    loses half the significant digits near maximal entanglement); the two
    agree on squares to full precision.
    """
    psi = pure_state(psi)
    xa, _ = _kernels.xi_vectors(psi)
    return float(min(np.sqrt(xa[0] ** 2 + xa[1] ** 2 + xa[2] ** 2), 1.0))


def ef_pure(psi):
    """Entanglement of formation: entropy of either reduced state."""
    return binary_entropy(0.5 * (1.0 + xi_norm(psi)))


def _bloch_spinor(n):
    """Spinor |n> with Bloch vector n (|n| = 1)."""
    theta = np.arccos(np.clip(n[2], -1.0, 1.0))
    phi = np.arctan2(n[1], n[0])
    return np.array([np.cos(0.5 * theta), np.sin(0.5 * theta) * np.exp(1j * phi)])


def _bloch_spinor_opposite(n):
    """Spinor orthogonal to |n>, i.e. with Bloch vector -n."""
    theta = np.arccos(np.clip(n[2], -1.0, 1.0))
    phi = np.arctan2(n[1], n[0])
    return np.array([-np.sin(0.5 * theta) * np.exp(-1j * phi), np.cos(0.5 * theta)])


def relative_matrix_pure(psi):
    """Separable reference state of a pure state, with its parts."""
    psi = pure_state(psi)
    xa, xb = _kernels.xi_vectors(psi)
    ea, eb = _kernels.eta_axes(psi, xa, xb)
    xi = min(xi_norm(psi), 1.0)
    q1 = 0.5 * (1.0 - xi)
    matrix = _kernels.pure_reference_matrix(psi)
    return RelativeMatrixParts(q1=q1, q2=1.0 - q1, eta_a=ea, eta_b=eb, matrix=matrix)


def relative_matrix_eigensystem(parts):
    """Complete eigensystem of the reference state, from its parts.

    The four eigenvectors are the products of the +/- eta spinors; the
    mixed-sign products carry eigenvalue zero.
    """
    up_a = _bloch_spinor(parts.eta_a)
    dn_a = _bloch_spinor_opposite(parts.eta_a)
    up_b = _bloch_spinor(parts.eta_b)
    dn_b = _bloch_spinor_opposite(parts.eta_b)
    return [
        (parts.q2, np.kron(up_a, up_b)),
        (parts.q1, np.kron(dn_a, dn_b)),
        (0.0, np.kron(up_a, dn_b)),
        (0.0, np.kron(dn_a, up_b)),
    ]


def mre_pure(psi):
    """Relative entropy of a pure state against its reference state.

    Coincides with the entanglement of formation for every pure state.
    """
    psi = pure_state(psi)
    parts = relative_matrix_pure(psi)
    rho = np.outer(psi, psi.conj())
    return relative_entropy_lemma1(rho, relative_matrix_eigensystem(parts))


def omega_spectrum(psi):
    """Overlaps of the state with the reference state's four eigenprojectors.

    Away from maximal entanglement the order is (+,+), (+,-), (-,+), (-,-)
    in the signs of (eta_A, eta_B), giving ((1+xi)/2, 0, 0, (1-xi)/2).  At
    maximal entanglement the two weight-1/2 branches are listed first.
    """
    psi = pure_state(psi)
    parts = relative_matrix_pure(psi)
    up_a = _bloch_spinor(parts.eta_a)
    dn_a = _bloch_spinor_opposite(parts.eta_a)
    up_b = _bloch_spinor(parts.eta_b)
    dn_b = _bloch_spinor_opposite(parts.eta_b)

    def overlap(va, vb):
        return abs(np.vdot(np.kron(va, vb), psi)) ** 2

    if xi_norm(psi) >= XI_DEGENERATE_TOL:
        order = [(up_a, up_b), (up_a, dn_b), (dn_a, up_b), (dn_a, dn_b)]
    else:
        order = [(up_a, up_b), (dn_a, dn_b), (up_a, dn_b), (dn_a, up_b)]
    return np.array([overlap(va, vb) for va, vb in order])
