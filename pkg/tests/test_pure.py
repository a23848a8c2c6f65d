import numpy as np

import entmre as em
from entmre.entropy import von_neumann
from entmre.pure import (
    concurrence_pure,
    ef_pure,
    mre_pure,
    omega_spectrum,
    relative_matrix_pure,
    xi_norm,
)

H_075 = 0.8112781244591328
SQRT3_HALF = 0.8660254037844386  # 2 sqrt(3/16)

UNBALANCED = np.array([np.sqrt(0.75), 0.0, 0.0, np.sqrt(0.25)], complex)


def test_concurrence_examples():
    assert abs(concurrence_pure(em.BELL_PHI_PLUS) - 1.0) < 1e-12
    assert concurrence_pure([0, 1, 0, 0]) == 0.0
    assert abs(concurrence_pure(UNBALANCED) - SQRT3_HALF) < 1e-12


def test_xi_examples():
    for bell in em.BELL_STATES:
        assert xi_norm(bell) < 1e-9
    assert abs(xi_norm(np.kron([1, 0], [0, 1])) - 1.0) < 1e-12
    assert abs(xi_norm(UNBALANCED) - 0.5) < 1e-12


def test_xi_matches_polarized_vectors(rng):
    for _ in range(200):
        psi = em.random_pure_state(rng)
        xa, _ = em.polarized_vectors(em.pure_to_density(psi))
        assert abs(xi_norm(psi) - np.linalg.norm(xa)) < 1e-10


def test_ef_examples():
    assert abs(ef_pure(em.BELL_PSI_MINUS) - 1.0) < 1e-12
    assert ef_pure([0, 0, 1, 0]) == 0.0
    assert abs(ef_pure(UNBALANCED) - H_075) < 1e-12


def test_ef_strictly_decreasing_in_xi():
    values = []
    for xi in np.arange(0.0, 1.0001, 0.1):
        psi = np.array([np.sqrt((1 + xi) / 2), 0, 0, np.sqrt((1 - xi) / 2)], complex)
        assert abs(xi_norm(psi) - xi) < 1e-12
        values.append(ef_pure(psi))
    diffs = np.diff(values)
    assert np.all(diffs < 0.0)


def test_relative_matrix_bell_states():
    corners = np.diag([0.5, 0.0, 0.0, 0.5])
    middle = np.diag([0.0, 0.5, 0.5, 0.0])
    assert np.allclose(relative_matrix_pure(em.BELL_PHI_PLUS).matrix, corners, atol=1e-12)
    assert np.allclose(relative_matrix_pure(em.BELL_PHI_MINUS).matrix, corners, atol=1e-12)
    assert np.allclose(relative_matrix_pure(em.BELL_PSI_PLUS).matrix, middle, atol=1e-12)
    assert np.allclose(relative_matrix_pure(em.BELL_PSI_MINUS).matrix, middle, atol=1e-12)


def test_relative_matrix_product_state():
    parts = relative_matrix_pure([1, 0, 0, 0])
    assert abs(parts.q1) < 1e-12
    assert np.allclose(parts.matrix, np.diag([1.0, 0, 0, 0]), atol=1e-12)


def test_relative_matrix_weights(rng):
    for _ in range(100):
        psi = em.random_pure_state(rng)
        parts = relative_matrix_pure(psi)
        xi = xi_norm(psi)
        assert abs(parts.q1 - 0.5 * (1 - xi)) < 1e-10
        assert abs(parts.q1 + parts.q2 - 1.0) < 1e-12
        assert abs(np.linalg.norm(parts.eta_a) - 1.0) < 1e-10
        assert abs(np.linalg.norm(parts.eta_b) - 1.0) < 1e-10


def test_relative_matrix_is_separable_ppt(rng):
    for _ in range(200):
        psi = em.random_pure_state(rng)
        r = relative_matrix_pure(psi).matrix
        assert abs(np.trace(r).real - 1.0) < 1e-12
        assert np.max(np.abs(r - r.conj().T)) < 1e-12
        assert em.is_ppt(r)


def test_mre_pure_examples(rng):
    for bell in em.BELL_STATES:
        assert abs(mre_pure(bell) - 1.0) < 1e-12
    assert abs(mre_pure(em.random_product_state(rng))) < 1e-10


def test_mre_equals_ef_on_random_states(rng):
    worst = 0.0
    for _ in range(1000):
        psi = em.random_pure_state(rng)
        worst = max(worst, abs(mre_pure(psi) - ef_pure(psi)))
    assert worst < 1e-9


def test_mre_equals_reduced_entropies(rng):
    for _ in range(100):
        psi = em.random_pure_state(rng)
        rho = em.pure_to_density(psi)
        m = mre_pure(psi)
        assert abs(m - von_neumann(em.reduced(rho, "A"))) < 1e-9
        assert abs(m - von_neumann(em.reduced(rho, "B"))) < 1e-9


def test_omega_spectrum_examples():
    assert np.allclose(omega_spectrum(UNBALANCED), [0.75, 0.0, 0.0, 0.25], atol=1e-12)
    assert np.allclose(
        omega_spectrum(em.BELL_PHI_MINUS), [0.5, 0.5, 0.0, 0.0], atol=1e-12
    )
    assert np.allclose(omega_spectrum([0, 0, 0, 1]), [1.0, 0.0, 0.0, 0.0], atol=1e-12)


def test_omega_matches_reference_spectrum(rng):
    for _ in range(200):
        psi = em.random_pure_state(rng)
        r = relative_matrix_pure(psi).matrix
        evs = np.sort(np.linalg.eigvalsh(r))[::-1]
        om = np.sort(omega_spectrum(psi))[::-1]
        assert np.max(np.abs(evs - om)) < 1e-10


def test_omega_sums_to_one(rng):
    for _ in range(100):
        psi = em.random_pure_state(rng)
        assert abs(omega_spectrum(psi).sum() - 1.0) < 1e-10


def test_concurrence_xi_identity(rng):
    for _ in range(500):
        psi = em.random_pure_state(rng)
        c = concurrence_pure(psi)
        x = xi_norm(psi)
        assert abs(c * c + x * x - 1.0) < 1e-10


def test_separability_boundary(rng):
    # product states: zero concurrence and unit Bloch norm
    for _ in range(50):
        psi = em.random_product_state(rng)
        assert concurrence_pure(psi) < 1e-10
        assert abs(xi_norm(psi) - 1.0) < 1e-10
    # rotated maximally entangled states: unit concurrence, vanishing norm
    from entmre.channels import random_unitary

    for _ in range(50):
        u = np.kron(random_unitary(rng), random_unitary(rng))
        psi = u @ em.BELL_PSI_MINUS
        assert abs(concurrence_pure(psi) - 1.0) < 1e-10
        assert xi_norm(psi) < 1e-7


def test_rotated_bell_reference_value(rng):
    # the axis rule must keep the measure exact for any maximally entangled
    # state, not just the four standard ones
    from entmre.channels import random_unitary

    for _ in range(50):
        u = np.kron(random_unitary(rng), random_unitary(rng))
        psi = u @ em.BELL_PHI_PLUS
        assert abs(mre_pure(psi) - 1.0) < 1e-9
