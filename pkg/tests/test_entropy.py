import numpy as np
import pytest

import entmre as em
from entmre.entropy import (
    binary_entropy,
    relative_entropy_direct,
    relative_entropy_lemma1,
    von_neumann,
)
from entmre.errors import DomainError

H_075 = 0.8112781244591328  # -(3/4)log2(3/4) - (1/4)log2(1/4)


def test_binary_entropy_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert abs(binary_entropy(0.75) - H_075) < 1e-14
    assert abs(binary_entropy(0.25) - H_075) < 1e-14


def test_binary_entropy_domain():
    with pytest.raises(DomainError):
        binary_entropy(-0.01)
    with pytest.raises(DomainError):
        binary_entropy(1.01)
    # within tolerance of the endpoints is clamped, not rejected
    assert binary_entropy(-1e-13) == 0.0
    assert binary_entropy(1 + 1e-13) == 0.0


def test_von_neumann_values(rng):
    psi = em.random_pure_state(rng)
    assert abs(von_neumann(em.pure_to_density(psi))) < 1e-12
    assert abs(von_neumann(np.eye(4) / 4) - 2.0) < 1e-12
    assert abs(von_neumann(np.diag([0.75, 0.25]).astype(complex)) - H_075) < 1e-12


def test_relative_entropy_self_is_zero(rng):
    rho = em.random_density(rng)
    assert abs(relative_entropy_direct(rho, rho)) < 1e-10


def test_relative_entropy_bell_against_its_reference():
    rho = em.pure_to_density(em.BELL_PHI_PLUS)
    reference = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
    assert abs(relative_entropy_direct(rho, reference) - 1.0) < 1e-12


def test_relative_entropy_projector_vs_maximally_mixed():
    rho = np.diag([1.0, 0, 0, 0]).astype(complex)
    assert abs(relative_entropy_direct(rho, np.eye(4) / 4) - 2.0) < 1e-12


def test_relative_entropy_support_mismatch_is_infinite():
    rho = np.diag([1.0, 0, 0, 0]).astype(complex)
    sigma = np.diag([0.0, 1.0, 0, 0]).astype(complex)
    assert relative_entropy_direct(rho, sigma) == float("inf")


def test_lemma1_matches_direct(rng):
    worst = 0.0
    for _ in range(300):
        rho = em.random_density(rng, rank=int(rng.integers(1, 5)))
        sigma = em.random_density(rng, rank=4)
        w, v = np.linalg.eigh(sigma)
        worst = max(
            worst,
            abs(
                relative_entropy_direct(rho, sigma)
                - relative_entropy_lemma1(rho, (w, v))
            ),
        )
    assert worst < 1e-9


def test_lemma1_accepts_pair_list():
    rho = em.pure_to_density(em.BELL_PHI_PLUS)
    eigs = [
        (0.5, np.array([1, 0, 0, 0], complex)),
        (0.5, np.array([0, 0, 0, 1], complex)),
        (0.0, np.array([0, 1, 0, 0], complex)),
        (0.0, np.array([0, 0, 1, 0], complex)),
    ]
    assert abs(relative_entropy_lemma1(rho, eigs) - 1.0) < 1e-12


def test_lemma1_pure_self_zero(rng):
    psi = em.random_pure_state(rng)
    rho = em.pure_to_density(psi)
    w, v = np.linalg.eigh(rho)
    assert abs(relative_entropy_lemma1(rho, (w, v))) < 1e-12


def test_lemma1_infinite_on_null_overlap():
    rho = em.pure_to_density(em.BELL_PHI_PLUS)
    eigs = [
        (1.0, np.array([0, 1, 0, 0], complex)),
        (0.0, np.array([1, 0, 0, 0], complex)),
        (0.0, np.array([0, 0, 1, 0], complex)),
        (0.0, np.array([0, 0, 0, 1], complex)),
    ]
    assert relative_entropy_lemma1(rho, eigs) == float("inf")


def test_lemma1_rejects_non_orthonormal():
    rho = np.eye(4) / 4
    bad = [
        (0.25, np.array([1, 0, 0, 0], complex)),
        (0.25, np.array([1, 1, 0, 0], complex) / np.sqrt(2)),
        (0.25, np.array([0, 0, 1, 0], complex)),
        (0.25, np.array([0, 0, 0, 1], complex)),
    ]
    with pytest.raises(DomainError):
        relative_entropy_lemma1(rho, bad)


def test_klein_inequality(rng):
    for _ in range(200):
        rho = em.random_density(rng, rank=int(rng.integers(1, 5)))
        sigma = em.random_density(rng, rank=4)
        val = relative_entropy_direct(rho, sigma)
        assert val >= -1e-12
        # distinct random states sit strictly apart
        if np.max(np.abs(rho - sigma)) > 0.05:
            assert val > 1e-6


def test_joint_convexity(rng):
    for _ in range(100):
        n = int(rng.integers(2, 5))
        p = rng.dirichlet(np.ones(n))
        rhos = [em.random_density(rng, rank=int(rng.integers(1, 5))) for _ in range(n)]
        sigmas = [em.random_density(rng, rank=4) for _ in range(n)]
        lhs = relative_entropy_direct(
            sum(pi * r for pi, r in zip(p, rhos)),
            sum(pi * s for pi, s in zip(p, sigmas)),
        )
        rhs = sum(
            pi * relative_entropy_direct(r, s) for pi, r, s in zip(p, rhos, sigmas)
        )
        assert lhs <= rhs + 1e-9


def test_monotone_under_partial_trace_and_channels(rng):
    from entmre.channels import apply_mixed, random_kraus_set
    from entmre.states import reduced

    for _ in range(50):
        rho = em.random_density(rng, rank=int(rng.integers(1, 5)))
        sigma = em.random_density(rng, rank=4)
        base = relative_entropy_direct(rho, sigma)
        assert (
            relative_entropy_direct(reduced(rho, "A"), reduced(sigma, "A"))
            <= base + 1e-9
        )
        kset = random_kraus_set(rng)
        out_rho, _ = apply_mixed(kset, rho)
        out_sigma, _ = apply_mixed(kset, sigma)
        out_rho = 0.5 * (out_rho + out_rho.conj().T)
        out_sigma = 0.5 * (out_sigma + out_sigma.conj().T)
        assert relative_entropy_direct(out_rho, out_sigma) <= base + 1e-9
