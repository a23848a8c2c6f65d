"""Backend checks: the numba-compiled kernels and the pure-NumPy fallback
compute the same quantities (the env flag only changes speed)."""

import json
import os
import subprocess
import sys

import numpy as np

import entmre as em
from entmre import _kernels

PROBE = r"""
import json
import numpy as np
import entmre as em
from entmre import _kernels
from entmre.mixed import SearchConfig

rng = np.random.default_rng(2024)
psi = em.random_pure_state(rng)
parts = _kernels.pure_reference_matrix(psi)
rho = em.werner_state(0.8)
evals, evecs = np.linalg.eigh(rho)
order = np.argsort(evals)[::-1]
evals, evecs = evals[order], evecs[:, order]
scaled = evecs * np.sqrt(evals)
s_rho = float(_kernels.entropy_bits(evals))
params = np.random.default_rng(7).standard_normal(2 * 8 * 4)
print(json.dumps({
    "numba": _kernels.NUMBA_ENABLED,
    "ref": [[z.real, z.imag] for z in parts.ravel()],
    "objective": _kernels.mre_objective_params(params, 8, 4, rho, s_rho, scaled),
    "entropy": s_rho,
    "rel": float(_kernels.rel_entropy_to(rho, np.eye(4, dtype=complex) / 4, s_rho)),
}))
"""


def _run_probe(disable):
    env = dict(os.environ, ENTMRE_DISABLE_NUMBA=disable)
    out = subprocess.run(
        [sys.executable, "-c", PROBE], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def test_backends_agree():
    on = _run_probe("0")
    off = _run_probe("1")
    assert on["numba"] is True
    assert off["numba"] is False
    assert np.allclose(np.array(on["ref"]), np.array(off["ref"]), atol=1e-14)
    assert abs(on["objective"] - off["objective"]) < 1e-12
    assert on["entropy"] == off["entropy"]
    assert abs(on["rel"] - off["rel"]) < 1e-12


def test_kernel_reference_matches_api(rng):
    for _ in range(50):
        psi = em.random_pure_state(rng)
        assert np.max(
            np.abs(_kernels.pure_reference_matrix(psi) - em.relative_matrix_pure(psi).matrix)
        ) < 1e-14


def test_kernel_entropy_matches_api(rng):
    rho = em.random_density(rng)
    assert abs(
        _kernels.entropy_bits(np.linalg.eigvalsh(rho)) - em.von_neumann(rho)
    ) < 1e-12


def test_kernel_rel_entropy_matches_api(rng):
    for _ in range(20):
        rho = em.random_density(rng, rank=int(rng.integers(1, 5)))
        sigma = em.random_density(rng, rank=4)
        s_rho = float(_kernels.entropy_bits(np.linalg.eigvalsh(rho)))
        kernel_val = float(_kernels.rel_entropy_to(rho, sigma, s_rho))
        assert abs(kernel_val - em.relative_entropy_direct(rho, sigma)) < 1e-10


def test_kernel_mixture_table_matches_api(rng):
    from entmre.mixed import total_relative_matrix

    n = 5
    p = rng.dirichlet(np.ones(n))
    members = np.array([em.random_pure_state(rng) for _ in range(n)])
    ens = em.Ensemble(p, members)
    table = _kernels.mixture_reference_table(ens.probs, ens.states)
    assert np.max(
        np.abs(_kernels.table_to_matrix(table) - total_relative_matrix(ens))
    ) < 1e-14
