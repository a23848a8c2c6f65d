import numpy as np
import pytest

import entmre as em
from entmre import io
from entmre.errors import FormatError


def test_complex_codec():
    assert io.decode_complex(1.5) == 1.5 + 0j
    assert io.decode_complex([1.0, -2.0]) == 1.0 - 2.0j
    assert io.encode_complex(0.5 - 0.25j) == [0.5, -0.25]
    with pytest.raises(FormatError):
        io.decode_complex("nope")
    with pytest.raises(FormatError):
        io.decode_complex([1.0, 2.0, 3.0])


def test_state_roundtrip_pure(rng):
    psi = em.random_pure_state(rng)
    kind, back = io.state_from_obj(io.encode_vector(psi))
    assert kind == "pure"
    assert np.allclose(back, psi)


def test_state_roundtrip_density(rng):
    rho = em.random_density(rng)
    kind, back = io.state_from_obj(io.encode_matrix(rho))
    assert kind == "density"
    assert np.allclose(back, rho)


def test_state_roundtrip_ensemble(rng):
    ens = em.bell_mixture_mpsd([0.6, 0.2, 0.1, 0.1])
    kind, back = io.state_from_obj(io.ensemble_to_obj(ens))
    assert kind == "ensemble"
    assert np.allclose(back.probs, ens.probs)
    assert np.allclose(back.states, ens.states)


def test_bare_reals_accepted_for_pure():
    kind, psi = io.state_from_obj([1.0, 0.0, 0.0, 0.0])
    assert kind == "pure"
    assert np.allclose(psi, [1, 0, 0, 0])


def test_malformed_states_raise():
    with pytest.raises(FormatError):
        io.state_from_obj([1, 0, 0])
    with pytest.raises(FormatError):
        io.state_from_obj({"nope": []})
    with pytest.raises(FormatError):
        io.state_from_obj({"members": [{"p": 1.0}]})


def test_kraus_roundtrip(rng):
    from entmre.channels import random_kraus_set

    kset = random_kraus_set(rng)
    back = io.kraus_set_from_obj(io.kraus_set_to_obj(kset))
    assert len(back) == len(kset)
    for (a1, b1), (a2, b2) in zip(kset, back):
        assert np.allclose(a1, a2) and np.allclose(b1, b2)


def test_kraus_malformed():
    with pytest.raises(FormatError):
        io.kraus_set_from_obj([["a"]])
    with pytest.raises(FormatError):
        io.kraus_set_from_obj([])
