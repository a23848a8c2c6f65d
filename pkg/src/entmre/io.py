"""JSON serialization of states, ensembles and measurement sets.

Complex scalars are encoded as two-element arrays [re, im] (bare numbers are
accepted on input for real entries).  Pure states are 4-element amplitude
arrays, density matrices 4x4 nested arrays, ensembles objects of the form
{"members": [{"p": ..., "psi": [...]}]}, and measurement sets lists of
[A, B] pairs of 2x2 matrices.
"""

import json

import numpy as np

from .channels import KrausSet
from .errors import FormatError
from .states import Ensemble


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(value):
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(x, (int, float)) for x in value)
    ):
        return complex(value[0], value[1])
    raise FormatError(f"expected a number or [re, im] pair, got {value!r}")


def _decode_vector(values, length):
    if not isinstance(values, (list, tuple)) or len(values) != length:
        raise FormatError(f"expected a {length}-element array")
    return np.array([decode_complex(v) for v in values])


def _decode_matrix(rows, dim):
    if not isinstance(rows, (list, tuple)) or len(rows) != dim:
        raise FormatError(f"expected a {dim}x{dim} nested array")
    return np.array([_decode_vector(row, dim) for row in rows])


def encode_vector(vec):
    return [encode_complex(z) for z in np.asarray(vec).reshape(-1)]


def encode_matrix(mat):
    return [[encode_complex(z) for z in row] for row in np.asarray(mat)]


def state_from_obj(obj):
    """Classify and decode a state object: ("pure"|"density"|"ensemble", value)."""
    if isinstance(obj, dict):
        if "members" not in obj:
            raise FormatError("state object must carry a 'members' list")
        members = obj["members"]
        if not isinstance(members, list) or not members:
            raise FormatError("'members' must be a non-empty list")
        probs = []
        states = []
        for entry in members:
            if not isinstance(entry, dict) or "p" not in entry or "psi" not in entry:
                raise FormatError("each member needs 'p' and 'psi' fields")
            probs.append(float(entry["p"]))
            states.append(_decode_vector(entry["psi"], 4))
        return "ensemble", Ensemble(np.array(probs), np.array(states))
    if isinstance(obj, (list, tuple)) and len(obj) == 4:
        if all(isinstance(row, (list, tuple)) and len(row) == 4 for row in obj):
            return "density", _decode_matrix(obj, 4)
        return "pure", _decode_vector(obj, 4)
    raise FormatError("state must be a 4-amplitude array, a 4x4 matrix, or an ensemble object")


def load_state(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON in {path}: {exc}") from exc
    return state_from_obj(obj)


def ensemble_to_obj(ensemble):
    return {
        "members": [
            {"p": float(p), "psi": encode_vector(psi)} for p, psi in ensemble
        ]
    }


def kraus_set_from_obj(obj):
    if isinstance(obj, dict) and "pairs" in obj:
        obj = obj["pairs"]
    if not isinstance(obj, list) or not obj:
        raise FormatError("measurement set must be a non-empty list of [A, B] pairs")
    pairs = []
    for entry in obj:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise FormatError("each entry must be an [A, B] pair of 2x2 matrices")
        pairs.append((_decode_matrix(entry[0], 2), _decode_matrix(entry[1], 2)))
    return KrausSet(pairs)


def load_kraus_set(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON in {path}: {exc}") from exc
    return kraus_set_from_obj(obj)


def kraus_set_to_obj(kraus_set):
    return [[encode_matrix(a), encode_matrix(b)] for a, b in kraus_set]


def dump_json(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
