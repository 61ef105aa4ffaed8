"""
Encoding/decoding functions
"""

import dataclasses
import enum
import json

import numpy as np

from .errors import InvalidInputError


def matrix_to_json(m):
    """
    Convert a complex matrix to row-major nested lists of [re, im] pairs
    """
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(rows):
    """
    Convert nested lists of [re, im] pairs back to a complex matrix
    """
    try:
        data = np.asarray(rows, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"matrix must be nested [re, im] pairs: {e}") from e
    if data.ndim != 3 or data.shape[2] != 2 or data.shape[0] != data.shape[1]:
        raise InvalidInputError(
            f"expected a square array of [re, im] pairs, got shape {data.shape}"
        )
    return data[:, :, 0] + 1j * data[:, :, 1]


class JSONEncoder(json.JSONEncoder):
    # https://github.com/PyCQA/pylint/issues/414
    def default(self, o):  # pylint: disable=method-hidden
        if isinstance(o, np.ndarray):
            if np.iscomplexobj(o):
                return matrix_to_json(o) if o.ndim == 2 else [[z.real, z.imag] for z in o]
            return o.tolist()
        elif isinstance(o, np.floating):
            return float(o)
        elif isinstance(o, np.integer):
            return int(o)
        elif isinstance(o, np.bool_):
            return bool(o)
        elif isinstance(o, complex):
            return [o.real, o.imag]
        elif isinstance(o, enum.Enum):
            return o.value
        elif hasattr(o, "to_json"):
            return o.to_json()
        elif dataclasses.is_dataclass(o):
            return {f.name: getattr(o, f.name) for f in dataclasses.fields(o)}
        else:
            return super().default(o)


def encode_json(obj):
    """Encode an object as json, supports numpy arrays, enums and dataclasses"""
    return json.dumps(obj, cls=JSONEncoder, indent=2)


def decode_json(data):
    """Decode an object from json, raising InvalidInputError on malformed input"""
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"invalid json: {e}") from e


def load_json_file(path):
    try:
        with open(path, "r", encoding="utf8") as f:
            return decode_json(f.read())
    except OSError as e:
        raise InvalidInputError(f"cannot read {path}: {e}") from e
