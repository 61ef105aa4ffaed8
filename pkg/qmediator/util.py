import math

import numpy as np

from .errors import InvalidInputError

PI_SUFFIX = "pi"


def parse_angle(text):
    """
    Parse an angle in radians, a trailing "pi" multiplies by pi, e.g. "0.25pi" or "pi"
    """
    s = str(text).strip().lower()
    scale = 1.0
    if s.endswith(PI_SUFFIX):
        scale = math.pi
        s = s[: -len(PI_SUFFIX)].strip()
        if s in ("", "+"):
            s = "1"
        elif s == "-":
            s = "-1"
        s = s.rstrip("*")
    try:
        value = float(s) * scale
    except ValueError as e:
        raise InvalidInputError(f"invalid angle {text!r}") from e
    if not math.isfinite(value):
        raise InvalidInputError(f"angle must be finite, got {text!r}")
    return value


def axis_size(start, stop, step, slack=1e-9):
    """
    Number of points start + k * step that do not exceed stop (with a relative slack for rounding)
    """
    if not step > 0:
        raise InvalidInputError(f"grid step must be positive, got {step}")
    if stop < start:
        raise InvalidInputError(f"empty grid range [{start}, {stop}]")
    return int(math.floor((stop - start) / step + slack)) + 1


MAX_SEED = 2 ** 32 - 1


def check_seed(seed, span=1):
    """
    Validate a seed for np.random.RandomState; span seeds starting at seed must all be in range
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidInputError(f"seed must be an integer, got {seed!r}")
    if seed < 0 or seed + span - 1 > MAX_SEED:
        raise InvalidInputError(f"seed must be between 0 and {MAX_SEED - span + 1}, got {seed}")
    return int(seed)


def parse_seed(text):
    try:
        seed = int(str(text).strip())
    except ValueError as e:
        raise InvalidInputError(f"invalid seed {text!r}") from e
    return check_seed(seed)
