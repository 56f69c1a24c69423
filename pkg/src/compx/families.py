"""The seven candidate complexity families and their predictor transforms.

Each family models cost as ``intercept + slope * g(n)`` where ``g`` maps a
sample size to the family's growth term. Natural logarithm throughout; the
base only rescales the slope and can never change which family fits best.
"""

import math
from enum import Enum

import numpy as np

from .errors import ConfigurationError


class ComplexityFamily(Enum):
    """Asymptotic cost classes, declared from lowest to highest order.

    Declaration order is the tie-breaking order: under an exact LOO tie the
    lower-order (more parsimonious) family wins.
    """

    CONSTANT = "CONSTANT"
    LOG = "LOG"
    SQUAREROOT = "SQUAREROOT"
    LINEAR = "LINEAR"
    NLOGN = "NLOGN"
    QUADRATIC = "QUADRATIC"
    CUBIC = "CUBIC"


_ORDER = {family: rank for rank, family in enumerate(ComplexityFamily)}

_TRANSFORMS = {
    ComplexityFamily.CONSTANT: lambda n: np.ones_like(n, dtype=float),
    ComplexityFamily.LOG: lambda n: np.log(n),
    ComplexityFamily.SQUAREROOT: lambda n: np.sqrt(n),
    ComplexityFamily.LINEAR: lambda n: n.astype(float),
    ComplexityFamily.NLOGN: lambda n: n * np.log(n),
    ComplexityFamily.QUADRATIC: lambda n: n.astype(float) ** 2,
    ComplexityFamily.CUBIC: lambda n: n.astype(float) ** 3,
}


def family_order(family: ComplexityFamily) -> int:
    """Rank of a family in the low-to-high complexity ordering."""
    return _ORDER[family]


def transform(family: ComplexityFamily, n):
    """Growth term g(n) of `family` at size `n` (scalar or array).

    Sizes must be >= 1; g(1) is 0 for LOG and NLOGN and positive otherwise.
    """
    arr = np.asarray(n, dtype=float)
    if np.any(arr < 1):
        raise ConfigurationError(f"sample sizes must be >= 1, got {n!r}")
    out = _TRANSFORMS[family](arr)
    if np.isscalar(n) or arr.ndim == 0:
        return float(out)
    return out


def describe(family: ComplexityFamily) -> str:
    """Human-readable form of the family's growth term."""
    return {
        ComplexityFamily.CONSTANT: "O(1)",
        ComplexityFamily.LOG: "O(log N)",
        ComplexityFamily.SQUAREROOT: "O(sqrt N)",
        ComplexityFamily.LINEAR: "O(N)",
        ComplexityFamily.NLOGN: "O(N log N)",
        ComplexityFamily.QUADRATIC: "O(N^2)",
        ComplexityFamily.CUBIC: "O(N^3)",
    }[family]


def parse_family(name: str) -> ComplexityFamily:
    """Look up a family by its tag, case-insensitively."""
    try:
        return ComplexityFamily[name.upper()]
    except KeyError:
        valid = ", ".join(f.name for f in ComplexityFamily)
        raise ConfigurationError(f"unknown complexity family {name!r}; one of: {valid}") from None


def transform_scalar(family: ComplexityFamily, n: int) -> float:
    """g(n) for a single positive integer size."""
    if n < 1:
        raise ConfigurationError(f"sample size must be >= 1, got {n}")
    if family is ComplexityFamily.CONSTANT:
        return 1.0
    if family is ComplexityFamily.LOG:
        return math.log(n)
    if family is ComplexityFamily.SQUAREROOT:
        return math.sqrt(n)
    if family is ComplexityFamily.LINEAR:
        return float(n)
    if family is ComplexityFamily.NLOGN:
        return n * math.log(n)
    if family is ComplexityFamily.QUADRATIC:
        return float(n) ** 2
    return float(n) ** 3
