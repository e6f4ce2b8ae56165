"""Validation of the node vectors shared by the inequality, the ODE and the divided differences."""

import numpy as np

from blowuplab import settings
from blowuplab.utils.errors import SeparationViolation, DomainViolation
from blowuplab.utils.typing import RealSequence, XVector, KVector, NodeSet


def as_array(values: RealSequence, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainViolation(f"{name} must be a non-empty sequence of reals")
    if not np.all(np.isfinite(arr)):
        raise DomainViolation(f"{name} must be finite, got {arr.tolist()}")
    return arr


def min_relative_gap(x: np.ndarray) -> float:
    """Smallest pairwise distance divided by max(1, max|x_i|), inf for a singleton."""

    if x.size < 2:
        return np.inf
    scale = max(1.0, float(np.max(np.abs(x))))
    return float(np.min(np.diff(np.sort(x)))) / scale


def is_separated(x: RealSequence, delta: float = settings.DELTA_SEP) -> bool:
    return min_relative_gap(np.asarray(x, dtype=float).ravel()) >= delta


def check_separation(x: np.ndarray, name: str = "x") -> None:
    gap = min_relative_gap(x)
    if gap < settings.DELTA_SEP:
        raise SeparationViolation(
            f"{name} is not pairwise distinct: relative separation {gap:.3g} "
            f"< {settings.DELTA_SEP:g} for {x.tolist()}"
        )


def as_xvector(x: RealSequence, nonnegative: bool = False) -> XVector:
    """Validate an inequality evaluation point."""

    arr = as_array(x, "x")
    check_separation(arr, "x")
    if nonnegative and np.any(arr < 0):
        raise DomainViolation(f"x must be nonnegative, got {arr.tolist()}")
    return arr


def as_kvector(k: RealSequence) -> KVector:
    """Validate carrying capacities: positive, strictly ascending, separated."""

    arr = as_array(k, "k")
    if np.any(arr <= 0):
        raise DomainViolation(f"k must be positive, got {arr.tolist()}")
    if np.any(np.diff(arr) <= 0):
        raise DomainViolation(f"k must be strictly ascending, got {arr.tolist()}")
    check_separation(arr, "k")
    return arr


def as_nodeset(x: RealSequence) -> NodeSet:
    """Validate divided-difference nodes: positive and separated."""

    arr = as_array(x, "nodes")
    if np.any(arr <= 0):
        raise DomainViolation(f"nodes must be positive, got {arr.tolist()}")
    check_separation(arr, "nodes")
    return arr
