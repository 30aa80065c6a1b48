"""Descriptors for the value sets whose covering geometry drives all bounds.

Three families are supported: explicit finite point lists, power-law
sequences ``1, 2**alpha, 3**alpha, ...`` accumulating at zero, and point
clouds produced by near-critical extraction.  Descriptors are immutable;
every analysis routine takes them by value.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MATERIALIZE_LIMIT = 10**8
DEFAULT_POWER_COUNT = 10**5

__all__ = [
    "DescriptorError",
    "FinitePoints",
    "PowerSequence",
    "SampledCloud",
    "SetDescriptor",
    "materialize",
    "min_gap",
    "diameter",
    "descriptor_to_json_dict",
    "descriptor_from_json",
    "load_descriptor",
]


class DescriptorError(ValueError):
    """Raised for malformed or unloadable set descriptors."""


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FinitePoints:
    """Explicit finite point set, lexicographically sorted and deduplicated.

    Points live in value space and have shape ``(k, m)``; scalar input is
    treated as m = 1.  Deduplication uses exact float equality on purpose:
    covering counts are discontinuous in the points, and tolerance merging
    would silently move threshold radii.  Callers wanting fuzzy dedup must
    pre-process.
    """

    points: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.points, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise DescriptorError("finite set needs at least one point")
        if not np.all(np.isfinite(arr)):
            raise DescriptorError("points must be finite numbers")
        arr = np.unique(arr, axis=0)  # lexicographic sort + exact dedup
        object.__setattr__(self, "points", _frozen(arr))

    @property
    def m(self) -> int:
        return self.points.shape[1]

    @property
    def values(self) -> np.ndarray:
        """Sorted scalar values; defined for one-dimensional sets only."""
        if self.m != 1:
            raise ValueError("values requires a one-dimensional set")
        return self.points[:, 0]


@dataclass(frozen=True)
class PowerSequence:
    """The decreasing sequence ``1, 2**alpha, ...`` for negative alpha.

    The descriptor stands for the full infinite sequence with accumulation
    point 0.  ``count`` only truncates explicit materialization; covering
    routines account for the residual tail exactly, so reported covering
    numbers are those of the untruncated sequence.
    """

    alpha: float
    count: int = DEFAULT_POWER_COUNT

    def __post_init__(self):
        if not (isinstance(self.count, (int, np.integer)) and self.count >= 2):
            raise DescriptorError("count must be an integer >= 2")
        if not (math.isfinite(self.alpha) and self.alpha < 0):
            raise DescriptorError("alpha must be a finite negative number")

    @property
    def m(self) -> int:
        return 1


@dataclass(frozen=True, eq=False)
class SampledCloud:
    """Point cloud of shape ``(k, m)`` tagged with its provenance."""

    points: np.ndarray
    provenance: str = "extracted"

    def __post_init__(self):
        arr = np.asarray(self.points, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise DescriptorError("cloud needs at least one point")
        if not np.all(np.isfinite(arr)):
            raise DescriptorError("points must be finite numbers")
        object.__setattr__(self, "points", _frozen(arr))

    @property
    def m(self) -> int:
        return self.points.shape[1]

    @property
    def values(self) -> np.ndarray:
        if self.m != 1:
            raise ValueError("values requires a one-dimensional cloud")
        return self.points[:, 0]


SetDescriptor = FinitePoints | PowerSequence | SampledCloud


def _power_top_index(alpha: float, cutoff: float, limit: int) -> int:
    """Largest index <= limit whose term alpha-power stays at or above cutoff."""
    if cutoff > 1.0:
        return 0
    try:
        est = cutoff ** (1.0 / alpha)
    except OverflowError:
        est = math.inf
    top = limit if not math.isfinite(est) else min(limit, int(est))
    # nudge against float rounding of the inverted power
    while top < limit and (top + 1) ** alpha >= cutoff:
        top += 1
    while top > 0 and top ** alpha < cutoff:
        top -= 1
    return top


def materialize(s: SetDescriptor, tail_cutoff: float = 1e-9) -> np.ndarray:
    """Explicit points of a descriptor.

    Finite sets and clouds are returned as stored (flat values for m = 1,
    a row array otherwise); the cutoff does not apply to them.  A power
    sequence yields every term at or above ``tail_cutoff`` plus the cutoff
    itself as a marker standing for the residual tail in [0, tail_cutoff];
    the result is ascending.  Materializations that would emit more than
    ``MATERIALIZE_LIMIT`` points raise instead of silently truncating.
    """
    if isinstance(s, FinitePoints):
        return s.values if s.m == 1 else s.points
    if isinstance(s, SampledCloud):
        return s.values if s.m == 1 else s.points
    if isinstance(s, PowerSequence):
        if not (isinstance(tail_cutoff, (int, float)) and tail_cutoff > 0):
            raise ValueError("tail_cutoff must be positive")
        top = _power_top_index(s.alpha, float(tail_cutoff), s.count)
        if top > MATERIALIZE_LIMIT:
            raise ValueError(
                f"materialization would emit {top} points "
                f"(limit {MATERIALIZE_LIMIT}); raise tail_cutoff"
            )
        terms = np.arange(1, top + 1, dtype=float) ** s.alpha
        return np.unique(np.concatenate([terms, [float(tail_cutoff)]]))
    raise TypeError(f"unsupported descriptor {type(s).__name__}")


def min_gap(s: SetDescriptor) -> float:
    """Smallest distance between consecutive sorted values (m = 1 only)."""
    if isinstance(s, PowerSequence):
        # gaps shrink monotonically along the sequence, so the truncated
        # minimum sits between the last two explicit terms
        return float((s.count - 1) ** s.alpha - s.count ** s.alpha)
    vals = np.unique(s.values)  # clouds may repeat values
    if vals.size < 2:
        raise ValueError("min_gap needs at least two distinct points")
    return float(np.min(np.diff(vals)))


def diameter(s: SetDescriptor) -> float:
    """Extent of the set.

    Power sequences report 1 (sup 1, accumulation at 0).  For m >= 2 the
    bounding-box diagonal is returned, which is enough for grid sizing.
    """
    if isinstance(s, PowerSequence):
        return 1.0
    pts = s.points
    if s.m == 1:
        v = pts[:, 0]
        return float(v.max() - v.min())
    spread = pts.max(axis=0) - pts.min(axis=0)
    return float(np.sqrt(np.sum(spread**2)))


def descriptor_to_json_dict(s: SetDescriptor) -> dict:
    if isinstance(s, FinitePoints):
        pts = s.values.tolist() if s.m == 1 else s.points.tolist()
        return {"type": "finite", "points": pts}
    if isinstance(s, PowerSequence):
        return {"type": "power", "alpha": s.alpha, "count": s.count}
    if isinstance(s, SampledCloud):
        return {"type": "cloud", "points": s.points.tolist()}
    raise TypeError(f"unsupported descriptor {type(s).__name__}")


def descriptor_from_json(obj) -> SetDescriptor:
    if not isinstance(obj, dict):
        raise DescriptorError("descriptor must be a JSON object")
    kind = obj.get("type")
    try:
        if kind == "finite":
            return FinitePoints(np.asarray(obj["points"], dtype=float))
        if kind == "power":
            alpha = float(obj["alpha"])
            count = int(obj.get("count", DEFAULT_POWER_COUNT))
            return PowerSequence(alpha, count)
        if kind == "cloud":
            return SampledCloud(np.asarray(obj["points"], dtype=float),
                                provenance=str(obj.get("provenance", "extracted")))
    except KeyError as exc:
        raise DescriptorError(f"descriptor is missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DescriptorError):
            raise
        raise DescriptorError(f"descriptor has malformed values: {exc}") from exc
    raise DescriptorError(f"unknown descriptor type {kind!r}")


def load_descriptor(source: str | Path) -> SetDescriptor:
    """Load a descriptor from a JSON file path or an inline JSON string."""
    text = str(source)
    if not text.lstrip().startswith("{"):
        text = Path(source).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"descriptor is not valid JSON: {exc}") from exc
    return descriptor_from_json(obj)
