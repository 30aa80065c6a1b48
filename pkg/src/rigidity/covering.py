"""Exact covering counts of value sets by closed balls of radius epsilon.

All counts here are minimal-cover cardinalities, exact by construction:
one-dimensional sets via the optimal greedy sweep, power sequences via a
closed-form sweep that accounts for the accumulation tail.  Anything that
is merely an upper-bound estimate (multi-dimensional box counting) is kept
out of the exact paths and labeled as such.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .sets import FinitePoints, PowerSequence, SampledCloud, SetDescriptor
from .util import DEFAULT_EPS_MIN, log_grid, worker_count

BRUTE_FORCE_LIMIT = 12
POWER_COUNT_LIMIT = 2 * 10**7

__all__ = [
    "BRUTE_FORCE_LIMIT",
    "CoveringCurve",
    "covering_number_1d",
    "covering_number_power",
    "covering_curve",
    "brute_force_covering_oracle",
    "box_count_estimate",
    "exact_counter",
    "default_grid",
]


def covering_number_1d(points, epsilon: float) -> int:
    """Minimal number of closed intervals of length 2*epsilon covering the points.

    Greedy sweep anchoring each interval at the leftmost uncovered point,
    which is optimal on the line.  A point at distance exactly 2*epsilon
    from the anchor counts as covered (closed balls).
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or pts.size == 0:
        raise ValueError("need a non-empty flat point list")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite numbers")
    if pts.size > 1 and np.any(np.diff(pts) < 0):
        pts = np.sort(pts)
    return _greedy_sorted(pts, float(epsilon))


def _greedy_sorted(pts: np.ndarray, epsilon: float) -> int:
    count = 0
    i = 0
    n = pts.size
    while i < n:
        count += 1
        i = int(np.searchsorted(pts, pts[i] + 2.0 * epsilon, side="right"))
    return count


def covering_number_power(alpha: float, epsilon: float) -> int:
    """Exact covering count of the full sequence {m**alpha : m >= 1}.

    Greedy sweep from the largest term downward.  Once the largest
    uncovered term t drops to 2*epsilon or below, the whole remainder lies
    in (0, t] and a single further ball finishes the cover, so the count is
    finite and exact despite the accumulation at zero.
    """
    if not alpha < 0:
        raise ValueError("alpha must be negative")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    # the count grows like (2 eps)^(1/(alpha-1)); refuse degenerate scans
    if (2.0 * epsilon) ** (1.0 / (alpha - 1.0)) > POWER_COUNT_LIMIT:
        raise ValueError("covering count would exceed the iteration limit; raise epsilon")
    count = 0
    q = 1.0
    while q > 2.0 * epsilon:
        count += 1
        q = _next_term_below(alpha, q - 2.0 * epsilon)
    return count + 1


def _next_term_below(alpha: float, t: float) -> float:
    """Largest sequence term strictly below t, for t in (0, 1)."""
    log_m = math.log(t) / alpha
    if log_m > 34.5:  # index beyond 1e15: adjacent terms are denser than float ulps near t
        return math.nextafter(t, 0.0)
    m = max(1, int(math.exp(log_m)) + 1)
    while m > 1 and (m - 1) ** alpha < t:
        m -= 1
    while m ** alpha >= t:
        m += 1
    return m ** alpha


@dataclass(frozen=True, eq=False)
class CoveringCurve:
    """Covering counts along a strictly decreasing grid of radii."""

    epsilons: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        eps = np.asarray(self.epsilons, dtype=float)
        cnt = np.asarray(self.counts, dtype=np.int64)
        if eps.ndim != 1 or eps.size == 0 or eps.shape != cnt.shape:
            raise ValueError("curve needs matching non-empty epsilon and count arrays")
        if np.any(eps <= 0) or (eps.size > 1 and np.any(np.diff(eps) >= 0)):
            raise ValueError("epsilons must be positive and strictly decreasing")
        if np.any(cnt < 1):
            raise ValueError("counts must be positive")
        if cnt.size > 1 and np.any(np.diff(cnt) < 0):
            raise ValueError("counts must be nondecreasing as epsilon shrinks")
        eps = np.ascontiguousarray(eps)
        cnt = np.ascontiguousarray(cnt)
        eps.setflags(write=False)
        cnt.setflags(write=False)
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "counts", cnt)

    def __len__(self) -> int:
        return self.epsilons.size

    def to_csv_text(self) -> str:
        lines = ["epsilon,count"]
        lines += [f"{e!r},{c}" for e, c in zip(self.epsilons.tolist(), self.counts.tolist())]
        return "\n".join(lines) + "\n"


def exact_counter(s: SetDescriptor):
    """Exact per-radius covering counter for a descriptor, or raise.

    Multi-dimensional clouds have no exact routine; they are rejected here
    so estimate-only curves can never leak into the bound solver.
    """
    if isinstance(s, PowerSequence):
        alpha = s.alpha
        return lambda e: covering_number_power(alpha, e)
    if isinstance(s, (FinitePoints, SampledCloud)):
        if s.m != 1:
            raise ValueError(
                "exact covering requires m = 1; box_count_estimate gives a "
                "labeled upper bound for clouds"
            )
        pts = np.sort(s.values)
        return lambda e: _greedy_sorted(pts, float(e))
    raise TypeError(f"unsupported descriptor {type(s).__name__}")


def default_grid(s: SetDescriptor) -> np.ndarray:
    """Default scan grid: 200 points per decade from the set scale down to 1e-6.

    Power sequences cap at 1/2, above which the whole sequence fits in one
    ball and the count is constant.
    """
    if isinstance(s, PowerSequence):
        hi = 0.5
    else:
        d = None
        try:
            from .sets import diameter

            d = diameter(s)
        except ValueError:
            d = None
        hi = d if (d is not None and d > 10 * DEFAULT_EPS_MIN) else 1.0
    return log_grid(DEFAULT_EPS_MIN, hi)


def covering_curve(s: SetDescriptor, eps_grid) -> CoveringCurve:
    """Exact covering counts for every grid radius.

    The grid must be strictly decreasing and positive.  Counts come from
    the exact routine for the set family; the nondecreasing-count invariant
    is re-checked after the scan.  RIGIDITY_THREADS > 1 spreads large scans
    over a thread pool with deterministic output ordering.
    """
    eps = np.asarray(eps_grid, dtype=float)
    if eps.ndim != 1 or eps.size == 0:
        raise ValueError("epsilon grid must be a non-empty 1-d array")
    if np.any(eps <= 0) or (eps.size > 1 and np.any(np.diff(eps) >= 0)):
        raise ValueError("epsilon grid must be positive and strictly decreasing")
    fn = exact_counter(s)
    workers = worker_count()
    values = eps.tolist()
    if workers > 1 and eps.size >= 64:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(fn, values))
    else:
        counts = [fn(e) for e in values]
    curve = CoveringCurve(eps, np.asarray(counts, dtype=np.int64))
    return curve


def brute_force_covering_oracle(points, epsilon: float) -> int:
    """Exhaustive minimal covering count for small point sets (test oracle).

    Every minimal cover can slide each interval right until its left end
    hits a covered point, so it suffices to search covers anchored at the
    points.  Subset sizes are enumerated in increasing order with bitmask
    coverage tracking.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    pts = np.unique(np.asarray(points, dtype=float))
    n = pts.size
    if n == 0:
        raise ValueError("need at least one point")
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"oracle is exhaustive; at most {BRUTE_FORCE_LIMIT} points")
    full = (1 << n) - 1
    masks = []
    for idx in range(n):
        hi = int(np.searchsorted(pts, pts[idx] + 2.0 * epsilon, side="right"))
        masks.append(((1 << (hi - idx)) - 1) << idx)
    for k in range(1, n + 1):
        for combo in combinations(masks, k):
            acc = 0
            for m in combo:
                acc |= m
            if acc == full:
                return k
    return n  # unreachable: n singleton anchors always cover


def box_count_estimate(points, epsilon: float) -> int:
    """Occupied-box count with boxes inscribed in radius-epsilon balls.

    Upper bound on the minimal closed-ball cover of a cloud in any
    dimension (box side 2*eps/sqrt(m) makes the circumscribed radius eps).
    Estimate only: it is not the exact minimum and must not feed the bound
    solver, which needs exact or lower counts to stay sound.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("need a non-empty point array")
    m = pts.shape[1]
    side = 2.0 * epsilon / math.sqrt(m)
    cells = np.floor(pts / side).astype(np.int64)
    return int(np.unique(cells, axis=0).shape[0])
