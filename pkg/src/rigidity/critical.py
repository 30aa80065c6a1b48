"""Near-critical value extraction from sampled maps, plus empirical checks.

This is the measurement side of the package: given a map sampled on a
regular grid over a ball, locate the points where the differential is
degenerate up to given thresholds, collect their values as a point cloud,
and compare the cloud's covering counts against the forward bound computed
from the map's own measured derivative scale.  Everything here is grid
arithmetic on top of numpy; the certified machinery lives in bounds.py.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import LambdaProfile, ProblemParams, forward_upper_bound
from .covering import covering_number_1d
from .sets import FinitePoints, SampledCloud
from .util import fit_loglog_slope, log_grid

# grid resolution per unit radius, by dimension; n = 3 grids get coarse fast
DEFAULT_DIVISIONS = {1: 256, 2: 256, 3: 64}

MAX_DIM = 3

__all__ = [
    "SampledMap",
    "Extraction",
    "CheckRow",
    "ForwardCheckReport",
    "near_critical_set",
    "semi_axis_field",
    "semi_axes",
    "measured_derivative_scale",
    "empirical_forward_check",
]


@dataclass(frozen=True, eq=False)
class SampledMap:
    """Map from the radius-r ball in R^n to R^m, sampled on a regular grid.

    ``axis`` is the shared 1-d coordinate array (uniform, symmetric about
    zero, spanning [-radius, radius]); ``values`` has shape
    (len(axis),) * n + (m,).  The grid covers the bounding cube; routines
    that care about the ball mask it themselves.  ``func`` optionally
    retains the exact callable for off-grid refinement.
    """

    axis: np.ndarray
    values: np.ndarray
    radius: float
    func: Callable | None = None

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if axis.ndim != 1 or axis.size < 5:
            raise ValueError("axis must be a 1-d array with at least 5 points")
        steps = np.diff(axis)
        if np.any(steps <= 0):
            raise ValueError("axis must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ValueError("axis must be uniformly spaced")
        if abs(axis[0] + axis[-1]) > 1e-9 * max(abs(axis[-1]), 1.0):
            raise ValueError("axis must be symmetric about zero")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError("radius must be positive and finite")
        if abs(axis[-1] - self.radius) > 1e-9 * self.radius:
            raise ValueError("axis must span [-radius, radius]")
        n = values.ndim - 1
        if not 1 <= n <= MAX_DIM:
            raise ValueError(f"domain dimension must be in [1, {MAX_DIM}]")
        if values.shape[:n] != (axis.size,) * n:
            raise ValueError("values must be sampled on the full axis**n grid")
        m = values.shape[-1]
        if not 1 <= m <= n:
            raise ValueError("target dimension must satisfy 1 <= m <= n")
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled values must be finite")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def n(self) -> int:
        return self.values.ndim - 1

    @property
    def m(self) -> int:
        return self.values.shape[-1]

    @property
    def grid_step(self) -> float:
        return float(self.axis[1] - self.axis[0])

    def coordinate_grids(self) -> tuple:
        return np.meshgrid(*([self.axis] * self.n), indexing="ij")

    @classmethod
    def from_callable(cls, func: Callable, n: int, m: int, radius: float = 1.0,
                      divisions: int | None = None) -> "SampledMap":
        """Sample ``func`` on a regular grid.

        ``func`` must accept an array of shape (k, n) and return (k, m)
        (a flat (k,) return is accepted when m = 1).
        """
        if not 1 <= n <= MAX_DIM:
            raise ValueError(f"domain dimension must be in [1, {MAX_DIM}]")
        if divisions is None:
            divisions = DEFAULT_DIVISIONS[n]
        if divisions < 2:
            raise ValueError("need at least 2 divisions per radius")
        npts = 2 * int(divisions) + 1
        axis = np.linspace(-radius, radius, npts)
        grids = np.meshgrid(*([axis] * n), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        out = np.asarray(func(pts), dtype=float)
        if out.ndim == 1:
            out = out[:, None]
        if out.shape != (pts.shape[0], m):
            raise ValueError(
                f"map returned shape {out.shape}, expected {(pts.shape[0], m)}"
            )
        values = out.reshape((npts,) * n + (m,))
        return cls(axis, values, float(radius), func)

    @classmethod
    def from_grid_csv(cls, path) -> "SampledMap":
        """Load a grid sample from CSV with header x1,..,xn,f1,..,fm.

        Rows must enumerate the full cartesian grid in row-major order of
        the coordinate axes (last coordinate fastest).
        """
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            body = fh.read()
        cols = [c.strip() for c in header.split(",")]
        n = sum(1 for c in cols if c.startswith("x"))
        m = sum(1 for c in cols if c.startswith("f"))
        if n == 0 or m == 0 or n + m != len(cols):
            raise ValueError(f"malformed grid header: {header!r}")
        data = np.loadtxt(io.StringIO(body), delimiter=",", ndmin=2)
        if data.shape[1] != n + m:
            raise ValueError("grid rows do not match the header")
        axis = np.unique(data[:, n - 1])
        npts = axis.size
        if data.shape[0] != npts**n:
            raise ValueError("grid rows do not form a full cartesian product")
        grids = np.meshgrid(*([axis] * n), indexing="ij")
        for j, g in enumerate(grids):
            if not np.allclose(data[:, j], g.ravel(), rtol=0.0, atol=1e-12):
                raise ValueError("grid coordinates are not in row-major axis order")
        values = data[:, n:].reshape((npts,) * n + (m,))
        return cls(axis, values, float(axis[-1]))

    def to_grid_csv_text(self) -> str:
        header = ",".join(
            [f"x{i + 1}" for i in range(self.n)] + [f"f{j + 1}" for j in range(self.m)]
        )
        grids = self.coordinate_grids()
        coords = np.stack([g.ravel() for g in grids], axis=-1)
        flat = self.values.reshape(-1, self.m)
        lines = [header]
        for row_c, row_v in zip(coords, flat):
            lines.append(",".join(repr(float(v)) for v in (*row_c, *row_v)))
        return "\n".join(lines) + "\n"


def _jacobian_field(sm: SampledMap) -> np.ndarray:
    """Central-difference Jacobian on the full grid, shape grid + (m, n)."""
    shape = sm.values.shape[:-1]
    jac = np.empty(shape + (sm.m, sm.n))
    for a in range(sm.m):
        for b in range(sm.n):
            jac[..., a, b] = np.gradient(sm.values[..., a], sm.axis, axis=b)
    return jac


def _interior(sm: SampledMap, margin: int = 1) -> tuple:
    return (slice(margin, -margin),) * sm.n


def semi_axis_field(sm: SampledMap) -> tuple:
    """Singular values of the differential at interior grid points in the ball.

    Returns (points, sigmas): points of shape (k, n) and the ascending
    singular values of shape (k, m).  The one-cell boundary layer is
    dropped because the difference stencil is one-sided there, and points
    outside the ball are masked away.
    """
    jac = _jacobian_field(sm)
    inner = _interior(sm)
    grids = sm.coordinate_grids()
    pts = np.stack([g[inner].ravel() for g in grids], axis=-1)
    jflat = jac[inner].reshape(-1, sm.m, sm.n)
    radii2 = np.sum(pts**2, axis=1)
    keep = radii2 <= sm.radius**2
    pts = pts[keep]
    jflat = jflat[keep]
    if sm.m == 1:
        sig = np.linalg.norm(jflat[:, 0, :], axis=1)[:, None]
    else:
        sig = np.linalg.svd(jflat, compute_uv=False)[:, ::-1]
    return pts, sig


def semi_axes(sm: SampledMap, point) -> np.ndarray:
    """Ascending singular values of the differential at one grid point.

    The point is snapped to the nearest grid node, which must be strictly
    interior (central differences need both neighbors).
    """
    pt = np.atleast_1d(np.asarray(point, dtype=float))
    if pt.shape != (sm.n,):
        raise ValueError(f"point must have shape ({sm.n},)")
    idx = tuple(int(np.argmin(np.abs(sm.axis - x))) for x in pt)
    if any(i == 0 or i == sm.axis.size - 1 for i in idx):
        raise ValueError("point lies on the grid boundary; no central stencil")
    h = sm.grid_step
    jac = np.empty((sm.m, sm.n))
    for b in range(sm.n):
        up = list(idx)
        dn = list(idx)
        up[b] += 1
        dn[b] -= 1
        jac[:, b] = (sm.values[tuple(up)] - sm.values[tuple(dn)]) / (2.0 * h)
    if sm.m == 1:
        return np.array([float(np.linalg.norm(jac[0]))])
    return np.linalg.svd(jac, compute_uv=False)[::-1]


@dataclass(frozen=True, eq=False)
class Extraction:
    """Result of a near-critical sweep over a sampled map.

    ``points``/``values``/``sigmas`` are aligned rows; ``descriptor`` is
    the value set ready for covering analysis (sorted FinitePoints for
    scalar targets, a SampledCloud otherwise), or None when nothing
    qualified.  ``grid_step`` records the resolution the extraction can
    resolve, which downstream covering analysis should not undercut.
    """

    points: np.ndarray
    values: np.ndarray
    sigmas: np.ndarray
    descriptor: SampledCloud | None
    grid_step: float

    @property
    def count(self) -> int:
        return self.points.shape[0]


def near_critical_set(sm: SampledMap, profile: LambdaProfile) -> Extraction:
    """Grid points whose differential is degenerate up to the thresholds.

    A point qualifies when every ascending singular value sits at or below
    the corresponding threshold.  Thresholds are compared exactly; for the
    common exact-critical query (first threshold zero) on a univariate
    scalar map, sampled derivatives almost never hit zero on the nose, so
    that case additionally brackets sign changes of the sampled derivative
    and refines each bracket to an interpolated root.  The refined value
    uses the exact callable when the map carries one (the value error is
    then fourth order in the grid step, since the derivative vanishes at
    the root) and a three-point parabola through the neighbouring samples
    otherwise.
    """
    if len(profile) != sm.m:
        raise ValueError("profile length must equal the map's target dimension")
    lams = np.asarray(profile.lambdas)
    pts, sig = semi_axis_field(sm)
    keep = np.all(sig <= lams[None, :], axis=1)
    sel_pts = pts[keep]
    sel_sig = sig[keep]
    sel_vals_list = []
    if sel_pts.size:
        # selected points are grid nodes, so their indices invert exactly
        idx = np.rint((sel_pts + sm.radius) / sm.grid_step).astype(int)
        sel_vals_list.append(sm.values[tuple(idx.T)])
    points = [sel_pts]
    sigmas = [sel_sig]

    if profile.lambdas[0] == 0.0 and sm.n == 1 and sm.m == 1:
        bp, bv = _bracketed_derivative_roots(sm)
        if bp.size:
            points.append(bp[:, None])
            sel_vals_list.append(bv[:, None])
            sigmas.append(np.zeros((bp.size, 1)))

    pts_all = np.concatenate(points, axis=0) if points else np.empty((0, sm.n))
    vals_all = (
        np.concatenate(sel_vals_list, axis=0) if sel_vals_list else np.empty((0, sm.m))
    )
    sig_all = np.concatenate(sigmas, axis=0) if sigmas else np.empty((0, sm.m))
    if pts_all.shape[0] == 0:
        return Extraction(
            np.empty((0, sm.n)), np.empty((0, sm.m)), np.empty((0, sm.m)),
            None, sm.grid_step,
        )
    if sm.m == 1:
        # scalar value sets go straight into the exact-covering pipeline
        descriptor = FinitePoints(np.sort(vals_all[:, 0]))
    else:
        descriptor = SampledCloud(vals_all.copy(), provenance="extracted")
    return Extraction(pts_all, vals_all, sig_all, descriptor, sm.grid_step)


def _bracketed_derivative_roots(sm: SampledMap) -> tuple:
    """Sign-change roots of the sampled derivative of a univariate scalar map.

    Returns (locations, values).  Locations come from linear interpolation
    of the central-difference derivative between interior grid nodes;
    values come from the exact callable when available, otherwise from the
    parabola through the three nearest samples.
    """
    f = sm.values[:, 0]
    deriv = np.gradient(f, sm.axis)
    lo, hi = 1, sm.axis.size - 1  # central-difference interior
    x = sm.axis[lo:hi]
    g = deriv[lo:hi]
    locs = []
    for i in range(g.size - 1):
        a, b = g[i], g[i + 1]
        # nodes where the sampled derivative is exactly zero are already
        # caught by the threshold selection; only strict sign changes hide
        # a root between nodes
        if a * b < 0.0:
            locs.append(x[i] - a * (x[i + 1] - x[i]) / (b - a))
    if not locs:
        return np.empty(0), np.empty(0)
    locs = np.asarray(locs, dtype=float)
    if sm.func is not None:
        vals = np.asarray(sm.func(locs[:, None]), dtype=float).reshape(-1)
    else:
        vals = np.array([_parabola_value(sm, loc) for loc in locs])
    return locs, vals


def _parabola_value(sm: SampledMap, loc: float) -> float:
    i = int(np.argmin(np.abs(sm.axis - loc)))
    i = min(max(i, 1), sm.axis.size - 2)
    xs = sm.axis[i - 1:i + 2]
    ys = sm.values[i - 1:i + 2, 0]
    coeffs = np.polynomial.polynomial.polyfit(xs - loc, ys, 2)
    return float(coeffs[0])


def measured_derivative_scale(sm: SampledMap, order: int) -> float:
    """Empirical derivative scale via repeated central differencing (n = 1).

    Each differencing pass degrades one cell of boundary accuracy, so
    order + 1 cells are trimmed per side before taking the maximum.  This
    is a measurement, not a certificate: differencing noise grows with
    order and the true scale can exceed it between samples.
    """
    if sm.n != 1:
        raise ValueError("measured derivative scale is implemented for n = 1 only")
    if not (isinstance(order, (int, np.integer)) and order >= 1):
        raise ValueError("order must be a positive integer")
    g = sm.values[:, 0]
    for _ in range(order):
        g = np.gradient(g, sm.axis)
    trim = order + 1
    if g.size <= 2 * trim:
        raise ValueError("grid too coarse for this differentiation order")
    peak = float(np.max(np.abs(g[trim:-trim])))
    return peak * sm.radius**order / math.factorial(order)


@dataclass(frozen=True)
class CheckRow:
    """One resolution of the empirical forward check."""

    epsilon: float
    measured: int
    bound: float
    regime: str
    passed: bool


@dataclass(frozen=True, eq=False)
class ForwardCheckReport:
    """Covering counts of extracted values vs the forward bound.

    ``slope`` is the fitted log-log slope of the measured counts over the
    unsaturated rows (None when fewer than two such rows exist);
    ``slope_reference`` is the forward bound's own scaling exponent -n/d.
    ``flag`` carries a human-readable message when any row violates the
    bound — a violation means a bug or a too-coarse sample, and it is
    surfaced rather than swallowed.
    """

    rows: tuple
    derivative_scale: float
    slope: float | None
    slope_reference: float
    all_passed: bool
    flag: str | None

    def to_csv_text(self) -> str:
        lines = ["epsilon,measured_M,bound,regime,pass"]
        for row in self.rows:
            lines.append(
                f"{row.epsilon!r},{row.measured},{row.bound!r},"
                f"{row.regime},{str(row.passed).lower()}"
            )
        return "\n".join(lines) + "\n"


def empirical_forward_check(sm: SampledMap, p: ProblemParams, profile: LambdaProfile,
                            eps_grid=None,
                            extraction: Extraction | None = None) -> ForwardCheckReport:
    """Check extracted near-critical values against the forward bound.

    Uses the map's own measured derivative scale, so this is a
    self-consistency check on real data rather than a certificate; a
    clean run says the forward inequality holds at every grid resolution
    with room to spare.  Univariate scalar maps only (the measured scale
    needs n = 1).
    """
    if sm.n != 1 or sm.m != 1:
        raise ValueError("the empirical check is implemented for n = m = 1")
    if p.n != sm.n or p.m != sm.m:
        raise ValueError("params dimensions must match the sampled map")
    scale = measured_derivative_scale(sm, p.d)
    if extraction is None:
        extraction = near_critical_set(sm, profile)
    if eps_grid is None:
        eps_grid = log_grid(1e-4, 1e-2, 50)
    else:
        eps_grid = np.asarray(eps_grid, dtype=float)
        if eps_grid.ndim != 1 or eps_grid.size == 0 or np.any(eps_grid <= 0):
            raise ValueError("epsilon grid must be a non-empty positive 1-d array")

    if extraction.descriptor is None:
        return ForwardCheckReport(
            (), scale, None, -p.n / p.d, True,
            "no near-critical values extracted; the check is vacuous",
        )

    vals = extraction.descriptor.values
    rows = []
    for eps in sorted((float(e) for e in eps_grid), reverse=True):
        measured = covering_number_1d(vals, eps)
        bound = forward_upper_bound(p, profile, scale, eps)
        regime = "baseline" if eps >= scale else "scaled"
        rows.append(CheckRow(eps, measured, bound, regime, measured <= bound))

    unsat = [(r.epsilon, r.measured) for r in rows if r.measured > 1]
    slope = None
    if len(unsat) >= 2:
        xs = np.array([e for e, _ in unsat])
        ys = np.array([c for _, c in unsat])
        if np.unique(xs).size >= 2:
            slope = fit_loglog_slope(xs, ys)

    failures = [r for r in rows if not r.passed]
    flag = None
    if failures:
        worst = max(failures, key=lambda r: r.measured / r.bound)
        flag = (
            f"forward bound violated at {len(failures)} resolution(s); worst at "
            f"epsilon={worst.epsilon:.6g}: measured {worst.measured} > bound {worst.bound:.6g}"
        )
    return ForwardCheckReport(
        tuple(rows), scale, slope, -p.n / p.d, not failures, flag
    )
