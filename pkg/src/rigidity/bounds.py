"""Lower bounds on the d-th derivative scale from covering counts.

The forward direction says: a map on the radius-r ball whose d-th
derivative scale is R can only produce near-critical values whose covering
count at resolution eps stays under a fixed polynomial in r/eps and
eta = R/eps.  Inverting that statement pointwise gives the machinery here:
wherever the observed covering count of a value set strictly beats the
eta = 1 baseline, the monotone equation for eta has a unique root above 1,
and eps * eta(eps) is a certified lower bound on R for any smooth map
realizing the set.  The reported bound gamma is the best such product over
a resolution grid, so grid coarseness can cost sharpness but never
soundness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covering import default_grid, exact_counter
from .sets import PowerSequence, SetDescriptor, diameter, min_gap

BISECT_REL_TOL = 1e-12
BISECT_MAX_ITER = 200
BRACKET_MAX_DOUBLINGS = 1000
# boundary refinements are placed just inside the qualifying region
_BOUNDARY_SHRINK = 1.0 - 1e-9

EXCLUDED = "Excluded"
NOT_EXCLUDED = "NotExcludedByThisBound"

__all__ = [
    "ProblemParams",
    "LambdaProfile",
    "BoundReport",
    "PowerVerdict",
    "EXCLUDED",
    "NOT_EXCLUDED",
    "rhs_polynomial",
    "forward_upper_bound",
    "in_E",
    "solve_eta",
    "epsilon0",
    "gamma_closed_form",
    "rigidity_bound",
    "classify_power_sequence",
    "critical_point_rigidity_reduction",
]


@dataclass(frozen=True)
class ProblemParams:
    """Dimensions and constants of a bound instance.

    n: domain dimension; m: target dimension (m <= n); d: smoothness order;
    r: domain ball radius; c: the entropy constant of the forward bound.
    For n = 1 the constant is known explicitly and defaults to d + 1; for
    n >= 2 no default is sound, so it must be supplied by the caller.
    """

    n: int
    m: int
    d: int
    r: float = 1.0
    c: float | None = None

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError("n must be a positive integer")
        if not (isinstance(self.m, (int, np.integer)) and 1 <= self.m <= self.n):
            raise ValueError("m must be an integer with 1 <= m <= n")
        if not (isinstance(self.d, (int, np.integer)) and self.d >= 1):
            raise ValueError("d must be a positive integer")
        if not (isinstance(self.r, (int, float)) and math.isfinite(self.r) and self.r > 0):
            raise ValueError("r must be a positive finite number")
        object.__setattr__(self, "r", float(self.r))
        if self.c is None:
            if self.n == 1:
                object.__setattr__(self, "c", float(self.d + 1))
            else:
                raise ValueError("the entropy constant c must be given explicitly for n >= 2")
        else:
            if not (isinstance(self.c, (int, float)) and math.isfinite(self.c) and self.c > 0):
                raise ValueError("c must be a positive finite number")
            object.__setattr__(self, "c", float(self.c))


@dataclass(frozen=True)
class LambdaProfile:
    """Nondecreasing near-criticality thresholds (lambda_1 .. lambda_m).

    The implicit zeroth entry is always 1 and is never stored.
    """

    lambdas: tuple

    def __post_init__(self):
        lams = tuple(float(v) for v in self.lambdas)
        if len(lams) == 0:
            raise ValueError("profile needs at least one threshold")
        if any(not math.isfinite(v) or v < 0 for v in lams):
            raise ValueError("thresholds must be finite and nonnegative")
        if any(b < a for a, b in zip(lams, lams[1:])):
            raise ValueError("thresholds must be nondecreasing")
        object.__setattr__(self, "lambdas", lams)

    @classmethod
    def zeros(cls, m: int) -> "LambdaProfile":
        return cls((0.0,) * m)

    def __len__(self) -> int:
        return len(self.lambdas)

    @property
    def all_zero(self) -> bool:
        return all(v == 0.0 for v in self.lambdas)


def rhs_polynomial(p: ProblemParams, profile: LambdaProfile,
                   epsilon: float, eta: float) -> float:
    """Forward-bound polynomial at ratio eta = (derivative scale) / epsilon.

    Sum over i = 0..m of the cumulative threshold products times
    (r/eps)^i * eta^((n-i)/d), scaled by c.  Every coefficient is
    nonnegative and the i = 0 exponent n/d is positive, so the value is
    strictly increasing in eta.
    """
    if len(profile) != p.m:
        raise ValueError("profile length must equal m")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not eta >= 1.0:
        raise ValueError("eta must be at least 1")
    total = 0.0
    prod = 1.0
    ratio = p.r / epsilon
    for i in range(p.m + 1):
        if i > 0:
            prod *= profile.lambdas[i - 1]
            if prod == 0.0:
                break
        total += prod * ratio**i * eta ** ((p.n - i) / p.d)
    return p.c * total


def forward_upper_bound(p: ProblemParams, profile: LambdaProfile,
                        derivative_scale: float, epsilon: float) -> float:
    """Upper bound on the covering count of near-critical values at resolution epsilon.

    Above the derivative scale the bound is the baseline polynomial
    (eta = 1); below it each term picks up the ratio power.  The two
    expressions agree at epsilon = derivative_scale, so the bound is
    continuous across the seam.
    """
    if not (isinstance(derivative_scale, (int, float)) and derivative_scale >= 0):
        raise ValueError("derivative scale must be nonnegative")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if epsilon >= derivative_scale:
        return rhs_polynomial(p, profile, epsilon, 1.0)
    return rhs_polynomial(p, profile, epsilon, derivative_scale / epsilon)


def in_E(p: ProblemParams, profile: LambdaProfile, nu: int, epsilon: float) -> bool:
    """Whether a covering count strictly beats the eta = 1 baseline.

    Strict inequality: equality carries no information and the ratio
    equation would only return eta = 1 there.
    """
    if not nu >= 1:
        raise ValueError("covering count must be at least 1")
    return nu > rhs_polynomial(p, profile, epsilon, 1.0)


def solve_eta(p: ProblemParams, profile: LambdaProfile,
              nu: int, epsilon: float) -> float:
    """Unique ratio eta > 1 at which the forward polynomial equals the count.

    Requires the count to qualify (strictly above the eta = 1 baseline).
    The upper bracket grows geometrically, then plain bisection runs to
    relative width BISECT_REL_TOL; the polynomial is strictly increasing in
    eta, so the root is unique.
    """
    baseline = rhs_polynomial(p, profile, epsilon, 1.0)
    if not nu > baseline:
        raise ValueError(
            f"count {nu} does not exceed the baseline {baseline:.6g}; no ratio above 1"
        )
    lo = 1.0
    hi = 2.0
    doublings = 0
    while rhs_polynomial(p, profile, epsilon, hi) < nu:
        lo = hi
        hi *= 2.0
        doublings += 1
        if doublings > BRACKET_MAX_DOUBLINGS:
            raise RuntimeError("failed to bracket the ratio; parameters are degenerate")
    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= BISECT_REL_TOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if rhs_polynomial(p, profile, epsilon, mid) < nu:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _cardinality(s: SetDescriptor) -> float:
    if isinstance(s, PowerSequence):
        return math.inf
    return float(np.unique(s.values).size)


def epsilon0(s: SetDescriptor, p: ProblemParams) -> float:
    """Largest radius at which the covering count still reaches c + 1.

    Bisection between a radius separating every point and one collapsing
    the set into a single ball, run to relative width BISECT_REL_TOL.
    With closed balls the qualifying region is open on the right; the
    returned value is its boundary, approached from inside.
    """
    count_at = exact_counter(s)
    card = _cardinality(s)
    if not card > p.c:
        raise ValueError("the set must have more than c distinct values")
    threshold = p.c + 1.0

    if isinstance(s, PowerSequence):
        lo = 0.25
    else:
        lo = min_gap(s) / 4.0
    shrinks = 0
    while count_at(lo) < threshold:
        if not isinstance(s, PowerSequence):
            # finite sets max out at their cardinality; shrinking cannot help
            raise ValueError(
                f"covering count never reaches c + 1 = {threshold:g} "
                f"(only {int(card)} distinct values)"
            )
        lo /= 2.0
        shrinks += 1
        if shrinks > 200:
            raise RuntimeError("failed to find a qualifying radius")

    if isinstance(s, PowerSequence):
        # a ball of radius 1/2 covers (0, 1] entirely, so the count is 1 there;
        # the power counter itself is only defined below 1
        hi = 0.5
    else:
        hi = diameter(s)
        if hi <= lo:
            hi = 2.0 * lo
        grows = 0
        while count_at(hi) >= threshold:
            hi *= 2.0
            grows += 1
            if grows > 200:
                raise RuntimeError("failed to find a disqualifying radius")

    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= BISECT_REL_TOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if count_at(mid) >= threshold:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gamma_closed_form(eps0: float, p: ProblemParams) -> float:
    """Closed-form bound (1 + 1/c)^(d/n) * eps0 for the plain-threshold case.

    Valid when the first threshold is zero (the ratio equation collapses to
    a single power term) and the count c + 1 is achieved down to eps0.
    """
    if not eps0 > 0:
        raise ValueError("eps0 must be positive")
    return (1.0 + 1.0 / p.c) ** (p.d / p.n) * eps0


@dataclass(frozen=True, eq=False)
class BoundReport:
    """Outcome of a rigidity scan over a resolution grid.

    e_intervals: the evaluated resolutions that qualified; eta_curve: the
    solved ratio at each of them; gamma: best eps * eta product (zero
    exactly when nothing qualified); epsilon0 / gamma_closed_form: the
    count-(c+1) boundary and its closed-form bound when applicable.
    """

    e_intervals: tuple
    eta_curve: tuple
    gamma: float
    gamma_closed_form: float | None
    epsilon0: float | None
    params: ProblemParams
    profile: LambdaProfile

    def __post_init__(self):
        if any(eta <= 1.0 for _, eta in self.eta_curve):
            raise ValueError("every solved ratio must exceed 1")
        best = max((e * eta for e, eta in self.eta_curve), default=0.0)
        if not math.isclose(best, self.gamma, rel_tol=1e-12, abs_tol=0.0) and best != self.gamma:
            raise ValueError("gamma must equal the best eps*eta product")
        if (self.gamma == 0.0) != (len(self.e_intervals) == 0):
            raise ValueError("gamma is zero exactly when nothing qualified")

    def to_json_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "epsilon0": self.epsilon0,
            "gamma_closed_form": self.gamma_closed_form,
            "eta_curve": [[e, eta] for e, eta in self.eta_curve],
            "E_intervals": list(self.e_intervals),
            "params": {
                "n": self.params.n,
                "m": self.params.m,
                "d": self.params.d,
                "r": self.params.r,
                "c": self.params.c,
                "lambdas": list(self.profile.lambdas),
            },
        }

    def eta_curve_csv_text(self) -> str:
        lines = ["epsilon,eta,product"]
        lines += [f"{e!r},{eta!r},{e * eta!r}" for e, eta in self.eta_curve]
        return "\n".join(lines) + "\n"


def rigidity_bound(p: ProblemParams, profile: LambdaProfile,
                   s: SetDescriptor, eps_grid=None) -> BoundReport:
    """Best certified lower bound on the derivative scale over a grid.

    Scans the grid, keeps resolutions whose exact covering count beats the
    baseline, solves the ratio equation on each, and takes the best
    eps * eta product.  Every qualifying resolution certifies a bound on
    its own, so a coarse grid costs sharpness, never validity.  When the
    count-(c+1) boundary is computable the scan is augmented with a point
    just inside it, which recovers the closed-form value to solver
    precision.  Sets with only estimated covering curves (m >= 2 clouds)
    are refused.
    """
    if len(profile) != p.m:
        raise ValueError("profile length must equal m")
    count_at = exact_counter(s)
    if eps_grid is None:
        grid = default_grid(s)
    else:
        grid = np.asarray(eps_grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("epsilon grid must be a non-empty 1-d array")
        if np.any(grid <= 0):
            raise ValueError("epsilon grid must be positive")

    if isinstance(s, PowerSequence):
        # the power counter is only defined below 1; above 1/2 the count is 1 anyway
        grid = grid[grid < 1.0]
        if grid.size == 0:
            raise ValueError("epsilon grid has no entries below 1 for a power sequence")

    eval_eps = set(float(e) for e in grid)
    eps0 = None
    if _cardinality(s) > p.c:
        try:
            eps0 = epsilon0(s, p)
        except ValueError:
            eps0 = None
        if eps0 is not None:
            eval_eps.add(eps0 * _BOUNDARY_SHRINK)

    # with a zero first threshold the ratio equation does not involve
    # epsilon, so the root depends only on the count and can be reused
    cache: dict | None = {} if profile.lambdas[0] == 0.0 else None

    qualifying = []
    curve = []
    for eps in sorted(eval_eps, reverse=True):
        nu = count_at(eps)
        if not in_E(p, profile, nu, eps):
            continue
        if cache is not None:
            eta = cache.get(nu)
            if eta is None:
                eta = solve_eta(p, profile, nu, eps)
                cache[nu] = eta
        else:
            eta = solve_eta(p, profile, nu, eps)
        qualifying.append(eps)
        curve.append((eps, eta))

    gamma = max((e * eta for e, eta in curve), default=0.0)
    closed = None
    if eps0 is not None and profile.lambdas[0] == 0.0:
        closed = gamma_closed_form(eps0, p)
    return BoundReport(tuple(qualifying), tuple(curve), gamma, closed, eps0, p, profile)


@dataclass(frozen=True)
class PowerVerdict:
    """Classification of a power sequence under the rigidity bound."""

    exponent: float
    verdict: str

    @property
    def excluded(self) -> bool:
        return self.verdict == EXCLUDED


def classify_power_sequence(alpha: float, p: ProblemParams) -> PowerVerdict:
    """Decay-rate dichotomy for power-law value sequences.

    The certified bound along the sequence scales like eps to the power
    1 + d/(n*(alpha-1)).  A negative exponent means the bound blows up as
    the resolution shrinks, so no map of smoothness order d can realize
    the sequence as its near-critical values; a nonnegative exponent means
    this bound alone excludes nothing.
    """
    if not (math.isfinite(alpha) and alpha < 0):
        raise ValueError("alpha must be a finite negative number")
    exponent = 1.0 + p.d / (p.n * (alpha - 1.0))
    verdict = EXCLUDED if exponent < 0 else NOT_EXCLUDED
    return PowerVerdict(exponent, verdict)


def critical_point_rigidity_reduction(zero_set_bound: float, n: int) -> float:
    """Lower bound transfer from the zero-set problem to the critical-point problem.

    A derivative-scale bound B for maps vanishing on a set transfers to
    B / sqrt(n) for maps whose differential degenerates on it.  Identity in
    one dimension.
    """
    if not (isinstance(zero_set_bound, (int, float)) and zero_set_bound >= 0):
        raise ValueError("the zero-set bound must be nonnegative")
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise ValueError("n must be a positive integer")
    return float(zero_set_bound) / math.sqrt(n)
