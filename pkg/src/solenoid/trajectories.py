"""Truncated points of product solenoids, the solenoid metric, and density search.

This is the only floating-point part of the package.  Points computed from
rational data stay exact; otherwise each point carries an ``error_bound``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExhausted, NotIrrational, ShapeMismatch, SizeMismatch
from .flows import FrequencyVector, is_irrational
from .products import ProductSolenoid

_EPS = 2.0**-52


@dataclass(frozen=True)
class TruncatedPoint:
    """Levels 1..J of a point of an n-solenoid; each level is a point of T^n in [0,1)^n."""

    levels: tuple[tuple, ...]
    error_bound: float = 0.0

    def __post_init__(self):
        levels = tuple(tuple(lv) for lv in self.levels)
        if not levels or not levels[0]:
            raise ShapeMismatch("a truncated point needs at least one level and coordinate")
        if any(len(lv) != len(levels[0]) for lv in levels):
            raise ShapeMismatch("levels differ in dimension")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def identity(cls, depth: int, dim: int):
        return cls(tuple((Fraction(0),) * dim for _ in range(depth)))

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def dim(self) -> int:
        return len(self.levels[0])

    @property
    def exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for lv in self.levels for x in lv)

    def is_consistent(self, P: ProductSolenoid, tol: float = 1e-9) -> bool:
        """x^j == M_j x^(j+1) mod 1 at every computed level."""
        mats = P.terms(self.depth)
        for j in range(self.depth - 1):
            for i in range(self.dim):
                d = circle_distance(self.levels[j][i], mats[j][i] * self.levels[j + 1][i])
                if (d != 0) if self.exact else (d > tol + self.error_bound * abs(mats[j][i])):
                    return False
        return True

    def to_json(self):
        if self.exact:
            return {"levels": [[str(Fraction(x)) for x in lv] for lv in self.levels]}
        return {"levels": [[float(x) for x in lv] for lv in self.levels], "error_bound": self.error_bound}


def circle_distance(a, b):
    """Length of the shorter arc between a and b on R/Z (so at most 1/2)."""
    d = (a - b) % 1
    return min(d, 1 - d)


def _frequencies(w, values):
    """Exact rationals when possible, floats otherwise."""
    if isinstance(w, FrequencyVector):
        if w.is_rational():
            return [w.coords[i, 0] for i in range(w.n)], True
        return w.numeric(values), False
    vals = list(w)
    exact = all(isinstance(x, (int, Fraction)) for x in vals)
    return ([Fraction(x) for x in vals] if exact else [float(x) for x in vals]), exact


def evaluate_pi(P: ProductSolenoid, t, w, J: int, values=None) -> TruncatedPoint:
    """pi(t omega) truncated to levels 1..J.

    Level j, coordinate i is frac(t omega_i / (p_1^i ... p_{j-1}^i)).
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    mats = P.terms(J)
    omega, exact = _frequencies(w, values)
    if len(omega) != P.n:
        raise SizeMismatch("frequency length differs from the product dimension")
    exact = exact and isinstance(t, (int, Fraction))
    if not exact:
        t = float(t)
        omega = [float(x) for x in omega]
    levels = []
    divisors = [1] * P.n
    worst = 0.0
    for j in range(J):
        if j:
            divisors = [d * m for d, m in zip(divisors, mats[j - 1])]
        if exact:
            levels.append(tuple((t * o / d) % 1 for o, d in zip(omega, divisors)))
        else:
            row = []
            for o, d in zip(omega, divisors):
                x = t * o / d
                row.append(x % 1.0)
                worst = max(worst, 4 * _EPS * (abs(x) + 1))
            levels.append(tuple(row))
    return TruncatedPoint(tuple(levels), 0.0 if exact else worst)


@dataclass(frozen=True)
class Distance:
    value: float | Fraction  # the truncated sum
    rounding: float  # float error in the truncated sum
    tail: float  # bound on the omitted levels

    @property
    def error_bound(self) -> float:
        return self.rounding + self.tail

    def __float__(self):
        return float(self.value)


def metric(x: TruncatedPoint, y: TruncatedPoint) -> Distance:
    """sum_j 2^-j sum_i 2^-i ||x_i^j - y_i^j|| over the computed levels."""
    if x.depth != y.depth or x.dim != y.dim:
        raise ShapeMismatch(f"{x.depth}x{x.dim} vs {y.depth}x{y.dim}")
    exact = x.exact and y.exact
    total = Fraction(0) if exact else 0.0
    for j, (u, v) in enumerate(zip(x.levels, y.levels), start=1):
        for i, (a, b) in enumerate(zip(u, v), start=1):
            if exact:
                total += Fraction(1, 2 ** (i + j)) * circle_distance(a, b)
            else:
                total += 2.0 ** -(i + j) * circle_distance(float(a), float(b))
    return Distance(total, x.error_bound + y.error_bound, 2.0**-x.depth)


# --- density search ---------------------------------------------------------

@dataclass(frozen=True)
class DensityReport:
    target: TruncatedPoint
    epsilon: float
    found_t: float
    achieved_distance: float
    search_effort: int
    error_bound: float
    samples: tuple[tuple[float, float], ...] = field(default=(), repr=False)

    def to_json(self):
        return {
            "epsilon": self.epsilon,
            "found_t": self.found_t,
            "achieved_distance": self.achieved_distance,
            "error_bound": self.error_bound,
            "search_effort": self.search_effort,
        }


def write_samples_csv(report: DensityReport, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["t", "distance"])
        out.writerows(report.samples)


def _convergent_bound(alpha: float, eta: float) -> int | None:
    """Number of multiples of alpha that come within eta of every point of R/Z.

    With convergents p_k/q_k, the points k alpha (0 <= k < q_n + q_(n-1)) cut
    the circle into gaps of lengths ||q_(n-1) alpha|| and ||q_n alpha|| (and
    their sum), so once ||q_(n-1) alpha|| < eta every point is within eta of
    one of them.
    """
    x = Fraction(alpha) % 1
    if x == 0:
        return None
    q_prev, q = 0, 1  # q_(-1), q_0
    a0 = math.floor(x)
    rest = x - a0
    while True:
        if q_prev and abs(q_prev * alpha - round(q_prev * alpha)) < eta:
            return q + q_prev
        if rest == 0:
            return None
        x = 1 / rest
        a = math.floor(x)
        rest = x - a
        q_prev, q = q, a * q + q_prev
        if q > 10**15:
            return None


def density_search(
    P: ProductSolenoid,
    w: FrequencyVector,
    target: TruncatedPoint,
    eps: float,
    budget: int = 10**7,
    values=None,
    chunk: int = 1 << 18,
) -> DensityReport:
    """Find t >= 0 with metric(pi(t omega), target) < eps.

    The target is matched at one level L (coarse enough that deeper levels
    cost at most eps/2).  The first coordinate is hit exactly by choosing
    t = (y_1 + m) / theta_1, which turns the remaining coordinates into the
    inhomogeneous approximation problem ||m alpha_i - beta_i|| < eta_i over
    integers m, scanned in order so the smallest such t is returned.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    irr = is_irrational(w)
    if not irr:
        raise NotIrrational(f"frequencies are rationally dependent: {irr.witness}")
    n = w.n
    if n != P.n or target.dim != n:
        raise ShapeMismatch("target, frequency and product dimensions differ")
    J = target.depth
    samples: list[tuple[float, float]] = []

    def check(t):
        d = metric(evaluate_pi(P, t, w, J, values), target)
        return float(d.value), d

    if all(x == 0 for lv in target.levels for x in lv):
        return DensityReport(target, eps, 0.0, 0.0, 0, 0.0, ((0.0, 0.0),))

    L = min(J, max(1, math.ceil(math.log2(2 / eps))))
    budget_eps = eps / 2.2 if L < J else eps / 1.1
    mats = P.terms(L)
    omega = w.numeric(values)
    theta, weights = [], []
    for i in range(n):
        prefix = [abs(mats[l][i]) for l in range(L - 1)]
        theta.append(omega[i] / math.prod(mats[l][i] for l in range(L - 1)))
        # an error e at level L grows to e * (p_j ... p_(L-1)) at level j
        weights.append(sum(2.0 ** -(j + i + 1) * math.prod(prefix[j:]) for j in range(L)))
    eta = [budget_eps / (n * wi) for wi in weights]
    y = [float(c) for c in target.levels[L - 1]]

    s = 1 if theta[0] > 0 else -1
    m0 = 1 if (s < 0 and y[0] > 0) else 0

    def t_of(m):
        return (y[0] + s * m) / theta[0]

    if n == 1:
        t = t_of(m0)
        dist, d = check(t)
        samples.append((t, dist))
        if dist < eps:
            return DensityReport(target, eps, t, dist, 1, d.rounding, tuple(samples))
        raise BudgetExhausted("single-coordinate match missed the target", 1, (t, dist))

    alpha = np.array([s * theta[i] / theta[0] for i in range(1, n)])
    beta = np.array([y[i] - y[0] * theta[i] / theta[0] for i in range(1, n)])
    etas = np.array(eta[1:])
    limit = budget
    if n == 2:
        bound = _convergent_bound(float(alpha[0]), float(etas[0]))
        if bound is not None:
            limit = min(budget, m0 + bound + 1)
    best = (math.inf, None)
    effort = 0
    start = m0
    while start < m0 + limit:
        stop = min(start + chunk, m0 + limit)
        m = np.arange(start, stop, dtype=np.float64)[:, None]
        err = np.abs((m * alpha - beta + 0.5) % 1.0 - 0.5) / etas
        score = err.max(axis=1)
        effort += stop - start
        k = int(score.argmin())
        if score[k] < best[0]:
            t = t_of(start + k)
            best = (float(score[k]), t)
            samples.append((t, check(t)[0]))
        for k in np.nonzero(score < 1.0)[0][:16]:
            t = t_of(start + int(k))
            dist, d = check(t)
            if dist < eps:
                samples.append((t, dist))
                return DensityReport(target, eps, t, dist, effort, d.rounding, tuple(samples))
        start = stop
    best_t = best[1]
    raise BudgetExhausted(
        f"no t found after scanning {effort} candidates",
        effort,
        (best_t, check(best_t)[0]) if best_t is not None else None,
    )
