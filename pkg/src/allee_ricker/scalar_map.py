"""The scalar Allee-Ricker map ``f(x) = x * exp(r (1 - x)(x - a))``.

Fixed points are 0, ``a`` and 1. Zero is always attracting, ``a`` is the
Allee threshold and 1 (the carrying capacity) loses stability through a
flip bifurcation at ``r0 = 2 / (1 - a)``.

Functions here accept plain floats; the ones used in sweeps (``eval_map``,
``two_cycle_equation``, ``two_cycle_reduced``) also broadcast over numpy
arrays.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import BracketError, DegenerateDerivative, DomainError, SolveError
from .numerics import Bracket, find_root, scan_roots

NONHYPERBOLIC_TOL = 1e-9
CONVERGENCE_TOL = 1e-9
CONVERGENCE_STEPS = 10
EXTINCTION_LEVEL = 1e-15
DEFAULT_BUDGET = 100_000
CYCLE_SCAN_INTERVALS = 2048
CYCLE_SCAN_EPS = 1e-9


def allee_threshold_r0(a: float) -> float:
    """Growth rate at which the carrying capacity loses stability."""
    if not 0.0 < a < 1.0:
        raise DomainError(f"Allee threshold must satisfy 0 < a < 1, got a={a}")
    return 2.0 / (1.0 - a)


@dataclass(frozen=True)
class ScalarParams:
    r: float
    a: float

    def __post_init__(self) -> None:
        if not self.r > 0.0:
            raise DomainError(f"growth rate must satisfy r > 0, got r={self.r}")
        if not 0.0 < self.a < 1.0:
            raise DomainError(f"Allee threshold must satisfy 0 < a < 1, got a={self.a}")

    @property
    def r0(self) -> float:
        return allee_threshold_r0(self.a)


def _exponent(x, p: ScalarParams):
    return p.r * (1.0 - x) * (x - p.a)


def eval_map(x, p: ScalarParams):
    """One step of the map; exact zero at ``x = 0``.

    Python scalars go through ``math.exp`` so that single steps agree bit for
    bit with :func:`iterate` and the planar simulator.
    """
    if isinstance(x, (float, int)):
        return x * math.exp(_exponent(x, p))
    return x * np.exp(_exponent(x, p))


def iterate(x0: float, p: ScalarParams, steps: int) -> np.ndarray:
    """Orbit ``x0, f(x0), ..., f^steps(x0)``."""
    out = np.empty(steps + 1)
    x = float(x0)
    r, a = p.r, p.a
    out[0] = x
    for t in range(1, steps + 1):
        x = x * math.exp(r * (1.0 - x) * (x - a))
        out[t] = x
    return out


class Derivatives(NamedTuple):
    d1: float
    d2: float
    d3: float


def eval_derivatives(x: float, p: ScalarParams) -> Derivatives:
    """Closed-form ``f'``, ``f''`` and ``f'''``.

    ``f''' = r * P4(z) * exp(g)`` with ``z = 2x - 1 - a`` and
    ``P4(z) = -r^2 z^4 / 2 - r^2 (1+a) z^3 / 2 + 6 r z^2 + 3 r (1+a) z - 6``.
    """
    r, a = p.r, p.a
    e = math.exp(_exponent(x, p))
    w = 1.0 + a - 2.0 * x
    d1 = e * (1.0 + x * r * w)
    d2 = r * (r * x * w * w + 3.0 * w - (1.0 + a)) * e
    z = -w
    p4 = (
        -0.5 * r * r * z**4
        - 0.5 * r * r * (1.0 + a) * z**3
        + 6.0 * r * z * z
        + 3.0 * r * (1.0 + a) * z
        - 6.0
    )
    d3 = r * p4 * e
    return Derivatives(d1, d2, d3)


def mixed_partial_xr(x: float, p: ScalarParams) -> float:
    """``d^2 f / (dx dr)`` at ``(x, r)``."""
    r, a = p.r, p.a
    e = math.exp(_exponent(x, p))
    g_over_r = (1.0 - x) * (x - a)
    q_over_r = x * (1.0 + a - 2.0 * x)
    return e * (g_over_r * (1.0 + r * q_over_r) + q_over_r)


def schwarzian(x: float, p: ScalarParams, tol: float = 1e-10) -> float:
    """Schwarzian derivative ``f'''/f' - 1.5 (f''/f')^2``.

    Raises:
        DegenerateDerivative: ``|f'(x)| < tol`` (``x`` is at or next to the
            critical point).
    """
    d1, d2, d3 = eval_derivatives(x, p)
    if abs(d1) < tol:
        raise DegenerateDerivative(f"f'({x}) = {d1!r} vanishes; Schwarzian undefined")
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def critical_point_xm(p: ScalarParams) -> float:
    """Location of the maximum of ``f`` (the positive root of ``f'``)."""
    r, a = p.r, p.a
    return (1.0 + a) / 4.0 + math.sqrt((a + 1.0) ** 2 * r * r + 8.0 * r) / (4.0 * r)


def solve_xa(p: ScalarParams, tol: float = 1e-12, max_doublings: int = 64) -> float:
    """The unique ``x_a > max(1, x_m)`` with ``f(x_a) = a``.

    ``f`` is strictly decreasing past ``x_m`` and ``f(max(1, x_m)) >= 1 > a``,
    so the root is bracketed by doubling an upper bound until ``f < a``.
    """
    lo = max(1.0, critical_point_xm(p))
    hi = 2.0 * lo

    def resid(x: float) -> float:
        return x * math.exp(_exponent(x, p)) - p.a

    for _ in range(max_doublings):
        if resid(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise BracketError(f"no upper bracket for x_a below {hi} at {p}")
    return find_root(resid, Bracket.around(resid, lo, hi), tol)


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NONHYPERBOLIC = "nonhyperbolic"


def classify_multiplier(m: float, tol: float = NONHYPERBOLIC_TOL) -> Stability:
    if abs(abs(m) - 1.0) <= tol:
        return Stability.NONHYPERBOLIC
    return Stability.STABLE if abs(m) < 1.0 else Stability.UNSTABLE


@dataclass(frozen=True)
class ScalarEquilibrium:
    x: float
    multiplier: float
    stability: Stability
    note: str = ""


def classify_scalar_equilibria(p: ScalarParams) -> list[ScalarEquilibrium]:
    """Reports for the fixed points 0, ``a`` and 1, in that order.

    At ``r = r0`` the multiplier of 1 is -1; the Schwarzian there is negative,
    which is recorded in the ``note`` (the point is still asymptotically
    stable).
    """
    r, a = p.r, p.a
    out = []
    for x, m in ((0.0, math.exp(-r * a)), (a, 1.0 + a * r * (1.0 - a)), (1.0, 1.0 + r * (a - 1.0))):
        st = classify_multiplier(m)
        note = ""
        if st is Stability.NONHYPERBOLIC:
            sf = schwarzian(x, p)
            if m < 0.0:
                note = f"flip point; Schwarzian {sf!r} {'< 0: stable' if sf < 0 else '>= 0: unstable'}"
            else:
                note = "multiplier +1"
        out.append(ScalarEquilibrium(x, m, st, note))
    return out


def _expm1_ratio(g):
    """``expm1(g) / g`` with the removable singularity at 0 filled in."""
    g = np.asarray(g, dtype=float)
    small = np.abs(g) < 1e-8
    safe = np.where(small, 1.0, g)
    return np.where(small, 1.0 + 0.5 * g, np.expm1(safe) / safe)


def two_cycle_equation(x, p: ScalarParams):
    """Left side of the 2-cycle condition; zero at ``a``, at 1 and on every 2-cycle."""
    fx = eval_map(x, p)
    return (1.0 - x) * (x - p.a) + (1.0 - fx) * (fx - p.a)


def two_cycle_reduced(x, p: ScalarParams):
    """:func:`two_cycle_equation` divided by ``(1 - x)(x - a)``.

    Equal to ``2 - r (1 - a)`` at ``x = 1``, so its sign there flips exactly at
    ``r0`` and the trivial roots ``a`` and 1 never show up in a scan.
    """
    r, a = p.r, p.a
    phi = _expm1_ratio(_exponent(x, p))
    return 1.0 + (1.0 - r * x * (x - a) * phi) * (1.0 + r * x * (1.0 - x) * phi)


@dataclass(frozen=True)
class TwoCycle:
    x1: float
    x2: float
    multiplier: float

    @property
    def stability(self) -> Stability:
        return classify_multiplier(self.multiplier)


def cycle_multiplier(x1: float, x2: float, p: ScalarParams) -> float:
    """Derivative of ``f(f(x))`` along the cycle ``{x1, x2}``."""
    r, a = p.r, p.a
    e = math.exp(r * ((1.0 - x1) * (x1 - a) + (1.0 - x2) * (x2 - a)))
    return e * (1.0 + r * x1 * (1.0 - 2.0 * x1 + a)) * (1.0 + r * x2 * (1.0 - 2.0 * x2 + a))


def find_two_cycle(
    p: ScalarParams,
    n: int = CYCLE_SCAN_INTERVALS,
    eps: float = CYCLE_SCAN_EPS,
) -> TwoCycle | None:
    """The 2-cycle ``a < x1 < 1 < x2`` if one exists.

    Scans :func:`two_cycle_reduced` on ``(a + eps, 1 - eps)`` with ``n``
    subintervals. If several 2-cycles coexist the one with the largest
    ``x1`` (the branch born at ``r0``) is returned.

    Raises:
        SolveError: ``r`` is clearly past ``r0`` but no sign change was seen;
            retry with a larger ``n``.
    """
    a = p.a
    roots = scan_roots(
        lambda x: two_cycle_reduced(x, p), a + eps, 1.0 - eps, n, vectorized=True
    )
    if not roots:
        if p.r > p.r0 + 1e-6:
            raise SolveError(f"no 2-cycle found at {p} although r > r0; refine the scan")
        return None
    x1 = roots[-1]
    x2 = float(eval_map(x1, p))
    return TwoCycle(x1, x2, cycle_multiplier(x1, x2, p))


class Attractor(enum.Enum):
    ZERO = "zero"
    ONE = "one"
    CYCLE = "cycle"
    OTHER = "other"


class Source(enum.Enum):
    ANALYTIC = "analytic"
    SIMULATED = "simulated"


@dataclass(frozen=True)
class BasinLabel:
    attractor: Attractor
    source: Source
    period: int | None = None
    budget_exhausted: bool = False


_CODES = {0: Attractor.ZERO, 1: Attractor.ONE, 2: Attractor.CYCLE, 3: Attractor.OTHER}
ZERO, ONE, CYCLE, OTHER = 0, 1, 2, 3


def analytic_basins(x0, p: ScalarParams) -> np.ndarray:
    """Vectorised basin codes from the closed-form basins (needs ``r < r0``)."""
    if not p.r < p.r0:
        raise DomainError(f"analytic basins need r < r0 = {p.r0}, got r = {p.r}")
    x0 = np.asarray(x0, dtype=float)
    xa = solve_xa(p)
    codes = np.full(x0.shape, OTHER, dtype=np.int8)
    codes[(x0 >= 0) & (x0 < p.a)] = ZERO
    codes[x0 > xa] = ZERO
    codes[(x0 > p.a) & (x0 < xa)] = ONE
    return codes


def simulate_basins(
    x0,
    p: ScalarParams,
    budget: int = DEFAULT_BUDGET,
    k_max: int = 64,
    cycle_tol: float = 1e-9,
    check_every: int = 256,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Iterate many seeds at once and label where each one ends up.

    A seed is labelled ZERO once it drops below ``1e-15``, ONE once it stays
    within ``1e-9`` of 1 for 10 consecutive steps, CYCLE when the last
    ``2 k_max`` iterates repeat with period ``2 <= k <= k_max`` and OTHER for a
    fixed point other than 0 or 1 (only ``a`` itself) or an exhausted budget.

    Returns:
        ``(codes, periods, exhausted)`` arrays aligned with ``x0``; ``periods``
        is 0 where no cycle was detected.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    n = x0.size
    codes = np.full(n, OTHER, dtype=np.int8)
    periods = np.zeros(n, dtype=np.int64)
    exhausted = np.zeros(n, dtype=bool)

    idx = np.arange(n)
    x = x0.copy()
    streak = np.zeros(n, dtype=np.int64)
    depth = 2 * k_max
    hist = np.empty((depth, n))
    r, a = p.r, p.a

    for t in range(1, budget + 1):
        x = x * np.exp(r * (1.0 - x) * (x - a))
        hist[t % depth] = x
        near = np.abs(x - 1.0) < CONVERGENCE_TOL
        streak = np.where(near, streak + 1, 0)
        zero = x < EXTINCTION_LEVEL
        one = streak >= CONVERGENCE_STEPS
        done = zero | one
        if t >= depth and t % check_every == 0:
            order = (np.arange(t + 1, t + 1 + depth)) % depth
            ordered = hist[order]
            found = np.zeros(x.size, dtype=np.int64)
            for k in range(k_max, 0, -1):
                match = np.max(np.abs(ordered[k:] - ordered[:-k]), axis=0) < cycle_tol
                found = np.where(match, k, found)
            cyc = (found > 0) & ~done
            sel = idx[cyc]
            codes[sel] = np.where(found[cyc] >= 2, CYCLE, OTHER)
            periods[sel] = found[cyc]
            done = done | cyc
        if done.any():
            codes[idx[zero]] = ZERO
            codes[idx[one & ~zero]] = ONE
            keep = ~done
            idx, x, streak, hist = idx[keep], x[keep], streak[keep], hist[:, keep]
            if idx.size == 0:
                break
    exhausted[idx] = True
    return codes, periods, exhausted


def basin_of(
    x0: float,
    p: ScalarParams,
    mode: Source = Source.ANALYTIC,
    budget: int = DEFAULT_BUDGET,
) -> BasinLabel:
    """Label the attractor reached from ``x0``.

    Analytic mode applies ``B(0) = [0, a) U (x_a, inf)``, ``B(1) = (a, x_a)``
    and labels the two boundary points OTHER; it requires ``r < r0``.
    Simulated mode iterates the map (see :func:`simulate_basins`); an
    exhausted budget is reported through ``budget_exhausted``.
    """
    if x0 < 0:
        raise DomainError(f"initial state must be nonnegative, got {x0}")
    if mode is Source.ANALYTIC:
        code = int(analytic_basins(np.array([x0]), p)[0])
        return BasinLabel(_CODES[code], Source.ANALYTIC)
    codes, periods, exhausted = simulate_basins(np.array([x0]), p, budget=budget)
    period = int(periods[0]) or None
    return BasinLabel(_CODES[int(codes[0])], Source.SIMULATED, period, bool(exhausted[0]))


@dataclass
class SweepTable:
    """Attractor samples recorded along a parameter grid.

    ``samples[i]`` holds the recorded iterates for ``values[i]``; for planar
    systems ``samples`` has a trailing axis of length 2.
    """

    parameter: str
    values: np.ndarray
    samples: np.ndarray
    seed: str
    transient: int
    record: int
    fixed: dict[str, float] = field(default_factory=dict)

    def distinct_counts(self, tol: float = 1e-6) -> np.ndarray:
        """Number of distinct recorded values per grid point (first component)."""
        first = self.samples if self.samples.ndim == 2 else self.samples[..., 0]
        return np.array([count_distinct(row, tol) for row in first])


def count_distinct(values, tol: float) -> int:
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        return 0
    return int(1 + np.count_nonzero(np.diff(v) > tol))


def bifurcation_sweep(
    a: float,
    r_lo: float,
    r_hi: float,
    steps: int,
    transient: int = 2000,
    record: int = 128,
    seed: float | None = None,
) -> SweepTable:
    """Long-run samples of the map on a uniform ``r`` grid.

    Every grid point starts from the same seed, ``(1 + a)/2 + 0.01`` unless
    given, so output is bit-reproducible; coexisting attractors reached only
    from other seeds are not shown. Orbits that fall below ``1e-15`` are
    recorded as 0.
    """
    if not 0.0 < r_lo < r_hi:
        raise DomainError(f"need 0 < r_lo < r_hi, got r_lo={r_lo}, r_hi={r_hi}")
    if steps < 2:
        raise DomainError(f"need at least 2 grid points, got steps={steps}")
    if transient < 1 or record < 1:
        raise DomainError("transient and record must be positive")
    allee_threshold_r0(a)
    x_seed = (1.0 + a) / 2.0 + 0.01 if seed is None else float(seed)
    rs = np.linspace(r_lo, r_hi, steps)
    x = np.full(steps, x_seed)

    def step(x):
        x = x * np.exp(rs * (1.0 - x) * (x - a))
        return np.where(x < EXTINCTION_LEVEL, 0.0, x)

    for _ in range(transient):
        x = step(x)
    out = np.empty((steps, record))
    for j in range(record):
        x = step(x)
        out[:, j] = x
    return SweepTable("r", rs, out, f"x0={x_seed!r}", transient, record, {"a": a})


@dataclass(frozen=True)
class PeriodDoublingReport:
    a: float
    r0: float
    mixed_partial: float
    cubic_coefficient: float

    @property
    def mixed_nonzero(self) -> bool:
        return self.mixed_partial != 0.0

    @property
    def cubic_nonzero(self) -> bool:
        return self.cubic_coefficient != 0.0


def verify_period_doubling_at_r0(a: float) -> PeriodDoublingReport:
    """Nondegeneracy quantities of the flip at ``(x, r) = (1, r0)``.

    ``mixed_partial`` is ``d2f/dxdr``; ``cubic_coefficient`` is
    ``(f'')^2 / 2 + f''' / 3``. Closed forms: ``a - 1`` and
    ``(2 r0 / 3)(3 r0 + 4 - a)``.
    """
    r0 = allee_threshold_r0(a)
    p = ScalarParams(r0, a)
    _, d2, d3 = eval_derivatives(1.0, p)
    return PeriodDoublingReport(a, r0, mixed_partial_xr(1.0, p), 0.5 * d2 * d2 + d3 / 3.0)
