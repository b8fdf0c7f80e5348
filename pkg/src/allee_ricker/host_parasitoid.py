"""Rescaled Ricker host-parasitoid system with an Allee effect in the host.

    x' = x exp(r (1 - x)(x - a) - y)
    y' = beta x (1 - exp(-y))

Covers simulation, the analytic extinction regions, boundary and interior
equilibria, the determinant/trace stability functions ``D`` and ``T``, the
Neimark-Sacker locus ``beta_c``, the quadratic stable manifold of the Allee
equilibrium ``E1 = (a, 0)`` and the global-extinction certificate.
"""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, NonUnique, NotFound, SolveError
from .numerics import Bracket, EigenPair, detect_cycle, eig2, find_root, scan_roots
from .scalar_map import (
    EXTINCTION_LEVEL,
    ScalarParams,
    SweepTable,
    allee_threshold_r0,
    critical_point_xm,
    solve_xa,
)

SCAN_INTERVALS = 4096
MAX_SCAN_INTERVALS = 65536
THRESHOLD_BAND = 1e-6
MODULUS_TOL = 1e-9
H_SERIES_CUTOFF = 1e-5


@dataclass(frozen=True)
class SystemParams:
    r: float
    a: float
    beta: float

    def __post_init__(self) -> None:
        if not self.r > 0.0:
            raise DomainError(f"growth rate must satisfy r > 0, got r={self.r}")
        if not 0.0 < self.a < 1.0:
            raise DomainError(f"Allee threshold must satisfy 0 < a < 1, got a={self.a}")
        if not self.beta > 0.0:
            raise DomainError(f"conversion rate must satisfy beta > 0, got beta={self.beta}")

    @property
    def r0(self) -> float:
        return allee_threshold_r0(self.a)

    @property
    def scalar(self) -> ScalarParams:
        return ScalarParams(self.r, self.a)


@dataclass(frozen=True)
class RawParams:
    """Dimensional parameters before rescaling."""

    r_raw: float
    K: float
    a_raw: float
    b: float
    beta_raw: float

    def __post_init__(self) -> None:
        for name in ("r_raw", "K", "a_raw", "b", "beta_raw"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.a_raw < self.K:
            raise DomainError(
                f"Allee threshold must lie below carrying capacity: a_raw={self.a_raw}, K={self.K}"
            )


class State(NamedTuple):
    x: float
    y: float


def rescale(raw: RawParams) -> SystemParams:
    """Dimensionless parameters ``(r K, a / K, beta b K)``."""
    return SystemParams(raw.r_raw * raw.K, raw.a_raw / raw.K, raw.beta_raw * raw.b * raw.K)


def rescale_state(s: State, raw: RawParams) -> State:
    return State(s.x / raw.K, raw.b * s.y)


def unscale_state(s: State, raw: RawParams) -> State:
    return State(s.x * raw.K, s.y / raw.b)


def eval_raw_system(s: State, raw: RawParams) -> State:
    """One step of the dimensional model."""
    x, y = s
    by = raw.b * y
    x1 = x * math.exp(raw.r_raw * (1.0 - x / raw.K) * (x - raw.a_raw) - by)
    y1 = raw.beta_raw * x * -math.expm1(-by)
    return State(x1, y1)


def eval_system(s: State, p: SystemParams) -> State:
    x, y = s
    x1 = x * math.exp(p.r * (1.0 - x) * (x - p.a) - y)
    y1 = p.beta * x * -math.expm1(-y)
    return State(x1, y1)


class ExtinctionReason(enum.Enum):
    GAMMA = "gamma"
    DELTA = "delta"
    OVERKILL = "overkill"


class ExtinctionVerdict(NamedTuple):
    doomed: bool
    reason: ExtinctionReason | None = None


def overkill_threshold(x: float, p: SystemParams) -> float:
    """Smallest ``y`` that pushes a host at ``x`` to ``x' <= a`` in one step."""
    return math.log(x / p.a) + p.r * (1.0 - x) * (x - p.a)


def in_extinction_region(s: State, p: SystemParams, xa: float | None = None) -> ExtinctionVerdict:
    """Whether ``s`` lies in a region known to converge to ``(0, 0)``.

    GAMMA: ``x <= a`` except ``(a, 0)``; DELTA: ``x >= x_a`` except
    ``(x_a, 0)``; OVERKILL: ``a < x < 1`` with parasitoids numerous enough
    that the next host density is at most ``a``.
    """
    x, y = s
    if x < 0 or y < 0:
        raise DomainError(f"state must be nonnegative, got {s}")
    a = p.a
    if x <= a:
        if x == a and y == 0.0:
            return ExtinctionVerdict(False)
        return ExtinctionVerdict(True, ExtinctionReason.GAMMA)
    if xa is None:
        xa = solve_xa(p.scalar)
    if x >= xa:
        if x == xa and y == 0.0:
            return ExtinctionVerdict(False)
        return ExtinctionVerdict(True, ExtinctionReason.DELTA)
    if x < 1.0 and y >= overkill_threshold(x, p):
        return ExtinctionVerdict(True, ExtinctionReason.OVERKILL)
    return ExtinctionVerdict(False)


class StabilityClass(enum.Enum):
    STABLE = "stable"
    REPELLER = "repeller"
    SADDLE = "saddle"
    NONHYPERBOLIC = "nonhyperbolic"


def classify_eigen(eig: EigenPair, tol: float = MODULUS_TOL) -> StabilityClass:
    m1, m2 = eig.moduli
    if abs(m1 - 1.0) <= tol or abs(m2 - 1.0) <= tol:
        return StabilityClass.NONHYPERBOLIC
    inside = (m1 < 1.0) + (m2 < 1.0)
    return (StabilityClass.REPELLER, StabilityClass.SADDLE, StabilityClass.STABLE)[inside]


@dataclass(frozen=True)
class EquilibriumReport:
    name: str
    x: float
    y: float
    jacobian: tuple[tuple[float, float], tuple[float, float]]
    eigen: EigenPair
    stability: StabilityClass


def boundary_equilibria_report(p: SystemParams) -> list[EquilibriumReport]:
    """``E0 = (0, 0)``, ``E1 = (a, 0)`` and ``E2 = (1, 0)`` with their
    (upper triangular) Jacobians."""
    r, a, b = p.r, p.a, p.beta
    mats = {
        "E0": (0.0, ((math.exp(-a * r), 0.0), (0.0, 0.0))),
        "E1": (a, ((1.0 + a * r * (1.0 - a), -a), (0.0, b * a))),
        "E2": (1.0, ((1.0 - r * (1.0 - a), -1.0), (0.0, b))),
    }
    out = []
    for name, (x, J) in mats.items():
        # triangular: the eigenvalues are the diagonal entries
        d1, d2 = J[0][0], J[1][1]
        eig = EigenPair(*sorted((complex(d1), complex(d2)), key=abs, reverse=True), (d1 - d2) ** 2)
        out.append(EquilibriumReport(name, x, 0.0, J, eig, classify_eigen(eig)))
    return out


def isoclines(p: SystemParams) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """The host isocline ``y = g(x)`` and the parasitoid isocline ``x = h(y)``."""
    r, a, b = p.r, p.a, p.beta

    def g(x: float) -> float:
        return r * (1.0 - x) * (x - a)

    def h(y: float) -> float:
        if abs(y) < H_SERIES_CUTOFF:
            return (1.0 + y / 2.0 + y * y / 12.0) / b
        return y / (b * -math.expm1(-y))

    return g, h


def interior_residual(x, p: SystemParams):
    """``beta x (1 - exp(-g(x))) - g(x)``; zero at interior equilibria."""
    g = p.r * (1.0 - x) * (x - p.a)
    return p.beta * x * -np.expm1(-g) - g


def _escape_ratio(y):
    """``(1 - exp(-y)) / y``, equal to 1 at ``y = 0``."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < 1e-8
    safe = np.where(small, 1.0, y)
    return np.where(small, 1.0 - 0.5 * y, -np.expm1(-safe) / safe)


def interior_residual_reduced(x, p: SystemParams):
    """:func:`interior_residual` divided by ``g(x)``; same roots on ``(a, 1)``."""
    g = p.r * (1.0 - x) * (x - p.a)
    return p.beta * x * _escape_ratio(g) - 1.0


class JacobianData(NamedTuple):
    matrix: tuple[tuple[float, float], tuple[float, float]]
    trace: float
    det: float
    eigen: EigenPair


def _interior_jacobian(x: float, y: float, p: SystemParams) -> JacobianData:
    q = 1.0 + x * p.r * (1.0 - 2.0 * x + p.a)
    s = p.beta * x * math.exp(-y)
    trace = q + s
    det = s * q + y
    return JacobianData(((q, -x), (y / x, s)), trace, det, eig2(trace, det))


@dataclass(frozen=True)
class InteriorEquilibrium:
    x: float
    y: float
    trace: float
    det: float
    eigen: EigenPair
    stability: StabilityClass

    @property
    def state(self) -> State:
        return State(self.x, self.y)


def interior_jacobian(eq: InteriorEquilibrium | State, p: SystemParams) -> JacobianData:
    """Jacobian, trace, determinant and eigenvalues at an interior equilibrium."""
    return _interior_jacobian(eq.x, eq.y, p)


def find_interior_equilibria(
    p: SystemParams, n: int = SCAN_INTERVALS, max_n: int = MAX_SCAN_INTERVALS
) -> list[InteriorEquilibrium]:
    """All interior equilibria, sorted by ``x``.

    Roots of the reduced residual are scanned on ``[max(a, 1/beta), 1]``; no
    root can lie below ``1/beta`` and the reduced residual is nonzero at both
    ends (``beta - 1`` at 1, ``beta a - 1`` at ``a``, negative at ``1/beta``).
    The grid doubles from ``n`` up to ``max_n`` whenever more than three sign
    changes appear.

    Raises:
        SolveError: more than three roots even at ``max_n`` subintervals.
    """
    if p.beta <= 1.0:
        return []
    lo, hi = max(p.a, 1.0 / p.beta), 1.0

    def f(x):
        return interior_residual_reduced(x, p)

    while True:
        roots = scan_roots(f, lo, hi, n, vectorized=True)
        if len(roots) <= 3:
            break
        if n >= max_n:
            raise SolveError(f"{len(roots)} interior equilibria at {p}; at most 3 are possible")
        n *= 2

    out = []
    for x in roots:
        y = p.r * (1.0 - x) * (x - p.a)
        if not y > 0.0:
            continue
        jac = _interior_jacobian(x, y, p)
        out.append(InteriorEquilibrium(x, y, jac.trace, jac.det, jac.eigen, classify_eigen(jac.eigen)))
    return out


def _stability_functions(x, p: SystemParams):
    r, a = p.r, p.a
    y = r * (1.0 - x) * (x - a)
    q = r * x * (1.0 + a - 2.0 * x)
    w = _y_over_expm1(y)
    return (1.0 + q) * w + y, (2.0 + q) * (1.0 + w) + y


def _y_over_expm1(y):
    """``y / (exp(y) - 1)``, equal to 1 at ``y = 0``."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < 1e-8
    safe = np.where(small, 1.0, y)
    return np.where(small, 1.0 - 0.5 * y, safe / np.expm1(safe))


def stability_functions(x: float, p: SystemParams) -> tuple[float, float]:
    """``D(x)`` (determinant) and ``T(x)`` (trace + 1 + det) along the host isocline.

    Both are the Jacobian quantities of the interior equilibrium that would
    sit at host density ``x``, expressed without ``beta``.
    """
    if not p.a < x < 1.0:
        raise DomainError(f"stability functions need a < x < 1, got x={x} (a={p.a})")
    d, t = _stability_functions(x, p)
    return float(d), float(t)


class Thresholds(NamedTuple):
    x_d: float | None
    x_t: float | None


def solve_stability_thresholds(p: SystemParams) -> Thresholds:
    """Where ``D = 1`` and ``T = 0`` on ``[x_hat, 1]``, ``x_hat = (1 + a)/2``.

    ``D`` and ``T`` are strictly decreasing there, so each crossing is unique
    when it exists. ``D(1) = 1 - r (1 - a) < 1`` always; ``T(1) < 0`` only
    when ``r > r0``.
    """
    x_hat = 0.5 * (1.0 + p.a)

    def d_minus_one(x: float) -> float:
        return float(_stability_functions(x, p)[0]) - 1.0

    def t(x: float) -> float:
        return float(_stability_functions(x, p)[1])

    found = []
    for f in (d_minus_one, t):
        f_lo, f_hi = f(x_hat), f(1.0)
        if f_lo > 0.0 > f_hi:
            found.append(find_root(f, Bracket(x_hat, 1.0, f_lo, f_hi)))
        else:
            found.append(None)
    return Thresholds(*found)


@dataclass(frozen=True)
class InteriorClassification:
    """Stability of an interior equilibrium from two independent routes.

    ``eigen_class`` comes from the eigenvalue moduli; ``regime`` names the
    threshold regime and ``expected`` the classes that regime allows. Within
    ``THRESHOLD_BAND`` of a threshold ``stability`` is NONHYPERBOLIC.
    """

    stability: StabilityClass
    eigen_class: StabilityClass
    regime: str
    expected: frozenset
    near_threshold: bool

    @property
    def agrees(self) -> bool:
        return self.eigen_class in self.expected


def classify_interior(
    eq: InteriorEquilibrium, p: SystemParams, band: float = THRESHOLD_BAND
) -> InteriorClassification:
    S, R, SD = StabilityClass.STABLE, StabilityClass.REPELLER, StabilityClass.SADDLE
    x = eq.x
    x_hat = 0.5 * (1.0 + p.a)
    x_d, x_t = solve_stability_thresholds(p)
    eigen_class = classify_eigen(eq.eigen)

    if p.r <= p.r0:
        marks = [x_d]
        if x_d is None or x > x_d:
            regime, expected = "r<r0, x>x_D: stable", {S}
        else:
            regime, expected = "r<r0, x<x_D: repeller", {R}
    else:
        marks = [x_d, x_t, x_hat]
        if x < x_hat:
            regime, expected = "r>r0, x<x_hat: unstable (det>1)", {R, SD}
        elif x_t is not None and x > x_t:
            regime, expected = "r>r0, x>x_T: saddle", {SD}
        elif x_d is not None and x > x_d:
            regime, expected = "r>r0, x_D<x<x_T: stable", {S}
        else:
            regime, expected = "r>r0, x_hat<=x<min(x_D,x_T): repeller", {R}

    near = any(m is not None and abs(x - m) <= band for m in marks)
    stability = StabilityClass.NONHYPERBOLIC if near else eigen_class
    return InteriorClassification(stability, eigen_class, regime, frozenset(expected), near)


@dataclass(frozen=True)
class BetaC:
    beta_c: float
    tolerance: float
    x_equilibrium: float
    x_d: float


def find_beta_c(a: float, r: float, tol: float = 1e-6) -> BetaC:
    """Conversion rate at which the interior equilibrium crosses ``D = 1``.

    Bisection in ``beta`` on ``x(beta) - x_D`` over ``(1, 1/a)``, where
    ``x(beta)`` is the host density of the interior equilibrium. ``x(beta)``
    must decrease with ``beta``; every probe is checked against the ones
    already taken.

    Raises:
        NonUnique: several interior equilibria at a probed ``beta``.
        NotFound: no crossing in ``(1, 1/a)``.
    """
    x_d = solve_stability_thresholds(SystemParams(r, a, 2.0)).x_d
    if x_d is None:
        raise NotFound(f"D(x) = 1 has no root on [x_hat, 1] at a={a}, r={r}")
    probes: list[tuple[float, float]] = []

    def x_of(beta: float) -> float:
        eqs = find_interior_equilibria(SystemParams(r, a, beta))
        if len(eqs) > 1:
            raise NonUnique(f"{len(eqs)} interior equilibria at beta={beta} (a={a}, r={r})")
        if not eqs:
            raise NotFound(f"no interior equilibrium at beta={beta} (a={a}, r={r})")
        x = eqs[0].x
        for b_old, x_old in probes:
            if (b_old - beta) * (x_old - x) > 0.0:
                raise SolveError(f"x(beta) not decreasing between beta={b_old} and beta={beta}")
        probes.append((beta, x))
        return x

    lo, hi = 1.0 + 1e-9, 1.0 / a - 1e-9
    q_lo, q_hi = x_of(lo) - x_d, x_of(hi) - x_d
    if not q_lo > 0.0 > q_hi:
        raise NotFound(f"no D = 1 crossing for beta in (1, 1/a) at a={a}, r={r}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if x_of(mid) - x_d > 0.0:
            lo = mid
        else:
            hi = mid
    beta_c = 0.5 * (lo + hi)
    return BetaC(beta_c, hi - lo, x_of(beta_c), x_d)


@dataclass(frozen=True)
class ManifoldExpansion:
    """Quadratic expansion ``v = c1 u + c2 u^2`` of the stable manifold of ``E1``.

    ``u = x - a``, ``v = y``; local only, truncation O(u^3). ``c2`` is the
    classical closed form ``(1 + a r (1 - a)) / a^2``; ``c2_invariant`` is the
    coefficient that makes the curve invariant under the map to second order.
    The two differ in general; only the tangent ``c1`` is shared.
    """

    a: float
    beta: float
    c1: float
    c2: float
    c2_invariant: float

    def gamma(self, x):
        """The closed-form quadratic in the original coordinates."""
        ba = self.beta * self.a
        m = self.c2 * self.a * self.a
        return ba - (ba + m) / self.a * x + self.c2 * x * x

    def gamma_shifted(self, u, invariant: bool = True):
        c2 = self.c2_invariant if invariant else self.c2
        return self.c1 * u + c2 * u * u


def stable_manifold_coeffs(p: SystemParams) -> ManifoldExpansion:
    """Coefficients of the stable manifold of the saddle ``E1 = (a, 0)``.

    Raises:
        DomainError: ``beta a >= 1`` (``E1`` is not a saddle).
    """
    r, a, b = p.r, p.a, p.beta
    ba = b * a
    if ba >= 1.0:
        raise DomainError(f"E1 is a saddle only for beta*a < 1, got beta*a={ba}")
    m = 1.0 + a * r * (1.0 - a)
    c1 = (m - ba) / a
    c2 = m / (a * a)
    # second-order terms of the u-map along v = c1 u
    quad = r * (1.0 - a) - c1 - a * r + 0.5 * a * (r * r * (1.0 - a) ** 2 - 2.0 * r * (1.0 - a) * c1 + c1 * c1)
    c2_inv = c1 * (quad - b + 0.5 * ba * c1) / (m - ba * ba)
    return ManifoldExpansion(a, b, c1, c2, c2_inv)


@dataclass(frozen=True)
class ExtinctionCertificate:
    holds: bool
    zbar: float | None
    zbar_exceeds_half_gap: bool | None


def global_extinction_check(p: SystemParams) -> ExtinctionCertificate:
    """Sufficient condition for global extinction from any state with ``y > 0``.

    ``holds`` is ``beta a > exp((1 - a)/2)`` and ``r < r0``. ``zbar`` is the
    positive fixed point of ``z -> beta a (1 - exp(-z))`` (only when
    ``beta a > 1``); whenever the certificate holds it must exceed
    ``(1 - a)/2``.
    """
    ba = p.beta * p.a
    holds = ba > math.exp(0.5 * (1.0 - p.a)) and p.r < p.r0
    if ba <= 1.0:
        return ExtinctionCertificate(holds, None, None)

    def s(z: float) -> float:
        return ba * float(_escape_ratio(z)) - 1.0

    zbar = find_root(s, Bracket(0.0, ba, ba - 1.0, s(ba)))
    return ExtinctionCertificate(holds, zbar, zbar > 0.5 * (1.0 - p.a))


class Verdict(enum.Enum):
    CONVERGED = "converged"
    CYCLE = "cycle"
    EXTINCT = "extinct"
    BUDGET = "budget"


@dataclass
class Orbit:
    """A simulated trajectory.

    ``times``/``states`` hold every ``stride``-th state starting at ``t = 0``
    (plus the final state). ``point`` is set for CONVERGED, ``period`` for
    CYCLE.
    """

    times: np.ndarray
    states: np.ndarray
    verdict: Verdict
    steps: int
    point: State | None = None
    period: int | None = None

    @property
    def final(self) -> State:
        return State(*self.states[-1])


def simulate_orbit(
    s0: State,
    p: SystemParams,
    budget: int = 100_000,
    stride: int = 1,
    k_max: int = 64,
    cycle_tol: float = 1e-6,
    cycle_window: int = 1000,
    conv_tol: float = 1e-9,
    conv_steps: int = 10,
) -> Orbit:
    """Iterate the system from ``s0``.

    Stops early once ``x < 1e-15`` (EXTINCT) or once the state stays within
    ``conv_tol`` of a known equilibrium (``E1``, ``E2`` or an interior one)
    for ``conv_steps`` steps (CONVERGED). At the end of the budget the last
    ``cycle_window + k_max`` states are tested for a period ``<= k_max``
    (CYCLE); otherwise the verdict is BUDGET.
    """
    x, y = float(s0[0]), float(s0[1])
    if not (x >= 0.0 and y >= 0.0):
        raise DomainError(f"initial state must be nonnegative, got {tuple(s0)}")
    r, a, b = p.r, p.a, p.beta
    targets = [(a, 0.0), (1.0, 0.0)] + [(e.x, e.y) for e in find_interior_equilibria(p)]

    times, states = [0], [(x, y)]
    tail: deque = deque([(x, y)], maxlen=cycle_window + k_max)
    streak, near = 0, None
    verdict, point, period = Verdict.BUDGET, None, None
    t = 0
    for t in range(1, budget + 1):
        xn = x * math.exp(r * (1.0 - x) * (x - a) - y)
        yn = b * x * -math.expm1(-y)
        moved = max(abs(xn - x), abs(yn - y))
        x, y = xn, yn
        tail.append((x, y))
        if t % stride == 0:
            times.append(t)
            states.append((x, y))
        if x < EXTINCTION_LEVEL:
            verdict = Verdict.EXTINCT
            break
        if moved < 2.0 * conv_tol:
            hit = next(
                (e for e in targets if abs(x - e[0]) < conv_tol and abs(y - e[1]) < conv_tol), None
            )
            streak = streak + 1 if hit is not None and hit == near else int(hit is not None)
            near = hit
            if streak >= conv_steps:
                verdict, point = Verdict.CONVERGED, State(*hit)
                break
        else:
            streak, near = 0, None
    else:
        if len(tail) >= 2 * k_max:
            window = min(cycle_window, len(tail) - k_max)
            period = detect_cycle(list(tail), k_max, cycle_tol, window=window)
            if period is not None:
                verdict = Verdict.CYCLE

    if times[-1] != t:
        times.append(t)
        states.append((x, y))
    return Orbit(np.asarray(times), np.asarray(states, dtype=float), verdict, t, point, period)


def beta_sweep(
    a: float,
    r: float,
    beta_lo: float,
    beta_hi: float,
    steps: int,
    transient: int = 5000,
    record: int = 128,
    offset: float = 1e-3,
) -> SweepTable:
    """Long-run samples of the planar system along a uniform ``beta`` grid.

    Each grid point starts at its interior equilibrium shifted by ``offset``
    in ``x`` when a unique one exists, and at ``((1 + a)/2 + 0.01, 0.1)``
    otherwise. ``samples`` has shape ``(steps, record, 2)``.
    """
    if not 0.0 < beta_lo < beta_hi:
        raise DomainError(f"need 0 < beta_lo < beta_hi, got {beta_lo}, {beta_hi}")
    if steps < 2:
        raise DomainError(f"need at least 2 grid points, got steps={steps}")
    if transient < 1 or record < 1:
        raise DomainError("transient and record must be positive")
    betas = np.linspace(beta_lo, beta_hi, steps)
    fallback = (0.5 * (1.0 + a) + 0.01, 0.1)
    x = np.empty(steps)
    y = np.empty(steps)
    for i, beta in enumerate(betas):
        eqs = find_interior_equilibria(SystemParams(r, a, float(beta)))
        x[i], y[i] = (eqs[0].x + offset, eqs[0].y) if len(eqs) == 1 else fallback

    def step(x, y):
        xn = x * np.exp(r * (1.0 - x) * (x - a) - y)
        yn = betas * x * -np.expm1(-y)
        dead = xn < EXTINCTION_LEVEL
        return np.where(dead, 0.0, xn), np.where(dead, 0.0, yn)

    for _ in range(transient):
        x, y = step(x, y)
    out = np.empty((steps, record, 2))
    for j in range(record):
        x, y = step(x, y)
        out[:, j, 0] = x
        out[:, j, 1] = y
    seed = f"interior equilibrium + ({offset}, 0); fallback {fallback}"
    return SweepTable("beta", betas, out, seed, transient, record, {"a": a, "r": r})


def prop31_bound(p: SystemParams) -> tuple[float, float]:
    """Bounds ``(f(x_m), beta f(x_m))``: ``x(t)`` obeys the first for
    ``t >= 1``, ``y(t)`` the second for ``t >= 2``."""
    xm = critical_point_xm(p.scalar)
    fm = xm * math.exp(p.r * (1.0 - xm) * (xm - p.a))
    return fm, p.beta * fm
