"""Shared numerical kernels.

Bisection root finding, uniform multi-root scanning, a closed-form 2x2
eigenvalue solver, cycle detection on orbit samples and central finite
differences. Everything here is pure and reentrant; the model modules use
these as building blocks and the test-suite uses :func:`finite_diff` as an
independent oracle for closed-form derivatives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidBracket

ScalarFunc = Callable[[float], float]

ROOT_TOL = 1e-12
MAX_BISECTIONS = 200


@dataclass(frozen=True)
class Bracket:
    """An interval ``[lo, hi]`` on which ``f`` changes sign."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise InvalidBracket(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if not (self.f_lo * self.f_hi < 0.0 or self.f_lo == 0.0 or self.f_hi == 0.0):
            raise InvalidBracket(
                f"no sign change on [{self.lo}, {self.hi}]: "
                f"f(lo)={self.f_lo!r}, f(hi)={self.f_hi!r}"
            )

    @classmethod
    def around(cls, f: ScalarFunc, lo: float, hi: float) -> "Bracket":
        """Evaluate ``f`` at both ends and validate the sign change."""
        return cls(lo, hi, float(f(lo)), float(f(hi)))


@dataclass(frozen=True)
class RootResult:
    x: float
    residual: float
    width: float
    iterations: int


def bisect(
    f: ScalarFunc,
    b: Bracket,
    tol: float = ROOT_TOL,
    ftol: float = 0.0,
    maxiter: int = MAX_BISECTIONS,
) -> RootResult:
    """Bisection on a validated bracket.

    Stops when the bracket is narrower than ``tol``, when ``|f(mid)| <= ftol``
    or after ``maxiter`` halvings. The returned point always lies inside the
    input bracket.
    """
    if b.f_lo == 0.0:
        return RootResult(b.lo, 0.0, 0.0, 0)
    if b.f_hi == 0.0:
        return RootResult(b.hi, 0.0, 0.0, 0)
    lo, hi, f_lo = b.lo, b.hi, b.f_lo
    mid, f_mid = 0.5 * (lo + hi), math.nan
    n = 0
    for n in range(1, maxiter + 1):
        mid = 0.5 * (lo + hi)
        f_mid = float(f(mid))
        if f_mid == 0.0 or abs(f_mid) <= ftol:
            return RootResult(mid, f_mid, hi - lo, n)
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    mid = 0.5 * (lo + hi)
    return RootResult(mid, float(f(mid)), hi - lo, n)


def find_root(f: ScalarFunc, b: Bracket, tol: float = ROOT_TOL) -> float:
    """Return a root of ``f`` inside ``b`` to absolute accuracy ``tol``."""
    return bisect(f, b, tol=tol).x


def scan_roots(
    f: Callable,
    lo: float,
    hi: float,
    n: int,
    tol: float = ROOT_TOL,
    vectorized: bool = False,
) -> list[float]:
    """Locate every sign change of ``f`` on a uniform ``n``-interval grid.

    Each sign change is refined by bisection. Grid points where ``f`` is
    exactly zero count as roots. Roots closer than ``10 * tol`` are merged.
    A double root that touches zero between grid points is invisible; callers
    that care about tangencies retry with a finer ``n``.

    Args:
        f: scalar function; with ``vectorized=True`` it must also accept a
            numpy array and return an array of the same shape.
        lo, hi: scan interval, ``lo < hi``.
        n: number of subintervals, at least 2.
    """
    if not lo < hi:
        raise ValueError(f"scan interval must satisfy lo < hi, got [{lo}, {hi}]")
    if n < 2:
        raise ValueError(f"need at least 2 subintervals, got {n}")
    xs = np.linspace(lo, hi, n + 1)
    if vectorized:
        fs = np.asarray(f(xs), dtype=float)
    else:
        fs = np.array([f(float(x)) for x in xs], dtype=float)

    roots = [float(x) for x in xs[fs == 0.0]]
    s = np.sign(fs)
    for i in np.nonzero(s[:-1] * s[1:] < 0)[0]:
        b = Bracket(float(xs[i]), float(xs[i + 1]), float(fs[i]), float(fs[i + 1]))
        roots.append(find_root(f, b, tol))

    roots.sort()
    merged: list[float] = []
    for x in roots:
        if merged and x - merged[-1] <= 10 * tol:
            continue
        merged.append(x)
    return merged


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalues of a real 2x2 matrix, larger modulus first."""

    lam1: complex
    lam2: complex
    discriminant: float

    @property
    def moduli(self) -> tuple[float, float]:
        return abs(self.lam1), abs(self.lam2)

    @property
    def is_complex(self) -> bool:
        return self.discriminant < 0.0


def eig2(trace: float, det: float) -> EigenPair:
    """Roots of ``lam**2 - trace*lam + det``.

    Real roots use the cancellation-free form ``q = (tr + sign(tr) sqrt(disc))/2``,
    ``lam1 = q``, ``lam2 = det / q``.
    """
    disc = trace * trace - 4.0 * det
    if disc < 0.0:
        half_im = 0.5 * math.sqrt(-disc)
        return EigenPair(complex(0.5 * trace, half_im), complex(0.5 * trace, -half_im), disc)
    q = 0.5 * (trace + math.copysign(math.sqrt(disc), trace))
    lam1 = q
    lam2 = det / q if q != 0.0 else 0.0
    if abs(lam2) > abs(lam1):
        lam1, lam2 = lam2, lam1
    return EigenPair(complex(lam1), complex(lam2), disc)


def matrix_eig2(m: Sequence[Sequence[float]]) -> EigenPair:
    """:func:`eig2` applied to an explicit 2x2 matrix."""
    (p, q), (r, s) = m
    return eig2(p + s, p * s - q * r)


def detect_cycle(
    samples: Sequence,
    k_max: int,
    tol: float,
    window: int | None = None,
) -> int | None:
    """Smallest period ``k <= k_max`` of the trailing part of an orbit.

    Compares each of the last ``window`` samples with the one ``k`` steps
    earlier (max-norm over components). ``window`` defaults to ``k_max`` so
    ``2 * k_max`` samples suffice.

    Returns:
        The period, or ``None`` when no ``k`` matches within ``tol``.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    n = arr.shape[0]
    if window is None:
        window = k_max
    if n < window + k_max:
        raise ValueError(f"need at least {window + k_max} samples, got {n}")
    tail = arr[n - window:]
    for k in range(1, k_max + 1):
        prev = arr[n - window - k: n - k]
        if np.max(np.abs(tail - prev)) < tol:
            return k
    return None


# offsets, integer weights, common denominator, power of h; integer weights
# make the stencil annihilate constants exactly
_STENCILS = {
    1: ((-1, 1), (-1, 1), 2, 1),
    2: ((-2, -1, 0, 1, 2), (-1, 16, -30, 16, -1), 12, 2),
    3: ((-3, -2, -1, 1, 2, 3), (1, -8, 13, -13, 8, -1), 8, 3),
}
_DEFAULT_STEP = {1: 1e-5, 2: 1e-3, 3: 1e-2}


def finite_diff(f: ScalarFunc, x: float, order: int, h: float | None = None) -> float:
    """Central finite-difference derivative of ``f`` at ``x``.

    Order 1 uses the two-point stencil with ``h = max(1e-5, 1e-5*|x|)``
    (truncation O(h^2)). Orders 2 and 3 use five/six-point stencils with
    truncation O(h^4) and base steps 1e-3 and 1e-2, scaled the same way.
    """
    if order not in _STENCILS:
        raise ValueError(f"order must be 1, 2 or 3, got {order}")
    offsets, weights, denom, power = _STENCILS[order]
    if h is None:
        base = _DEFAULT_STEP[order]
        h = max(base, base * abs(x))
    total = math.fsum(w * f(x + k * h) for k, w in zip(offsets, weights))
    return total / (denom * h**power)


__all__ = [
    "Bracket",
    "EigenPair",
    "RootResult",
    "bisect",
    "detect_cycle",
    "eig2",
    "find_root",
    "finite_diff",
    "matrix_eig2",
    "scan_roots",
]
