"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run under pytest (the lines are repeated in the terminal summary) or directly
with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import math
import sys

import numpy as np

from allee_ricker.host_parasitoid import (
    RawParams,
    State,
    StabilityClass,
    SystemParams,
    Verdict,
    _stability_functions,
    classify_eigen,
    classify_interior,
    eval_raw_system,
    eval_system,
    find_beta_c,
    find_interior_equilibria,
    global_extinction_check,
    prop31_bound,
    rescale,
    rescale_state,
    simulate_orbit,
)
from allee_ricker.numerics import EigenPair, detect_cycle, finite_diff
from allee_ricker.scalar_map import (
    ScalarParams,
    analytic_basins,
    eval_derivatives,
    eval_map,
    find_two_cycle,
    schwarzian,
    simulate_basins,
    solve_xa,
)

RESULTS: list[str] = []


def record(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {title} -- {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_01_beta_c_table():
    published = {0.5: 1.318, 1.0: 1.3378, 1.5: 1.35765, 2.0: 1.3777, 3.0: 1.41819, 3.9: 1.45519, 3.99: 1.4589}
    worst = 0.0
    for r, want in published.items():
        worst = max(worst, abs(find_beta_c(0.5, r).beta_c - want))
    record(1, "beta_c table at a=0.5", worst <= 2e-3, f"max |error| {worst:.2e} (tol 2e-3)")


def _has_cycle(r: float, a: float) -> bool:
    return find_two_cycle(ScalarParams(r, a)) is not None


def test_criterion_02_period_doubling_threshold():
    worst = 0.0
    for a in (0.1, 0.3, 0.5, 0.7, 0.9):
        r0 = 2 / (1 - a)
        lo, hi = 0.9 * r0, 1.1 * r0
        assert not _has_cycle(lo, a) and _has_cycle(hi, a)
        while hi - lo > 1e-8:
            mid = 0.5 * (lo + hi)
            if _has_cycle(mid, a):
                hi = mid
            else:
                lo = mid
        worst = max(worst, abs(hi - r0))
    record(2, "smallest r with a 2-cycle equals 2/(1-a)", worst <= 1e-5, f"max |error| {worst:.2e} (tol 1e-5)")


def test_criterion_03_schwarzian():
    rng = np.random.default_rng(3)
    worst = 0.0
    for a in rng.uniform(0.001, 0.999, 50):
        r0 = 2 / (1 - a)
        want = 2 * r0 * (a - 4 - 3 * r0)
        worst = max(worst, abs(schwarzian(1.0, ScalarParams(r0, a)) / want - 1))
    record(3, "Schwarzian at the flip point", worst <= 1e-9, f"max rel error {worst:.2e} over 50 a (tol 1e-9)")


def test_criterion_04_basins():
    rng = np.random.default_rng(4)
    mismatches = checked = 0
    for _ in range(20):
        a = rng.uniform(0.05, 0.95)
        r = rng.uniform(0.02, 0.995) * 2 / (1 - a)
        p = ScalarParams(r, a)
        xa = solve_xa(p)
        grid = np.linspace(0.0, 2 * xa, 10_000)
        grid = grid[(np.abs(grid - a) > 1e-3) & (np.abs(grid - xa) > 1e-3)]
        codes, _, exhausted = simulate_basins(grid, p, budget=100_000)
        mismatches += int(np.count_nonzero(codes != analytic_basins(grid, p)) + np.count_nonzero(exhausted))
        checked += grid.size
    record(4, "simulated basins match the closed form", mismatches == 0,
           f"{mismatches} mismatches over {checked} seeds in 20 parameter sets")


def test_criterion_05_interior_uniqueness():
    rng = np.random.default_rng(5)
    bad = 0
    for _ in range(10_000):
        a = rng.uniform(0.01, 0.99)
        r = rng.uniform(1e-3, 1.0) * 2 / (1 - a)
        beta = rng.uniform(1.0, 1.0 / a)
        if not (1.0 < beta < 1.0 / a):
            continue
        eqs = find_interior_equilibria(SystemParams(r, a, beta))
        if len(eqs) != 1:
            bad += 1
            continue
        e = eqs[0]
        if not (max(1 / beta, a) < e.x < 1 and beta * e.x * math.exp(-e.y) < 1):
            bad += 1
    empty_bad = 0
    for _ in range(1000):
        a = rng.uniform(0.01, 0.99)
        r0 = 2 / (1 - a)
        # beta <= 1: any growth rate; beta a >= 1: below the flip threshold
        p1 = SystemParams(rng.uniform(1e-3, 3.0) * r0, a, rng.uniform(0.01, 1.0))
        p2 = SystemParams(rng.uniform(1e-3, 1.0) * r0, a, rng.uniform(1.0, 3.0) / a)
        empty_bad += bool(find_interior_equilibria(p1)) + bool(find_interior_equilibria(p2))
    record(5, "unique bracketed interior equilibrium below r0", bad == 0 and empty_bad == 0,
           f"{bad} failures in 10^4 draws; {empty_bad} spurious equilibria in 2000 empty cases")


def _oracle_class(x: float, y: float, p: SystemParams) -> StabilityClass:
    """Eigenvalue class of a finite-difference Jacobian (numpy eigvals)."""
    h = 1e-7
    jac = np.empty((2, 2))
    for j in range(2):
        up, dn = [x, y], [x, y]
        up[j] += h
        dn[j] -= h
        jac[:, j] = (np.array(eval_system(State(*up), p)) - np.array(eval_system(State(*dn), p))) / (2 * h)
    lam = sorted(np.linalg.eigvals(jac), key=abs, reverse=True)
    return classify_eigen(EigenPair(complex(lam[0]), complex(lam[1]), 0.0), tol=1e-7)


def test_criterion_06_classification():
    rng = np.random.default_rng(6)
    disagreements = checked = skipped = 0
    regimes: set[str] = set()
    i = 0
    while checked < 1000:
        i += 1
        a = rng.uniform(0.05, 0.95)
        r0 = 2 / (1 - a)
        if i % 2:
            r, beta = r0 * rng.uniform(0.02, 0.99), rng.uniform(1.0, 1.0 / a)
        else:
            r, beta = r0 * rng.uniform(1.01, 4.0), rng.uniform(1.0, 1.5 / a)
        if beta <= 1.0:
            continue
        p = SystemParams(r, a, beta)
        for e in find_interior_equilibria(p):
            c = classify_interior(e, p)
            if c.near_threshold:
                skipped += 1
                continue
            checked += 1
            regimes.add(c.regime.split(":")[0])
            oracle = _oracle_class(e.x, e.y, p)
            if oracle not in c.expected or oracle is not c.stability:
                disagreements += 1
    record(6, "threshold regime agrees with eigenvalues", disagreements == 0,
           f"{disagreements} disagreements in {checked} equilibria ({len(regimes)} regimes, {skipped} near thresholds skipped)")


def test_criterion_07_global_extinction():
    rng = np.random.default_rng(7)
    sets = [(0.5, 2.0, 3.0), (0.3, 1.5, 5.0), (0.7, 5.0, 2.5), (0.2, 2.4, 8.0), (0.6, 4.5, 2.4)]
    failures = worst = 0
    for a, r, beta in sets:
        p = SystemParams(r, a, beta)
        assert beta * a > math.exp((1 - a) / 2) and r < p.r0 and global_extinction_check(p).holds
        for _ in range(1000):
            s0 = State(rng.uniform(0.0, 3.0), math.exp(rng.uniform(math.log(1e-8), math.log(5.0))))
            o = simulate_orbit(s0, p, budget=100_000, stride=100_000)
            failures += o.verdict is not Verdict.EXTINCT
            worst = max(worst, o.steps)
    record(7, "global extinction above the certificate threshold", failures == 0,
           f"{failures} survivors of 5000 orbits; slowest extinction {worst} steps")


def test_criterion_08_quasi_periodic():
    fixtures = [
        (State(0.7512, 0.2437), SystemParams(3.99, 0.5, 1.5)),
        (State(0.7811, 0.0308), SystemParams(0.5, 0.5, 1.325)),
    ]
    notes, ok = [], True
    for s0, p in fixtures:
        o = simulate_orbit(s0, p, budget=50_000)
        fx, fy = prop31_bound(p)
        st = o.states
        bounded = bool(np.all(st[1:, 0] > 0) and np.all(st[1:, 0] <= fx) and np.all(st[2:, 1] <= fy))
        tail = st[-5000:]
        spread = float(np.ptp(tail[:, 0]))
        periods = [detect_cycle(st[: end + 1], 64, 1e-6, window=1000) for end in range(10_000, 50_001, 10_000)]
        good = o.verdict is Verdict.BUDGET and bounded and spread > 1e-3 and all(k is None for k in periods)
        ok &= good
        notes.append(f"r={p.r}: {o.verdict.value}, x-spread {spread:.3f}, bounded={bounded}")
    record(8, "quasi-periodic fixtures", ok, "; ".join(notes))


def test_criterion_09_derivatives_and_monotonicity():
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(1000):
        a = rng.uniform(0.05, 0.95)
        r = rng.uniform(0.05, 2.0) * 2 / (1 - a)
        p = ScalarParams(r, a)
        x = rng.uniform(0.0, 2 * solve_xa(p))
        exact = eval_derivatives(x, p)
        for k, base in ((1, 1e-5), (2, 1e-3), (3, 1e-2)):
            # step on the map's own length scale 1/r
            fd = finite_diff(lambda t: eval_map(t, p), x, k, h=base / max(1.0, r))
            worst = max(worst, abs(fd - exact[k - 1]) / max(abs(exact[k - 1]), 1.0))
    increasing = 0
    for _ in range(100):
        a = rng.uniform(0.01, 0.99)
        r = rng.uniform(0.01, 5.0) * 2 / (1 - a)
        x_hat = (1 + a) / 2
        xs = x_hat + (1 - x_hat) * np.linspace(0.0, 1.0, 2001)[:-1]
        d, t = _stability_functions(xs, SystemParams(r, a, 2.0))
        increasing += not (np.all(np.diff(d) < 0) and np.all(np.diff(t) < 0))
    record(9, "derivatives vs finite differences; D and T decreasing", worst <= 1e-6 and increasing == 0,
           f"max rel error {worst:.2e} over 3000 derivative checks (tol 1e-6); {increasing}/100 non-monotone grids")


def test_criterion_10_rescaling_round_trip():
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(20):
        a = rng.uniform(0.05, 0.95)
        K = math.exp(rng.uniform(math.log(0.5), math.log(200)))
        b = math.exp(rng.uniform(math.log(0.01), math.log(10)))
        r = rng.uniform(0.05, 0.99) * 2 / (1 - a)
        beta = rng.uniform(0.5, 1 / a + 0.5)
        raw = RawParams(r / K, K, a * K, b, beta / (b * K))
        p = rescale(raw)
        s = State(K * rng.uniform(0.2, 1.5), rng.uniform(0.0, 1.0) / b)
        z = rescale_state(s, raw)
        for _ in range(1000):
            s, z = eval_raw_system(s, raw), eval_system(z, p)
            worst = max(worst, max(abs(u - v) for u, v in zip(rescale_state(s, raw), z)))
    record(10, "dimensional and rescaled orbits agree", worst <= 1e-10,
           f"max pointwise deviation {worst:.2e} over 20 x 1000 steps (tol 1e-10)")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
            except Exception as exc:  # pragma: no cover
                failed += 1
                print(f"[FAIL] {name}: {type(exc).__name__}: {exc}")
    sys.exit(1 if failed else 0)
