"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected into an "acceptance criteria" section at the
end of the pytest run.
"""

import csv
import math
import time
from collections import defaultdict

import numpy as np

from dissipath import cli
from dissipath.bath import (
    BathSpec,
    critical_gamma,
    kernel,
    kernel_quadrature,
    low_freq_expansion,
    mass_renormalization_continuation,
)
from dissipath.specfun import beta, log_gamma, zeta
from dissipath.thermo import (
    specific_heat,
    specific_heat_lnz_oracle,
    specific_heat_matsubara,
    specific_heat_spectral,
    sum_rule_check,
)


def _gamma_fn(x):
    return math.exp(log_gamma(x))


def _loglog_slope(spec, plateau):
    Ts = np.logspace(-4, -2, 9)
    dev = [abs(specific_heat(spec, T).value - plateau) for T in Ts]
    return float(np.polyfit(np.log(Ts), np.log(dev), 1)[0])


def test_criterion_01_kernel_oracle_equivalence(record_criterion):
    t0 = time.perf_counter()
    worst, where = 0.0, None
    for g in (0.3, 3.0):
        for s in (0.5, 1.0, 2.0, 3.0):
            for p in (1, 2, 3):
                if not s < 2 * p + 2:
                    continue
                spec = BathSpec(g, s, p)
                for z in (0.01, 0.1, 1.0, 10.0, 100.0):
                    closed = kernel(spec, z).value
                    quad = kernel_quadrature(spec, z)
                    err = abs(closed - quad) / abs(quad)
                    if err > worst:
                        worst, where = err, (g, s, p, z)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 10.0
    record_criterion(1, "closed-form kernel vs quadrature", ok,
                     f"worst rel err {worst:.2e} at {where}, {elapsed:.2f} s")


def test_criterion_02_mass_renormalization(record_criterion):
    spec = BathSpec(3.0, 1.0, 2)
    closed = low_freq_expansion(spec).dm_over_m
    numeric = mass_renormalization_continuation(spec, z=1e-6)
    ok = abs(closed + 4.5) <= 1e-10 and abs(numeric + 4.5) <= 1e-6
    record_criterion(2, "dM/M(3, 1, 2) = -4.5", ok,
                     f"closed {closed!r}, continuation {numeric!r}")


def test_criterion_03_critical_damping(record_criterion):
    gc = critical_gamma(1.0, 2)
    slopes = {}
    for g in (0.6, 0.74):
        spec = BathSpec(g, 1.0, 2)
        slopes[g] = specific_heat(spec, 2e-3).value - specific_heat(spec, 1e-3).value
    ok = abs(gc - 2.0 / 3.0) <= 1e-10 and slopes[0.6] > 0.0 > slopes[0.74]
    record_criterion(3, "critical damping and slope sign flip", ok,
                     f"gamma_c={gc!r}, dC(0.6)={slopes[0.6]:.3e}, dC(0.74)={slopes[0.74]:.3e}")


SUM_RULE_PAIRS = [(0.3, 0.5), (3.0, 0.5), (0.3, 1.0), (3.0, 1.0), (0.3, 3.0), (3.0, 3.0),
                  (3.0, 0.1), (0.3, 1.5), (3.0, 2.5)]


def test_criterion_04_sum_rule(record_criterion):
    t0 = time.perf_counter()
    worst = max(abs(sum_rule_check(BathSpec(g, s, 2))) for g, s in SUM_RULE_PAIRS)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-4 and elapsed < 30.0
    record_criterion(4, "oscillator density sum rule, nine (gamma, s) pairs", ok,
                     f"worst deviation {worst:.2e}, {elapsed:.2f} s")


def test_criterion_05_triple_route(record_criterion):
    spec = BathSpec(3.0, 1.0, 2)
    worst = 0.0
    for T in (0.1, 1.0, 10.0):
        vals = [specific_heat_matsubara(spec, T).value,
                specific_heat_spectral(spec, T).value,
                specific_heat_lnz_oracle(spec, T).value]
        worst = max(worst, max(vals) - min(vals))
    record_criterion(5, "Matsubara, spectral and ln Z routes agree", worst <= 1e-5,
                     f"worst pairwise spread {worst:.2e}")


def test_criterion_06_high_T_law(record_criterion):
    details, ok = [], True
    Ts = np.linspace(20.0, 100.0, 17)
    for g, s, p in ((3.0, 1.0, 2), (0.3, 0.5, 2), (3.0, 3.0, 2)):
        spec = BathSpec(g, s, p)
        y = np.array([(0.5 - specific_heat(spec, T).value) * T * T for T in Ts])
        design = np.vstack([np.ones_like(Ts), 1.0 / Ts, 1.0 / Ts ** 2]).T
        fitted = np.linalg.lstsq(design, y, rcond=None)[0][0]
        expected = beta(s / 2, p - s / 2) * g / (12 * math.pi)
        rel = abs(fitted / expected - 1.0)
        ok &= rel <= 0.01
        details.append(f"({g:g},{s:g},{p}) rel {rel:.1e}")
    record_criterion(6, "high-temperature 1/T^2 coefficient", ok, "; ".join(details))


def test_criterion_07_low_T_plateau(record_criterion):
    T = 1e-4
    details, ok = [], True
    for s in (0.1, 0.5, 1.0, 1.5):
        spec = BathSpec(3.0, s, 2)
        c = specific_heat(spec, T).value
        a = (2 - s) * math.sin(math.pi * s / 2) ** 2 / (3.0 * math.pi) * (1 + low_freq_expansion(spec).dm_over_m)
        bound = 2 * abs(a * _gamma_fn(4 - s) * zeta(3 - s) * T ** (2 - s))
        dev = abs(c - (s - 1) / 2)
        ok &= dev <= bound
        details.append(f"s={s:g} dev/bound {dev / bound:.2f}")
    c3 = specific_heat(BathSpec(3.0, 3.0, 2), T).value
    ok &= 0.40 <= c3 <= 0.5
    details.append(f"s=3 C={c3:.6f}")
    record_criterion(7, "low-temperature plateaus", ok, "; ".join(details))


def test_criterion_08_low_T_exponent(record_criterion):
    details, ok = [], True
    for s in (0.1, 0.5, 1.0, 1.5):
        slope = _loglog_slope(BathSpec(3.0, s, 2), (s - 1) / 2)
        ok &= abs(slope - (2 - s)) <= 0.05
        details.append(f"s={s:g} slope {slope:.3f}")
    gc = critical_gamma(0.5, 2)
    slope = _loglog_slope(BathSpec(gc, 0.5, 2), -0.25)
    ok &= abs(slope - 3.5) <= 0.1
    details.append(f"critical gamma={gc:.4f} slope {slope:.3f}")
    record_criterion(8, "low-temperature power laws", ok, "; ".join(details))


def test_criterion_09_logarithmic_law(record_criterion):
    T = 1e-6
    c = specific_heat(BathSpec(3.0, 2.0, 2), T).value
    correction = 1.0 / (2.0 * math.log(T))
    rel = abs(c - (0.5 + correction)) / abs(correction)
    record_criterion(9, "s=2 logarithmic approach", rel <= 0.15,
                     f"C={c:.6f}, law {0.5 + correction:.6f}, relative miss {rel:.3f}")


def _read(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _curves(rows):
    out = defaultdict(list)
    for r in rows:
        out[(float(r["gamma"]), float(r["s"]))].append((float(r["T"]), float(r["C"])))
    return out


def test_criterion_10_figures(record_criterion, tmp_path):
    t0 = time.perf_counter()
    codes = [cli.main(["fig", which, "--out-prefix", str(tmp_path / which)]) for which in cli.FIGURES]
    elapsed = time.perf_counter() - t0
    checks = {}

    b = _curves(_read(tmp_path / "fig2b.csv"))[(3.0, 1.0)]
    dip = min(C for T, C in b if 1e-2 <= T <= 1e-1)
    checks["fig2b dip"] = dip < 0.0 and abs(b[0][1]) < 1e-3

    double = True
    for curve in _curves(_read(tmp_path / "fig2a.csv")).values():
        Cs = [C for _, C in curve]
        low, high, cmin = Cs[0], Cs[-1], min(Cs)
        double &= abs(high - 0.5) < 1e-3 and abs(low - 0.5) < 0.5 * abs(cmin - 0.5)
        imin = int(np.argmin(Cs))
        double &= all(np.diff(Cs[:imin + 1]) <= 1e-12) and all(np.diff(Cs[imin:]) >= -1e-12)
    checks["fig2a double approach"] = double

    mass = [(float(r["s"]), float(r["dm_over_m"])) for r in _read(tmp_path / "fig1_mass.csv")]
    near = [abs(v) for s, v in mass if abs(s - 2.0) < 0.03]
    checks["fig1 sign structure"] = (all(v < 0 for s, v in mass if s < 2) and
                                     all(v > 0 for s, v in mass if s > 2) and min(near) > 10.0)

    u_shape = True
    by_p = defaultdict(list)
    for r in _read(tmp_path / "fig3_beta.csv"):
        by_p[int(r["p"])].append((float(r["s"]), float(r["beta"])))
    for p, pts in by_p.items():
        bs = [v for _, v in pts]
        i = int(np.argmin(bs))
        u_shape &= abs(pts[i][0] - p) < 0.02
        u_shape &= all(np.diff(bs[:i + 1]) < 0) and all(np.diff(bs[i:]) > 0)
    checks["fig3 U-shape"] = u_shape

    ok = all(c == 0 for c in codes) and elapsed < 60.0 and all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    record_criterion(10, "figure reproduction", ok,
                     f"{elapsed:.1f} s, exit codes {codes}, failed shapes {failed or 'none'}")
