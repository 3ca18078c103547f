"""Command-line front end.

Subcommands::

    dissipath sweep  --gamma 3 --s 1 --p 2 --tmin 1e-4 --tmax 100 --points 200 --out c.csv
    dissipath fig    fig2b --out-prefix figs/fig2b
    dissipath report --gamma 3 --s 1 --p 2

Exit codes: 0 success, 2 invalid parameters, 3 at least one sweep point
failed, 4 file I/O failure.  ``DISSIPATH_THREADS`` sets the number of
worker processes used for temperature sweeps.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bath import BathSpec, bath_mass, critical_gamma, low_freq_expansion
from .errors import DissipathError, DomainError
from .specfun import beta
from .svgplot import LinePlot
from .thermo import ValidityConfig, classify_regime, high_T_coefficient, specific_heat

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ENGINE = 3
EXIT_IO = 4

SWEEP_HEADER = ("T", "C", "method", "error_estimate", "regime")
FIG2_HEADER = ("series", "gamma", "s", "p") + SWEEP_HEADER
FIG2_POINTS = 160
FIG2_RANGE = (1e-4, 1e2)
FIGURES = ("fig1_mass", "fig2a", "fig2b", "fig3_beta")


class UsageError(Exception):
    """Invalid command-line parameters (exit code 2)."""


def _fmt(x):
    """Shortest representation that round-trips through ``float``."""
    return repr(float(x))


@dataclass
class SweepRow:
    T: float
    C: float
    method: str
    error_estimate: float
    regime: str

    def cells(self):
        return [_fmt(self.T), _fmt(self.C), self.method, _fmt(self.error_estimate), self.regime]


@dataclass
class SweepTable:
    header: dict
    rows: list = field(default_factory=list)

    @property
    def failures(self):
        return sum(1 for r in self.rows if r.method == "failed")

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for r in self.rows:
            w.writerow(r.cells())
        return buf.getvalue()


def read_sweep_csv(path):
    """Read a sweep CSV back into a list of :class:`SweepRow`."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != SWEEP_HEADER:
            raise ValueError(f"unexpected header {header}")
        return [SweepRow(float(t), float(c), m, float(e), g) for t, c, m, e, g in reader]


def worker_count():
    raw = os.environ.get("DISSIPATH_THREADS")
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"DISSIPATH_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("DISSIPATH_THREADS must be at least 1")
    return n


def _evaluate_point(job):
    spec, T, validity = job
    try:
        res = specific_heat(spec, T, validity=validity)
    except (DissipathError, ArithmeticError) as exc:
        return SweepRow(T, math.nan, "failed", math.inf, classify_regime(spec).value), str(exc)
    return SweepRow(T, res.value, res.method.value, res.error_estimate, res.regime.value), None


def evaluate_grid(spec, temperatures, validity=None):
    """Evaluate ``C(T)`` on a grid, in grid order, possibly in parallel."""
    jobs = [(spec, float(T), validity) for T in temperatures]
    workers = min(worker_count(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_evaluate_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        out = [_evaluate_point(j) for j in jobs]
    for row, msg in out:
        if msg is not None:
            print(f"warning: T={row.T!r}: {msg}", file=sys.stderr)
    return [row for row, _ in out]


def temperature_grid(tmin, tmax, points, grid):
    if not (tmin > 0.0 and tmax > tmin):
        raise UsageError("need 0 < tmin < tmax")
    if points < 2:
        raise UsageError("need at least 2 points")
    if grid == "log":
        Ts = np.logspace(math.log10(tmin), math.log10(tmax), points)
        Ts[0], Ts[-1] = tmin, tmax
    elif grid == "linear":
        Ts = np.linspace(tmin, tmax, points)
    else:
        raise UsageError(f"unknown grid {grid!r}")
    return [float(T) for T in Ts]


def _spec_from_args(args):
    try:
        spec = BathSpec(args.gamma, args.s, args.p, mass=args.mass)
        spec.require_restricted("temperature-dependent quantities")
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return spec


def _validity_from_args(args):
    try:
        return ValidityConfig(box_width_L=args.box_width, mass=args.mass,
                              strict=args.strict_validity)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _write_text(path, text):
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_sweep(args):
    spec = _spec_from_args(args)
    validity = _validity_from_args(args)
    Ts = temperature_grid(args.tmin, args.tmax, args.points, args.grid)
    if validity.strict and Ts[0] <= validity.E_0:
        raise UsageError(
            f"tmin={Ts[0]:g} is not above E_0={validity.E_0:g} for box width {validity.box_width_L:g}"
        )
    table = SweepTable(header={
        "spec": {"gamma": spec.gamma, "s": spec.s, "p": spec.p, "mass": spec.mass},
        "grid": {"tmin": args.tmin, "tmax": args.tmax, "points": args.points, "kind": args.grid},
        "validity": {"box_width_L": validity.box_width_L, "level_constant_c": validity.level_constant_c,
                     "strict": validity.strict},
        "version": __version__,
    })
    table.rows = evaluate_grid(spec, Ts, validity)
    text = table.to_csv()
    try:
        if args.out in (None, "-"):
            sys.stdout.write(text)
        else:
            _write_text(args.out, text)
            _write_text(args.out + ".meta.json", json.dumps(table.header, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if table.failures:
        print(f"error: {table.failures} of {len(table.rows)} points failed", file=sys.stderr)
        return EXIT_ENGINE
    return EXIT_OK


# figure data ------------------------------------------------------------

def fig1_mass_data(points=300, p=2):
    """Relative mass renormalization per unit damping strength vs ``s``."""
    s_grid = np.linspace(0.02, 2 * p + 2 - 0.02, points)
    rows = []
    for s in s_grid:
        s = float(s)
        rows.append((s, low_freq_expansion(BathSpec(1.0, s, p)).dm_over_m))
    return rows


def fig3_beta_data(points=299, ps=(1, 2, 3)):
    rows = []
    for p in ps:
        for s in np.linspace(0.02, 2 * p - 0.02, points):
            s = float(s)
            rows.append((p, s, beta(s / 2.0, p - s / 2.0)))
    return rows


def fig2_series(which):
    if which == "fig2a":
        return [(3.0, s, 2) for s in (2.0, 3.0)]
    return [(g, s, 2) for g in (0.3, 3.0) for s in (0.1, 0.5, 1.0)]


def fig2_data(which, points=FIG2_POINTS):
    Ts = temperature_grid(FIG2_RANGE[0], FIG2_RANGE[1], points, "log")
    out = []
    for g, s, p in fig2_series(which):
        rows = evaluate_grid(BathSpec(g, s, p), Ts)
        out.append(((g, s, p), rows))
    return out


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def build_figure(which, points=None):
    """Return ``(csv_text, plot, failures)`` for one of :data:`FIGURES`."""
    failures = 0
    if which == "fig1_mass":
        data = fig1_mass_data(**({"points": points} if points else {}))
        text = _csv_text(("s", "dm_over_m"), [(_fmt(s), _fmt(v)) for s, v in data])
        plot = LinePlot(title="Mass renormalization, p=2, gamma=1", xlabel="s",
                        ylabel="dM/M", logx=True, ylim=(-20.0, 20.0), legend="lower right")
        # separate polylines on either side of the divergence at s = 2
        for label, keep in (("p=2, s<2", lambda s: s < 2.0), ("p=2, s>2", lambda s: s > 2.0)):
            pts = [(s, v) for s, v in data if keep(s)]
            plot.add(label, [s for s, _ in pts], [v for _, v in pts])
    elif which == "fig3_beta":
        data = fig3_beta_data(**({"points": points} if points else {}))
        text = _csv_text(("p", "s", "beta"), [(p, _fmt(s), _fmt(b)) for p, s, b in data])
        plot = LinePlot(title="B(s/2, p - s/2)", xlabel="s", ylabel="B", logx=True, ylim=(0.0, 20.0))
        for p in sorted({r[0] for r in data}):
            pts = [(s, b) for q, s, b in data if q == p]
            plot.add(f"p={p}", [a for a, _ in pts], [b for _, b in pts])
    elif which in ("fig2a", "fig2b"):
        series = fig2_data(which, points or FIG2_POINTS)
        rows = []
        plot = LinePlot(title=f"Specific heat, p=2 ({which})", xlabel="T", ylabel="C", logx=True,
                        legend="lower right")
        for (g, s, p), sweep in series:
            label = f"s={s:g} gamma={g:g}"
            for r in sweep:
                rows.append([label, _fmt(g), _fmt(s), str(p)] + r.cells())
                failures += r.method == "failed"
            plot.add(label, [r.T for r in sweep], [r.C for r in sweep],
                     style="dashed" if g < 1.0 else "solid")
        text = _csv_text(FIG2_HEADER, rows)
    else:
        raise UsageError(f"unknown figure {which!r}; choose from {', '.join(FIGURES)}")
    return text, plot, failures


def cmd_fig(args):
    which_list = FIGURES if args.which == "all" else (args.which,)
    status = EXIT_OK
    for which in which_list:
        prefix = args.out_prefix or which
        if len(which_list) > 1:
            prefix = os.path.join(args.out_prefix or ".", which)
        text, plot, failures = build_figure(which, args.points)
        try:
            _write_text(prefix + ".csv", text)
            _write_text(prefix + ".svg", plot.render())
        except OSError as exc:
            print(f"error: cannot write figure files: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote {prefix}.csv and {prefix}.svg")
        if failures:
            status = EXIT_ENGINE
    return status


def report_lines(spec):
    lf = low_freq_expansion(spec)
    regime = classify_regime(spec)
    lines = [
        f"bath: gamma={spec.gamma:g} s={spec.s:g} p={spec.p} mass={spec.mass:g}",
        f"regime: {regime.value}",
        f"dM/M = {lf.dm_over_m:.6g}",
        f"M_bath = {bath_mass(spec):.6g}",
    ]
    if spec.s < 2.0:
        gc = critical_gamma(spec.s, spec.p)
        lines.append(f"gamma_c = {gc:.4f}")
        lines.append(f"low-T plateau (s-1)/2 = {(spec.s - 1.0) / 2.0:g}")
    elif spec.s == 2.0:
        lines.append("low-T plateau 1/2, approached logarithmically as 1/2 + 1/(2 ln T)")
    else:
        lines.append("low-T plateau 1/2; reentrant classical regime")
    lines.append(f"high-T coefficient B(s/2, p-s/2) gamma/(12 pi) = {high_T_coefficient(spec):.6g}")
    if spec.s < 2.0:
        if spec.gamma > gc:
            lines.append("gamma > gamma_c: anomalous (renormalized mass negative)")
        elif spec.gamma < gc:
            lines.append("gamma < gamma_c: normal")
        else:
            lines.append("gamma = gamma_c: critical (renormalized mass vanishes)")
    else:
        lines.append("no anomaly: renormalized mass exceeds the bare mass")
    return lines


def cmd_report(args):
    spec = _spec_from_args(args)
    print("\n".join(report_lines(spec)))
    return EXIT_OK


def _add_spec_args(p):
    p.add_argument("--gamma", type=float, required=True, help="damping strength in units of the cutoff")
    p.add_argument("--s", type=float, required=True, help="spectral exponent")
    p.add_argument("--p", type=int, required=True, help="cutoff exponent (integer >= 1)")
    p.add_argument("--mass", type=float, default=1.0, help="particle mass (default 1)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dissipath",
        description="Specific heat of a damped free particle in a power-law bath.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="temperature sweep of C(T) to CSV")
    _add_spec_args(sw)
    sw.add_argument("--box-width", type=float, default=1e6, help="box width L (default 1e6)")
    sw.add_argument("--strict-validity", action="store_true",
                    help="refuse temperatures at or below E_0 = c E_g")
    sw.add_argument("--tmin", type=float, required=True)
    sw.add_argument("--tmax", type=float, required=True)
    sw.add_argument("--points", type=int, required=True)
    sw.add_argument("--grid", choices=("log", "linear"), default="log")
    sw.add_argument("--out", default=None, help="output CSV path (default stdout)")
    sw.set_defaults(func=cmd_sweep)

    fg = sub.add_parser("fig", help="reproduce a figure as CSV and SVG")
    fg.add_argument("which", choices=FIGURES + ("all",))
    fg.add_argument("--out-prefix", default=None,
                    help="path prefix for the .csv/.svg pair (a directory for 'all')")
    fg.add_argument("--points", type=int, default=None, help="override the number of grid points")
    fg.set_defaults(func=cmd_fig)

    rp = sub.add_parser("report", help="print regime and renormalization summary")
    _add_spec_args(rp)
    rp.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage already
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
