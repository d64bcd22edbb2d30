"""Batch entry point: parse a run spec, execute sweeps, write results.

Output schema (ambc-results-v1): one row per (scheme, axis value) with the
effective per-point parameters, so files are self-describing overlays.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import analysis, montecarlo
from .config import EmConfig, Scheme, SimParams

SCHEMA_VERSION = "ambc-results-v1"
CSV_COLUMNS = ["scheme", "axis", "value", "L", "M", "P", "alpha2", "snr_db",
               "niter", "slots", "bit_errors", "total_bits", "ber", "stderr",
               "runtime_ms"]

ANALYTIC_CUIF = "ANALYTIC_CUIF"
ANALYTIC_MIX = "ANALYTIC_MIX"

DEFAULT_SNR_VALUES = tuple(float(v) for v in range(9))


@dataclass(frozen=True)
class SweepSpec:
    scheme: str                  # Scheme name or an ANALYTIC_* overlay
    axis: str
    values: tuple
    params: SimParams


@dataclass(frozen=True)
class RunSpec:
    sweeps: tuple
    out: Path
    fmt: str = "csv"
    emit_plot_script: bool = False
    workers: int = 1
    include_timing: bool = False


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ambc",
        description="Ambient backscatter over OFDM: BER sweeps and analysis",
    )
    parser.add_argument("--scheme", action="append", default=None,
                        help="detector scheme (repeatable); default CAMF and CUIF")
    parser.add_argument("--axis", default="snr_db",
                        choices=montecarlo.SWEEP_AXES)
    parser.add_argument("--values", default=None,
                        help="comma-separated axis values; default 0..8 dB")
    parser.add_argument("--L", type=int, default=32)
    parser.add_argument("--M", type=int, default=100)
    parser.add_argument("--P", type=int, default=4)
    parser.add_argument("--alpha2", type=float, default=0.2)
    parser.add_argument("--snr-db", type=float, default=6.0)
    parser.add_argument("--niter", type=int, default=5)
    parser.add_argument("--epsilon", type=float, default=1e-12)
    parser.add_argument("--slots", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="ambc_results.csv")
    parser.add_argument("--format", dest="fmt", default="csv",
                        choices=("csv", "json"))
    parser.add_argument("--emit-plot-script", action="store_true")
    parser.add_argument("--analytic", action="store_true",
                        help="emit ANALYTIC_CUIF and ANALYTIC_MIX overlays")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--timing", action="store_true",
                        help="record wall time per point (breaks byte-level "
                             "reproducibility of outputs)")
    return parser


def parse_args(argv) -> RunSpec:
    parser = _build_parser()
    args = parser.parse_args(argv)

    schemes = args.scheme or ["CAMF", "CUIF"]
    try:
        scheme_objs = [Scheme(s.upper()) for s in schemes]
    except ValueError:
        parser.error(f"--scheme: unknown scheme in {schemes}")
    if args.values is None:
        values = DEFAULT_SNR_VALUES if args.axis == "snr_db" else None
        if values is None:
            parser.error("--values is required for axis " + args.axis)
    else:
        try:
            values = tuple(float(v) for v in args.values.split(","))
        except ValueError:
            parser.error(f"--values: cannot parse {args.values!r}")
    em = EmConfig(n_iter_max=args.niter, epsilon=args.epsilon)
    sweeps = []
    for scheme in scheme_objs:
        try:
            params = SimParams(L=args.L, M=args.M, P=args.P,
                               alpha_sq=args.alpha2, snr_db=args.snr_db,
                               scheme=scheme, em=em, slots=args.slots,
                               seed=args.seed)
        except ValueError as exc:
            parser.error(f"--L/--P/--M/--alpha2: {exc}")
        sweeps.append(SweepSpec(scheme.value, args.axis, values, params))
    if args.analytic:
        base = sweeps[0].params
        sweeps.append(SweepSpec(ANALYTIC_CUIF, args.axis, values, base))
        sweeps.append(SweepSpec(ANALYTIC_MIX, args.axis, values, base))
    return RunSpec(sweeps=tuple(sweeps), out=Path(args.out), fmt=args.fmt,
                   emit_plot_script=args.emit_plot_script,
                   workers=args.workers, include_timing=args.timing)


def _analytic_points(spec: SweepSpec):
    points = []
    for value in sorted(spec.values):
        params = montecarlo._point_params(spec.params, spec.axis, value)
        budget = analysis.LinkBudget.from_sim(params)
        if spec.scheme == ANALYTIC_CUIF:
            ber = analysis.ber_cuif_closed(budget)
        else:
            ber = analysis.ber_unknown_symbols(budget)
        points.append(montecarlo.BerPoint(
            swept_value=float(value), bit_errors=0, total_bits=0,
            ber=ber, stderr=0.0, runtime_ms=0.0))
    return montecarlo.BerCurve(axis_name=spec.axis, points=tuple(points),
                               params_snapshot=spec.params)


def execute(spec: RunSpec):
    """Run every sweep; returns [(SweepSpec, BerCurve)]."""
    results = []
    for sw in spec.sweeps:
        if sw.scheme in (ANALYTIC_CUIF, ANALYTIC_MIX):
            results.append((sw, _analytic_points(sw)))
        else:
            curve = montecarlo.sweep(sw.params, sw.axis, sw.values,
                                     n_workers=spec.workers)
            results.append((sw, curve))
    return results


def _rows(results, spec: RunSpec):
    for sw, curve in results:
        for point in curve.points:
            params = montecarlo._point_params(sw.params, sw.axis,
                                              point.swept_value)
            yield {
                "scheme": sw.scheme,
                "axis": sw.axis,
                "value": point.swept_value,
                "L": params.L,
                "M": params.M,
                "P": params.P,
                "alpha2": params.alpha_sq,
                "snr_db": params.snr_db,
                "niter": params.em.n_iter_max,
                "slots": 0 if sw.scheme.startswith("ANALYTIC") else params.slots,
                "bit_errors": point.bit_errors,
                "total_bits": point.total_bits,
                "ber": point.ber,
                "stderr": point.stderr,
                "runtime_ms": point.runtime_ms if spec.include_timing else 0.0,
            }


def write_results(results, spec: RunSpec) -> list[Path]:
    """Write CSV or JSON (plus the optional plot script); returns paths."""
    if not results:
        raise ValueError("no curves to write")
    out = spec.out
    out.parent.mkdir(parents=True, exist_ok=True)
    written = []
    rows = list(_rows(results, spec))
    if spec.fmt == "csv":
        with open(out, "w", newline="") as fh:
            fh.write(f"# {SCHEMA_VERSION}\n")
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _fmt(v) for k, v in row.items()})
    else:
        with open(out, "w") as fh:
            json.dump({"schema": SCHEMA_VERSION, "rows": rows}, fh, indent=1)
            fh.write("\n")
    written.append(out)
    if spec.emit_plot_script:
        script = out.with_suffix(".plot.py")
        script.write_text(_plot_script(out, spec.fmt))
        written.append(script)
    return written


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return value


def _plot_script(data_path: Path, fmt: str) -> str:
    loader = (
        f"rows = list(csv.DictReader(ln for ln in open({data_path.name!r})\n"
        "            if not ln.startswith('#')))"
        if fmt == "csv" else
        f"rows = json.load(open({data_path.name!r}))['rows']"
    )
    imports = "import csv" if fmt == "csv" else "import json"
    return f"""#!/usr/bin/env python3
# Plots log-scale BER versus the sweep axis from {data_path.name}.
{imports}
from collections import defaultdict
import matplotlib.pyplot as plt

{loader}
by_scheme = defaultdict(list)
for r in rows:
    by_scheme[r['scheme']].append((float(r['value']), float(r['ber'])))
for scheme, pts in by_scheme.items():
    pts.sort()
    style = '--' if scheme.startswith('ANALYTIC') else '-o'
    plt.semilogy([v for v, _ in pts], [b for _, b in pts], style, label=scheme)
plt.xlabel(rows[0]['axis'])
plt.ylabel('BER')
plt.grid(True, which='both')
plt.legend()
plt.savefig({(data_path.stem + '.png')!r}, dpi=150)
"""


REPRODUCE_EXPERIMENTS = {
    # name: (axis, values, snr_db, analytic overlays)
    "snr": ("snr_db", DEFAULT_SNR_VALUES, None, True),
    "niter": ("n_iter", (1, 2, 3, 5, 10, 20), 6.0, False),
    "alpha": ("alpha_sq", (0.05, 0.1, 0.2, 0.3, 0.4), 6.0, False),
    "length": ("L", (16, 32, 64, 128), 6.0, False),
    "paths": ("P", (1, 2, 4, 8), 6.0, False),
}


def parse_reproduce_args(argv) -> list[RunSpec]:
    parser = argparse.ArgumentParser(
        prog="ambc reproduce",
        description="Run the bundled experiment presets",
    )
    parser.add_argument("--out", default="ambc_reproduce")
    parser.add_argument("--slots", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--emit-plot-script", action="store_true")
    parser.add_argument("--only", action="append", default=None,
                        choices=sorted(REPRODUCE_EXPERIMENTS),
                        help="run a subset of the experiments (repeatable)")
    args = parser.parse_args(argv)

    names = args.only or list(REPRODUCE_EXPERIMENTS)
    out_dir = Path(args.out)
    specs = []
    for name in names:
        axis, values, snr_db, overlays = REPRODUCE_EXPERIMENTS[name]
        base = SimParams(slots=args.slots, seed=args.seed,
                         snr_db=6.0 if snr_db is None else snr_db)
        sweeps = [
            SweepSpec("CAMF", axis, values, base.with_(scheme=Scheme.CAMF)),
            SweepSpec("CUIF", axis, values, base.with_(scheme=Scheme.CUIF)),
        ]
        if overlays:
            sweeps.append(SweepSpec(ANALYTIC_CUIF, axis, values, base))
            sweeps.append(SweepSpec(ANALYTIC_MIX, axis, values, base))
        specs.append(RunSpec(sweeps=tuple(sweeps),
                             out=out_dir / f"sweep_{name}.csv",
                             emit_plot_script=args.emit_plot_script,
                             workers=args.workers))
    return specs


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        if argv and argv[0] == "reproduce":
            specs = parse_reproduce_args(argv[1:])
        else:
            if argv and argv[0] == "run":
                argv = argv[1:]
            specs = [parse_args(argv)]
    except SystemExit as exc:
        return int(exc.code or 0)
    for spec in specs:
        try:
            results = execute(spec)
        except ValueError as exc:
            print(f"ambc: sweep failed: {exc}", file=sys.stderr)
            return 1
        for path in write_results(results, spec):
            print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
