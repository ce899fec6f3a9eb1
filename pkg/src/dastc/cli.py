"""Command-line SNR sweep.

Example::

    dastc --scenario colinear --snr-db 0:5:30 --trials 100000 \\
          --methods mc,closed,oneway --out rates.csv --plot-data curves.csv

Progress goes to stderr. Stdout gets one JSON summary line with the cell
provenance. Exit status is 0 when every requested cell was filled, 2 when
some were unavailable and 1 on error.
"""

import argparse
import json
import logging
import sys

import numpy as np

from .channel import ScenarioConfig
from .exceptions import ParameterError
from .experiment import emit_csv, emit_plotdata, parse_methods, run_experiment

EXIT_OK, EXIT_FAILURE, EXIT_PARTIAL = 0, 1, 2
_CONFIG_KEYS = {"scenario", "omega0", "omega1", "omega2", "snr_db", "trials", "seed",
                "methods", "out", "plot_data", "n_jobs"}


def parse_grid(text):
    """``"start:step:stop"`` (stop included) or a single value, in dB."""
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR grid {text!r}") from None
    if len(vals) == 1:
        return (vals[0],)
    if len(vals) != 3 or vals[1] <= 0 or vals[2] < vals[0]:
        raise argparse.ArgumentTypeError(f"SNR grid must be start:step:stop with step > 0, got {text!r}")
    start, step, stop = vals
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return tuple(float(round(start + i * step, 12)) for i in range(count))


def _trials(text):
    value = float(text)
    if value != int(value) or value < 1:
        raise argparse.ArgumentTypeError(f"trials must be a positive integer, got {text!r}")
    return int(value)


def read_config_file(path):
    """Parse ``key=value`` lines (``#`` comments, dashes or underscores in keys)."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="dastc", description="Two-way AF distributed Alamouti sum-rate sweep.")
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    p.add_argument("--scenario", choices=("symmetric", "colinear", "custom"), default="symmetric")
    p.add_argument("--omega0", type=float, help="S1-S2 mean power (custom scenario)")
    p.add_argument("--omega1", type=float, help="S1-R mean power (custom scenario)")
    p.add_argument("--omega2", type=float, help="S2-R mean power (custom scenario)")
    p.add_argument("--snr-db", type=parse_grid, default=parse_grid("0:2:30"), metavar="START:STEP:STOP")
    p.add_argument("--trials", type=_trials, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", default="mc,closed,quadrature,oneway",
                   help="comma list from mc, closed, quadrature, oneway")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--plot-data", help="long-format curve data output path")
    p.add_argument("--n-jobs", type=int, default=1)
    p.add_argument("-q", "--quiet", action="store_true", help="no progress on stderr")
    return p


def parse_args(argv=None):
    parser = build_parser()
    pre, _ = parser.parse_known_args(argv)
    if pre.config:
        values = read_config_file(pre.config)
        defaults = {}
        for key, raw in values.items():
            action = next(a for a in parser._actions if a.dest == key)
            defaults[key] = action.type(raw) if action.type else raw
        parser.set_defaults(**defaults)
    return parser.parse_args(argv)


def config_from_args(args):
    common = dict(snr_grid_db=args.snr_db, trials=args.trials, seed=args.seed)
    omegas = {k: getattr(args, k) for k in ("omega0", "omega1", "omega2") if getattr(args, k) is not None}
    if args.scenario == "custom":
        missing = {"omega0", "omega1", "omega2"} - set(omegas)
        if missing:
            raise ParameterError(f"custom scenario needs {sorted(missing)}")
        return ScenarioConfig(**omegas, **common)
    if omegas:
        raise ParameterError("--omega* flags require --scenario custom")
    if args.scenario == "symmetric":
        return ScenarioConfig.symmetric(**common)
    return ScenarioConfig.colinear(**common)


def main(argv=None):
    args = parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(message)s", stream=sys.stderr)
    try:
        config = config_from_args(args)
        methods = parse_methods(args.methods)

        def progress(done, total, snr):
            if not args.quiet:
                print(f"[{done}/{total}] {snr:g} dB", file=sys.stderr, flush=True)

        result = run_experiment(config, methods, args.n_jobs, progress)
        if args.out:
            emit_csv(result, args.out)
        if args.plot_data:
            emit_plotdata(result, args.plot_data)
    except (ParameterError, OSError, ValueError) as exc:
        print(f"dastc: error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    missing = result.missing_cells()
    summary = {
        "scenario": args.scenario,
        "omegas": list(config.omegas),
        "methods": list(methods),
        "rows": len(result.rows),
        "missing": [[s, c] for s, c in missing],
        "tags": {f"{r.snr_db:g}": r.tags for r in result.rows},
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_PARTIAL if missing else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
