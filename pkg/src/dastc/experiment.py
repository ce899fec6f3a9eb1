"""SNR sweeps over the simulation and analysis methods, with CSV output."""

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .analytic import rsum_closed, rsum_quadrature
from .channel import db_to_linear
from .exceptions import ConvergenceError, ParameterError
from .protocol import ONE_WAY_PREFACTOR, TWO_WAY_PREFACTOR, ensemble_estimate, sample_ensemble

log = logging.getLogger(__name__)

METHODS = ("mc", "closed", "quadrature", "oneway")
CSV_COLUMNS = ("snr_db", "mc_mean", "mc_stderr", "closed_form", "quadrature",
               "oneway_mean", "oneway_stderr", "gain")
PLOT_COLUMNS = ("series", "snr_db", "value")
PLOT_SERIES = (("mc_twoway", "mc_mean"), ("analytic_twoway", "closed_form"),
               ("quadrature_twoway", "quadrature"), ("mc_oneway", "oneway_mean"),
               ("gain", "gain"))
_DIGITS = 9


@dataclass
class ExperimentRow:
    """One grid point. ``None`` marks a cell that is unavailable.

    ``tags`` maps each filled column to the method that produced it, for
    example ``"closed"`` or ``"hybrid"`` for ``closed_form``.
    """

    snr_db: float
    mc_mean: float = None
    mc_stderr: float = None
    closed_form: float = None
    quadrature: float = None
    oneway_mean: float = None
    oneway_stderr: float = None
    gain: float = None
    tags: dict = field(default_factory=dict, compare=False)

    def cells(self):
        return tuple(getattr(self, c) for c in CSV_COLUMNS)


@dataclass
class ExperimentResult:
    rows: list
    methods: tuple = METHODS
    errors: list = field(default_factory=list, compare=False)

    @property
    def complete(self):
        """True when every requested cell holds a value."""
        return not self.missing_cells()

    def missing_cells(self):
        wanted = []
        if "mc" in self.methods:
            wanted += ["mc_mean", "mc_stderr"]
        if "closed" in self.methods:
            wanted.append("closed_form")
        if "quadrature" in self.methods:
            wanted.append("quadrature")
        if "oneway" in self.methods:
            wanted += ["oneway_mean", "oneway_stderr"]
        if {"mc", "oneway"} <= set(self.methods):
            wanted.append("gain")
        return [(r.snr_db, c) for r in self.rows for c in wanted if getattr(r, c) is None]

    def rounded(self):
        """Copy with every cell rounded to the precision written to CSV."""
        rows = []
        for r in self.rows:
            vals = [None if v is None else float(_fmt(v)) for v in r.cells()]
            rows.append(ExperimentRow(*vals, tags=dict(r.tags)))
        return ExperimentResult(rows, self.methods)


def parse_methods(methods):
    if isinstance(methods, str):
        methods = [m.strip() for m in methods.split(",") if m.strip()]
    unknown = set(methods) - set(METHODS)
    methods = tuple(m for m in METHODS if m in set(methods))
    if unknown or not methods:
        raise ParameterError(f"methods must be a non-empty subset of {METHODS}")
    return methods


def _analytic(func, tag_of, config, rho, row, column, errors):
    try:
        out = func(config, rho)
    except (ConvergenceError, ParameterError, ArithmeticError) as exc:
        errors.append((row.snr_db, column, str(exc)))
        log.warning("%s unavailable at %g dB: %s", column, row.snr_db, exc)
        return
    if math.isfinite(out.rsum):
        setattr(row, column, out.rsum)
        row.tags[column] = tag_of(out)
    else:
        errors.append((row.snr_db, column, "non-finite value"))


def _point(config, ensemble, methods, snr_db, errors):
    rho = float(db_to_linear(snr_db))
    row = ExperimentRow(snr_db)
    if ensemble is not None:
        if "mc" in methods:
            est = ensemble_estimate(ensemble, rho, "exact", TWO_WAY_PREFACTOR)
            row.mc_mean, row.mc_stderr = est.mean, est.stderr
            row.tags["mc_mean"] = row.tags["mc_stderr"] = "mc"
        if "oneway" in methods:
            est = ensemble_estimate(ensemble, rho, "exact", ONE_WAY_PREFACTOR)
            row.oneway_mean, row.oneway_stderr = est.mean, est.stderr
            row.tags["oneway_mean"] = row.tags["oneway_stderr"] = "mc"
        if row.mc_mean is not None and row.oneway_mean is not None:
            row.gain = row.mc_mean - row.oneway_mean
            row.tags["gain"] = "mc"
    if "closed" in methods:
        _analytic(rsum_closed, lambda b: b.method, config, rho, row, "closed_form", errors)
    if "quadrature" in methods:
        _analytic(rsum_quadrature, lambda b: "quadrature", config, rho, row, "quadrature", errors)
    return row


def run_experiment(config, methods=METHODS, n_jobs=1, progress=None):
    """Evaluate the requested methods at every grid point of ``config``.

    The Monte-Carlo ensemble is drawn once and shared by all SNR points
    and by the two-way and one-way estimates. A method that refuses a point
    leaves its cell empty (recorded in ``errors``) and the sweep goes on.

    Parameters
    ----------
    config : ScenarioConfig
    methods : iterable of str or str
        Subset of ``("mc", "closed", "quadrature", "oneway")``.
    n_jobs : int
        Worker threads for sampling and for grid points.
    progress : callable, optional
        Called as ``progress(done, total, snr_db)`` after each grid point.
    """
    methods = parse_methods(methods)
    if n_jobs < 1:
        raise ParameterError("n_jobs must be >= 1")
    ensemble = None
    if {"mc", "oneway"} & set(methods):
        ensemble = sample_ensemble(config, n_jobs)
    errors = []
    grid = config.snr_grid_db
    done = [0]

    def task(snr):
        row = _point(config, ensemble, methods, snr, errors)
        done[0] += 1
        if progress is not None:
            progress(done[0], len(grid), snr)
        return row

    if n_jobs == 1 or len(grid) <= 1:
        rows = [task(s) for s in grid]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            rows = list(pool.map(task, grid))
    errors.sort(key=lambda e: (e[0], e[1]))
    return ExperimentResult(rows, methods, errors)


def _fmt(value):
    if value is None:
        return ""
    out = format(float(value), f".{_DIGITS}g")
    return "0" if out == "-0" else out


def _write(path, header, records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(records)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def emit_csv(result, path):
    """Write one row per grid point; empty strings mark unavailable cells."""
    _write(path, CSV_COLUMNS, ([_fmt(v) for v in r.cells()] for r in result.rows))


def read_csv(path, methods=METHODS):
    """Parse a file written by :func:`emit_csv` (tags are not stored)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        rows = [ExperimentRow(*(float(c) if c != "" else None for c in rec)) for rec in reader]
    return ExperimentResult(rows, tuple(methods))


def plot_records(result):
    for series, column in PLOT_SERIES:
        for r in result.rows:
            value = getattr(r, column)
            if value is not None:
                yield series, _fmt(r.snr_db), _fmt(value)


def emit_plotdata(result, path):
    """Long-format ``series,snr_db,value`` table of the figure curves."""
    _write(path, PLOT_COLUMNS, plot_records(result))


def read_plotdata(path):
    """Return ``{series: [(snr_db, value), ...]}``."""
    out = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        if tuple(next(reader)) != PLOT_COLUMNS:
            raise ValueError(f"{path}: unexpected header")
        for series, snr, value in reader:
            out.setdefault(series, []).append((float(snr), float(value)))
    return out
