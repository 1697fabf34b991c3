"""Parameter sweeps, CSV output, peak detection and plot-script emission."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import find_peaks

from .liouvillian import phonon_diagonal_generator
from .observables import distribution, observables_from_distribution
from .params import OMEGA, FockCutoffs, SystemParams, check_order
from .solver import converge_cutoffs, steady_state

AXES = ("delta", "chi", "nbar")
COLUMNS = (
    "axis_value", "delta", "chi", "nbar", "order_N", "n_max", "m_max",
    "mean_photon", "mean_phonon", "g2_a", "g2_b", "g3_b", "g4_b",
    "appendix_b_residual", "solver_residual", "converged",
)
OBSERVABLE_COLUMNS = COLUMNS[7:14]


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional scan of ``axis`` over ``steps`` evenly spaced values.

    ``cutoffs=None`` selects automatic cutoff escalation per point.
    """

    axis: str
    start: float
    stop: float
    steps: int
    base: SystemParams
    N: int = 1
    cutoffs: FockCutoffs | None = None
    obs_tol: float = 1e-3
    start_cutoffs: FockCutoffs = FockCutoffs(6, 16)
    max_rounds: int = 30

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.steps < 2:
            raise ValueError("a sweep needs at least 2 steps")
        if not self.start <= self.stop:
            raise ValueError("sweep start must not exceed stop")
        check_order(self.N)

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def params_at(self, x: float) -> SystemParams:
        return self.base.replace(**{self.axis: float(x)})


def solve_point(params: SystemParams, N: int, cutoffs: FockCutoffs | None = None, *,
                obs_tol: float = 1e-3, start_cutoffs: FockCutoffs = FockCutoffs(6, 16),
                max_rounds: int = 30, axis_value: float | None = None) -> dict:
    """Solve one parameter point and return a CSV row (dict keyed by column)."""
    row = {
        "axis_value": axis_value, "delta": params.delta, "chi": params.chi(),
        "nbar": params.nbar, "order_N": N,
        "n_max": None, "m_max": None, "solver_residual": None, "converged": False,
    }
    row.update(dict.fromkeys(OBSERVABLE_COLUMNS))
    try:
        if cutoffs is None:
            report = converge_cutoffs(params, N, obs_tol, start=start_cutoffs, max_rounds=max_rounds)
        else:
            report = steady_state(phonon_diagonal_generator(params, cutoffs, N))
        rec = observables_from_distribution(distribution(report), params.chi(), params)
    except (RuntimeError, ValueError):
        return row
    row.update(rec.as_dict())
    row.update(
        n_max=report.cutoffs_used.n_max, m_max=report.cutoffs_used.m_max,
        solver_residual=report.residual, converged=True,
    )
    return row


def _solve_grid_point(args):
    spec, x = args
    return solve_point(
        spec.params_at(x), spec.N, spec.cutoffs, obs_tol=spec.obs_tol,
        start_cutoffs=spec.start_cutoffs, max_rounds=spec.max_rounds, axis_value=float(x),
    )


def run_sweep(spec: SweepSpec, workers: int = 1, progress=None) -> list[dict]:
    """Solve every grid point; rows come back in ascending axis order."""
    jobs = [(spec, x) for x in spec.grid()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_solve_grid_point, jobs))
    else:
        rows = []
        for job in jobs:
            rows.append(_solve_grid_point(job))
            if progress is not None:
                progress(len(rows), len(jobs))
    return sorted(rows, key=lambda r: r["axis_value"])


# -- CSV --------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows, stream=None) -> str:
    out = stream if stream is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in COLUMNS])
    return out.getvalue() if stream is None else ""


def write_csv(rows, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        rows_to_csv(rows, fh)
    return path


def _parse(column, text):
    if column == "converged":
        return text.strip().lower() == "true"
    if text == "":
        return None
    if column in ("order_N", "n_max", "m_max"):
        return int(text)
    return float(text)


def read_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        return [{k: _parse(k, v) for k, v in rec.items()} for rec in reader]


# -- peaks ------------------------------------------------------------------

@dataclass(frozen=True)
class PeakReport:
    positions: list[float]
    spacings: list[float] = field(default_factory=list)
    inferred_kerr: float | None = None
    inferred_g: float | None = None


def detect_peaks(xs, ys, prominence: float = 0.05) -> PeakReport:
    """Locate prominent local maxima of a sampled curve.

    A peak must stand out by at least ``prominence`` times the full range of
    ``ys``.  Successive spacings estimate the Kerr shift ``omega chi^2``, from
    which ``g = sqrt(shift * omega)``.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    if xs.size < 5:
        raise ValueError("peak detection needs at least 5 points")
    if np.any(np.diff(xs) < 0):
        raise ValueError("x values must be sorted")
    span = float(np.ptp(ys))
    if span == 0 or not np.isfinite(span):
        return PeakReport([])
    idx, _ = find_peaks(ys, prominence=prominence * span)
    positions = [float(x) for x in xs[idx]]
    if len(positions) < 2:
        return PeakReport(positions)
    spacings = [float(s) for s in np.diff(positions)]
    kerr = float(np.mean(spacings))
    return PeakReport(positions, spacings, kerr, math.sqrt(kerr * OMEGA))


def peaks_from_rows(rows, column: str = "mean_photon", prominence: float = 0.05) -> PeakReport:
    pts = [(r["axis_value"], r[column]) for r in rows if r.get(column) is not None]
    pts.sort()
    return detect_peaks([p[0] for p in pts], [p[1] for p in pts], prominence)


# -- plotting ---------------------------------------------------------------

_PLOT_TEMPLATE = '''\
"""Plot {csv_name}: mean quanta numbers and correlations versus {axis}."""
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
rows = list(csv.DictReader((HERE / "{csv_name}").open()))

curves = defaultdict(list)
for row in rows:
    curves[(row["nbar"], row["order_N"])].append(row)


def column(group, name):
    pts = [(float(r["axis_value"]), float(r[name])) for r in group if r[name] != ""]
    return [p[0] for p in pts], [p[1] for p in pts]


panels = [("mean_photon", "<n>"), ("mean_phonon", "<m>"), ("g2_a", "g2_a(0)"), ("g2_b", "g2_b(0)")]
fig, axes = plt.subplots(2, 2, figsize=(9, 6.5), sharex=True)
for ax, (name, label) in zip(axes.flat, panels):
    for (nbar, order), group in sorted(curves.items()):
        x, y = column(group, name)
        ax.plot(x, y, label=f"nbar={{nbar}}, N={{order}}")
    ax.set_ylabel(label)
for ax in axes[-1]:
    ax.set_xlabel("{axis_label}")
axes[0, 0].legend(fontsize="small")
fig.tight_layout()
fig.savefig(HERE / "{png_name}", dpi=150)
'''

_AXIS_LABELS = {"delta": "Delta/omega", "chi": "chi = g/omega", "nbar": "nbar"}


def emit_plot_script(rows, output_path) -> tuple[Path, Path]:
    """Write the table as CSV plus a matplotlib script that renders it.

    Returns ``(csv_path, script_path)``; the script saves a PNG next to
    itself when run.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("cannot plot an empty table")
    csv_path = Path(output_path).with_suffix(".csv")
    script_path = csv_path.with_name(f"plot_{csv_path.stem}.py")
    write_csv(rows, csv_path)
    axis = _infer_axis(rows)
    script_path.write_text(_PLOT_TEMPLATE.format(
        csv_name=csv_path.name, axis=axis, axis_label=_AXIS_LABELS.get(axis, axis),
        png_name=f"{csv_path.stem}.png",
    ))
    return csv_path, script_path


def _infer_axis(rows) -> str:
    for name in AXES:
        if all(r.get(name) == r.get("axis_value") for r in rows):
            return name
    return "axis_value"
