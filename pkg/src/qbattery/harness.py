"""Scenario presets, Lamb-shift sweeps and CSV/JSON emission."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import liouville, meanfield
from .eigenmodes import BRANCHES, resonant_drive_frequency
from .errors import NumericalError, QBatteryError, ValidationError
from .model import VACUUM, SystemParams, TimeSeries

log = logging.getLogger(__name__)

DEFAULT_LAMB_GRID = (-0.2, -0.1, 0.0, 0.1, 0.2)
SETTLE_BAND = 0.02
ENGINES = ("meanfield", "liouville")

_PRESET_COUPLING = {
    "fig1_weak_resonant": dict(omega_a=1.0, omega_b=1.0, g=0.16),
    "fig2_strong_resonant": dict(omega_a=1.0, omega_b=1.0, g=1.6),
    "fig3_strong_detuned": dict(omega_a=2.0 / 3.0, omega_b=1.0, g=1.6),
}
PRESET_NAMES = tuple(_PRESET_COUPLING)


@dataclass(frozen=True)
class ScenarioPreset:
    """A figure scenario; ``base_params.drive_frequency`` is NaN until resolved per sweep point."""

    name: str
    base_params: SystemParams
    branch: str = "minus"
    lamb_grid: tuple[float, ...] = DEFAULT_LAMB_GRID
    t_final: float = 200.0
    dt: float = 0.01
    fixed_drive: bool = False

    def with_drive_amplitude(self, F: float) -> "ScenarioPreset":
        return replace(self, base_params=self.base_params.replace(drive_amplitude=F))

    def params_for(self, delta_l: float) -> SystemParams:
        """Parameters at one grid point with omega_f resolved to lambda_branch."""
        params = self.base_params.replace(lamb_shift=delta_l, drive_frequency=0.0)
        reference = params.replace(lamb_shift=0.0) if self.fixed_drive else params
        return params.replace(drive_frequency=resonant_drive_frequency(reference, self.branch))


def build_preset(name: str, branch: str = "minus", lamb_grid=None, fixed_drive: bool = False) -> ScenarioPreset:
    if name not in _PRESET_COUPLING:
        raise ValidationError(f"unknown preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}")
    if branch not in BRANCHES:
        raise ValidationError(f"branch must be one of {BRANCHES}, got {branch!r}")
    base = SystemParams(
        **_PRESET_COUPLING[name],
        drive_amplitude=0.1,
        drive_frequency=math.nan,
        gamma_a=0.05,
        lamb_shift=0.0,
        n_thermal=0.0,
    )
    grid = DEFAULT_LAMB_GRID if lamb_grid is None else tuple(float(x) for x in lamb_grid)
    return ScenarioPreset(name=name, base_params=base, branch=branch, lamb_grid=grid, fixed_drive=fixed_drive)


@dataclass(frozen=True)
class SweepRow:
    delta_l: float
    branch: str
    omega_f_used: float
    w_a_final: float
    w_b_final: float
    w_a_peak: float
    w_b_peak: float
    t_settle: float
    error: str | None = field(default=None, compare=False)

    @property
    def failed(self) -> bool:
        return self.error is not None


SWEEP_COLUMNS = tuple(f.name for f in fields(SweepRow) if f.name != "error")
SERIES_COLUMNS = ("t", "re_a", "im_a", "re_b", "im_b", "w_a", "w_b")


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...] = ()

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def grid(self) -> tuple[float, ...]:
        return tuple(r.delta_l for r in self.rows)

    @property
    def failed(self) -> tuple[SweepRow, ...]:
        return tuple(r for r in self.rows if r.failed)

    def row(self, delta_l: float) -> SweepRow:
        for r in self.rows:
            if r.delta_l == delta_l:
                return r
        raise KeyError(delta_l)


def settle_time(t: np.ndarray, w: np.ndarray, band: float = SETTLE_BAND) -> float:
    """First sample time after which ``w`` stays within ``band`` (relative) of its final value."""
    final = w[-1]
    outside = np.flatnonzero(np.abs(w - final) > band * abs(final))
    if outside.size == 0:
        return float(t[0])
    return float(t[outside[-1] + 1])


def run_engine(
    params: SystemParams,
    t_final: float,
    dt: float,
    engine: str = "meanfield",
    cutoffs: tuple[int, int] = (10, 10),
    sample_stride: int = 1,
) -> TimeSeries:
    if engine == "meanfield":
        return meanfield.simulate(params, t_final=t_final, dt=dt)
    if engine == "liouville":
        basis = liouville.FockBasis(*cutoffs)
        return liouville.simulate(params, basis, t_final=t_final, dt=dt, sample_stride=sample_stride)
    raise ValidationError(f"engine must be one of {ENGINES}, got {engine!r}")


def summarize(series: TimeSeries, delta_l: float, branch: str, omega_f: float) -> SweepRow:
    return SweepRow(
        delta_l=delta_l,
        branch=branch,
        omega_f_used=omega_f,
        w_a_final=float(series.w_a[-1]),
        w_b_final=float(series.w_b[-1]),
        w_a_peak=float(series.w_a.max()),
        w_b_peak=float(series.w_b.max()),
        t_settle=settle_time(series.t, series.w_b),
    )


def _sweep_point(preset: ScenarioPreset, delta_l: float, engine: str, cutoffs, sample_stride) -> SweepRow:
    omega_f = math.nan
    try:
        params = preset.params_for(delta_l)
        omega_f = params.drive_frequency
        series = run_engine(params, preset.t_final, preset.dt, engine, cutoffs, sample_stride)
    except QBatteryError as exc:
        nan = math.nan
        return SweepRow(delta_l, preset.branch, omega_f, nan, nan, nan, nan, nan, error=str(exc))
    return summarize(series, delta_l, preset.branch, omega_f)


def run_sweep(
    preset: ScenarioPreset,
    engine: str = "meanfield",
    cutoffs: tuple[int, int] | None = None,
    sample_stride: int = 1,
    workers: int = 1,
) -> SweepResult:
    """Simulate every grid point; failed points are kept with NaN metrics and an error message."""
    if engine not in ENGINES:
        raise ValidationError(f"engine must be one of {ENGINES}, got {engine!r}")
    if engine == "liouville" and cutoffs is None:
        raise ValidationError("the liouville engine needs Fock cutoffs")
    args = [(preset, d, engine, cutoffs, sample_stride) for d in preset.lamb_grid]
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, *zip(*args)))
    else:
        rows = [_sweep_point(*a) for a in args]
    for row in rows:
        if row.failed:
            log.warning("sweep point delta_l=%g failed: %s", row.delta_l, row.error)
    return SweepResult(tuple(rows))


def switching_contrast(result_minus: SweepResult, result_plus: SweepResult) -> list[tuple[float, float]]:
    """(w_b_plus - w_b_minus) / (w_b_plus + w_b_minus) at each Lamb shift; 0 where both vanish."""
    if result_minus.grid != result_plus.grid:
        raise ValidationError(f"mismatched Lamb-shift grids: {result_minus.grid} vs {result_plus.grid}")
    out = []
    for rm, rp in zip(result_minus.rows, result_plus.rows):
        total = rp.w_b_final + rm.w_b_final
        diff = rp.w_b_final - rm.w_b_final
        out.append((rm.delta_l, 0.0 if total == 0 else diff / total))
    return out


# ---------------------------------------------------------------- emission


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return f"{x:.12g}"


def _json_number(x):
    if isinstance(x, str):
        return x
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def table(obj) -> tuple[tuple[str, ...], list[tuple]]:
    """Column names and row tuples for a ``TimeSeries`` or ``SweepResult``."""
    if isinstance(obj, TimeSeries):
        cols = SERIES_COLUMNS + tuple(obj.extra)
        data = [obj.t, obj.a.real, obj.a.imag, obj.b.real, obj.b.imag, obj.w_a, obj.w_b, *obj.extra.values()]
        rows = [tuple(float(v) for v in r) for r in zip(*data)]
        return cols, rows
    if isinstance(obj, SweepResult):
        return SWEEP_COLUMNS, [tuple(getattr(r, c) for c in SWEEP_COLUMNS) for r in obj.rows]
    raise TypeError(f"cannot emit object of type {type(obj).__name__}")


def render(obj, fmt: str = "csv") -> str:
    cols, rows = table(obj)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        writer.writerows([_fmt(v) for v in r] for r in rows)
        return buf.getvalue()
    if fmt == "json":
        payload = [{c: _json_number(v) for c, v in zip(cols, r)} for r in rows]
        return json.dumps(payload, indent=1) + "\n"
    raise ValidationError(f"format must be 'csv' or 'json', got {fmt!r}")


def emit(obj, fmt: str = "csv", destination=None) -> None:
    """Write ``obj`` to ``destination`` (a path), or to standard output when None or '-'."""
    text = render(obj, fmt)
    if destination is None or str(destination) == "-":
        sys.stdout.write(text)
        return
    path = Path(destination)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {fmt} output to {path}: {exc.strerror}") from exc


def _parse_rows(text: str, fmt: str) -> list[dict]:
    if fmt == "csv":
        return list(csv.DictReader(io.StringIO(text)))
    if fmt == "json":
        return json.loads(text)
    raise ValidationError(f"format must be 'csv' or 'json', got {fmt!r}")


def _float(v) -> float:
    return math.nan if v is None else float(v)


def parse_series(text: str, fmt: str = "csv") -> TimeSeries:
    rows = _parse_rows(text, fmt)
    if not rows:
        empty = np.array([])
        return TimeSeries(empty, empty, empty, empty, empty)
    extra_cols = [c for c in rows[0] if c not in SERIES_COLUMNS]
    col = {c: np.array([_float(r[c]) for r in rows]) for c in rows[0]}
    return TimeSeries(
        t=col["t"],
        a=col["re_a"] + 1j * col["im_a"],
        b=col["re_b"] + 1j * col["im_b"],
        w_a=col["w_a"],
        w_b=col["w_b"],
        extra={c: col[c] for c in extra_cols},
    )


def parse_sweep(text: str, fmt: str = "csv") -> SweepResult:
    out = []
    for r in _parse_rows(text, fmt):
        values = {c: (r[c] if c == "branch" else _float(r[c])) for c in SWEEP_COLUMNS}
        out.append(SweepRow(**values))
    return SweepResult(tuple(out))


def oracle_check(params: SystemParams, t_final: float, dt: float, cutoffs: tuple[int, int],
                 sample_stride: int = 1) -> dict[str, float]:
    """Largest deviation of the density-matrix moments from the exact mean-field solution.

    First moments of this linear model do not depend on the bath occupation, so
    for n_thermal > 0 the mean-field reference is computed at n_thermal = 0.
    """
    dm = liouville.simulate(params, liouville.FockBasis(*cutoffs), t_final, dt, sample_stride)
    cold = params.replace(n_thermal=0.0)
    try:
        a_mf, b_mf = meanfield.closed_form_series(cold, VACUUM, dm.t)
    except NumericalError:
        mf = meanfield.integrate(cold, VACUUM, t_final, dt)
        idx = np.rint(dm.t / dt).astype(int)
        a_mf, b_mf = mf.a[idx], mf.b[idx]
    return {
        "max_dev_a": float(np.abs(dm.a - a_mf).max()),
        "max_dev_b": float(np.abs(dm.b - b_mf).max()),
        "max_trace_err": float(dm.extra["trace_err"].max()),
        "max_trunc_tail": float(dm.extra["trunc_tail"].max()),
    }
