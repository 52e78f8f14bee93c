"""Batch execution over (case, temperature) cells and deterministic emission.

Cells are independent and run in parallel (QDICE_THREADS overrides the
worker count); a failing cell is recorded and does not poison its
siblings.  Output is fully deterministic: cells are sorted, floats are
written with 17 significant digits, and the manifest carries a sha256 per
file, so identical inputs produce byte-identical trees.
"""
from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import timescales
from .config import RunConfig
from .diffusion import decoherence_factor
from .errors import NotReachedError, QdiceError
from .model import OscillatorKind
from .oracle import (
    CoefficientSet,
    PacketSpec,
    evolve_density_matrix,
    fringe_visibility,
    make_position_grid,
    two_packet_density,
)

FMT = "%.17g"


@dataclass
class CellResult:
    case_label: str
    g0kt: float
    t_max: float
    series: object = None
    t_threshold: float = None
    t_formula: float = None
    formula_route: str = ""
    oracle_agreement: float = None
    error: str = None


@dataclass
class SweepReport:
    config: RunConfig
    cells: list = field(default_factory=list)

    @property
    def failures(self):
        return [c for c in self.cells if c.error is not None]


def _run_cell(run: RunConfig, case_label: str, row: int) -> CellResult:
    g0kt = run.temperatures[row]
    result = CellResult(case_label=case_label, g0kt=g0kt, t_max=run.t_max[row])
    try:
        cfg = run.cell_model(case_label, g0kt)
        traj = run.trajectory(cfg)
        series = decoherence_factor(cfg, traj, run.grid(row))
        result.series = series
        result.t_threshold = timescales.threshold_crossing_time(series, run.epsilon)
        if cfg.case.a_kind is OscillatorKind.INVERTED:
            result.formula_route = "unstable"
            try:
                result.t_formula = timescales.unstable_time_from_series(
                    cfg,
                    series,
                    epsilon=run.epsilon,
                    lambda_lyap=timescales.lyapunov_rate(cfg, run.lyapunov),
                )
            except NotReachedError:
                result.t_formula = None
        else:
            result.formula_route = "harmonic"
            try:
                result.t_formula = timescales.harmonic_decoherence_time(
                    cfg, traj, traj.dx0, run.grid(row), series=series
                )
            except NotReachedError:
                result.t_formula = None
        if run.oracle:
            result.oracle_agreement = oracle_crosscheck(cfg, traj, series)
    except QdiceError as exc:
        result.error = f"{type(exc).__name__}: {exc}"
    return result


def run_sweep(run: RunConfig) -> SweepReport:
    """Evaluate every (case, temperature) cell; never raises for cell errors."""
    jobs = [(case, row) for case in run.cases for row in range(len(run.temperatures))]
    workers = int(os.environ.get("QDICE_THREADS", "0")) or min(len(jobs), os.cpu_count() or 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(lambda j: _run_cell(run, j[0], j[1]), jobs))
    else:
        cells = [_run_cell(run, case, row) for case, row in jobs]
    cells.sort(key=lambda c: (c.case_label, c.g0kt))
    return SweepReport(config=run, cells=cells)


def oracle_crosscheck(cfg, traj, series) -> float:
    """Pure-dephasing master-equation run vs the engine's Gamma series.

    Returns the relative deviation of the oracle fringe visibility from
    Gamma(t*)^(m_a L^2 / hbar) at a mid-decay time t*.
    """
    t_grid = series.grid.times
    cum = series.cumulative_d
    k = int(np.searchsorted(cum, 1.0))
    k = min(max(k, 2), len(t_grid) - 1)
    t_star = float(t_grid[k])
    L = traj.dx0
    width = L / 12.0
    x = make_position_grid(128, half_width=1.5 * L)
    rho0 = two_packet_density(x, separation=L, width=width)
    dt_bound = 0.5 * cfg.m_a * rho0.dx ** 2 / cfg.hbar
    n_steps = max(200, int(np.ceil(t_star / dt_bound)))
    dt = t_star / n_steps
    d_interp = lambda tau: float(np.interp(tau, t_grid, series.diffusion.d_values))
    out = evolve_density_matrix(
        cfg,
        CoefficientSet(d_diff=d_interp),
        rho0,
        t_final=t_star,
        dt=dt,
        freeze_kinetic=True,
        absorb=False,
    )
    packet = PacketSpec(center_plus=0.5 * L, center_minus=-0.5 * L)
    vis = fringe_visibility(out.final, packet) / fringe_visibility(rho0, packet)
    # grid-snapped branch separation
    xp = x[np.argmin(np.abs(x - 0.5 * L))]
    xm = x[np.argmin(np.abs(x + 0.5 * L))]
    expected = float(np.exp(-(cfg.m_a / cfg.hbar) * (xp - xm) ** 2 * cum[k]))
    if expected < 1e-12:
        return abs(vis - expected)
    return abs(vis - expected) / expected


def _fmt(x) -> str:
    return "" if x is None else FMT % x


def _cell_csv(cell: CellResult) -> str:
    s = cell.series
    d = s.diffusion
    lines = ["t,D_total,D_thermal,D_kernel,cum_D,Gamma"]
    for row in zip(
        s.grid.times, d.d_values, d.thermal_part, d.kernel_part, s.cumulative_d, s.gamma_values
    ):
        lines.append(",".join(FMT % v for v in row))
    return "\n".join(lines) + "\n"


def _summary_csv(report: SweepReport) -> str:
    with_oracle = report.config.oracle
    header = "case,gamma0kT,t_threshold,t_formula,epsilon"
    if with_oracle:
        header += ",oracle_agreement"
    lines = [header]
    for cell in report.cells:
        if cell.error is not None:
            continue
        row = [
            cell.case_label,
            FMT % cell.g0kt,
            _fmt(cell.t_threshold),
            _fmt(cell.t_formula),
            FMT % report.config.epsilon,
        ]
        if with_oracle:
            row.append(_fmt(cell.oracle_agreement))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _svg_panel(report: SweepReport, g0kt: float) -> str:
    """Gamma(t) vs t for the four cases at one temperature; best-effort plot."""
    width, height, pad = 640, 420, 50
    colors = {"a": "#1f77b4", "b": "#d62728", "c": "#2ca02c", "d": "#9467bd"}
    cells = [c for c in report.cells if c.g0kt == g0kt and c.error is None]
    t_max = max((c.t_max for c in cells), default=1.0)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2:.0f}" y="20" text-anchor="middle" font-size="14">'
        f"decoherence factor, gamma0*kbT = {g0kt:g}</text>",
        f'<line x1="{pad}" y1="{height-pad}" x2="{width-pad}" y2="{height-pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height-pad}" stroke="black"/>',
        f'<text x="{width/2:.0f}" y="{height-12}" text-anchor="middle" font-size="12">t</text>',
        f'<text x="15" y="{height/2:.0f}" font-size="12" '
        f'transform="rotate(-90 15 {height/2:.0f})">Gamma(t)</text>',
    ]
    for cell in cells:
        t = cell.series.grid.times
        g = cell.series.gamma_values
        step = max(1, len(t) // 400)
        pts = []
        for tk, gk in zip(t[::step], g[::step]):
            px = pad + (width - 2 * pad) * tk / t_max
            py = height - pad - (height - 2 * pad) * min(max(gk, 0.0), 1.0)
            pts.append(f"{px:.2f},{py:.2f}")
        parts.append(
            f'<polyline fill="none" stroke="{colors[cell.case_label]}" '
            f'stroke-width="1.5" points="{" ".join(pts)}"/>'
        )
        parts.append(
            f'<text x="{width-pad+6}" y="{pad + 16*"abcd".index(cell.case_label)}" '
            f'font-size="12" fill="{colors[cell.case_label]}">{cell.case_label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _g_tag(g0kt: float) -> str:
    return ("%g" % g0kt).replace(".", "p").replace("-", "m")


def emit_outputs(report: SweepReport, out_dir) -> dict:
    """Write CSVs (and SVG panels when requested); return {name: sha256}."""
    os.makedirs(out_dir, exist_ok=True)
    files = {}

    def write(name: str, text: str):
        payload = text.encode("utf-8")
        with open(os.path.join(out_dir, name), "wb") as fh:
            fh.write(payload)
        files[name] = hashlib.sha256(payload).hexdigest()

    if "csv" in report.config.formats:
        for cell in report.cells:
            if cell.error is not None:
                continue
            write(f"cell_{cell.case_label}_g{_g_tag(cell.g0kt)}.csv", _cell_csv(cell))
        write("summary.csv", _summary_csv(report))
    if "svg" in report.config.formats:
        for g0kt in report.config.temperatures:
            write(f"panel_g{_g_tag(g0kt)}.svg", _svg_panel(report, g0kt))

    manifest = {
        "files": dict(sorted(files.items())),
        "errors": {
            f"{c.case_label},g{_g_tag(c.g0kt)}": c.error for c in report.failures
        },
    }
    text = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    with open(os.path.join(out_dir, "manifest.json"), "wb") as fh:
        fh.write(text.encode("utf-8"))
    return manifest["files"]
