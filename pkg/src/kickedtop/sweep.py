"""(k, p) grid sweeps producing per-cell phase diagnostics.

Cells are pure functions of (j, k, p, initial states, kick count), so the
grid can be filled by any number of workers in any order and, merged by
index, always yields the same result.  At fixed j the Jy eigendecomposition
is computed once per process and reused for every cell.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import parsing
from .dynamics import (
    PhaseLabel,
    average_series,
    classify_phase,
    magnetization_series,
    magnetization_std,
    order_parameter,
    subharmonic_spectrum,
)
from .operators import FloquetBuilder, validate_j
from .spectral import eigenphases, level_spacing_ratios, mean_r

SWEEP_DIAGNOSTICS = ("O", "delta", "mean_r")
SERIES_DIAGNOSTICS = ("entropy", "otoc")
ALL_DIAGNOSTICS = SWEEP_DIAGNOSTICS + SERIES_DIAGNOSTICS


def axis_values(lo: float, hi: float, steps: int) -> np.ndarray:
    """steps evenly spaced values from lo to hi (a single point when steps=1)."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if steps == 1:
        return np.array([float(lo)])
    return np.linspace(float(lo), float(hi), steps)


@dataclass(frozen=True)
class SweepConfig:
    """Grid axes plus everything a cell needs to run."""

    j: float
    k_values: np.ndarray
    p_values: np.ndarray
    n_kicks: int = 4000
    init: tuple[str, ...] = ("basis:-j",)
    diagnostics: frozenset[str] = frozenset({"O", "delta", "mean_r"})
    workers: int = 1
    classify_tol: float = 0.1

    def __post_init__(self) -> None:
        validate_j(self.j)
        for name, values in (("k_values", self.k_values), ("p_values", self.p_values)):
            if len(values) == 0:
                raise ValueError(f"{name} is empty")
        if not self.init:
            raise ValueError("at least one initial state is required")
        unknown = set(self.diagnostics) - set(ALL_DIAGNOSTICS)
        if unknown:
            raise ValueError(f"unknown diagnostics: {sorted(unknown)}")
        if self.needs_evolution and self.n_kicks < 16:
            raise ValueError("n_kicks must be at least 16 when series diagnostics run")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.classify_tol <= 0:
            raise ValueError("classify_tol must be positive")
        self.k_values.setflags(write=False)
        self.p_values.setflags(write=False)

    @property
    def needs_evolution(self) -> bool:
        return bool({"O", "delta"} & self.diagnostics)

    @property
    def wants_label(self) -> bool:
        return {"O", "delta"} <= self.diagnostics


@dataclass
class PhaseDiagramGrid:
    """Per-cell diagnostics on the (k, p) grid; unavailable entries are NaN."""

    k_values: np.ndarray
    p_values: np.ndarray
    order: np.ndarray
    delta: np.ndarray
    mean_r: np.ndarray
    labels: np.ndarray  # dtype=object, PhaseLabel or None
    errors: np.ndarray  # dtype=object, str or None

    @classmethod
    def empty(cls, k_values: np.ndarray, p_values: np.ndarray) -> "PhaseDiagramGrid":
        shape = (len(k_values), len(p_values))
        return cls(
            k_values=k_values,
            p_values=p_values,
            order=np.full(shape, np.nan),
            delta=np.full(shape, np.nan),
            mean_r=np.full(shape, np.nan),
            labels=np.full(shape, None, dtype=object),
            errors=np.full(shape, None, dtype=object),
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.k_values), len(self.p_values))

    def cell(self, ik: int, ip: int) -> dict:
        label = self.labels[ik, ip]
        return {
            "k": float(self.k_values[ik]),
            "p": float(self.p_values[ip]),
            "O": float(self.order[ik, ip]),
            "delta": float(self.delta[ik, ip]),
            "mean_r": float(self.mean_r[ik, ip]),
            "label": label.value if isinstance(label, PhaseLabel) else "NA",
            "error": self.errors[ik, ip],
        }


@lru_cache(maxsize=4)
def _builder(j: float) -> FloquetBuilder:
    return FloquetBuilder(j)


def compute_cell(
    j: float,
    k: float,
    p: float,
    init: tuple[str, ...],
    n_kicks: int,
    diagnostics: frozenset[str],
    classify_tol: float,
) -> dict:
    """All requested diagnostics for one (k, p) cell."""
    builder = _builder(j)
    u = builder.build(k, p)
    out: dict = {"O": np.nan, "delta": np.nan, "mean_r": np.nan, "label": None}
    if {"O", "delta"} & diagnostics:
        runs = []
        for spec in init:
            psi0, label = parsing.parse_init(spec, j)
            runs.append(magnetization_series(u, psi0, n_kicks, label=label))
        series = average_series(runs)
        o = order_parameter(series)
        delta = magnetization_std(series)
        if "O" in diagnostics:
            out["O"] = o
        if "delta" in diagnostics:
            out["delta"] = delta
        if {"O", "delta"} <= diagnostics:
            spectrum = subharmonic_spectrum(series)
            out["label"] = classify_phase(
                o,
                delta,
                spectrum,
                tol=classify_tol,
                bin_width=1.0 / n_kicks,
                initial_value=series.values[0],
            )
    if "mean_r" in diagnostics:
        out["mean_r"] = mean_r(level_spacing_ratios(eigenphases(u)))
    return out


def _cell_worker(payload: tuple) -> tuple[int, int, dict]:
    ik, ip, j, k, p, init, n_kicks, diagnostics, classify_tol = payload
    try:
        cell = compute_cell(j, k, p, init, n_kicks, diagnostics, classify_tol)
    except Exception as exc:  # recorded per cell, sweep continues
        cell = {"error": f"{type(exc).__name__}: {exc}"}
    return ik, ip, cell


def run_sweep(
    cfg: SweepConfig,
    precomputed: dict[tuple[int, int], dict] | None = None,
) -> PhaseDiagramGrid:
    """Fill the grid, cell by cell; precomputed cells are reused verbatim."""
    grid = PhaseDiagramGrid.empty(np.asarray(cfg.k_values), np.asarray(cfg.p_values))
    precomputed = precomputed or {}
    todo = []
    for ik, k in enumerate(cfg.k_values):
        for ip, p in enumerate(cfg.p_values):
            if (ik, ip) in precomputed:
                _store(grid, ik, ip, precomputed[(ik, ip)])
            else:
                todo.append(
                    (
                        ik,
                        ip,
                        cfg.j,
                        float(k),
                        float(p),
                        cfg.init,
                        cfg.n_kicks,
                        cfg.diagnostics,
                        cfg.classify_tol,
                    )
                )
    if cfg.workers == 1 or len(todo) <= 1:
        results = map(_cell_worker, todo)
        for ik, ip, cell in results:
            _store(grid, ik, ip, cell)
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for ik, ip, cell in pool.map(_cell_worker, todo, chunksize=1):
                _store(grid, ik, ip, cell)
    return grid


def _store(grid: PhaseDiagramGrid, ik: int, ip: int, cell: dict) -> None:
    if cell.get("error"):
        grid.errors[ik, ip] = cell["error"]
        return
    grid.order[ik, ip] = cell.get("O", np.nan)
    grid.delta[ik, ip] = cell.get("delta", np.nan)
    grid.mean_r[ik, ip] = cell.get("mean_r", np.nan)
    label = cell.get("label")
    if isinstance(label, str):
        label = PhaseLabel(label) if label in PhaseLabel._value2member_map_ else None
    grid.labels[ik, ip] = label


def default_workers() -> int:
    env = os.environ.get("KICKEDTOP_WORKERS")
    if env:
        return max(1, int(env))
    return 1
