"""Stroboscopic evolution, magnetization series, and phase classification.

The per-spin magnetization m_z(n) = <Jz(n)> / (2j) lies in [-1/2, 1/2].
Phases are told apart by the order parameter (time mean minus the
late-window peak plus the initial value), the sample standard deviation
of the series, and the dominant subharmonic Fourier peak.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .operators import FloquetOperator, TopParameters, m_values
from .states import QuantumState


class PhaseLabel(enum.Enum):
    DF = "DF"
    DTC2 = "DTC2"
    DTC4 = "DTC4"
    THERMAL = "THERMAL"
    UNCLASSIFIED = "UNCLASSIFIED"


@dataclass(frozen=True)
class MagnetizationSeries:
    """m_z(0) ... m_z(N) for one drive, plus the initial-state descriptor."""

    values: np.ndarray
    params: TopParameters
    initial_state: str = "custom"

    def __post_init__(self) -> None:
        self.values.setflags(write=False)

    @property
    def n_steps(self) -> int:
        return len(self.values) - 1


def evolve_state(u: FloquetOperator, psi0: QuantumState, n: int) -> QuantumState:
    """Apply the one-period operator n times by repeated matrix-vector products."""
    if n < 0:
        raise ValueError("step count must be non-negative")
    if psi0.amplitudes.shape[0] != u.params.dim:
        raise ValueError("state dimension does not match the operator")
    amp = psi0.amplitudes.copy()
    for _ in range(n):
        amp = u.u @ amp
    return QuantumState(amplitudes=amp, j=psi0.j)


def magnetization_series(
    u: FloquetOperator,
    psi0: QuantumState,
    n_steps: int,
    label: str = "custom",
) -> MagnetizationSeries:
    """m_z(n) = <Jz(n)> / (2j) for n = 0 ... n_steps."""
    if n_steps < 1:
        raise ValueError("need at least one step")
    if psi0.amplitudes.shape[0] != u.params.dim:
        raise ValueError("state dimension does not match the operator")
    j = u.params.j
    weights = m_values(j) / (2.0 * j)
    amp = psi0.amplitudes.copy()
    values = np.empty(n_steps + 1)
    values[0] = np.sum(weights * np.abs(amp) ** 2)
    for n in range(1, n_steps + 1):
        amp = u.u @ amp
        values[n] = np.sum(weights * np.abs(amp) ** 2)
    return MagnetizationSeries(values=values, params=u.params, initial_state=label)


def average_series(series: list[MagnetizationSeries]) -> MagnetizationSeries:
    """Pointwise average over initial states (the outer average of the order parameter)."""
    if not series:
        raise ValueError("no series to average")
    if len(series) == 1:
        return series[0]
    lengths = {len(s.values) for s in series}
    if len(lengths) != 1:
        raise ValueError("series lengths differ")
    stacked = np.stack([s.values for s in series])
    label = "avg[" + ";".join(s.initial_state for s in series) + "]"
    return MagnetizationSeries(
        values=stacked.mean(axis=0), params=series[0].params, initial_state=label
    )


def order_parameter(series: MagnetizationSeries) -> float:
    """Time mean of m_z minus (late-window max |m_z| plus m_z(0)).

    The max runs over the second half of the run; with |j,-j> as the
    initial state this lands at -0.5, 0, +0.5 for frozen, period-doubled,
    and thermalized dynamics respectively.
    """
    n = series.n_steps
    if n < 4:
        raise ValueError("series too short for the order parameter")
    values = series.values
    time_mean = values[1:].mean()
    late_peak = np.max(np.abs(values[n // 2 :]))
    return float(time_mean - (late_peak + values[0]))


def magnetization_std(series: MagnetizationSeries) -> float:
    """Sample standard deviation (divisor N-1) of m_z(1) ... m_z(N)."""
    if series.n_steps < 2:
        raise ValueError("series too short for a standard deviation")
    return float(np.std(series.values[1:], ddof=1))


AMPLITUDE_FLOOR = 1e-10


def subharmonic_spectrum(series: MagnetizationSeries) -> list[tuple[float, float]]:
    """DFT magnitudes of the mean-subtracted series for f in [0, 1/2].

    Frequencies are in cycles per kick; entries below the amplitude floor
    are dropped, and the rest are sorted by descending amplitude.
    """
    n = series.n_steps
    if n < 16:
        raise ValueError("series too short for a spectrum")
    signal = series.values[1:] - series.values[1:].mean()
    amps = np.abs(np.fft.rfft(signal))
    freqs = np.fft.rfftfreq(n)
    keep = amps >= AMPLITUDE_FLOOR
    peaks = sorted(zip(freqs[keep], amps[keep]), key=lambda fa: -fa[1])
    return [(float(f), float(a)) for f, a in peaks]


def _infer_bin_width(spectrum: list[tuple[float, float]]) -> float:
    freqs = sorted(f for f, _ in spectrum)
    gaps = [b - a for a, b in zip(freqs, freqs[1:]) if b - a > 0]
    return min(gaps) if gaps else 0.0


def classify_phase(
    o: float,
    delta: float,
    spectrum: list[tuple[float, float]],
    tol: float = 0.1,
    *,
    bin_width: float | None = None,
    initial_value: float = -0.5,
) -> PhaseLabel:
    """Label a run DF / THERMAL / DTC2 / DTC4, else UNCLASSIFIED.

    Low-fluctuation runs are frozen or thermal depending on where the
    order parameter sits; oscillating runs are classified by whether the
    dominant subharmonic peak lies at f = 1/2 or f = 1/4, within one DFT
    bin.  Pass bin_width = 1/N for exact bin semantics; otherwise it is
    inferred from the spectrum.  Reference order-parameter values are
    derived from m_z(0) (defaults match the |j,-j> initial state).
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    df_reference = -abs(initial_value)
    thermal_reference = -initial_value
    if delta < tol:
        if abs(o - df_reference) < tol:
            return PhaseLabel.DF
        if abs(o - thermal_reference) < tol:
            return PhaseLabel.THERMAL
        return PhaseLabel.UNCLASSIFIED
    if not spectrum:
        return PhaseLabel.UNCLASSIFIED
    if bin_width is None:
        bin_width = _infer_bin_width(spectrum)
    f_peak = spectrum[0][0]
    if abs(f_peak - 0.5) <= bin_width + 1e-12:
        return PhaseLabel.DTC2
    if abs(f_peak - 0.25) <= bin_width + 1e-12:
        return PhaseLabel.DTC4
    return PhaseLabel.UNCLASSIFIED


def peak_contrast(
    spectrum: list[tuple[float, float]], f0: float, width: float
) -> float:
    """Fraction of total spectral amplitude within width of f0 (0 when empty)."""
    total = sum(a for _, a in spectrum)
    if total == 0.0:
        return 0.0
    near = sum(a for f, a in spectrum if abs(f - f0) <= width + 1e-12)
    return near / total


def detect_period(values: np.ndarray, max_period: int | None = None) -> tuple[int, float]:
    """Smallest shift with the least mismatch: returns (period, residual).

    The residual is max |v(n+P) - v(n)| over the overlap; a clean periodic
    signal gives a residual near zero at its true period.
    """
    n = len(values)
    if n < 4:
        raise ValueError("series too short for period detection")
    if max_period is None:
        max_period = n // 2
    max_period = min(max_period, n - 2)
    best_p, best_resid = 1, np.inf
    for p in range(1, max_period + 1):
        resid = float(np.max(np.abs(values[p:] - values[:-p])))
        if resid < best_resid - 1e-15:
            best_p, best_resid = p, resid
    return best_p, best_resid
