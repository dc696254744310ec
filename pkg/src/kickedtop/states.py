"""Basis states, spin coherent states, and expectation values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import build_angular_momentum_ops, hermitian_unitary, validate_j

NORM_TOL = 1e-12
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class QuantumState:
    """Normalized amplitude vector in the descending-m basis |j,j> ... |j,-j>."""

    amplitudes: np.ndarray
    j: float

    def __post_init__(self) -> None:
        d = validate_j(self.j)
        if self.amplitudes.shape != (d,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, expected ({d},)"
            )
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) >= NORM_TOL:
            raise ValueError(f"state is not normalized (norm {norm!r})")
        self.amplitudes.setflags(write=False)


def basis_state(j: float, m: float) -> QuantumState:
    """The eigenstate |j, m> of Jz."""
    d = validate_j(j)
    if abs((j - m) - round(j - m)) > 1e-9 or not -j <= m <= j:
        raise ValueError(f"m={m} is not a valid projection for j={j}")
    amp = np.zeros(d, dtype=complex)
    amp[int(round(j - m))] = 1.0
    return QuantumState(amplitudes=amp, j=j)


def reduce_to_chart(theta: float, phi: float) -> tuple[float, float]:
    """Map arbitrary angles onto theta in [0, pi], phi in [0, 2pi)."""
    theta = theta % (2.0 * np.pi)
    if theta > np.pi:
        theta = 2.0 * np.pi - theta
        phi = phi + np.pi
    return theta, phi % (2.0 * np.pi)


def spin_coherent_state(j: float, theta: float, phi: float) -> QuantumState:
    """Rotate |j, j> so that <J> points along (theta, phi).

    The state is exp(i*theta*(Jx sin(phi) - Jy cos(phi))) |j, j>; its
    expectation vector is j*(sin t cos f, sin t sin f, cos t).
    """
    theta, phi = reduce_to_chart(theta, phi)
    ops = build_angular_momentum_ops(j)
    generator = ops.jx * np.sin(phi) - ops.jy * np.cos(phi)
    rot = hermitian_unitary(generator, -theta)
    amp = rot[:, 0].copy()  # action on |j, j>
    amp /= np.linalg.norm(amp)
    return QuantumState(amplitudes=amp, j=j)


def expectation(state: QuantumState, op: np.ndarray) -> float:
    """<psi|op|psi> for Hermitian op; the imaginary part must be negligible."""
    d = state.amplitudes.shape[0]
    if op.shape != (d, d):
        raise ValueError(f"operator shape {op.shape} does not match state dim {d}")
    value = np.vdot(state.amplitudes, op @ state.amplitudes)
    if abs(value.imag) >= IMAG_TOL:
        raise ValueError(
            f"expectation has imaginary part {value.imag:.3e}; operator not Hermitian?"
        )
    return float(value.real)


def bloch_vector(state: QuantumState, ops) -> np.ndarray:
    """(<Jx>, <Jy>, <Jz>) as a length-3 array."""
    return np.array(
        [expectation(state, ops.jx), expectation(state, ops.jy), expectation(state, ops.jz)]
    )
