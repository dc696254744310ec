"""Large-j limit of the top: the kicked map on the unit sphere.

One step rotates (X, Z) by p about y and then twists about z by an angle
proportional to the new Z.  The map preserves the sphere exactly; any
numerical drift beyond threshold is renormalized and counted rather than
silently absorbed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

DRIFT_TOL = 1e-12
NORM_TOL = 1e-12


@dataclass(frozen=True)
class ClassicalPoint:
    """Direction cosines (x, y, z) on the unit sphere."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if abs(self.norm() - 1.0) >= NORM_TOL:
            raise ValueError(
                f"point is off the unit sphere (norm {self.norm()!r}); "
                "use ClassicalPoint.from_unnormalized to project"
            )

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @classmethod
    def from_unnormalized(cls, x: float, y: float, z: float) -> "ClassicalPoint":
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(x / n, y / n, z / n)


@dataclass
class DriftCounter:
    """Tally of renormalizations applied along a trajectory."""

    steps: int = 0
    renormalized: int = 0
    max_drift: float = 0.0


def classical_step(
    pt: ClassicalPoint, k: float, p: float, counter: DriftCounter | None = None
) -> ClassicalPoint:
    """One kick period of the map."""
    cp, sp = math.cos(p), math.sin(p)
    a = pt.x * cp + pt.z * sp
    z_new = pt.z * cp - pt.x * sp
    arg = k * z_new
    ca, sa = math.cos(arg), math.sin(arg)
    x_new = a * ca - pt.y * sa
    y_new = a * sa + pt.y * ca
    norm = math.sqrt(x_new * x_new + y_new * y_new + z_new * z_new)
    drift = abs(norm - 1.0)
    if counter is not None:
        counter.steps += 1
        counter.max_drift = max(counter.max_drift, drift)
    if drift > DRIFT_TOL:
        if counter is not None:
            counter.renormalized += 1
        x_new, y_new, z_new = x_new / norm, y_new / norm, z_new / norm
    return ClassicalPoint(x_new, y_new, z_new)


def trajectory(
    pt0: ClassicalPoint,
    k: float,
    p: float,
    n_steps: int = 300,
    counter: DriftCounter | None = None,
) -> list[ClassicalPoint]:
    """The stroboscopic orbit pt0, pt1, ..., pt_{n_steps}."""
    if n_steps < 1:
        raise ValueError("need at least one step")
    points = [pt0]
    pt = pt0
    for _ in range(n_steps):
        pt = classical_step(pt, k, p, counter)
        points.append(pt)
    return points


def to_angles(pt: ClassicalPoint) -> tuple[float, float]:
    """(theta, phi) chart; phi = 0 at the poles by convention."""
    theta = math.acos(max(-1.0, min(1.0, pt.z)))
    if abs(pt.z) >= 1.0 - 1e-15:
        return theta, 0.0
    return theta, math.atan2(pt.y, pt.x)


def from_angles(theta: float, phi: float) -> ClassicalPoint:
    st = math.sin(theta)
    return ClassicalPoint(st * math.cos(phi), st * math.sin(phi), math.cos(theta))


def one_step_jacobian(pt: ClassicalPoint, k: float, p: float) -> np.ndarray:
    """Partials of one map step in unconstrained (X, Y, Z) coordinates.

    The constraint direction is deliberately not projected out, so one
    eigen-direction of the matrix is normal to the sphere.
    """
    cp, sp = math.cos(p), math.sin(p)
    a = pt.x * cp + pt.z * sp
    z_new = pt.z * cp - pt.x * sp
    arg = k * z_new
    ca, sa = math.cos(arg), math.sin(arg)
    x_new = a * ca - pt.y * sa
    y_new = a * sa + pt.y * ca
    return np.array(
        [
            [cp * ca + k * sp * y_new, -sa, sp * ca - k * cp * y_new],
            [cp * sa - k * sp * x_new, ca, sp * sa + k * cp * x_new],
            [-sp, 0.0, cp],
        ]
    )


def orbit_jacobian(
    pt0: ClassicalPoint, k: float, p: float, n_steps: int
) -> np.ndarray:
    """Chain-rule Jacobian of the n-step composed map along the orbit."""
    if n_steps < 1:
        raise ValueError("need at least one step")
    total = np.eye(3)
    pt = pt0
    for _ in range(n_steps):
        total = one_step_jacobian(pt, k, p) @ total
        pt = classical_step(pt, k, p)
    return total


def linearized_jacobian(k: float) -> np.ndarray:
    """Small-angle form of the one-step Jacobian at (1, 0, 0), p = pi/2."""
    return np.array([[0.0, k, 1.0], [0.0, 1.0, -k], [-1.0, 0.0, 0.0]])


class StabilityClass(enum.Enum):
    SPIRAL_SADDLE = "SPIRAL_SADDLE"
    MARGINAL = "MARGINAL"
    EXPANDING = "EXPANDING"
    CONTRACTING = "CONTRACTING"
    OTHER = "OTHER"


@dataclass(frozen=True)
class StabilityReport:
    jacobian: np.ndarray
    eigenvalues: np.ndarray
    classification: StabilityClass


def stability_classify(m: np.ndarray, tol: float = 1e-9) -> StabilityReport:
    """Classify a 3x3 stability matrix by its eigenvalue pattern.

    A spiral saddle has one real eigenvalue beyond 1 and a complex pair
    with negative real parts; marginal means all moduli within tol of 1.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {m.shape}")
    ev = np.linalg.eigvals(m)
    ev = ev[np.argsort(-ev.real)]
    real_mask = np.abs(ev.imag) <= tol
    classification = StabilityClass.OTHER
    if np.count_nonzero(real_mask) == 1:
        real_ev = ev[real_mask][0].real
        pair = ev[~real_mask]
        conjugate = abs(pair[0] - pair[1].conjugate()) <= 1e-6 * max(1.0, abs(pair[0]))
        if real_ev > 1.0 + tol and conjugate and np.all(pair.real < 0.0):
            classification = StabilityClass.SPIRAL_SADDLE
    if classification is StabilityClass.OTHER:
        moduli = np.abs(ev)
        if np.all(np.abs(moduli - 1.0) <= tol):
            classification = StabilityClass.MARGINAL
        elif np.all(moduli > 1.0 + tol):
            classification = StabilityClass.EXPANDING
        elif np.all(moduli < 1.0 - tol):
            classification = StabilityClass.CONTRACTING
    return StabilityReport(jacobian=m, eigenvalues=ev, classification=classification)


def stability_scan(
    k_values, tol: float = 1e-9
) -> list[tuple[float, StabilityClass]]:
    """Classification of the linearized matrix across kick strengths.

    The bounds of the spiral-saddle window are an empirical output of
    this scan, not a hard-coded constant.
    """
    return [
        (float(k), stability_classify(linearized_jacobian(k), tol).classification)
        for k in k_values
    ]
