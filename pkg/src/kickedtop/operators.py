"""Angular-momentum operators and the one-period evolution operator.

Everything downstream fixes the basis ordering m = j, j-1, ..., -j, so
index 0 is the maximal-weight state |j, j> and index d-1 is |j, -j>.
Matrix exponentials of Hermitian generators go through a one-time
eigendecomposition, which keeps the results unitary to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-12


def validate_j(j: float) -> int:
    """Check that j is a half-integer >= 1/2 and return the dimension 2j+1."""
    two_j = 2.0 * j
    if abs(two_j - round(two_j)) > 1e-9:
        raise ValueError(f"2j must be an integer, got j={j}")
    if j < 0.5:
        raise ValueError(f"j must be at least 1/2, got j={j}")
    return int(round(two_j)) + 1


def m_values(j: float) -> np.ndarray:
    """Magnetic quantum numbers in descending order j, j-1, ..., -j."""
    d = validate_j(j)
    return j - np.arange(d)


@dataclass(frozen=True)
class TopParameters:
    """Model parameters: spin j, kick strength k, precession angle p per period."""

    j: float
    k: float
    p: float
    tau: float = 1.0

    def __post_init__(self) -> None:
        validate_j(self.j)
        if self.tau != 1.0:
            raise ValueError("the drive period is fixed to tau = 1")

    @property
    def dim(self) -> int:
        return int(round(2 * self.j)) + 1

    @property
    def n_spins(self) -> int:
        """Number of constituent spin-1/2's, N_s = 2j."""
        return int(round(2 * self.j))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class OperatorSet:
    """Dense angular-momentum matrices at fixed j (hbar = 1)."""

    j: float
    dim: int
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray

    def axis(self, name: str) -> np.ndarray:
        try:
            return {"x": self.jx, "y": self.jy, "z": self.jz}[name]
        except KeyError:
            raise ValueError(f"axis must be one of x, y, z, got {name!r}") from None

    @cached_property
    def casimir(self) -> np.ndarray:
        """J^2 = Jx^2 + Jy^2 + Jz^2, equal to j(j+1) times the identity."""
        return _freeze(self.jx @ self.jx + self.jy @ self.jy + self.jz @ self.jz)


def build_angular_momentum_ops(j: float) -> OperatorSet:
    """Construct Jx, Jy, Jz and the ladder operators for spin j.

    Jz is diagonal with entries m; J+ raises m by one with matrix element
    sqrt(j(j+1) - m(m+1)).
    """
    d = validate_j(j)
    m = m_values(j)
    jz = np.diag(m.astype(complex))
    jplus = np.zeros((d, d), dtype=complex)
    lower_m = m[1:]  # the m being raised, j-1 ... -j
    jplus[np.arange(d - 1), np.arange(1, d)] = np.sqrt(
        j * (j + 1) - lower_m * (lower_m + 1)
    )
    jminus = jplus.conj().T.copy()
    jx = (jplus + jminus) / 2.0
    jy = (jplus - jminus) / 2.0j
    return OperatorSet(
        j=j,
        dim=d,
        jx=_freeze(jx),
        jy=_freeze(jy),
        jz=_freeze(jz),
        jplus=_freeze(jplus),
        jminus=_freeze(jminus),
    )


def hermitian_unitary(g: np.ndarray, s: float) -> np.ndarray:
    """exp(-i*s*g) for Hermitian g, via eigendecomposition of g."""
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"generator must be square, got shape {g.shape}")
    if np.max(np.abs(g - g.conj().T)) >= HERMITICITY_TOL:
        raise ValueError("generator is not Hermitian")
    lam, vec = np.linalg.eigh(g)
    return (vec * np.exp(-1j * s * lam)) @ vec.conj().T


def kick_phases(j: float, k: float) -> np.ndarray:
    """Diagonal of exp(-i*(k/2j)*Jz^2) in the descending-m basis."""
    m = m_values(j)
    return np.exp(-1j * k * m**2 / (2.0 * j))


@dataclass(frozen=True)
class FloquetOperator:
    """One-period evolution operator u = exp(-i(k/2j)Jz^2) exp(-i p Jy)."""

    u: np.ndarray
    params: TopParameters

    def __post_init__(self) -> None:
        d = self.params.dim
        if self.u.shape != (d, d):
            raise ValueError(f"operator shape {self.u.shape} does not match d={d}")
        dev = np.max(np.abs(self.u @ self.u.conj().T - np.eye(d)))
        if dev >= UNITARITY_TOL:
            raise ValueError(f"operator is not unitary (deviation {dev:.3e})")
        _freeze(self.u)


def build_floquet(params: TopParameters, ops: OperatorSet) -> FloquetOperator:
    """Rotation by p about y followed by the quadratic kick about z.

    The kick factor is diagonal in the chosen basis and is applied as
    elementwise phases, never as a dense exponential.
    """
    if ops.dim != params.dim:
        raise ValueError("operator set and parameters disagree on dimension")
    rot = hermitian_unitary(ops.jy, params.p)
    u = kick_phases(params.j, params.k)[:, None] * rot
    return FloquetOperator(u=u, params=params)


def build_parity(ops: OperatorSet) -> np.ndarray:
    """Rotation by pi about y; commutes with the one-period operator."""
    return hermitian_unitary(ops.jy, np.pi)


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    """Max-abs entry of the commutator a@b - b@a."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a @ b - b @ a)))


class FloquetBuilder:
    """Builds one-period operators at fixed j, reusing the Jy eigendecomposition.

    One eigh of Jy serves every (k, p) pair of a sweep; with cache=False
    each build recomputes it through build_floquet, which is useful to
    check that caching does not change results.
    """

    def __init__(self, j: float, cache: bool = True):
        self.ops = build_angular_momentum_ops(j)
        self.cache = cache
        if cache:
            self._lam, self._vec = np.linalg.eigh(self.ops.jy)

    def build(self, k: float, p: float) -> FloquetOperator:
        params = TopParameters(j=self.ops.j, k=k, p=p)
        if not self.cache:
            return build_floquet(params, self.ops)
        rot = (self._vec * np.exp(-1j * p * self._lam)) @ self._vec.conj().T
        u = kick_phases(params.j, k)[:, None] * rot
        return FloquetOperator(u=u, params=params)
