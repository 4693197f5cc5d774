"""Two-qubit density matrices, X-states and the bare <-> collective change of basis.

Bare product basis, in this order::

    |1> = |g1 g2>,  |2> = |g1 e2>,  |3> = |e1 g2>,  |4> = |e1 e2>

Collective (Dicke) basis::

    |g> = |1>,  |s> = (|3> + |2>)/sqrt(2),  |a> = (|3> - |2>)/sqrt(2),  |e> = |4>

Coherences are stored as ``rho_as = <s|rho|a>`` and ``rho_eg = <e|rho|g>``.
With this reading the free evolution of ``rho_as`` has the phase factor
``exp(-2i Omega_12 t)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

X_TOL = 1e-10

SQRT_HALF = np.sqrt(0.5)

# columns are |g>, |s>, |a>, |e> written in the bare basis
DICKE = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, SQRT_HALF, -SQRT_HALF, 0.0],
        [0.0, SQRT_HALF, SQRT_HALF, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)

# entries that must vanish for a matrix of X form (same in both bases)
_NON_X = np.ones((4, 4), dtype=bool)
_NON_X[np.arange(4), np.arange(4)] = False
_NON_X[np.arange(4), 3 - np.arange(4)] = False


class StateError(ValueError):
    """A matrix is not a valid two-qubit density matrix or left the X family."""


@dataclass(frozen=True)
class XState:
    """Non-zero elements of an X-form two-qubit density matrix, collective basis.

    Fields may be scalars or equally shaped numpy arrays (one entry per time).
    The same container is used for time derivatives, in which case the
    density-matrix invariants do not apply.
    """

    rho_ee: float = 0.0
    rho_ss: float = 0.0
    rho_aa: float = 0.0
    rho_as: complex = 0.0
    rho_eg: complex = 0.0
    rho_gg: float = 0.0

    def check(self, tol: float = 1e-12, minor_tol: float = 1e-10) -> None:
        """Raise ``StateError`` unless populations, trace and 2x2 minors are physical."""
        pops = np.array([self.rho_gg, self.rho_ee, self.rho_ss, self.rho_aa], dtype=float)
        trace = pops.sum(axis=0)
        if np.any(np.abs(trace - 1.0) > tol):
            raise StateError(f"populations sum to {trace}, expected 1")
        if np.any(pops < -tol):
            raise StateError("negative population")
        if np.any(np.abs(self.rho_as) ** 2 > self.rho_aa * self.rho_ss + minor_tol):
            raise StateError("|rho_as|^2 exceeds rho_aa*rho_ss")
        if np.any(np.abs(self.rho_eg) ** 2 > self.rho_ee * self.rho_gg + minor_tol):
            raise StateError("|rho_eg|^2 exceeds rho_ee*rho_gg")

    def as_array(self) -> np.ndarray:
        """Stack into a complex array with trailing axis (ee, ss, aa, as, eg, gg)."""
        return np.stack(
            np.broadcast_arrays(*(np.asarray(getattr(self, f.name), dtype=complex) for f in fields(self))),
            axis=-1,
        )

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "XState":
        arr = np.asarray(arr)
        x = cls(arr[..., 0].real, arr[..., 1].real, arr[..., 2].real, arr[..., 3], arr[..., 4], arr[..., 5].real)
        return _scalarize(x) if arr.ndim == 1 else x


def _scalarize(x: XState) -> XState:
    return XState(*(np.asarray(getattr(x, f.name)).item() for f in fields(x)))


def one_excited_initial(atom: int = 1) -> XState:
    """Product state with exactly one atom excited (``atom`` = 1 or 2)."""
    if atom not in (1, 2):
        raise ValueError("atom must be 1 or 2")
    sign = 1.0 if atom == 1 else -1.0
    return XState(rho_ss=0.5, rho_aa=0.5, rho_as=0.5 * sign)


def both_excited_initial() -> XState:
    return XState(rho_ee=1.0)


def ground_state() -> XState:
    return XState(rho_gg=1.0)


def collective_matrix(x: XState) -> np.ndarray:
    """Full 4x4 matrix in the collective basis ordered (g, s, a, e)."""
    arr = x.as_array()
    m = np.zeros(arr.shape[:-1] + (4, 4), dtype=complex)
    m[..., 0, 0] = arr[..., 5]
    m[..., 1, 1] = arr[..., 1]
    m[..., 2, 2] = arr[..., 2]
    m[..., 3, 3] = arr[..., 0]
    m[..., 1, 2] = arr[..., 3]
    m[..., 2, 1] = np.conj(arr[..., 3])
    m[..., 3, 0] = arr[..., 4]
    m[..., 0, 3] = np.conj(arr[..., 4])
    return m


def collective_to_bare(x: XState) -> np.ndarray:
    """Bare-basis density matrix of an X-state (batched over any array shape)."""
    return DICKE @ collective_matrix(x) @ DICKE.T


def x_leakage(rho: np.ndarray) -> np.ndarray:
    """Largest magnitude among the entries that vanish for X-form matrices."""
    rho = np.asarray(rho)
    return np.max(np.abs(rho[..., _NON_X]), axis=-1)


def bare_to_collective(rho: np.ndarray, tol: float = X_TOL) -> XState:
    """Collective-basis X-state elements of a bare-basis matrix.

    Raises
    ------
    StateError
        If any non-X element exceeds ``tol`` in magnitude.
    """
    rho = np.asarray(rho, dtype=complex)
    leak = x_leakage(rho)
    if np.any(leak > tol):
        raise StateError(f"matrix is not of X form (max off-pattern element {np.max(leak):.3e})")
    m = DICKE.T @ rho @ DICKE
    x = XState(
        rho_ee=m[..., 3, 3].real,
        rho_ss=m[..., 1, 1].real,
        rho_aa=m[..., 2, 2].real,
        rho_as=m[..., 1, 2],
        rho_eg=m[..., 3, 0],
        rho_gg=m[..., 0, 0].real,
    )
    return _scalarize(x) if rho.ndim == 2 else x


def check_density_matrix(rho: np.ndarray, tol: float = 1e-12, eig_tol: float = 1e-10) -> None:
    """Raise ``StateError`` unless ``rho`` is Hermitian, unit-trace and PSD."""
    rho = np.asarray(rho)
    if rho.shape[-2:] != (4, 4):
        raise StateError(f"expected a 4x4 matrix, got shape {rho.shape}")
    herm = np.max(np.abs(rho - np.swapaxes(rho.conj(), -1, -2)))
    if herm > tol:
        raise StateError(f"not Hermitian (max |rho - rho^dag| = {herm:.3e})")
    tr = np.trace(rho, axis1=-2, axis2=-1)
    if np.any(np.abs(tr - 1.0) > tol):
        raise StateError("trace differs from 1")
    hermitian_part = 0.5 * (rho + np.swapaxes(rho.conj(), -1, -2))
    if np.min(np.linalg.eigvalsh(hermitian_part)) < -eig_tol:
        raise StateError("matrix has a negative eigenvalue")


@dataclass
class Trajectory:
    """Time grid with the X-state elements (and optionally concurrence) at each time."""

    t: np.ndarray
    states: XState
    concurrence: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.t)

    def element(self, name: str) -> np.ndarray:
        if name == "concurrence":
            if self.concurrence is None:
                raise KeyError("trajectory carries no concurrence")
            return self.concurrence
        if name in ("re_rho_as", "im_rho_as"):
            z = np.asarray(self.states.rho_as)
            return z.real if name.startswith("re") else z.imag
        return np.asarray(getattr(self.states, name))
