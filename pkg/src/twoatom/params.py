"""Physical parameters and delayed collective rates.

Units: hbar = 1 and the single-atom decay rate Gamma = 1, so every time is
Gamma*t and every rate is in units of Gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless description of two atoms coupled through a lens.

    Parameters
    ----------
    kappa : float
        Fraction of the emitted modes refocused onto the partner atom.
    phase : float
        Propagation phase omega_0 * tau in radians. Only enters through
        cos/sin, so it is stored unreduced.
    gamma_tau : float
        Photon propagation delay in units of 1/Gamma.
    """

    kappa: float
    phase: float
    gamma_tau: float

    def __post_init__(self):
        if not (0.0 <= self.kappa <= 1.0):
            raise ValueError(f"kappa must lie in [0, 1], got {self.kappa}")
        if not self.gamma_tau >= 0.0:
            raise ValueError(f"gamma_tau must be >= 0, got {self.gamma_tau}")
        if not math.isfinite(self.phase):
            raise ValueError(f"phase must be finite, got {self.phase}")

    @property
    def c(self) -> float:
        """Collective damping strength kappa*cos(phase) once the delay has elapsed."""
        return self.kappa * math.cos(self.phase)

    @property
    def s(self) -> float:
        """kappa*sin(phase); twice the coherent coupling once active."""
        return self.kappa * math.sin(self.phase)


@dataclass(frozen=True)
class CollectiveRates:
    gamma_12: float
    omega_12: float


def collective_rates(params: SystemParams, t: float) -> CollectiveRates:
    """Delayed cross-damping and coherent coupling at time ``t``.

    Both vanish for ``t <= gamma_tau`` (step function taken as 0 at the jump).
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t <= params.gamma_tau:
        return CollectiveRates(0.0, 0.0)
    return CollectiveRates(params.c, 0.5 * params.s)


def active_rates(params: SystemParams) -> CollectiveRates:
    """Rates in the regime after the delay, independent of the actual time."""
    return CollectiveRates(params.c, 0.5 * params.s)


def collective_energies(params: SystemParams, omega_0: float) -> tuple[float, float, float, float]:
    """Energies ``(E_g, E_a, E_s, E_e)`` of the Dicke states with couplings active."""
    omega_12 = active_rates(params).omega_12
    return (0.0, omega_0 - omega_12, omega_0 + omega_12, 2.0 * omega_0)
