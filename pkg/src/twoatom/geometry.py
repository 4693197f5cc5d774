"""Coupling fraction kappa from the solid angle collected by the lens.

The dipole points along z. The collection cone has half-angle ``half_angle``
and its axis is tilted by ``axis_tilt`` from z inside the x-z plane.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

QUAD_EPSABS = 1e-10


def _check_angles(half_angle: float, axis_tilt: float) -> None:
    if not 0.0 <= half_angle <= math.pi:
        raise ValueError(f"half_angle must lie in [0, pi], got {half_angle}")
    if not 0.0 <= axis_tilt <= math.pi / 2:
        raise ValueError(f"axis_tilt must lie in [0, pi/2], got {axis_tilt}")


def kappa_cone_analytic(half_angle: float) -> float:
    """Closed form for a cone whose axis is parallel to the dipole."""
    _check_angles(half_angle, 0.0)
    cos_a = math.cos(half_angle)
    return 0.75 * ((1.0 - cos_a) - (1.0 - cos_a**3) / 3.0)


def kappa_from_cone(half_angle: float, axis_tilt: float = 0.0) -> float:
    """Dipole-weighted solid-angle fraction of a circular cone.

    Computes ``3/(8 pi) * integral over the cap of (1 - (p.k)^2) dOmega`` with
    adaptive 2D quadrature in cone-centred spherical coordinates.

    Parameters
    ----------
    half_angle : float
        Cone half-angle in radians, ``0 <= half_angle <= pi``.
    axis_tilt : float
        Angle between the cone axis and the dipole, ``0 <= axis_tilt <= pi/2``.

    Returns
    -------
    float
        kappa in [0, 1].
    """
    _check_angles(half_angle, axis_tilt)
    if half_angle == 0.0:
        return 0.0
    if half_angle == math.pi:
        # the cap is the whole sphere whatever its orientation
        return 1.0

    cb, sb = math.cos(axis_tilt), math.sin(axis_tilt)

    def integrand(phi, theta):
        kz = math.cos(theta) * cb - math.sin(theta) * math.cos(phi) * sb
        return (1.0 - kz * kz) * math.sin(theta)

    value, _ = integrate.dblquad(
        integrand, 0.0, half_angle, 0.0, 2.0 * math.pi, epsabs=QUAD_EPSABS, epsrel=1e-12
    )
    return float(np.clip(3.0 / (8.0 * math.pi) * value, 0.0, 1.0))
