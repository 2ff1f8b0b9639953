"""Bloch-vector dynamics of a single driven qubit.

Three pulse envelopes are supported. The rectangular pulse allows arbitrary
detuning and is solved in the scaled time ``Omega0 * t``. The exponential and
sin^2 pulses are solved at exact resonance, where the Bloch vector rotates
about the x axis by the time integral of the Rabi frequency.

Every evolution here is linear in the initial Bloch vector, so it is
represented by a 3x3 matrix acting on ``s(0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

Mode = Literal["exact", "paper"]
Param = Literal["theta", "phi"]

MODES = ("exact", "paper")
PARAMS = ("theta", "phi")


@dataclass(frozen=True)
class CoherentStateAngles:
    """Polar weight ``theta`` and azimuthal phase ``phi`` of the initial state."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not (0.0 <= self.phi <= 2.0 * math.pi):
            raise ValueError(f"phi must lie in [0, 2pi], got {self.phi!r}")

    def replace(self, which: Param, value: float) -> "CoherentStateAngles":
        if which == "theta":
            return CoherentStateAngles(value, self.phi)
        if which == "phi":
            return CoherentStateAngles(self.theta, value)
        raise ValueError(f"unknown parameter {which!r}")

    def get(self, which: Param) -> float:
        if which not in PARAMS:
            raise ValueError(f"unknown parameter {which!r}")
        return getattr(self, which)

    def bounds(self, which: Param) -> tuple[float, float]:
        return (0.0, math.pi) if which == "theta" else (0.0, 2.0 * math.pi)


@dataclass(frozen=True)
class BlochVector:
    sx: float
    sy: float
    sz: float

    @classmethod
    def from_array(cls, a) -> "BlochVector":
        a = np.asarray(a, dtype=float)
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz])

    @property
    def norm(self) -> float:
        return math.sqrt(self.sx * self.sx + self.sy * self.sy + self.sz * self.sz)


# Pulse configurations. Each one fixes which dimensionless time variable
# ``tau`` refers to: Omega0*t (rectangular), gamma_p*t (exponential),
# omega_q*t (sin^2).


@dataclass(frozen=True)
class Rectangular:
    delta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.delta):
            raise ValueError(f"delta must be finite, got {self.delta!r}")

    def envelope(self, tau):
        return np.ones_like(np.asarray(tau, dtype=float))

    @property
    def detuning(self) -> float:
        return self.delta


@dataclass(frozen=True)
class Exponential:
    omega0_over_gamma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.omega0_over_gamma) and self.omega0_over_gamma > 0):
            raise ValueError("omega0_over_gamma must be a positive finite number")

    def envelope(self, tau):
        # Rabi frequency in units of gamma_p, as a function of gamma_p * t
        return self.omega0_over_gamma * np.exp(-np.asarray(tau, dtype=float))

    @property
    def detuning(self) -> float:
        return 0.0


@dataclass(frozen=True)
class SinSquared:
    omega_prime: float = 1.0
    n: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.omega_prime) and self.omega_prime > 0):
            raise ValueError("omega_prime must be a positive finite number")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    def envelope(self, tau):
        # Rabi frequency in units of omega_q, as a function of omega_q * t
        return self.omega_prime * np.sin(self.n * np.asarray(tau, dtype=float)) ** 2

    @property
    def detuning(self) -> float:
        return 0.0


PulseConfig = Union[Rectangular, Exponential, SinSquared]

PULSE_NAMES = {"rect": Rectangular, "exp": Exponential, "sin2": SinSquared}


def pulse_name(pulse: PulseConfig) -> str:
    for name, cls in PULSE_NAMES.items():
        if isinstance(pulse, cls):
            return name
    raise TypeError(f"not a pulse configuration: {pulse!r}")


# -- initial state -----------------------------------------------------------


def _theta_trig(theta: float) -> tuple[float, float]:
    # exact at the south pole so that phi-derivatives vanish identically there
    if theta == math.pi:
        return 0.0, -1.0
    return math.sin(theta), math.cos(theta)


def initial_bloch(angles: CoherentStateAngles) -> BlochVector:
    """Bloch vector ``(sin t cos p, sin t sin p, -cos t)`` of the coherent state."""
    st, ct = _theta_trig(angles.theta)
    sp, cp = math.sin(angles.phi), math.cos(angles.phi)
    return BlochVector(st * cp, st * sp, -ct)


def d_initial_bloch(angles: CoherentStateAngles, which: Param) -> np.ndarray:
    """Partial derivative of :func:`initial_bloch` with respect to ``which``."""
    st, ct = _theta_trig(angles.theta)
    sp, cp = math.sin(angles.phi), math.cos(angles.phi)
    if which == "theta":
        return np.array([ct * cp, ct * sp, st])
    if which == "phi":
        return np.array([-st * sp, st * cp, 0.0])
    raise ValueError(f"unknown parameter {which!r}")


# -- rotations ---------------------------------------------------------------


def _cross_matrix(axis: np.ndarray) -> np.ndarray:
    x, y, z = axis
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def axis_angle_matrix(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation by ``angle`` about the unit vector ``axis``."""
    axis = np.asarray(axis, dtype=float)
    k = _cross_matrix(axis)
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def rect_rotation_exact(delta: float, tau: float) -> np.ndarray:
    """Evolution matrix of a rectangular pulse with detuning ``delta``.

    Solves ``ds/dtau = (1, 0, delta) x s``: a rotation by ``tau*sqrt(1+delta^2)``
    about ``(1, 0, delta)/sqrt(1+delta^2)``.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    root = math.sqrt(1.0 + delta * delta)
    return axis_angle_matrix((1.0 / root, 0.0, delta / root), tau * root)


def rect_rotation_paper(delta: float, tau: float) -> np.ndarray:
    """Rectangular-pulse coefficient matrix transcribed entry by entry as printed.

    This matrix is not orthogonal for general ``delta, tau``; it exists only
    to compare against the exact rotation. Unbalanced bracket groups in the
    printed s_x row are read left to right.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    if not math.isfinite(delta):
        raise ValueError(f"delta must be finite, got {delta!r}")
    eta = 1.0 + delta * delta
    r = math.sqrt(eta)
    c, s = math.cos(tau * r), math.sin(tau * r)
    d2 = delta * delta
    return np.array(
        [
            [
                (1.0 / eta + d2 * c) - delta * s / r,
                (1.0 + 2.0 * d2) / (2.0 * eta) + c / (2.0 * eta) + delta * s / r,
                delta / eta * (1.0 - c) + s / r,
            ],
            [
                (1.0 / (2.0 * eta) + (eta + d2) / (2.0 * eta) * c) + s / r,
                c - delta / r * s,
                delta / eta * (1.0 - c) - delta / r * s,
            ],
            [
                delta / eta * (1.0 - c),
                s / r,
                d2 / eta + c / eta,
            ],
        ]
    )


def resonant_angle_exponential(t: float, omega0_over_gamma: float, gamma_p: float = 1.0) -> float:
    """Accumulated rotation angle under ``Omega0 exp(-gamma_p t)``.

    With the default ``gamma_p=1``, ``t`` is the scaled time ``gamma_p * t``.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    return omega0_over_gamma * -math.expm1(-gamma_p * t)


def resonant_angle_sin2(tau: float, omega_prime: float, n: int) -> float:
    """Accumulated rotation angle under ``Omega0 sin^2(n omega_q t)``, ``tau = omega_q t``."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    return 0.5 * omega_prime * (tau - math.sin(2 * n * tau) / (2 * n))


def resonant_matrix(angle: float) -> np.ndarray:
    """Rotation about the x axis: s_x fixed, (s_y, s_z) turned by ``angle``."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def evolve_resonant(s0: BlochVector, angle: float) -> BlochVector:
    c, s = math.cos(angle), math.sin(angle)
    return BlochVector(s0.sx, c * s0.sy - s * s0.sz, c * s0.sz + s * s0.sy)


def pulse_angle(pulse: PulseConfig, tau: float) -> float:
    """Effective rotation angle of a resonant pulse at scaled time ``tau``."""
    if isinstance(pulse, Exponential):
        return resonant_angle_exponential(tau, pulse.omega0_over_gamma)
    if isinstance(pulse, SinSquared):
        return resonant_angle_sin2(tau, pulse.omega_prime, pulse.n)
    if isinstance(pulse, Rectangular) and pulse.delta == 0.0:
        return float(tau)
    raise ValueError(f"no resonant angle for {pulse!r}")


def evolution_matrix(pulse: PulseConfig, tau: float, mode: Mode = "exact") -> np.ndarray:
    """Matrix ``M`` with ``s(tau) = M @ s(0)`` for the given pulse.

    ``mode`` only affects the rectangular pulse; the resonant solutions are
    rotations in both modes.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    if isinstance(pulse, Rectangular):
        if mode == "paper":
            return rect_rotation_paper(pulse.delta, tau)
        return rect_rotation_exact(pulse.delta, tau)
    return resonant_matrix(pulse_angle(pulse, tau))


def evolve(s0: BlochVector, pulse: PulseConfig, tau: float, mode: Mode = "exact") -> BlochVector:
    return BlochVector.from_array(evolution_matrix(pulse, tau, mode) @ s0.as_array())
