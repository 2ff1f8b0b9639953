"""Quantum Fisher information of the evolved Bloch vector.

For a qubit ``rho = (I + s.sigma)/2`` depending on a parameter ``beta``::

    F = |ds|^2                               if |s| = 1
    F = |ds|^2 + (s.ds)^2 / (1 - |s|^2)      if |s| < 1

with ``ds = ds/dbeta``. Because every evolution is ``s(t) = M(t) s(0)`` with
``M`` independent of ``(theta, phi)``, ``ds(t) = M(t) ds(0)`` exactly.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

from .bloch import (
    MODES,
    PARAMS,
    CoherentStateAngles,
    Mode,
    Param,
    PulseConfig,
    Rectangular,
    evolution_matrix,
    initial_bloch,
    d_initial_bloch,
)

PURE_TOL = 1e-9
DEFAULT_FD_STEP = 1e-5

Branch = Literal["pure", "mixed"]


class UnphysicalStateError(ValueError):
    """Bloch vector longer than one: not a density matrix."""


@dataclass(frozen=True)
class QfiResult:
    value: float
    branch: Branch
    norm: float


def qfi_from_state(s, ds) -> QfiResult:
    s = np.asarray(s, dtype=float)
    ds = np.asarray(ds, dtype=float)
    n2 = float(s @ s)
    norm = math.sqrt(n2)
    if norm > 1.0 + PURE_TOL:
        raise UnphysicalStateError(f"|s| = {norm!r} exceeds 1")
    grad2 = float(ds @ ds)
    if norm >= 1.0 - PURE_TOL:
        return QfiResult(grad2, "pure", norm)
    proj = float(s @ ds)
    return QfiResult(grad2 + proj * proj / (1.0 - n2), "mixed", norm)


def qfi_parameter(
    pulse: PulseConfig,
    angles: CoherentStateAngles,
    which: Param,
    tau: float,
    mode: Mode = "exact",
) -> QfiResult:
    m = evolution_matrix(pulse, tau, mode)
    s = m @ initial_bloch(angles).as_array()
    ds = m @ d_initial_bloch(angles, which)
    if mode == "exact":
        # rotations keep ds tangent to the unit sphere
        assert abs(float(s @ ds)) <= 1e-9, "derivative not tangent in exact mode"
    return qfi_from_state(s, ds)


def _state(m: np.ndarray, angles: CoherentStateAngles, which: Param, value: float) -> np.ndarray:
    return m @ initial_bloch(angles.replace(which, value)).as_array()


def finite_difference_derivative(
    pulse: PulseConfig,
    angles: CoherentStateAngles,
    which: Param,
    tau: float,
    mode: Mode = "exact",
    h: float = DEFAULT_FD_STEP,
) -> np.ndarray:
    """``ds(t)/dbeta`` by central differences through the full evolution.

    Within ``h`` of a domain edge a second-order one-sided stencil is used,
    so no out-of-range angles are ever constructed.
    """
    if not h > 0:
        raise ValueError(f"h must be > 0, got {h!r}")
    m = evolution_matrix(pulse, tau, mode)
    beta = angles.get(which)
    lo, hi = angles.bounds(which)
    if beta - h >= lo and beta + h <= hi:
        return (_state(m, angles, which, beta + h) - _state(m, angles, which, beta - h)) / (2 * h)
    sign = 1.0 if beta - h < lo else -1.0
    if not (lo <= beta + sign * 2 * h <= hi):
        raise ValueError(f"h={h!r} too large for the domain of {which}")
    f0 = _state(m, angles, which, beta)
    f1 = _state(m, angles, which, beta + sign * h)
    f2 = _state(m, angles, which, beta + sign * 2 * h)
    return sign * (-3.0 * f0 + 4.0 * f1 - f2) / (2 * h)


def finite_difference_qfi(
    pulse: PulseConfig,
    angles: CoherentStateAngles,
    which: Param,
    tau: float,
    mode: Mode = "exact",
    h: float = DEFAULT_FD_STEP,
) -> QfiResult:
    m = evolution_matrix(pulse, tau, mode)
    s = m @ initial_bloch(angles).as_array()
    return qfi_from_state(s, finite_difference_derivative(pulse, angles, which, tau, mode, h))


# -- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Inclusive linear grid of ``count`` points from ``lo`` to ``hi``."""

    lo: float
    hi: float
    count: int = 1

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("grid count must be >= 1")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("grid bounds must be finite")

    @classmethod
    def point(cls, value: float) -> "Grid":
        return cls(value, value, 1)

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([float(self.lo)])
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    pulse: PulseConfig
    parameter: Param
    theta_grid: Grid
    phi_grid: Grid
    delta_grid: Grid = Grid.point(0.0)
    tau: float = math.pi
    mode: Mode = "exact"

    def __post_init__(self):
        if self.parameter not in PARAMS:
            raise ValueError(f"unknown parameter {self.parameter!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not (self.tau >= 0 and math.isfinite(self.tau)):
            raise ValueError("tau must be finite and >= 0")
        for g in (self.theta_grid, self.phi_grid):
            if g.lo > g.hi:
                raise ValueError("grid min must not exceed max")
        # a reversed delta grid is allowed: it just reverses the emission order
        if not isinstance(self.pulse, Rectangular) and np.any(self.delta_grid.values() != 0.0):
            raise ValueError("detuning is only supported for the rectangular pulse")


@dataclass(frozen=True)
class SweepRecord:
    theta: float
    phi: float
    delta: float
    tau: float
    param: str
    mode: str
    qfi: float
    branch: str
    norm: float


def sweep(spec: SweepSpec) -> Iterator[SweepRecord]:
    """Evaluate the QFI on the grid, theta outermost and delta innermost.

    Points where the paper-mode matrix produces an unphysical state are
    reported with ``qfi = nan`` and ``branch = "unphysical"``.
    """
    for theta in spec.theta_grid.values():
        for phi in spec.phi_grid.values():
            angles = CoherentStateAngles(float(theta), float(phi))
            for delta in spec.delta_grid.values():
                pulse = spec.pulse
                if isinstance(pulse, Rectangular):
                    pulse = dataclasses.replace(pulse, delta=float(delta))
                try:
                    r = qfi_parameter(pulse, angles, spec.parameter, spec.tau, spec.mode)
                    qfi, branch, norm = r.value, r.branch, r.norm
                except UnphysicalStateError:
                    m = evolution_matrix(pulse, spec.tau, spec.mode)
                    norm = float(np.linalg.norm(m @ initial_bloch(angles).as_array()))
                    qfi, branch = math.nan, "unphysical"
                yield SweepRecord(
                    float(theta), float(phi), float(delta), float(spec.tau),
                    spec.parameter, spec.mode, qfi, branch, norm,
                )
