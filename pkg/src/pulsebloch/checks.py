"""Closed-form vs RK4 comparison over a grid of initial states and times."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bloch import Mode, PulseConfig, evolution_matrix, pulse_name
from .oracle import DEFAULT_STEP, trajectory

ORACLE_TOL = 1e-6


@dataclass
class OracleReport:
    mode: str
    step: float
    tau_max: float
    points_per_pulse: int
    max_deviation: dict = field(default_factory=dict)

    @property
    def overall(self) -> float:
        return max(self.max_deviation.values(), default=0.0)

    def passed(self, tol: float = ORACLE_TOL) -> bool:
        return self.overall <= tol

    def as_dict(self, tol: float = ORACLE_TOL) -> dict:
        return {
            "mode": self.mode,
            "step": self.step,
            "tau_max": self.tau_max,
            "points_per_pulse": self.points_per_pulse,
            "max_deviation": dict(self.max_deviation),
            "overall_max_deviation": self.overall,
            "tolerance": tol,
            "passed": self.passed(tol),
        }


def initial_grid(n: int = 10) -> np.ndarray:
    """Bloch vectors of an ``n x n`` (theta, phi) grid, shape ``(3, n*n)``."""
    th, ph = np.meshgrid(np.linspace(0, math.pi, n), np.linspace(0, 2 * math.pi, n), indexing="ij")
    th, ph = th.ravel(), ph.ravel()
    return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), -np.cos(th)])


def deviation(pulse: PulseConfig, mode: Mode = "exact", step: float = DEFAULT_STEP,
              tau_max: float = 20.0, n: int = 10) -> float:
    """Max per-component |closed form - RK4| over an ``n^3`` (theta, phi, tau) grid."""
    s0 = initial_grid(n)
    taus = np.linspace(0.0, tau_max, n)
    numeric = trajectory(s0, pulse, taus, step)
    worst = 0.0
    for k, tau in enumerate(taus):
        closed = evolution_matrix(pulse, float(tau), mode) @ s0
        worst = max(worst, float(np.max(np.abs(closed - numeric[k]))))
    return worst


def oracle_check(pulses, mode: Mode = "exact", step: float = DEFAULT_STEP,
                 tau_max: float = 20.0, n: int = 10) -> OracleReport:
    report = OracleReport(mode, step, tau_max, n ** 3)
    for p in pulses:
        report.max_deviation[pulse_name(p)] = deviation(p, mode, step, tau_max, n)
    return report
