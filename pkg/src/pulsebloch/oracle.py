"""Fixed-step RK4 integration of the Bloch equation ``ds/dtau = b(tau) x s``.

The driving field is ``b = (f(tau), 0, delta)`` where ``f`` is the pulse
envelope in the pulse's own scaled time and ``delta`` the scaled detuning.
The sign convention reproduces the resonant x-axis rotation of
:func:`pulsebloch.bloch.evolve_resonant`.

This module deliberately shares nothing with the closed-form solutions beyond
the pulse envelopes, so it can serve as an independent check on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bloch import BlochVector, PulseConfig

DEFAULT_STEP = 1e-3


@dataclass(frozen=True)
class OdeSettings:
    t_end: float
    step: float = DEFAULT_STEP

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ValueError(f"step must be > 0, got {self.step!r}")
        if not (self.t_end >= 0 and math.isfinite(self.t_end)):
            raise ValueError(f"t_end must be >= 0, got {self.t_end!r}")
        if self.t_end > 0 and self.step > self.t_end:
            raise ValueError("step must not exceed t_end")


def bloch_rhs(s, delta, envelope) -> np.ndarray:
    """Right-hand side ``(-delta*sy, delta*sx - f*sz, f*sy)``.

    ``s`` has shape ``(3, ...)``; trailing axes are integrated in parallel.
    """
    sx, sy, sz = s[0], s[1], s[2]
    return np.stack([-delta * sy, delta * sx - envelope * sz, envelope * sy])


# field(times) -> (bx, by, bz), each broadcastable against ``times``
FieldFn = Callable[[np.ndarray], tuple]


def pulse_field(pulse: PulseConfig) -> FieldFn:
    delta = float(pulse.detuning)

    def field(t):
        t = np.asarray(t, dtype=float)
        return pulse.envelope(t), np.zeros_like(t), np.full_like(t, delta)

    return field


def _rk4_steps(cols, b_lo, b_mid, b_hi, h):
    """Advance each 3-vector in ``cols`` through all steps; plain floats for speed."""
    out = []
    for x, y, z in cols:
        for (ax, ay, az), (mx, my, mz), (ex, ey, ez) in zip(b_lo, b_mid, b_hi):
            k1x, k1y, k1z = ay * z - az * y, az * x - ax * z, ax * y - ay * x
            px, py, pz = x + 0.5 * h * k1x, y + 0.5 * h * k1y, z + 0.5 * h * k1z
            k2x, k2y, k2z = my * pz - mz * py, mz * px - mx * pz, mx * py - my * px
            px, py, pz = x + 0.5 * h * k2x, y + 0.5 * h * k2y, z + 0.5 * h * k2z
            k3x, k3y, k3z = my * pz - mz * py, mz * px - mx * pz, mx * py - my * px
            px, py, pz = x + h * k3x, y + h * k3y, z + h * k3z
            k4x, k4y, k4z = ey * pz - ez * py, ez * px - ex * pz, ex * py - ey * px
            x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        out.append((x, y, z))
    return out


def integrate_field(s0, field: FieldFn, t0: float, t1: float, step: float = DEFAULT_STEP) -> np.ndarray:
    """Integrate from ``t0`` to ``t1`` (either direction) with steps no larger than ``step``.

    The interval is split into ``ceil(|t1 - t0| / step)`` equal steps so the
    endpoint is hit exactly. ``s0`` is a vector ``(3,)`` or a batch ``(3, N)``;
    batches wider than three columns are propagated through the RK4 map of
    the basis vectors, which is the same linear map.
    """
    s = np.array(s0, dtype=float)
    span = t1 - t0
    if span == 0:
        return s
    n = max(1, math.ceil(abs(span) / step - 1e-9))
    h = span / n
    starts = t0 + h * np.arange(n)
    b_lo, b_mid, b_hi = (np.stack(np.broadcast_arrays(*field(starts + off))).T.tolist()
                         for off in (0.0, 0.5 * h, h))
    if s.ndim == 1:
        out = np.array(_rk4_steps([s.tolist()], b_lo, b_mid, b_hi, h)[0])
    elif s.shape[1] <= 3:
        out = np.array(_rk4_steps(s.T.tolist(), b_lo, b_mid, b_hi, h)).T
    else:
        basis = np.array(_rk4_steps(np.eye(3).tolist(), b_lo, b_mid, b_hi, h)).T
        out = basis @ s
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite Bloch vector; reduce the step size")
    return out


def trajectory(s0, pulse: PulseConfig, times, step: float = DEFAULT_STEP) -> np.ndarray:
    """States at each of the nondecreasing sample ``times`` (starting from tau=0).

    ``s0`` may be a single vector of shape ``(3,)`` or a batch ``(3, N)``;
    the result has shape ``(len(times),) + s0.shape``.
    """
    field = pulse_field(pulse)
    times = np.asarray(times, dtype=float)
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be nonnegative and nondecreasing")
    s = np.array(s0, dtype=float)
    out = np.empty((len(times),) + s.shape)
    t = 0.0
    for k, tk in enumerate(times):
        s = integrate_field(s, field, t, float(tk), step)
        t = float(tk)
        out[k] = s
    return out


def integrate(s0: BlochVector, pulse: PulseConfig, settings: OdeSettings) -> BlochVector:
    s = integrate_field(s0.as_array(), pulse_field(pulse), 0.0, settings.t_end, settings.step)
    return BlochVector.from_array(s)


def evolution_matrix_rk4(pulse: PulseConfig, tau: float, step: Optional[float] = None) -> np.ndarray:
    """Evolution matrix obtained by integrating the three unit vectors."""
    return integrate_field(np.eye(3), pulse_field(pulse), 0.0, tau, step or DEFAULT_STEP)
