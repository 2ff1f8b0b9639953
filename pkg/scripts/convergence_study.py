"""Step-size studies: RK4 endpoint error and finite-difference QFI error.

usage: python scripts/convergence_study.py
"""

import math

import numpy as np

from pulsebloch.bloch import CoherentStateAngles, Rectangular, initial_bloch, rect_rotation_exact
from pulsebloch.oracle import integrate_field, pulse_field
from pulsebloch.qfi import finite_difference_qfi, qfi_parameter


def rk4_errors(delta, tau, steps):
    s0 = initial_bloch(CoherentStateAngles(1.0, 1.0)).as_array()
    exact = rect_rotation_exact(delta, tau) @ s0
    field = pulse_field(Rectangular(delta))
    return [float(np.max(np.abs(integrate_field(s0, field, 0.0, tau, h) - exact))) for h in steps]


def fd_errors(steps):
    pulse, angles = Rectangular(0.3), CoherentStateAngles(1.2, 2.5)
    exact = qfi_parameter(pulse, angles, "theta", 4.0).value
    return [abs(finite_difference_qfi(pulse, angles, "theta", 4.0, h=h).value - exact) for h in steps]


def table(title, steps, errs):
    print(title)
    print(f"  {'h':>9} {'error':>10} {'ratio':>7}")
    prev = None
    for h, e in zip(steps, errs):
        ratio = f"{prev / e:7.2f}" if prev and e else ""
        print(f"  {h:9.2e} {e:10.3e} {ratio}")
        prev = e


if __name__ == "__main__":
    steps = [0.2, 0.1, 0.05, 0.025, 0.0125]
    for delta, tau in [(0.0, 3.0), (0.5, 5.0), (1.5, 2.0)]:
        table(f"RK4, delta={delta}, tau={tau} (expect ratio ~16)", steps, rk4_errors(delta, tau, steps))
    hs = [1e-3, 5e-4, 2.5e-4, 1.25e-4, 1e-5, 1e-7]
    table("central-difference QFI (expect ratio ~4 until rounding dominates)", hs, fd_errors(hs))
    print(f"(reference: F = 1, sin(h)/h bias at h=1e-5 is {1 - (math.sin(1e-5) / 1e-5) ** 2:.1e})")
