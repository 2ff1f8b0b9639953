"""Bloch-vector dynamics of a pulse-driven qubit and the quantum Fisher
information of its initial coherent-state angles."""

__version__ = "0.1.0"

from .bloch import (
    BlochVector,
    CoherentStateAngles,
    Exponential,
    Rectangular,
    SinSquared,
    d_initial_bloch,
    evolution_matrix,
    evolve,
    evolve_resonant,
    initial_bloch,
    rect_rotation_exact,
    rect_rotation_paper,
    resonant_angle_exponential,
    resonant_angle_sin2,
)
from .oracle import OdeSettings, bloch_rhs, integrate, trajectory
from .qfi import (
    Grid,
    QfiResult,
    SweepRecord,
    SweepSpec,
    UnphysicalStateError,
    finite_difference_qfi,
    qfi_from_state,
    qfi_parameter,
    sweep,
)
