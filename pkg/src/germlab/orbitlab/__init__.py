"""Floating-point probes of the pi_1 action on C x H_l."""
from ._kernels import BACKEND
from .probes import (
    BOUNDED,
    DIVERGES,
    INCONCLUSIVE,
    EscapeStep,
    FG4Numeric,
    ProbeReport,
    ProbeStep,
    direct_displacement,
    divergence_probe,
    dominant_prediction,
    equation6_coefficients,
    escape_arc_solver,
    g_rm_displacement,
    w_shift,
)

__all__ = [
    "BACKEND",
    "BOUNDED",
    "DIVERGES",
    "INCONCLUSIVE",
    "EscapeStep",
    "FG4Numeric",
    "ProbeReport",
    "ProbeStep",
    "direct_displacement",
    "divergence_probe",
    "dominant_prediction",
    "equation6_coefficients",
    "escape_arc_solver",
    "g_rm_displacement",
    "w_shift",
]
