"""Reduction-of-order numerics for the Pais-Uhlenbeck fourth-order oscillator.

Submodules
----------
model
    Constants and the ``w <-> r`` change of variables.
dynamics
    Classical flows (fourth-order, decoupled, ghost), RK4, energies.
quantum
    Truncated Fock-basis Hamiltonians, spectra, grid-sampled states.
symmetry
    The seven Lie point symmetries of the Schrodinger equation.
cli
    ``pu-osc`` command line.
"""
from .kernels import BACKEND
from .model import (
    DecoupledState,
    KinematicState,
    ParameterError,
    PUParams,
    r_from_w,
    validate_params,
    w_from_r,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DecoupledState",
    "KinematicState",
    "ParameterError",
    "PUParams",
    "r_from_w",
    "validate_params",
    "w_from_r",
]
