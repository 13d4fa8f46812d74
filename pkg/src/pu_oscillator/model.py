"""Model constants and the reduction-of-order change of variables.

The fourth-order equation

    z'''' + (Omega1**2 + Omega2**2) z'' + Omega1**2 Omega2**2 z = 0

is written as a first-order system in ``w = (z, z', z'', z''')`` and then
mapped onto a pair of uncoupled oscillators ``r1, r2`` through

    w1 = r1 - r2,    w3 = -Omega1**2 r1 + Omega2**2 r2.

The map is linear and invertible whenever ``Omega1 != Omega2``.
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass

import numpy as np

__all__ = [
    "ParameterError",
    "DegenerateFrequencies",
    "DisorderedFrequencies",
    "NonPositiveFrequency",
    "NonPositiveGamma",
    "NonFiniteParameter",
    "PUParams",
    "KinematicState",
    "DecoupledState",
    "validate_params",
    "w_from_r",
    "r_from_w",
    "transform_matrices",
]


class ParameterError(ValueError):
    """Invalid model constants."""


class NonFiniteParameter(ParameterError):
    pass


class NonPositiveGamma(ParameterError):
    pass


class NonPositiveFrequency(ParameterError):
    pass


class DegenerateFrequencies(ParameterError):
    pass


class DisorderedFrequencies(ParameterError):
    pass


@dataclass(frozen=True)
class PUParams:
    """Validated constants ``gamma`` and the two angular frequencies.

    Build through :func:`validate_params`; direct construction also
    validates.
    """

    gamma: float
    omega1: float
    omega2: float

    def __post_init__(self):
        _check(self.gamma, self.omega1, self.omega2)

    @property
    def sum_sq(self) -> float:
        """``Omega1**2 + Omega2**2``."""
        return self.omega1**2 + self.omega2**2

    @property
    def prod_sq(self) -> float:
        """``Omega1**2 * Omega2**2``."""
        return self.omega1**2 * self.omega2**2

    @property
    def ground_energy(self) -> float:
        return 0.5 * (self.omega1 + self.omega2)

    def as_dict(self) -> dict:
        return {"gamma": self.gamma, "omega1": self.omega1, "omega2": self.omega2}


def _check(gamma, omega1, omega2):
    for name, value in (("gamma", gamma), ("omega1", omega1), ("omega2", omega2)):
        if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
            raise NonFiniteParameter(f"non-finite parameter: {name}={value!r}")
    if gamma <= 0:
        raise NonPositiveGamma(f"gamma must be positive, got {gamma}")
    if omega2 <= 0:
        raise NonPositiveFrequency(f"omega2 must be positive, got {omega2}")
    if omega1 == omega2:
        raise DegenerateFrequencies(
            f"degenerate frequencies: omega1 == omega2 == {omega1}; require omega1 > omega2"
        )
    if omega1 < omega2:
        raise DisorderedFrequencies(
            f"disordered frequencies: require omega1 > omega2, got omega1={omega1}, omega2={omega2}"
        )


def validate_params(gamma: float, omega1: float, omega2: float) -> PUParams:
    """Return a :class:`PUParams` or raise the specific :class:`ParameterError`.

    >>> validate_params(1, 2, 1)
    PUParams(gamma=1.0, omega1=2.0, omega2=1.0)
    """
    _check(gamma, omega1, omega2)
    return PUParams(float(gamma), float(omega1), float(omega2))


@dataclass(frozen=True)
class KinematicState:
    """``z`` and its first three time derivatives."""

    w1: float
    w2: float
    w3: float
    w4: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, a) -> "KinematicState":
        return cls(*(float(v) for v in a))


@dataclass(frozen=True)
class DecoupledState:
    """Positions and velocities of the two uncoupled oscillators."""

    r1: float
    r1dot: float
    r2: float
    r2dot: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, a) -> "DecoupledState":
        return cls(*(float(v) for v in a))


def w_from_r(s: DecoupledState, p: PUParams) -> KinematicState:
    w1_sq, w2_sq = p.omega1**2, p.omega2**2
    return KinematicState(
        w1=s.r1 - s.r2,
        w2=s.r1dot - s.r2dot,
        w3=-w1_sq * s.r1 + w2_sq * s.r2,
        w4=-w1_sq * s.r1dot + w2_sq * s.r2dot,
    )


def r_from_w(s: KinematicState, p: PUParams) -> DecoupledState:
    """Inverse of :func:`w_from_r`, by solving the 2x2 system in closed form."""
    w2_sq = p.omega2**2
    denom = w2_sq - p.omega1**2
    r1 = (s.w3 + w2_sq * s.w1) / denom
    r1dot = (s.w4 + w2_sq * s.w2) / denom
    return DecoupledState(r1=r1, r1dot=r1dot, r2=r1 - s.w1, r2dot=r1dot - s.w2)


def transform_matrices(p: PUParams) -> tuple[np.ndarray, np.ndarray]:
    """Matrices ``(T, T_inv)`` with ``w = T @ r`` in array ordering.

    ``r`` is ordered ``(r1, r1dot, r2, r2dot)`` and ``w`` as ``(w1..w4)``.
    Used to map whole trajectories at once.
    """
    a, b = p.omega1**2, p.omega2**2
    T = np.array(
        [
            [1.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, -1.0],
            [-a, 0.0, b, 0.0],
            [0.0, -a, 0.0, b],
        ]
    )
    d = b - a
    T_inv = np.array(
        [
            [b / d, 0.0, 1.0 / d, 0.0],
            [0.0, b / d, 0.0, 1.0 / d],
            [b / d - 1.0, 0.0, 1.0 / d, 0.0],
            [0.0, b / d - 1.0, 0.0, 1.0 / d],
        ]
    )
    return T, T_inv
