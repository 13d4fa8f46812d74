"""Classical flows for the three formulations of the oscillator.

* the fourth-order equation as a first-order system in ``w``;
* the decoupled pair ``r1'' = -Omega1**2 r1``, ``r2'' = -Omega2**2 r2``;
* Hamilton's equations for the Ostrogradsky-type ghost Hamiltonian

      H = py**2/(2 gamma) + pz*y + gamma/2 (Omega1**2 + Omega2**2) y**2
          - gamma/2 Omega1**2 Omega2**2 z**2.

All three vector fields are linear, so each is carried as a
:class:`LinearField` whose matrix feeds the RK4 kernel directly.
"""
from __future__ import annotations

from dataclasses import astuple, dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from .model import DecoupledState, KinematicState, PUParams, r_from_w, transform_matrices

__all__ = [
    "IntegrationError",
    "DecoupledPhase",
    "GhostPhase",
    "Trajectory",
    "LinearField",
    "fourth_order_field",
    "decoupled_field",
    "ghost_field",
    "rhs_fourth",
    "rhs_decoupled",
    "rhs_ghost",
    "integrate",
    "exact_z",
    "energy_decoupled",
    "energy_ghost",
    "lagrangian_decoupled",
    "ghost_from_kinematic",
    "decoupled_energy_series",
    "fourth_energy_series",
    "ghost_energy_series",
    "equivalence_deviation",
]


class IntegrationError(RuntimeError):
    """Raised when the integrator produces a non-finite state."""


@dataclass(frozen=True)
class DecoupledPhase:
    r1: float
    r2: float
    p1: float
    p2: float

    @classmethod
    def from_state(cls, s: DecoupledState) -> "DecoupledPhase":
        # canonical momenta coincide with the velocities (unit mass)
        return cls(r1=s.r1, r2=s.r2, p1=s.r1dot, p2=s.r2dot)

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)


@dataclass(frozen=True)
class GhostPhase:
    z: float
    y: float
    pz: float
    py: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, a) -> "GhostPhase":
        return cls(*(float(v) for v in a))


@dataclass(frozen=True)
class Trajectory:
    """Fixed-step samples of a flow.

    ``states`` has one row per entry of ``times``; ``energy`` holds the
    conserved quantity at each sample when one was requested.
    """

    times: np.ndarray
    states: np.ndarray
    energy: Optional[np.ndarray] = None
    columns: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states differ in length")
        if self.energy is not None and len(self.energy) != len(self.times):
            raise ValueError("times and energy differ in length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self.columns.index(name)]


@dataclass(frozen=True)
class LinearField:
    """Autonomous linear vector field ``y' = matrix @ y``."""

    matrix: np.ndarray
    columns: tuple[str, ...]
    name: str = ""

    def __call__(self, y: np.ndarray) -> np.ndarray:
        return self.matrix @ y


def fourth_order_field(p: PUParams) -> LinearField:
    A = np.zeros((4, 4))
    A[0, 1] = A[1, 2] = A[2, 3] = 1.0
    A[3, 0] = -p.prod_sq
    A[3, 2] = -p.sum_sq
    return LinearField(A, ("w1", "w2", "w3", "w4"), "fourth")


def decoupled_field(p: PUParams) -> LinearField:
    A = np.zeros((4, 4))
    A[0, 1] = A[2, 3] = 1.0
    A[1, 0] = -p.omega1**2
    A[3, 2] = -p.omega2**2
    return LinearField(A, ("r1", "r1dot", "r2", "r2dot"), "decoupled")


def ghost_field(p: PUParams) -> LinearField:
    g = p.gamma
    # ordering (z, y, pz, py)
    A = np.zeros((4, 4))
    A[0, 1] = 1.0
    A[1, 3] = 1.0 / g
    A[2, 0] = g * p.prod_sq
    A[3, 2] = -1.0
    A[3, 1] = -g * p.sum_sq
    return LinearField(A, ("z", "y", "pz", "py"), "ghost")


def rhs_fourth(s: KinematicState, p: PUParams) -> KinematicState:
    return KinematicState(s.w2, s.w3, s.w4, -p.sum_sq * s.w3 - p.prod_sq * s.w1)


def rhs_decoupled(s: DecoupledState, p: PUParams) -> DecoupledState:
    return DecoupledState(s.r1dot, -p.omega1**2 * s.r1, s.r2dot, -p.omega2**2 * s.r2)


def rhs_ghost(s: GhostPhase, p: PUParams) -> GhostPhase:
    """Hamilton's equations: returns ``(z', y', pz', py')``."""
    g = p.gamma
    return GhostPhase(
        z=s.y,
        y=s.py / g,
        pz=g * p.prod_sq * s.z,
        py=-s.pz - g * p.sum_sq * s.y,
    )


def _as_vector(s0) -> np.ndarray:
    if hasattr(s0, "as_array"):
        return s0.as_array()
    return np.array(s0, dtype=float)


def integrate(
    rhs: Callable[[np.ndarray], np.ndarray],
    s0,
    t_end: float,
    dt: float,
    energy: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> Trajectory:
    """Classical fixed-step RK4 from ``t = 0`` to ``t_end``, sampled every step.

    Parameters
    ----------
    rhs : LinearField or callable
        Vector field. A :class:`LinearField` runs through the selected
        kernel (compiled when available); any other callable mapping a
        state array to its derivative runs through a Python loop.
    s0 : array_like or state record
        Initial state.
    t_end, dt : float
        Step size and final time. When ``t_end`` is not a whole number of
        steps, the last step is shortened to land on ``t_end`` exactly.
    energy : callable, optional
        Vectorised conserved quantity, applied to the ``(n, dim)`` state
        array.

    Raises
    ------
    IntegrationError
        If a non-finite state appears.
    """
    if not (dt > 0 and t_end > 0):
        raise ValueError(f"dt and t_end must be positive (dt={dt}, t_end={t_end})")
    nsteps = int(np.floor(t_end / dt + 1e-9))
    times = dt * np.arange(nsteps + 1)
    tail = t_end - nsteps * dt
    if tail > 1e-9 * dt:
        times = np.append(times, t_end)
    y0 = _as_vector(s0)

    if isinstance(rhs, LinearField):
        A = np.ascontiguousarray(rhs.matrix, dtype=float)
        run = lambda y, h, n: kernels.rk4_linear(A, y, float(h), n)  # noqa: E731
        columns = rhs.columns
    else:
        run = lambda y, h, n: _rk4_generic(rhs, y, h, n)  # noqa: E731
        columns = ()
    states, bad = run(y0, dt, nsteps)
    states = np.asarray(states)
    if bad < 0 and len(times) > nsteps + 1:
        last, bad_tail = run(np.ascontiguousarray(states[-1]), tail, 1)
        states = np.vstack([states, np.asarray(last)[1:]])
        bad = -1 if bad_tail < 0 else nsteps + 1
    if bad >= 0:
        raise IntegrationError(
            f"non-finite state at step {bad} (t={times[bad]:.6g}); reduce dt or t_end"
        )
    e = None if energy is None else np.asarray(energy(states), dtype=float)
    return Trajectory(times=times, states=states, energy=e, columns=columns)


def _rk4_generic(f, y, dt, nsteps):
    out = np.zeros((nsteps + 1, y.size))
    out[0] = y
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, nsteps + 1):
            k1 = f(y)
            k2 = f(y + 0.5 * dt * k1)
            k3 = f(y + 0.5 * dt * k2)
            k4 = f(y + dt * k3)
            y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out[step] = y
            if not np.all(np.isfinite(y)):
                return out, step
    return out, -1


def exact_z(s0: KinematicState, p: PUParams, t):
    """Closed-form ``z(t)`` for initial data ``(z, z', z'', z''')`` at ``t = 0``.

    ``z = A cos(W1 t) + B sin(W1 t) + C cos(W2 t) + D sin(W2 t)``
    with the four amplitudes solved from the initial conditions.
    """
    w1, w2 = p.omega1, p.omega2
    M = np.array(
        [
            [1.0, 0.0, 1.0, 0.0],
            [0.0, w1, 0.0, w2],
            [-(w1**2), 0.0, -(w2**2), 0.0],
            [0.0, -(w1**3), 0.0, -(w2**3)],
        ]
    )
    A, B, C, D = np.linalg.solve(M, _as_vector(s0))
    t = np.asarray(t, dtype=float)
    return A * np.cos(w1 * t) + B * np.sin(w1 * t) + C * np.cos(w2 * t) + D * np.sin(w2 * t)


def energy_decoupled(s: DecoupledPhase, p: PUParams) -> float:
    return 0.5 * (s.p1**2 + s.p2**2 + p.omega1**2 * s.r1**2 + p.omega2**2 * s.r2**2)


def energy_ghost(s: GhostPhase, p: PUParams) -> float:
    g = p.gamma
    return s.py**2 / (2 * g) + s.pz * s.y + 0.5 * g * p.sum_sq * s.y**2 - 0.5 * g * p.prod_sq * s.z**2


def lagrangian_decoupled(s: DecoupledState, p: PUParams) -> float:
    return 0.5 * (s.r1dot**2 + s.r2dot**2 - p.omega1**2 * s.r1**2 - p.omega2**2 * s.r2**2)


def ghost_from_kinematic(s: KinematicState, p: PUParams) -> GhostPhase:
    """Phase point of the ghost flow reproducing the given ``z`` derivatives.

    Forced by ``z' = y``, ``y' = py/gamma`` and
    ``py' = -pz - gamma (Omega1**2 + Omega2**2) y``.
    """
    g = p.gamma
    return GhostPhase(z=s.w1, y=s.w2, pz=-g * s.w4 - g * p.sum_sq * s.w2, py=g * s.w3)


# Vectorised conserved quantities over (n, 4) state arrays, in the column
# order of the matching LinearField.


def decoupled_energy_series(p: PUParams) -> Callable[[np.ndarray], np.ndarray]:
    def f(states):
        r1, v1, r2, v2 = states.T
        return 0.5 * (v1**2 + v2**2 + p.omega1**2 * r1**2 + p.omega2**2 * r2**2)

    return f


def fourth_energy_series(p: PUParams) -> Callable[[np.ndarray], np.ndarray]:
    """Energy of the decoupled pair, read through the inverse transform."""
    _, T_inv = transform_matrices(p)
    dec = decoupled_energy_series(p)
    return lambda states: dec(states @ T_inv.T)


def ghost_energy_series(p: PUParams) -> Callable[[np.ndarray], np.ndarray]:
    g = p.gamma

    def f(states):
        z, y, pz, py = states.T
        return py**2 / (2 * g) + pz * y + 0.5 * g * p.sum_sq * y**2 - 0.5 * g * p.prod_sq * z**2

    return f


def equivalence_deviation(
    s0: KinematicState, p: PUParams, t_end: float = 20.0, dt: float = 1e-3
) -> dict:
    """Integrate all three formulations from matched data and compare ``z``.

    Returns the z-series of each route plus the closed form, and the max
    pairwise deviation over the whole time grid.
    """
    T, _ = transform_matrices(p)
    fourth = integrate(fourth_order_field(p), s0, t_end, dt)
    dec = integrate(decoupled_field(p), r_from_w(s0, p), t_end, dt)
    ghost = integrate(ghost_field(p), ghost_from_kinematic(s0, p), t_end, dt)
    series = {
        "fourth": fourth.states[:, 0],
        "decoupled": dec.states @ T[0],
        "ghost": ghost.states[:, 0],
        "exact": exact_z(s0, p, fourth.times),
    }
    names: Sequence[str] = list(series)
    pairs = {}
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            pairs[f"{a}-{b}"] = float(np.max(np.abs(series[a] - series[b])))
    return {"times": fourth.times, "z": series, "pairs": pairs, "max_deviation": max(pairs.values())}
