"""The seven Lie point symmetries of the two-mode Schrodinger equation.

Each generator ``xi_t d_t + xi_r1 d_r1 + xi_r2 d_r2 + phi u d_u`` acts on
solutions through its characteristic

    Q = phi u - xi_t u_t - xi_r1 u_r1 - xi_r2 u_r2,

which maps solutions of a linear evolution equation to solutions. On a
stationary term ``psi exp(-i E t)`` the coefficients of the ladder
generators carry ``exp(i nu t)``; their action therefore returns another
stationary term with energy ``E - nu``. ``Gamma-1`` and ``Gamma-2`` raise
the energy by ``Omega1`` and ``Omega2``; ``Gamma+1`` and ``Gamma+2`` kill
the groundstate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .model import PUParams
from .quantum import (
    GridTooCoarse,
    ModalSolution,
    SpatialGrid,
    StationaryState,
    derivative_fourth_order,
    dirac_norm,
    groundstate,
    schrodinger_residual,
)

__all__ = [
    "LABELS",
    "NotStationary",
    "SymmetryGenerator",
    "generator",
    "all_generators",
    "evolutionary_action",
    "raw_action",
    "energy_of",
    "create_eigenstate",
    "solution_map_check",
]

LABELS = ("Γ+1", "Γ-1", "Γ+2", "Γ-2", "Γ3", "Γ4", "Γ5")


class NotStationary(ValueError):
    """Raised by :func:`energy_of` when ``u`` is not an eigenstate."""


def _zero(t):
    return 0.0 * np.exp(0j * t)


@dataclass(frozen=True, eq=False)
class SymmetryGenerator:
    """Coefficient functions of one point symmetry.

    ``frequency`` is the ``nu`` for which every coefficient equals
    ``exp(i nu t)`` times its value at ``t = 0``; ``phi_coeffs`` is
    ``phi(0, r1, r2)`` as a 2-D polynomial coefficient array, used by the
    analytic route.
    """

    label: str
    xi_t: Callable
    xi_r1: Callable
    xi_r2: Callable
    phi: Callable
    frequency: float = 0.0
    phi_coeffs: Optional[np.ndarray] = None
    payload: Optional[ModalSolution] = None


def generator(label: str, p: PUParams, payload: Optional[ModalSolution] = None) -> SymmetryGenerator:
    """Build one of the seven generators by label.

    Labels are ``"Γ+1", "Γ-1", "Γ+2", "Γ-2", "Γ3", "Γ4", "Γ5"``; ASCII
    spellings ``"G+1"`` etc. are accepted too. ``Γ5`` needs a
    ``payload`` solution.
    """
    label = label.replace("G", "Γ").replace("−", "-")
    if label in ("Γ+1", "Γ-1", "Γ+2", "Γ-2"):
        sign = 1.0 if label[1] == "+" else -1.0
        mode = int(label[2])
        omega = p.omega1 if mode == 1 else p.omega2
        nu = sign * omega

        def xi(t, nu=nu, sign=sign):
            return -sign * np.exp(1j * nu * t)

        if mode == 1:
            phi = lambda t, r1, r2, nu=nu, w=omega: np.exp(1j * nu * t) * w * r1  # noqa: E731
            phi_c = np.array([[0.0], [omega]], dtype=complex)
            xi_r1, xi_r2 = xi, _zero
        else:
            phi = lambda t, r1, r2, nu=nu, w=omega: np.exp(1j * nu * t) * w * r2  # noqa: E731
            phi_c = np.array([[0.0, omega]], dtype=complex)
            xi_r1, xi_r2 = _zero, xi
        return SymmetryGenerator(label, _zero, xi_r1, xi_r2, phi, nu, phi_c)
    if label == "Γ3":
        return SymmetryGenerator(
            label, lambda t: 1j + 0.0 * t, _zero, _zero, lambda t, r1, r2: 0.0 * r1,
            0.0, np.zeros((1, 1), dtype=complex),
        )
    if label == "Γ4":
        return SymmetryGenerator(
            label, _zero, _zero, _zero, lambda t, r1, r2: 1.0 + 0.0 * r1,
            0.0, np.ones((1, 1), dtype=complex),
        )
    if label == "Γ5":
        if payload is None:
            raise ValueError("Γ5 needs a payload solution")
        return SymmetryGenerator(
            label, _zero, _zero, _zero, lambda t, r1, r2: 0.0 * r1, payload=payload
        )
    raise ValueError(f"unknown generator label {label!r}; expected one of {LABELS}")


def all_generators(p: PUParams, payload: ModalSolution) -> list[SymmetryGenerator]:
    return [generator(lab, p, payload if lab == "Γ5" else None) for lab in LABELS]


def _check_grids(u: ModalSolution, g: SymmetryGenerator):
    if g.payload is not None and g.payload.grid != u.grid:
        raise ValueError("payload and solution live on different grids")


def evolutionary_action(
    g: SymmetryGenerator, u: ModalSolution, derivative: str = "grid"
) -> ModalSolution:
    """Apply the characteristic ``Q`` of ``g`` to ``u`` term by term.

    Parameters
    ----------
    derivative : {"grid", "analytic"}
        ``"grid"`` differentiates the sampled profiles with fourth-order
        central differences. ``"analytic"`` differentiates the closed forms
        carried by every term (``StationaryState.analytic``) exactly.
    """
    if isinstance(u, StationaryState):
        u = ModalSolution.of(u)
    _check_grids(u, g)
    if g.payload is not None:
        return g.payload
    if derivative not in ("grid", "analytic"):
        raise ValueError(f"unknown derivative route {derivative!r}")

    c_t, c_1, c_2 = complex(g.xi_t(0.0)), complex(g.xi_r1(0.0)), complex(g.xi_r2(0.0))
    grid = u.grid
    r1, r2 = grid.mesh()
    h = grid.spacing
    out = []
    for coef, st in u.terms:
        time_part = -c_t * (-1j * st.energy)
        if derivative == "analytic":
            if st.analytic is None:
                raise ValueError("analytic route needs closed forms on every term")
            f = st.analytic
            q = f.multiply(g.phi_coeffs) + f.scaled(time_part)
            if c_1:
                q = q + f.derivative(0).scaled(-c_1)
            if c_2:
                q = q + f.derivative(1).scaled(-c_2)
            psi, analytic = q(r1, r2), q
        else:
            psi = g.phi(0.0, r1, r2) * st.psi + time_part * st.psi
            if c_1:
                psi = psi - c_1 * derivative_fourth_order(st.psi, h, 0)
            if c_2:
                psi = psi - c_2 * derivative_fourth_order(st.psi, h, 1)
            analytic = None
        out.append((coef, StationaryState(grid, psi, st.energy - g.frequency, analytic)))
    return ModalSolution(tuple(out))


def raw_action(g: SymmetryGenerator, u: ModalSolution) -> ModalSolution:
    """Apply ``g`` as the bare operator ``xi.grad + phi`` (grid derivatives).

    Kept for comparison only: unlike :func:`evolutionary_action` the
    result is in general not a solution.
    """
    if isinstance(u, StationaryState):
        u = ModalSolution.of(u)
    c_t, c_1, c_2 = complex(g.xi_t(0.0)), complex(g.xi_r1(0.0)), complex(g.xi_r2(0.0))
    grid = u.grid
    r1, r2 = grid.mesh()
    h = grid.spacing
    out = []
    for coef, st in u.terms:
        psi = g.phi(0.0, r1, r2) * st.psi + c_t * (-1j * st.energy) * st.psi
        if c_1:
            psi = psi + c_1 * derivative_fourth_order(st.psi, h, 0)
        if c_2:
            psi = psi + c_2 * derivative_fourth_order(st.psi, h, 1)
        out.append((coef, StationaryState(grid, psi, st.energy - g.frequency)))
    return ModalSolution(tuple(out))


def energy_of(u, rtol: float = 1e-10) -> float:
    """Eigenvalue of ``i d/dt`` on a stationary solution.

    Raises
    ------
    NotStationary
        If the terms carry more than one distinct energy, or the action is
        not proportional to ``u``.
    """
    if isinstance(u, StationaryState):
        u = ModalSolution.of(u)
    live = [(c, s) for c, s in u.terms if c != 0 and np.any(s.psi)]
    energies = {s.energy for _, s in live}
    if len(energies) != 1:
        raise NotStationary("not a stationary state: terms carry different energies")
    field = sum(c * s.psi for c, s in live)
    # i d/dt applied with u_t = -i E u per term
    action = sum(c * (1j * (-1j * s.energy)) * s.psi for c, s in live)
    lam = np.vdot(field, action) / np.vdot(field, field)
    scale = np.max(np.abs(field)) * max(1.0, abs(lam))
    if np.max(np.abs(action - lam * field)) > rtol * scale:
        raise NotStationary("not a stationary state: action is not proportional to u")
    return float(lam.real)


def create_eigenstate(
    n1: int, n2: int, grid: SpatialGrid, p: PUParams, derivative: str = "analytic"
) -> StationaryState:
    """Groundstate raised ``n1`` times by Γ-1 and ``n2`` times by Γ-2.

    Renormalised to unit Dirac norm after every step.
    """
    if n1 < 0 or n2 < 0:
        raise ValueError("occupation numbers must be nonnegative")
    if grid.points < 32 * max(n1, n2):
        raise GridTooCoarse(
            f"{grid.points} points per axis cannot resolve level ({n1}, {n2}); "
            f"need at least {32 * max(n1, n2)}"
        )
    st = _normalised(groundstate(grid, p))
    for label, times in (("Γ-1", n1), ("Γ-2", n2)):
        g = generator(label, p)
        for _ in range(times):
            st = _normalised(evolutionary_action(g, ModalSolution.of(st), derivative).terms[0][1])
    return st


def _normalised(st: StationaryState) -> StationaryState:
    n = dirac_norm(st)
    analytic = None if st.analytic is None else st.analytic.scaled(1.0 / n)
    return StationaryState(st.grid, st.psi / n, st.energy, analytic)


def solution_map_check(
    g: SymmetryGenerator, u: ModalSolution, p: PUParams, derivative: str = "grid"
) -> float:
    """Schrodinger residual of the image of ``u`` under ``g``."""
    return schrodinger_residual(evolutionary_action(g, u, derivative), p)
