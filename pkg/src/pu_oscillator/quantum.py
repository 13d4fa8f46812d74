"""Quantised Hamiltonians, spectra, and grid-sampled stationary states.

Units are hbar = 1 and unit mass, so the Schrodinger equation of the
decoupled pair reads

    2i u_t = -u_{r1 r1} - u_{r2 r2} + (Omega1**2 r1**2 + Omega2**2 r2**2) u.

Operators live in a truncated Fock basis. Squares such as ``x**2`` are
built as the truncation of the exact operator (computed in one extra
basis state and cropped), not as the square of the truncated ``x``; this
keeps the decoupled Hamiltonian exactly diagonal up to the last level.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
from numpy.polynomial import polynomial as P
from scipy.integrate import trapezoid

from .model import PUParams

__all__ = [
    "GridTooCoarse",
    "SpectrumError",
    "ModeOperators",
    "HermitianOperator",
    "SpatialGrid",
    "GaussianPolynomial",
    "StationaryState",
    "ModalSolution",
    "build_mode",
    "hamiltonian_decoupled_matrix",
    "hamiltonian_ghost_matrix",
    "spectrum",
    "eigenstates",
    "ghost_scan",
    "default_grid",
    "groundstate",
    "potential",
    "schrodinger_residual",
    "dirac_norm",
    "inner_product",
    "derivative_fourth_order",
    "laplacian_second_order",
]


class GridTooCoarse(ValueError):
    pass


class SpectrumError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Fock basis


@dataclass(frozen=True, eq=False)
class ModeOperators:
    """Ladder, position and momentum matrices of one truncated mode."""

    dim: int
    lower: np.ndarray
    raise_: np.ndarray
    position: np.ndarray
    momentum: np.ndarray
    omega: float

    def commutator(self) -> np.ndarray:
        """``[lower, raise]``; identity except ``1 - dim`` in the last entry."""
        return self.lower @ self.raise_ - self.raise_ @ self.lower

    def position_squared(self) -> np.ndarray:
        """Truncation of the exact ``x**2`` (real)."""
        a = _lowering(self.dim + 1)
        s = a + a.T
        return (s @ s)[: self.dim, : self.dim] / (2.0 * self.omega)

    def momentum_squared(self) -> np.ndarray:
        """Truncation of the exact ``p**2`` (real)."""
        a = _lowering(self.dim + 1)
        d = a.T - a
        return -(d @ d)[: self.dim, : self.dim] * (0.5 * self.omega)


def _lowering(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, n)), 1)


def build_mode(dim: int, omega: float = 1.0) -> ModeOperators:
    """Fock-basis operators for one oscillator mode tuned to ``omega``.

    >>> build_mode(2).lower.real
    array([[0., 1.],
           [0., 0.]])
    """
    if int(dim) != dim or dim < 2:
        raise ValueError(f"mode dimension must be an integer >= 2, got {dim}")
    if not omega > 0:
        raise ValueError(f"mode frequency must be positive, got {omega}")
    dim = int(dim)
    lower = _lowering(dim).astype(complex)
    raise_ = lower.conj().T
    position = (lower + raise_) / np.sqrt(2.0 * omega)
    momentum = 1j * np.sqrt(omega / 2.0) * (raise_ - lower)
    return ModeOperators(dim, lower, raise_, position, momentum, float(omega))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hermitian matrix on the two-mode product basis.

    Index ``k`` labels the occupation pair ``basis_labels[k] = (n1, n2)``
    with ``k = n1 * n_per_mode + n2``.
    """

    dim: int
    matrix: np.ndarray
    basis_labels: tuple[tuple[int, int], ...]

    def __post_init__(self):
        scale = max(1.0, float(np.max(np.abs(self.matrix))))
        defect = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if defect > 1e-12 * scale:
            raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")

    @property
    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


def _labels(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(n))


def hamiltonian_decoupled_matrix(n_per_mode: int, p: PUParams) -> HermitianOperator:
    """``(p1**2 + p2**2 + Omega1**2 x1**2 + Omega2**2 x2**2) / 2`` on two modes.

    Each mode's basis is tuned to its own frequency, so the result is
    diagonal with entries ``(n1 + 1/2) Omega1 + (n2 + 1/2) Omega2``.
    """
    m1 = build_mode(n_per_mode, p.omega1)
    m2 = build_mode(n_per_mode, p.omega2)
    h1 = 0.5 * (m1.momentum_squared() + p.omega1**2 * m1.position_squared())
    h2 = 0.5 * (m2.momentum_squared() + p.omega2**2 * m2.position_squared())
    eye = np.eye(n_per_mode)
    H = np.kron(h1, eye) + np.kron(eye, h2)
    return HermitianOperator(n_per_mode**2, H, _labels(n_per_mode))


def hamiltonian_ghost_matrix(
    n_per_mode: int, p: PUParams, basis_omega: float = 1.0, gauge: str = "real"
) -> HermitianOperator:
    """Truncated ghost Hamiltonian with ``(z, pz)`` on mode 1 and ``(y, py)`` on mode 2.

    Parameters
    ----------
    basis_omega : float
        Frequency the Fock basis of both registers is tuned to. Changes
        truncation convergence only.
    gauge : {"real", "standard"}
        ``"standard"`` realises ``z = x``, ``pz = p`` on mode 1 and gives a
        complex Hermitian matrix. ``"real"`` relabels mode-1 basis states
        by ``i**n`` (a unitary change of basis), under which
        ``z -> p / w`` and ``pz -> -w x``; the matrix becomes real
        symmetric with the same spectrum, and the dense solve is about
        four times cheaper.
    """
    if gauge not in ("real", "standard"):
        raise ValueError(f"unknown gauge {gauge!r}")
    g, w = p.gamma, basis_omega
    mz = build_mode(n_per_mode, w)
    my = build_mode(n_per_mode, w)
    eye = np.eye(n_per_mode)

    if gauge == "standard":
        z_sq = mz.position_squared()
        pz = mz.momentum
        y = my.position
    else:
        z_sq = mz.momentum_squared() / w**2
        pz = -w * mz.position.real
        y = my.position.real

    H = (
        np.kron(eye, my.momentum_squared()) / (2.0 * g)
        + np.kron(pz, y)
        + 0.5 * g * p.sum_sq * np.kron(eye, my.position_squared())
        - 0.5 * g * p.prod_sq * np.kron(z_sq, eye)
    )
    return HermitianOperator(n_per_mode**2, H, _labels(n_per_mode))


def spectrum(H: HermitianOperator, count: Optional[int] = None) -> np.ndarray:
    """The ``count`` smallest eigenvalues, ascending (dense Hermitian solve)."""
    return eigenstates(H, count, vectors=False)[0]


def eigenstates(H: HermitianOperator, count: Optional[int] = None, vectors: bool = True):
    """Smallest ``count`` eigenpairs as ``(values, vectors or None)``."""
    count = H.dim if count is None else int(count)
    if not 1 <= count <= H.dim:
        raise ValueError(f"requested {count} eigenvalues from a {H.dim}-dimensional operator")
    M = H.matrix
    if np.iscomplexobj(M) and not np.any(M.imag):
        M = M.real
    try:
        out = scipy.linalg.eigh(
            M, eigvals_only=not vectors, subset_by_index=[0, count - 1], check_finite=True
        )
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SpectrumError(f"Hermitian eigensolver failed: {exc}") from exc
    if vectors:
        return out
    return out, None


def ghost_scan(
    p: PUParams, sizes: Sequence[int], basis_omega: float = 1.0
) -> list[tuple[int, float]]:
    """Smallest eigenvalue of the ghost Hamiltonian at each truncation size."""
    sizes = [int(n) for n in sizes]
    if not sizes or any(n < 2 for n in sizes):
        raise ValueError("sizes must be a nonempty list of counts >= 2")
    if any(b < a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be nondecreasing")
    return [
        (n, float(spectrum(hamiltonian_ghost_matrix(n, p, basis_omega), 1)[0])) for n in sizes
    ]


# ---------------------------------------------------------------------------
# Spatial grid and stationary states


@dataclass(frozen=True)
class SpatialGrid:
    """Square grid on ``[-span, span]**2`` with an odd number of points per axis."""

    span: float
    points: int

    def __post_init__(self):
        if not self.span > 0:
            raise ValueError(f"grid span must be positive, got {self.span}")
        if int(self.points) != self.points or self.points < 3 or self.points % 2 == 0:
            raise GridTooCoarse(f"grid points must be an odd integer >= 3, got {self.points}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.span / (self.points - 1)

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.span, self.span, self.points)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """``(r1, r2)`` arrays, ``r1`` varying along axis 0."""
        x = self.axis
        return np.meshgrid(x, x, indexing="ij")

    def refined(self) -> "SpatialGrid":
        """Same span, half the spacing."""
        return SpatialGrid(self.span, 2 * self.points - 1)


def default_grid(p: PUParams, points: int = 257) -> SpatialGrid:
    """Eight standard deviations of the widest groundstate Gaussian."""
    return SpatialGrid(8.0 / np.sqrt(p.omega2), points)


@dataclass(frozen=True, eq=False)
class GaussianPolynomial:
    """``poly(r1, r2) * exp(-(omega1 r1**2 + omega2 r2**2) / 2)``.

    ``coeffs[i, j]`` multiplies ``r1**i r2**j``. Derivatives stay in this
    class exactly, which gives an analytic route for symmetry actions.
    """

    coeffs: np.ndarray
    omega1: float
    omega2: float

    def __call__(self, r1, r2):
        gauss = np.exp(-0.5 * (self.omega1 * r1**2 + self.omega2 * r2**2))
        return P.polyval2d(r1, r2, self.coeffs) * gauss

    def _new(self, c) -> "GaussianPolynomial":
        return GaussianPolynomial(np.asarray(c, dtype=complex), self.omega1, self.omega2)

    def times_coordinate(self, axis: int) -> "GaussianPolynomial":
        c = np.asarray(self.coeffs, dtype=complex)
        pad = [(0, 0), (0, 0)]
        pad[axis] = (1, 0)
        return self._new(np.pad(c, pad))

    def derivative(self, axis: int) -> "GaussianPolynomial":
        """Exact ``d/dr_axis`` including the Gaussian factor."""
        omega = self.omega1 if axis == 0 else self.omega2
        c = np.asarray(self.coeffs, dtype=complex)
        dc = P.polyder(c, axis=axis) if c.shape[axis] > 1 else np.zeros_like(c)
        return self._add(self._new(dc), self.times_coordinate(axis).scaled(-omega))

    def scaled(self, factor: complex) -> "GaussianPolynomial":
        return self._new(factor * np.asarray(self.coeffs, dtype=complex))

    def _add(self, a: "GaussianPolynomial", b: "GaussianPolynomial") -> "GaussianPolynomial":
        shape = tuple(max(x, y) for x, y in zip(a.coeffs.shape, b.coeffs.shape))
        out = np.zeros(shape, dtype=complex)
        out[: a.coeffs.shape[0], : a.coeffs.shape[1]] += a.coeffs
        out[: b.coeffs.shape[0], : b.coeffs.shape[1]] += b.coeffs
        return self._new(out)

    def __add__(self, other: "GaussianPolynomial") -> "GaussianPolynomial":
        return self._add(self, other)

    def multiply(self, poly_coeffs) -> "GaussianPolynomial":
        """Multiply by a plain polynomial given as 2-D coefficients."""
        return self._new(_polymul2d(self.coeffs, poly_coeffs))


def _polymul2d(a, b) -> np.ndarray:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=complex)
    for i, j in np.ndindex(*b.shape):
        out[i : i + a.shape[0], j : j + a.shape[1]] += b[i, j] * a
    return out


@dataclass(frozen=True, eq=False)
class StationaryState:
    """Spatial profile ``psi`` of ``u = psi * exp(-i E t)`` on a grid.

    ``analytic`` optionally carries the exact closed form the samples came
    from.
    """

    grid: SpatialGrid
    psi: np.ndarray
    energy: float
    analytic: Optional[GaussianPolynomial] = None

    def __post_init__(self):
        n = self.grid.points
        if np.shape(self.psi) != (n, n):
            raise ValueError(f"psi has shape {np.shape(self.psi)}, grid needs {(n, n)}")

    def at(self, t: float) -> np.ndarray:
        return self.psi * np.exp(-1j * self.energy * t)


@dataclass(frozen=True, eq=False)
class ModalSolution:
    """Finite superposition ``sum_k c_k psi_k exp(-i E_k t)`` on one grid."""

    terms: tuple[tuple[complex, StationaryState], ...]

    def __post_init__(self):
        terms = tuple((complex(c), s) for c, s in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValueError("a modal solution needs at least one term")
        grids = {s.grid for _, s in terms}
        if len(grids) != 1:
            raise ValueError("all terms of a modal solution must share one grid")

    @classmethod
    def of(cls, state: StationaryState, coeff: complex = 1.0) -> "ModalSolution":
        return cls(((coeff, state),))

    @property
    def grid(self) -> SpatialGrid:
        return self.terms[0][1].grid

    def at(self, t: float = 0.0) -> np.ndarray:
        return sum(c * s.at(t) for c, s in self.terms)


def groundstate(grid: SpatialGrid, p: PUParams) -> StationaryState:
    """``exp(-(Omega1 r1**2 + Omega2 r2**2)/2)`` with energy ``(Omega1 + Omega2)/2``.

    Unnormalised.
    """
    poly = GaussianPolynomial(np.ones((1, 1), dtype=complex), p.omega1, p.omega2)
    r1, r2 = grid.mesh()
    return StationaryState(grid, poly(r1, r2), p.ground_energy, poly)


def potential(grid: SpatialGrid, p: PUParams) -> np.ndarray:
    r1, r2 = grid.mesh()
    return p.omega1**2 * r1**2 + p.omega2**2 * r2**2


def laplacian_second_order(f: np.ndarray, h: float) -> np.ndarray:
    """Five-point Laplacian on the interior (boundary ring dropped)."""
    return (
        f[2:, 1:-1] + f[:-2, 1:-1] + f[1:-1, 2:] + f[1:-1, :-2] - 4.0 * f[1:-1, 1:-1]
    ) / h**2


def derivative_fourth_order(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """First derivative along ``axis``, fourth order everywhere.

    Central five-point stencil inside, one-sided five-point stencils on the
    two outermost points of each end.
    """
    f = np.moveaxis(np.asarray(f), axis, 0)
    if f.shape[0] < 5:
        raise GridTooCoarse("fourth-order differences need at least 5 points per axis")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / 12.0
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / 12.0
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / 12.0
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / 12.0
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / 12.0
    return np.moveaxis(d / h, 0, axis)


def _terms(s) -> tuple[tuple[complex, StationaryState], ...]:
    if isinstance(s, StationaryState):
        return ((1.0, s),)
    return s.terms


def schrodinger_residual(s, p: PUParams, t: float = 0.0) -> float:
    """Sup-norm residual of the Schrodinger equation on interior grid points.

    Time derivatives are analytic (``u_t = -i E u`` per term); the spatial
    Laplacian is the second-order five-point stencil. Accepts a
    :class:`StationaryState` or a :class:`ModalSolution`.
    """
    terms = _terms(s)
    grid = terms[0][1].grid
    if grid.points < 5:
        raise GridTooCoarse(f"residual needs at least 5 grid points per axis, got {grid.points}")
    h = grid.spacing
    V = potential(grid, p)[1:-1, 1:-1]
    total = np.zeros((grid.points - 2, grid.points - 2), dtype=complex)
    for c, st in terms:
        psi = st.psi
        local = 2.0 * st.energy * psi[1:-1, 1:-1] + laplacian_second_order(psi, h) - V * psi[1:-1, 1:-1]
        total += c * np.exp(-1j * st.energy * t) * local
    return float(np.max(np.abs(total)))


def inner_product(a, b) -> complex:
    """Trapezoidal ``integral conj(a) b`` over the grid of ``a``."""
    x = a.grid.axis
    f = np.conj(a.psi) * b.psi
    return complex(trapezoid(trapezoid(f, x, axis=1), x))


def dirac_norm(s) -> float:
    """``sqrt(integral |psi|**2)`` by the trapezoidal rule.

    For a :class:`ModalSolution` the field is taken at ``t = 0``.
    """
    if isinstance(s, StationaryState):
        grid, f = s.grid, s.psi
    else:
        grid, f = s.grid, s.at(0.0)
    x = grid.axis
    dens = np.abs(f) ** 2
    return float(np.sqrt(trapezoid(trapezoid(dens, x, axis=1), x)))
