import numpy as np
import pytest

from pu_oscillator.quantum import (
    GridTooCoarse,
    ModalSolution,
    SpatialGrid,
    StationaryState,
    default_grid,
    dirac_norm,
    groundstate,
    schrodinger_residual,
)
from pu_oscillator.symmetry import (
    LABELS,
    NotStationary,
    all_generators,
    create_eigenstate,
    energy_of,
    evolutionary_action,
    generator,
    raw_action,
    solution_map_check,
)


@pytest.fixture
def grid(p):
    return default_grid(p)


@pytest.fixture
def gs(grid, p):
    return ModalSolution.of(groundstate(grid, p))


class TestGenerators:
    def test_seven(self, p, gs):
        gens = all_generators(p, gs)
        assert [g.label for g in gens] == list(LABELS)

    @pytest.mark.parametrize("label, mode, sign", [("Γ+1", 1, 1), ("Γ-1", 1, -1), ("Γ+2", 2, 1), ("Γ-2", 2, -1)])
    def test_ladder_coefficients(self, p, label, mode, sign):
        g = generator(label, p)
        omega = p.omega1 if mode == 1 else p.omega2
        t, r1, r2 = 0.37, 0.8, -1.3
        phase = np.exp(sign * 1j * omega * t)
        xi = g.xi_r1 if mode == 1 else g.xi_r2
        other = g.xi_r2 if mode == 1 else g.xi_r1
        assert xi(t) == pytest.approx(-sign * phase)
        assert other(t) == 0 and g.xi_t(t) == 0
        assert g.phi(t, r1, r2) == pytest.approx(phase * omega * (r1 if mode == 1 else r2))

    def test_time_factorisation(self, p):
        # each coefficient is exp(i nu t) times its value at t = 0
        for lab in ("Γ+1", "Γ-1", "Γ+2", "Γ-2", "Γ3", "Γ4"):
            g = generator(lab, p)
            for t in (0.3, 1.9):
                f = np.exp(1j * g.frequency * t)
                for c in (g.xi_t, g.xi_r1, g.xi_r2):
                    assert c(t) == pytest.approx(f * c(0.0))
                assert g.phi(t, 0.4, -0.2) == pytest.approx(f * g.phi(0.0, 0.4, -0.2))

    def test_gamma3_gamma4(self, p):
        assert generator("Γ3", p).xi_t(0.0) == 1j
        assert generator("Γ4", p).phi(0.0, 1.0, 2.0) == 1.0

    def test_ascii_labels_and_errors(self, p):
        assert generator("G-1", p).label == "Γ-1"
        with pytest.raises(ValueError):
            generator("Γ6", p)
        with pytest.raises(ValueError):
            generator("Γ5", p)


class TestAction:
    @pytest.mark.parametrize("label", ["Γ+1", "Γ+2"])
    def test_annihilation_analytic(self, p, gs, label):
        out = evolutionary_action(generator(label, p), gs, "analytic")
        assert np.max(np.abs(out.at(0.0))) <= 1e-10

    @pytest.mark.parametrize("label", ["Γ+1", "Γ+2"])
    def test_annihilation_grid_order_four(self, p, label):
        sups = []
        for m in (129, 257, 513):
            u = ModalSolution.of(groundstate(SpatialGrid(8.0, m), p))
            sups.append(np.max(np.abs(evolutionary_action(generator(label, p), u).at(0.0))))
        for coarse, fine in zip(sups, sups[1:]):
            assert 12 <= coarse / fine <= 20

    def test_literal_exponent_not_annihilated(self, p, grid):
        r1, r2 = grid.mesh()
        literal = StationaryState(grid, np.exp(-0.5 * (p.omega1 * r1 + p.omega2 * r2**2)), 1.5)
        out = evolutionary_action(generator("Γ+1", p), ModalSolution.of(literal))
        assert np.max(np.abs(out.at(0.0))) > 0.1 * np.max(np.abs(literal.psi))

    def test_creation_from_groundstate(self, p, gs, grid):
        out = evolutionary_action(generator("Γ-1", p), gs, "analytic")
        (c, st), = out.terms
        r1, _ = grid.mesh()
        assert st.energy == pytest.approx(p.ground_energy + p.omega1)
        assert np.allclose(st.psi, 2 * p.omega1 * r1 * gs.terms[0][1].psi, atol=1e-12)
        grid_route = evolutionary_action(generator("Γ-1", p), gs).terms[0][1]
        assert np.max(np.abs(grid_route.psi - st.psi)) <= 1e-3

    def test_energy_shift_signs(self, p, gs):
        e0 = p.ground_energy
        assert evolutionary_action(generator("Γ-2", p), gs).terms[0][1].energy == e0 + p.omega2
        assert evolutionary_action(generator("Γ+2", p), gs).terms[0][1].energy == e0 - p.omega2

    def test_gamma4_identity(self, p, grid):
        u = ModalSolution(((0.5, groundstate(grid, p)), (2j, create_eigenstate(1, 0, grid, p))))
        out = evolutionary_action(generator("Γ4", p), u)
        assert np.array_equal(out.at(0.0), u.at(0.0))
        assert np.array_equal(out.at(1.3), u.at(1.3))

    def test_gamma5_returns_payload(self, p, grid, gs):
        f = ModalSolution.of(create_eigenstate(0, 2, grid, p))
        assert evolutionary_action(generator("Γ5", p, payload=f), gs) is f

    def test_mismatched_grid_rejected(self, p, gs):
        other = ModalSolution.of(groundstate(SpatialGrid(8.0, 129), p))
        with pytest.raises(ValueError):
            evolutionary_action(generator("Γ5", p, payload=other), gs)

    def test_analytic_needs_closed_forms(self, p, grid):
        u = ModalSolution.of(StationaryState(grid, groundstate(grid, p).psi, 1.5))
        with pytest.raises(ValueError):
            evolutionary_action(generator("Γ+1", p), u, "analytic")

    def test_raw_form_does_not_map_to_solutions(self, p, grid):
        u = ModalSolution.of(create_eigenstate(1, 0, grid, p))
        evo = schrodinger_residual(evolutionary_action(generator("Γ-1", p), u), p)
        raw = schrodinger_residual(raw_action(generator("Γ-1", p), u), p)
        assert raw > 100 * evo


class TestEnergy:
    def test_groundstate(self, p, gs):
        assert energy_of(gs) == pytest.approx(1.5, abs=1e-12)

    def test_created(self, p, gs):
        up = evolutionary_action(generator("Γ-2", p), gs)
        assert energy_of(up) == pytest.approx(2.5, abs=1e-12)

    def test_superposition_rejected(self, p, grid):
        u = ModalSolution(((1.0, groundstate(grid, p)), (1.0, create_eigenstate(1, 0, grid, p))))
        with pytest.raises(NotStationary, match="not a stationary state"):
            energy_of(u)

    def test_degenerate_superposition_accepted(self, p, grid):
        # (1,0) and (0,2) share E = 3.5 for Omega = (2, 1)
        u = ModalSolution(((1.0, create_eigenstate(1, 0, grid, p)), (0.5j, create_eigenstate(0, 2, grid, p))))
        assert energy_of(u) == pytest.approx(3.5)


class TestCreate:
    def test_zero_is_groundstate(self, p, grid):
        st = create_eigenstate(0, 0, grid, p)
        gs = groundstate(grid, p)
        assert np.allclose(st.psi, gs.psi / dirac_norm(gs), atol=1e-15)

    def test_first_fast_excitation(self, p, grid):
        st = create_eigenstate(1, 0, grid, p)
        r1, r2 = grid.mesh()
        shape = r1 * np.exp(-0.5 * (2 * r1**2 + r2**2))
        scale = np.vdot(shape, st.psi) / np.vdot(shape, shape)
        assert np.max(np.abs(st.psi - scale * shape)) <= 1e-12
        assert st.energy == 3.5
        assert dirac_norm(st) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n1, n2", [(n1, n2) for n1 in range(4) for n2 in range(4)])
    def test_ladder_energy(self, p, grid, n1, n2):
        st = create_eigenstate(n1, n2, grid, p)
        assert abs(energy_of(ModalSolution.of(st)) - (1.5 + 2 * n1 + n2)) <= 1e-8
        assert dirac_norm(st) > 0

    def test_grid_route_agrees(self, p, grid):
        a = create_eigenstate(2, 1, grid, p, "grid")
        b = create_eigenstate(2, 1, grid, p, "analytic")
        assert np.max(np.abs(a.psi - b.psi)) <= 1e-3 * np.max(np.abs(b.psi))

    def test_coarse_grid(self, p):
        with pytest.raises(GridTooCoarse):
            create_eigenstate(3, 0, SpatialGrid(8.0, 65), p)
        with pytest.raises(ValueError):
            create_eigenstate(-1, 0, SpatialGrid(8.0, 65), p)

    @pytest.mark.parametrize("route", ["grid", "analytic"])
    def test_ladder_order_commutes(self, p, grid, route):
        a = create_eigenstate(1, 0, grid, p, route)
        a = evolutionary_action(generator("Γ-2", p), ModalSolution.of(a), route).terms[0][1]
        b = create_eigenstate(0, 1, grid, p, route)
        b = evolutionary_action(generator("Γ-1", p), ModalSolution.of(b), route).terms[0][1]
        scale = np.vdot(b.psi, a.psi) / np.vdot(b.psi, b.psi)
        assert np.max(np.abs(a.psi - scale * b.psi)) <= 1e-8 * np.max(np.abs(a.psi))


class TestSolutionMap:
    def test_superposition_closure(self, p, grid, rng):
        basis = [create_eigenstate(*n, grid, p) for n in ((0, 0), (1, 0), (0, 1))]
        coeffs = rng.normal(size=3) + 1j * rng.normal(size=3)
        u = ModalSolution(tuple(zip(coeffs, basis)))
        base = max(abs(c) * schrodinger_residual(s, p) for c, s in u.terms)
        assert solution_map_check(generator("Γ-1", p), u, p) <= 10 * base

    def test_gamma5_residual_is_payload_residual(self, p, grid, gs):
        f = ModalSolution.of(create_eigenstate(1, 1, grid, p))
        assert solution_map_check(generator("Γ5", p, payload=f), gs, p) == schrodinger_residual(f, p)

    def test_gamma3_scalar_multiple(self, p, grid):
        st = create_eigenstate(0, 1, grid, p)
        u = ModalSolution.of(st)
        r = solution_map_check(generator("Γ3", p), u, p)
        assert abs(r - st.energy * schrodinger_residual(u, p)) <= 1e-10

    @pytest.mark.parametrize("label", ["Γ+1", "Γ-1", "Γ+2", "Γ-2"])
    def test_ladders_on_excited_states(self, p, grid, label):
        u = ModalSolution.of(create_eigenstate(2, 1, grid, p))
        fine = ModalSolution.of(create_eigenstate(2, 1, grid.refined(), p))
        coarse_r = solution_map_check(generator(label, p), u, p)
        fine_r = solution_map_check(generator(label, p), fine, p)
        assert 3.0 <= coarse_r / fine_r <= 5.0
