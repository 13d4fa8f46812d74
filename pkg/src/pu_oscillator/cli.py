"""Command line front end.

Usage::

    pu-osc simulate --model decoupled --omega1 2 --omega2 1 --t-end 20 --dt 1e-3 --out traj.csv
    pu-osc equivalence --random 20 --seed 1
    pu-osc spectrum --model decoupled --n 8 --count 9
    pu-osc spectrum --model ghost --n-list 8,16,32,64 --format csv
    pu-osc symmetry --levels 3

Exit status: 0 success/PASS, 1 numerical failure/FAIL, 2 usage or
validation error. A JSON file given by ``--config`` supplies defaults keyed
by option name (``"omega1"``, ``"t_end"``, ...); flags on the command line
win.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import dynamics as dyn
from . import quantum as qm
from . import symmetry as sym
from .model import KinematicState, ParameterError, PUParams, r_from_w, validate_params

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_INIT = (1.0, 0.0, -4.0, 0.0)


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _common() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    g = parent.add_argument_group("model")
    g.add_argument("--gamma", type=float, default=1.0)
    g.add_argument("--omega1", type=float, default=2.0)
    g.add_argument("--omega2", type=float, default=1.0)
    o = parent.add_argument_group("output")
    o.add_argument("--out", default=None, help="output file (default: stdout)")
    o.add_argument("--format", choices=("csv", "json"), default=None)
    parent.add_argument("--config", default=None, help="JSON file of option defaults")
    return parent


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(prog="pu-osc", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    subs = {}

    s = sub.add_parser("simulate", parents=[common], help="integrate one classical flow")
    s.add_argument("--model", choices=("fourth", "decoupled", "ghost"), default="fourth")
    s.add_argument("--t-end", type=float, default=20.0)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--init", type=_float_list, default=list(DEFAULT_INIT),
                   help="initial (z, z', z'', z''') mapped into the chosen model")
    s.add_argument("--every", type=int, default=1, help="write every k-th step")
    subs["simulate"] = s

    e = sub.add_parser("equivalence", parents=[common], help="compare all classical routes")
    e.add_argument("--t-end", type=float, default=20.0)
    e.add_argument("--dt", type=float, default=1e-3)
    e.add_argument("--init", type=_float_list, default=list(DEFAULT_INIT))
    e.add_argument("--random", type=int, default=0, help="extra random initial states")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--tol", type=float, default=1e-6)
    subs["equivalence"] = e

    q = sub.add_parser("spectrum", parents=[common], help="eigenvalues of a quantised Hamiltonian")
    q.add_argument("--model", choices=("decoupled", "ghost"), default="decoupled")
    q.add_argument("--n", type=int, default=8, help="basis states per mode")
    q.add_argument("--count", type=int, default=None, help="number of eigenvalues (default: all)")
    q.add_argument("--n-list", type=_int_list, default=None,
                   help="scan the minimum eigenvalue over these per-mode sizes")
    q.add_argument("--basis-omega", type=float, default=1.0,
                   help="Fock basis frequency for the ghost registers")
    subs["spectrum"] = q

    y = sub.add_parser("symmetry", parents=[common], help="verify the seven point symmetries")
    y.add_argument("--levels", type=int, default=3, help="ladder levels per mode")
    y.add_argument("--grid-points", type=int, default=257)
    y.add_argument("--grid-span", type=float, default=None, help="default 8/sqrt(omega2)")
    subs["symmetry"] = y
    return parser, subs


def _load_config(argv: Sequence[str]) -> dict:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    ns, _ = pre.parse_known_args(argv)
    if ns.config is None:
        return {}
    with open(ns.config) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def _params(args) -> PUParams:
    return validate_params(args.gamma, args.omega1, args.omega2)


def _init_state(values) -> KinematicState:
    if len(values) != 4:
        raise UsageError(f"--init needs four numbers, got {len(values)}")
    return KinematicState(*values)


# ---------------------------------------------------------------------------
# output helpers


def _open_out(args):
    if args.out is None:
        return sys.stdout, False
    return open(args.out, "w", newline="\n"), True


def _write_csv(args, header: Sequence[str], rows: np.ndarray):
    buf = io.StringIO()
    rows = np.asarray(rows, dtype=float) + 0.0  # no "-0" in output
    np.savetxt(buf, rows, fmt="%.17g", delimiter=",", header=",".join(header), comments="")
    fh, close = _open_out(args)
    try:
        fh.write(buf.getvalue())
    finally:
        if close:
            fh.close()


def _write_json(args, obj: dict):
    fh, close = _open_out(args)
    try:
        fh.write(json.dumps(obj, indent=2) + "\n")
    finally:
        if close:
            fh.close()


def _log(msg: str, args):
    # reports go to stdout unless stdout carries the data file
    stream = sys.stderr if args.out is None and args.format is not None else sys.stdout
    print(msg, file=stream)


# ---------------------------------------------------------------------------
# commands


def cmd_simulate(args) -> int:
    p = _params(args)
    s0 = _init_state(args.init)
    if args.every < 1:
        raise UsageError("--every must be >= 1")
    if args.model == "fourth":
        field, x0, energy = dyn.fourth_order_field(p), s0, dyn.fourth_energy_series(p)
    elif args.model == "decoupled":
        field, x0, energy = dyn.decoupled_field(p), r_from_w(s0, p), dyn.decoupled_energy_series(p)
    else:
        field, x0, energy = dyn.ghost_field(p), dyn.ghost_from_kinematic(s0, p), dyn.ghost_energy_series(p)
    try:
        traj = dyn.integrate(field, x0, args.t_end, args.dt, energy)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = np.column_stack([traj.times, traj.states, traj.energy])[:: args.every]
    header = ["t", *traj.columns, "energy"]
    if args.format == "json":
        _write_json(args, {
            "model": args.model,
            "params": p.as_dict(),
            "dt": args.dt,
            "columns": header,
            "rows": rows.tolist(),
        })
    else:
        _write_csv(args, header, rows)
    return EXIT_OK


def cmd_equivalence(args) -> int:
    p = _params(args)
    states = [_init_state(args.init)]
    if args.random < 0:
        raise UsageError("--random must be >= 0")
    rng = np.random.default_rng(args.seed)
    states += [KinematicState(*rng.uniform(-1.0, 1.0, 4)) for _ in range(args.random)]
    try:
        reports = [dyn.equivalence_deviation(s, p, args.t_end, args.dt) for s in states]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    worst = max(r["max_deviation"] for r in reports)
    passed = worst <= args.tol
    records = [
        {"init": list(map(float, s.as_array())), "pairs": r["pairs"], "max_deviation": r["max_deviation"]}
        for s, r in zip(states, reports)
    ]
    if args.format == "json":
        _write_json(args, {
            "params": p.as_dict(), "t_end": args.t_end, "dt": args.dt, "threshold": args.tol,
            "runs": records, "max_deviation": worst, "passed": passed,
        })
    elif args.format == "csv":
        pair_names = list(reports[0]["pairs"])
        rows = np.array([[*rec["init"], *rec["pairs"].values(), rec["max_deviation"]] for rec in records])
        _write_csv(args, ["w1", "w2", "w3", "w4", *pair_names, "max_deviation"], rows)
    for rec in records:
        init = ",".join(f"{v:.6g}" for v in rec["init"])
        _log(f"init=({init})  max |dz| = {rec['max_deviation']:.3e}", args)
    _log(f"max deviation {worst:.3e} (threshold {args.tol:.1e}): {'PASS' if passed else 'FAIL'}", args)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_spectrum(args) -> int:
    p = _params(args)
    build = (
        qm.hamiltonian_decoupled_matrix
        if args.model == "decoupled"
        else lambda n, p: qm.hamiltonian_ghost_matrix(n, p, args.basis_omega)
    )
    if args.n_list:
        sizes = args.n_list
        if any(n < 2 for n in sizes) or any(b < a for a, b in zip(sizes, sizes[1:])):
            raise UsageError("--n-list must be nondecreasing sizes >= 2")
        scan = [(n, float(qm.spectrum(build(n, p), 1)[0])) for n in sizes]
        decreasing = all(b[1] < a[1] for a, b in zip(scan, scan[1:]))
        if args.format == "csv":
            _write_csv(args, ["size", "min_eigenvalue"], np.array(scan, dtype=float))
        else:
            _write_json(args, {
                "model": args.model, "params": p.as_dict(),
                "scan": [{"size": n, "dim": n * n, "min_eigenvalue": e} for n, e in scan],
                "strictly_decreasing": decreasing,
            })
        return EXIT_OK
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    H = build(args.n, p)
    count = H.dim if args.count is None else args.count
    if not 1 <= count <= H.dim:
        raise UsageError(f"--count {count} outside 1..{H.dim} (dim = n**2)")
    vals = [float(v) for v in qm.spectrum(H, count)]
    if args.format == "csv":
        _write_csv(args, ["index", "eigenvalue"], np.column_stack([np.arange(count), vals]))
    else:
        _write_json(args, {"model": args.model, "params": p.as_dict(), "dim": H.dim, "eigenvalues": vals})
    return EXIT_OK


def _order(coarse: float, fine: float) -> float:
    return float(np.log2(coarse / fine)) if coarse > 0 and fine > 0 else float("inf")


def symmetry_checks(p: PUParams, grid: qm.SpatialGrid, levels: int) -> list[dict]:
    """Run the symmetry suite; one record per check with value, bound, and verdict."""
    fine = grid.refined()
    checks = []

    def add(name, value, bound, ok):
        checks.append({"check": name, "value": float(value), "bound": bound, "passed": bool(ok)})

    gs = qm.groundstate(grid, p)
    gs_fine = qm.groundstate(fine, p)
    u0 = qm.ModalSolution.of(gs)
    for lab in ("Γ+1", "Γ+2"):
        g = sym.generator(lab, p)
        ana = np.max(np.abs(sym.evolutionary_action(g, u0, "analytic").at(0)))
        add(f"annihilate {lab} analytic sup", ana, "<= 1e-10", ana <= 1e-10)
        c = np.max(np.abs(sym.evolutionary_action(g, u0).at(0)))
        f = np.max(np.abs(sym.evolutionary_action(g, qm.ModalSolution.of(gs_fine)).at(0)))
        order = _order(c, f)
        add(f"annihilate {lab} grid order", order, "in [3.5, 4.5]", 3.5 <= order <= 4.5)

    ladder = {}
    for n1 in range(levels + 1):
        for n2 in range(levels + 1):
            st = sym.create_eigenstate(n1, n2, grid, p)
            st_fine = sym.create_eigenstate(n1, n2, fine, p)
            expected = p.ground_energy + n1 * p.omega1 + n2 * p.omega2
            e = sym.energy_of(qm.ModalSolution.of(st))
            ladder[(n1, n2)] = e
            add(f"energy ({n1},{n2}) = {expected:g}", abs(e - expected), "<= 1e-8", abs(e - expected) <= 1e-8)
            order = _order(qm.schrodinger_residual(st, p), qm.schrodinger_residual(st_fine, p))
            add(f"residual order ({n1},{n2})", order, "in [1.8, 2.2]", 1.8 <= order <= 2.2)
            norm = qm.dirac_norm(st)
            add(f"norm ({n1},{n2}) positive", norm, "> 0", norm > 0)

    n_mat = 2 * levels + 2
    mat = qm.spectrum(qm.hamiltonian_decoupled_matrix(n_mat, p))
    ceiling = p.ground_energy + (levels + 1) * p.omega2
    lad = np.sort([e for e in ladder.values() if e < ceiling - 1e-9])
    mat_low = mat[mat < ceiling - 1e-9]
    dev = float(np.max(np.abs(lad - mat_low))) if lad.shape == mat_low.shape else float("inf")
    add("ladder energies = matrix spectrum", dev, "<= 1e-10", dev <= 1e-10)

    if levels >= 1:
        a = sym.create_eigenstate(1, 0, grid, p, "grid")
        a = sym.evolutionary_action(sym.generator("Γ-2", p), qm.ModalSolution.of(a)).terms[0][1]
        b = sym.create_eigenstate(0, 1, grid, p, "grid")
        b = sym.evolutionary_action(sym.generator("Γ-1", p), qm.ModalSolution.of(b)).terms[0][1]
        scale = np.vdot(b.psi, a.psi) / np.vdot(b.psi, b.psi)
        dev = np.max(np.abs(a.psi - scale * b.psi)) / np.max(np.abs(a.psi))
        add("ladder order Γ-1Γ-2 vs Γ-2Γ-1", dev, "<= 1e-8", dev <= 1e-8)

    rng = np.random.default_rng(7)
    basis = [sym.create_eigenstate(n1, n2, grid, p) for n1, n2 in ((0, 0), (1, 0), (0, 1))]
    coeffs = rng.normal(size=3) + 1j * rng.normal(size=3)
    u = qm.ModalSolution(tuple(zip(coeffs, basis)))
    base = max(abs(c) * qm.schrodinger_residual(s, p) for c, s in u.terms)
    res = sym.solution_map_check(sym.generator("Γ-1", p), u, p)
    add("Γ-1 maps superposition to solution", res / base, "<= 10 x input residual", res <= 10 * base)

    eig = qm.ModalSolution.of(basis[1])
    r0 = qm.schrodinger_residual(eig, p)
    r3 = sym.solution_map_check(sym.generator("Γ3", p), eig, p)
    dev = abs(r3 - abs(basis[1].energy) * r0)
    add("Γ3 image = E x eigenstate (residual)", dev, "<= 1e-10", dev <= 1e-10)
    r4 = sym.solution_map_check(sym.generator("Γ4", p), u, p)
    add("Γ4 image = u (residual)", abs(r4 - qm.schrodinger_residual(u, p)), "<= 1e-14",
        abs(r4 - qm.schrodinger_residual(u, p)) <= 1e-14)
    r5 = sym.solution_map_check(sym.generator("Γ5", p, payload=u), eig, p)
    add("Γ5 image = payload (residual)", abs(r5 - qm.schrodinger_residual(u, p)), "<= 1e-14",
        abs(r5 - qm.schrodinger_residual(u, p)) <= 1e-14)
    return checks


def cmd_symmetry(args) -> int:
    p = _params(args)
    if args.levels < 0:
        raise UsageError("--levels must be >= 0")
    span = args.grid_span if args.grid_span is not None else 8.0 / np.sqrt(p.omega2)
    try:
        grid = qm.SpatialGrid(span, args.grid_points)
        if grid.points < 5:
            raise qm.GridTooCoarse(f"--grid-points {grid.points} too coarse; need at least 5")
        if grid.points < 32 * args.levels:
            raise qm.GridTooCoarse(
                f"--grid-points {grid.points} cannot resolve {args.levels} levels; "
                f"need at least {32 * args.levels}"
            )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    checks = symmetry_checks(p, grid, args.levels)
    passed = all(c["passed"] for c in checks)
    energies = sorted(
        p.ground_energy + n1 * p.omega1 + n2 * p.omega2
        for n1 in range(args.levels + 1) for n2 in range(args.levels + 1)
    )
    if args.format == "json":
        _write_json(args, {"params": p.as_dict(), "grid": {"span": span, "points": grid.points},
                           "ladder_energies": energies, "checks": checks, "passed": passed})
    elif args.format == "csv":
        fh, close = _open_out(args)
        try:
            fh.write("check,value,bound,passed\n")
            for c in checks:
                fh.write(f"\"{c['check']}\",{c['value']:.17g},\"{c['bound']}\",{int(c['passed'])}\n")
        finally:
            if close:
                fh.close()
    _log("ladder energies: " + ", ".join(f"{e:g}" for e in energies), args)
    for c in checks:
        _log(f"{'PASS' if c['passed'] else 'FAIL'}  {c['check']:<40s} {c['value']:.3e}  ({c['bound']})", args)
    _log("all checks PASS" if passed else "some checks FAILED", args)
    return EXIT_OK if passed else EXIT_FAIL


COMMANDS = {
    "simulate": cmd_simulate,
    "equivalence": cmd_equivalence,
    "spectrum": cmd_spectrum,
    "symmetry": cmd_symmetry,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        cfg = _load_config(argv)
    except (OSError, ValueError, UsageError) as exc:
        parser.print_usage(sys.stderr)
        print(f"pu-osc: error: config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg:
        for sp in subs.values():
            sp.set_defaults(**cfg)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (ParameterError, UsageError) as exc:
        subs[args.command].print_usage(sys.stderr)
        print(f"pu-osc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (dyn.IntegrationError, qm.SpectrumError) as exc:
        print(f"pu-osc {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
