"""
Command line interface.

Every subcommand prints a JSON summary to stdout; sweeps can also write CSV.
Site numbers on the command line and in CSV headers are 1-based.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import harness
from .chain import (ChainError, ChainSpec, FieldProfile, build_collective_pair, dense_hamiltonian,
                    dimer_couplings, load_spec)
from .factorization import (FactorizationError, check_separable, product_state, rpa_certificate,
                            uniform_solution)
from .pair import FieldRay


def _grid(args, spec: ChainSpec, ray: FieldRay) -> np.ndarray:
    lo = args.lo
    hi = args.hi
    if hi is None:
        try:
            hi = 1.5 * harness.factorizing_point(spec, ray)[0]
        except (FactorizationError, ChainError):
            hi = 2.0
    if lo is None:
        lo = hi / args.points
    return np.linspace(lo, hi, args.points)


def _as_collective(spec: ChainSpec) -> ChainSpec:
    if spec.model == "collective":
        return spec
    v = dimer_couplings(spec)["o"]
    b = spec.site_fields
    return build_collective_pair(spec.n, spec.s_odd, spec.s_even, v, float(b[0]), float(b[1]))


def _emit(obj) -> None:
    sys.stdout.write(harness.dumps(obj) + "\n")


def _summary(res: harness.SweepResult, args) -> dict:
    out = dict(res.meta)
    out["rows"] = len(res.rows)
    out["degenerate_rows"] = int(sum(bool(r["degenerate"]) for r in res.rows))
    gap = np.array([r["gap"] for r in res.rows if r["parity"] != 0])
    out["gap_sign_changes"] = int(np.count_nonzero(np.diff(np.sign(gap)) != 0))
    if "monogamy_margin" in res.columns:
        out["min_monogamy_margin"] = float(min(r["monogamy_margin"] for r in res.rows if "monogamy_margin" in r))
    if args.csv:
        out["csv"] = args.csv
    return out


def cmd_sweep(args) -> int:
    spec = load_spec(args.spec)
    if args.command == "collective":
        spec = _as_collective(spec)
    ray = FieldRay.parse(args.ray)
    pairs = harness.parse_pairs(args.pairs)
    if not pairs and spec.model == "collective":
        pairs = [(0, 1), (0, 2), (1, 3)]
    res = harness.sweep(spec, ray, _grid(args, spec, ray), pairs or None,
                        backend=args.backend, workers=args.workers)
    if args.csv:
        res.to_csv(args.csv)
    _emit(_summary(res, args))
    return 0


def cmd_transitions(args) -> int:
    spec = load_spec(args.spec)
    ray = FieldRay.parse(args.ray)
    grid = _grid(args, spec, ray)
    expected = args.expected if args.expected is not None else spec.n // 2
    rep = harness.find_transitions(spec, ray, grid[0], grid[-1], points=args.points,
                                   xtol=args.xtol, expected=expected, backend=args.backend)
    _emit(rep.to_dict())
    return 0


def cmd_side_limits(args) -> int:
    spec = load_spec(args.spec)
    ray = FieldRay.parse(args.ray)
    out = harness.side_limit_probe(spec, ray, delta=args.delta,
                                   pairs=harness.parse_pairs(args.pairs) or None, backend=args.backend)
    if not args.verbose:
        for part in list(out["sides"].values()) + list(out["exact"].values()):
            part.pop("values")
    _emit(out)
    return 0


def cmd_strong_field(args) -> int:
    spec = load_spec(args.spec)
    b = [float(x) for x in args.b.split(",")]
    _emit(harness.strong_field_check(spec, b))
    return 0


def cmd_factorize(args) -> int:
    spec = load_spec(args.spec)
    ray = FieldRay.parse(args.ray)
    if ray.kind == "uniform":
        st = uniform_solution(spec)
    else:
        t, st = harness.factorizing_point(spec, ray)
    out = st.to_record()
    out["separability"] = check_separable(spec, st.angles, st.fields)
    out["rpa_max_bminus"] = rpa_certificate(spec, st).max_bminus
    if spec.dimension <= 2**12:
        sp = spec.with_fields(FieldProfile.per_site(st.fields))
        psi = product_state(spec, st.angles, st.rotated)
        out["residual"] = float(np.linalg.norm(dense_hamiltonian(sp) @ psi - st.energy * psi))
    _emit(out)
    return 0


def cmd_validate(args) -> int:
    rep = harness.validate(seed=args.seed, n_max=args.n_max, fault=args.fault, draws=args.draws,
                           dump_dir=args.dump_dir)
    _emit(rep)
    return 0 if rep["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dimersep", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, ray=True, grid=False):
        sp.add_argument("--spec", required=True, help="chain spec JSON file")
        if ray:
            sp.add_argument("--ray", default="uniform", help="uniform | ratio:<eta> | fixed-even:<b_e>")
        sp.add_argument("--backend", default="auto", choices=["auto", "jw", "collective", "dense"])
        if grid:
            sp.add_argument("--from", dest="lo", type=float, default=None)
            sp.add_argument("--to", dest="hi", type=float, default=None)
            sp.add_argument("--points", type=int, default=600)

    for name, helptext in (("sweep", "ground-state observables along a field ray"),
                           ("collective", "sweep of the full-range two-sublattice model")):
        sp = sub.add_parser(name, help=helptext)
        common(sp, grid=True)
        sp.add_argument("--pairs", default=None, help="1-based site pairs, e.g. 1:2,2:4")
        sp.add_argument("--csv", default=None, help="write rows to this CSV file")
        sp.add_argument("--workers", type=int, default=1)
        sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("transitions", help="parity crossings along a field ray")
    common(sp, grid=True)
    sp.add_argument("--xtol", type=float, default=1e-12)
    sp.add_argument("--expected", type=int, default=None)
    sp.set_defaults(func=cmd_transitions)

    sp = sub.add_parser("side-limits", help="concurrences just below and above the factorizing field")
    common(sp)
    sp.add_argument("--delta", type=float, default=1e-6)
    sp.add_argument("--pairs", default=None)
    sp.add_argument("--verbose", action="store_true", help="include every pair value")
    sp.set_defaults(func=cmd_side_limits)

    sp = sub.add_parser("strong-field", help="JW values versus strong-field expansions")
    common(sp, ray=False)
    sp.add_argument("--b", default="50", help="comma separated uniform fields")
    sp.set_defaults(func=cmd_strong_field)

    sp = sub.add_parser("factorize", help="separable solution, residual and RPA certificate")
    common(sp)
    sp.set_defaults(func=cmd_factorize)

    sp = sub.add_parser("validate", help="randomized oracle campaign")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n-max", type=int, default=8)
    sp.add_argument("--draws", type=int, default=20)
    sp.add_argument("--fault", default=None, choices=["g-symmetry"])
    sp.add_argument("--dump-dir", default=None)
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ChainError, ValueError) as exc:
        sys.stderr.write(f"dimersep: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
