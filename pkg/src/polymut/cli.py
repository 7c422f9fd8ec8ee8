"""Command-line front end: ``polymut gen | mutate | dual | check | explore | ehrhart``.

Exit codes: 0 all checks passed, 2 usage error, 3 a check failed or a
mutation is not defined, 4 a search was inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import lie, posets, seeds
from .exact import format_rational, parse_rational
from .mutation import (
    NonConvexImage,
    NotWellDefined,
    TraceStep,
    apply_step,
    datum_from_json_obj,
    mutate_N,
    phi_polytope,
)
from .polytope import (
    PolytopeError,
    RationalPolytope,
    SearchInconclusive,
    affine_unimodular_equivalent,
    dual_at,
    ehrhart_counts,
    from_json_obj,
    interior_lattice_points,
    polar,
    to_json_obj,
    translate,
)

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 2, 3, 4

GEN_KINDS = (
    "gt-a",
    "gt-c",
    "fflv-a",
    "fflv-c",
    "sl4-nobody",
    "nz-sp4",
    "marked-order",
    "marked-chain",
    "marked-chain-order",
)
CHECK_KINDS = (
    "duality",
    "reflexive-dual",
    "interior",
    "equivalent",
    "ehrhart-dual-invariance",
    "transfer-factorization",
    "counterexample",
)


class UsageError(Exception):
    pass


def _point(p) -> list[str]:
    return [format_rational(x) for x in p]


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _parse_ints(text: str | None, name: str) -> list[int]:
    if text is None:
        raise UsageError(f"--{name} is required")
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"--{name} must be comma-separated integers") from exc


def _weight(args, n: int | None) -> list[int]:
    lam = _parse_ints(args.lam, "lambda")
    if n is not None and len(lam) != n:
        raise UsageError(f"--lambda needs {n} entries")
    return lam


def _poset_from_args(args) -> posets.MarkedPoset:
    if args.poset:
        return posets.poset_from_json_obj(_read_json(args.poset))
    if args.type and args.n:
        return lie.gt_marked_poset(args.type, args.n, _weight(args, args.n))
    raise UsageError("give --poset FILE or --type with --n and --lambda")


def generate(kind: str, args) -> RationalPolytope:
    n = args.n
    if kind in ("gt-a", "gt-c", "fflv-a", "fflv-c") and not n:
        raise UsageError("--n is required")
    if kind == "gt-a":
        return lie.gt_polytope_A(n, _weight(args, n))
    if kind == "gt-c":
        return lie.gt_polytope_C(n, _weight(args, n))
    if kind == "fflv-a":
        return lie.fflv_A(n, _weight(args, n))
    if kind == "fflv-c":
        return lie.fflv_C(n, _weight(args, n))
    if kind == "sl4-nobody":
        return lie.sl4_no_body(_weight(args, 3))
    if kind == "nz-sp4":
        return lie.nz_sp4(_weight(args, 2))
    mp = _poset_from_args(args)
    if kind == "marked-order":
        return posets.order_polytope(mp)
    if kind == "marked-chain":
        return posets.chain_polytope(mp)
    if kind == "marked-chain-order":
        labels = [x for x in (args.pi_prime or "").split(",") if x]
        by_name = {str(p): p for p in mp.unmarked}
        try:
            pi = [by_name[x] for x in labels]
        except KeyError as exc:
            raise UsageError(f"unknown unmarked element {exc.args[0]!r}") from exc
        return posets.chain_order_polytope(mp, pi)
    raise UsageError(f"unknown kind {kind!r}")


def _polytope_arg(args, attr: str = "polytope") -> RationalPolytope:
    path = getattr(args, attr, None)
    if path:
        return from_json_obj(_read_json(path))
    if attr == "polytope" and getattr(args, "gen", None):
        return generate(args.gen, args)
    raise UsageError(f"--{attr} FILE (or --gen KIND) is required")


# --- commands ----------------------------------------------------------------------


def cmd_gen(args) -> int:
    _emit(to_json_obj(generate(args.kind, args)))
    return EXIT_OK


def cmd_mutate(args) -> int:
    Q = _polytope_arg(args)
    if args.side == "tropical":
        if not args.seed or args.k is None:
            raise UsageError("tropical mutation needs --seed FILE and --k LABEL")
        seed = seeds.seed_from_json_obj(_read_json(args.seed))
        k = _label(seed.J_uf, args.k)
        node = seeds.tropical_mutate_polytope(seeds.SeedNode(seed, Q), k)
        _emit({"seed": seeds.seed_to_json_obj(node.seed), "payload": to_json_obj(node.payload)})
        return EXIT_OK
    if not args.datum:
        raise UsageError("--datum FILE is required")
    d = datum_from_json_obj(_read_json(args.datum))
    try:
        out = apply_step(Q, TraceStep(d, args.side))
    except NotWellDefined as exc:
        _emit({"status": "fail", "error": "NotWellDefined", "level": exc.level, "vertex": _point(exc.vertex)})
        return EXIT_FAIL
    except NonConvexImage as exc:
        _emit({"status": "fail", "error": "NonConvexImage", "defect": format_rational(exc.defect), "reason": exc.reason})
        return EXIT_FAIL
    _emit(to_json_obj(out))
    return EXIT_OK


def _label(labels: Sequence, text: str):
    for lab in labels:
        if str(lab) == text:
            return lab
    raise UsageError(f"{text!r} is not an unfrozen label")


def _unique_interior(P: RationalPolytope):
    pts = interior_lattice_points(P)
    return pts[0] if len(pts) == 1 else None, pts


def cmd_dual(args) -> int:
    P = _polytope_arg(args)
    if args.at:
        a = [parse_rational(x) for x in args.at.split(",")]
    elif args.origin:
        _emit(to_json_obj(polar(P)))
        return EXIT_OK
    else:
        a, pts = _unique_interior(P)
        if a is None:
            _emit({"status": "fail", "error": "no unique interior lattice point", "interior_points": [_point(p) for p in pts]})
            return EXIT_FAIL
    _emit(to_json_obj(dual_at(P, a)))
    return EXIT_OK


def cmd_ehrhart(args) -> int:
    P = _polytope_arg(args)
    if args.dual:
        a, pts = _unique_interior(P)
        if a is None:
            _emit({"status": "fail", "error": "no unique interior lattice point", "interior_points": [_point(p) for p in pts]})
            return EXIT_FAIL
        P = dual_at(P, a)
    _emit({"k": list(range(1, args.k_max + 1)), "counts": ehrhart_counts(P, args.k_max)})
    return EXIT_OK


def _check(name: str, ok: bool | None, **witness) -> dict:
    status = "inconclusive" if ok is None else ("pass" if ok else "fail")
    return {"name": name, "status": status, "witness": witness}


def run_check(kind: str, args) -> list[dict]:
    if kind == "duality":
        P = _polytope_arg(args)
        d = datum_from_json_obj(_read_json(args.datum)) if args.datum else None
        if d is None:
            raise UsageError("--datum FILE is required")
        try:
            mutated = mutate_N(P, d)
            sheared = phi_polytope(d, polar(P))
        except (NotWellDefined, NonConvexImage) as exc:
            return [_check(kind, False, error=f"{type(exc).__name__}: {exc}")]
        ok = sheared == polar(mutated)
        return [_check(kind, ok, sheared_polar=to_json_obj(sheared), polar_of_mutation=to_json_obj(polar(mutated)))]
    if kind in ("interior", "reflexive-dual"):
        P = _polytope_arg(args)
        a, pts = _unique_interior(P)
        out = [_check("interior", a is not None, interior_points=[_point(p) for p in pts])]
        if kind == "reflexive-dual":
            if a is None:
                out.append(_check("reflexive-dual", False, reason="no unique interior lattice point"))
            else:
                D = dual_at(P, a)
                bad = [_point(v) for v in D.vertices if any(x.denominator != 1 for x in v)]
                out.append(_check("reflexive-dual", not bad, dual=to_json_obj(D), non_integral_vertices=bad))
        return out
    if kind == "equivalent":
        P, Q = _polytope_arg(args), _polytope_arg(args, "other")
        try:
            cert = affine_unimodular_equivalent(P, Q, frame_budget=args.frame_budget)
        except SearchInconclusive as exc:
            return [_check(kind, None, frame_budget=exc.budget, frames_tried=exc.tried)]
        if cert is None:
            return [_check(kind, False, certificate=None)]
        m, t = cert
        return [_check(kind, True, matrix=[list(r) for r in m], translation=_point(t))]
    if kind == "ehrhart-dual-invariance":
        P, Q = _polytope_arg(args), _polytope_arg(args, "other")
        counts = []
        for X in (P, Q):
            a, pts = _unique_interior(X)
            if a is None:
                return [_check(kind, False, reason="no unique interior lattice point", interior_points=[_point(p) for p in pts])]
            counts.append(ehrhart_counts(dual_at(X, a), args.k_max))
        return [_check(kind, counts[0] == counts[1], counts=counts)]
    if kind == "transfer-factorization":
        mp = _poset_from_args(args)
        u = _parse_ints(args.u, "u") if args.u else None
        try:
            fact = posets.transfer_factorization(mp, u)
            final, steps = posets.run_factorization(fact)
        except (posets.PosetError, PolytopeError) as exc:
            return [_check(kind, False, error=f"{type(exc).__name__}: {exc}")]
        target = translate(posets.chain_polytope(mp), [-x for x in fact.image_of_u])
        out = [
            _check(
                f"step {s.index} ({s.element})",
                s.matches and s.lattice,
                matches_intermediate=s.matches,
                lattice=s.lattice,
            )
            for s in steps
        ]
        out.append(
            _check(
                kind,
                final == target and all(s.matches and s.lattice for s in steps),
                u=_point(fact.u),
                transfer_of_u=_point(fact.image_of_u),
                order=[str(q) for q in fact.order],
                final=to_json_obj(final),
            )
        )
        return out
    if kind == "counterexample":
        lam = _parse_ints(args.lam, "lambda") if args.lam else [0, 1, 2, 3]
        if len(lam) != 4:
            raise UsageError("--lambda needs 4 entries")
        rep = posets.counterexample_witness(lam)
        return [
            _check(
                kind,
                rep.passed,
                marking=list(rep.marking),
                samples=rep.samples,
                branch_mismatches=len(rep.branch_mismatches),
                coefficient_rank=rep.coefficient_rank,
                augmented_rank=rep.augmented_rank,
            )
        ]
    raise UsageError(f"unknown check {kind!r}")


def _report(argv: Sequence[str], checks: list[dict], extra: dict | None = None) -> int:
    statuses = {c["status"] for c in checks}
    overall = "fail" if "fail" in statuses else ("inconclusive" if "inconclusive" in statuses else "pass")
    obj = {"command": list(argv), "status": overall, "checks": checks}
    if extra:
        obj.update(extra)
    _emit(obj)
    return {"pass": EXIT_OK, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[overall]


def cmd_check(args, argv) -> int:
    return _report(argv, run_check(args.kind, args))


def cmd_explore(args, argv) -> int:
    lam = _weight(args, None if args.seed else 3)
    if args.seed:
        seed = seeds.seed_from_json_obj(_read_json(args.seed))
        root_payload = _polytope_arg(args)
    else:
        c = lie.cartan("A", 3)
        seed = lie.exchange_from_word(c, lie.standard_word("A", 3))
        root_payload = lie.sl4_no_body(lam)
    nodes = seeds.explore(seeds.SeedNode(seed, root_payload), depth=args.depth, k_max=args.k_max)
    checks = []
    reference = nodes[0].dual_ehrhart
    for r in nodes:
        label = "/".join(str(k) for k in r.path) or "root"
        checks.append(_check(f"interior {label}", len(r.interior_points) == 1, interior_points=[_point(p) for p in r.interior_points]))
        checks.append(_check(f"lattice dual {label}", bool(r.dual_is_lattice)))
        checks.append(_check(f"dual counts {label}", r.dual_ehrhart is not None and r.dual_ehrhart == reference, counts=r.dual_ehrhart))
    return _report(argv, checks, {"nodes": [r.to_json_obj() for r in nodes]})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polymut", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp, gen=True):
        sp.add_argument("--polytope", help="polytope JSON file ('-' for stdin)")
        if gen:
            sp.add_argument("--gen", choices=GEN_KINDS, help="generate the input polytope instead")
        weights(sp)

    def weights(sp):
        sp.add_argument("--n", type=int)
        sp.add_argument("--lambda", dest="lam", help="comma-separated weight coordinates, e.g. 2,2,2")
        sp.add_argument("--poset", help="marked poset JSON file")
        sp.add_argument("--type", choices=("A", "C"), help="GT marked poset type")
        sp.add_argument("--pi-prime", dest="pi_prime", help="comma-separated unmarked labels")

    g = sub.add_parser("gen", help="print a polytope as JSON")
    g.add_argument("kind", choices=GEN_KINDS)
    weights(g)

    m = sub.add_parser("mutate", help="apply one mutation")
    m.add_argument("--side", choices=("M", "N", "tropical"), required=True)
    m.add_argument("--datum", help="mutation datum JSON file")
    m.add_argument("--seed", help="seed JSON file (tropical side)")
    m.add_argument("--k", help="mutation direction (tropical side)")
    source(m)

    d = sub.add_parser("dual", help="polar dual at the unique interior lattice point")
    d.add_argument("--at", help="comma-separated point to dualize at")
    d.add_argument("--origin", action="store_true", help="polar dual at the origin")
    source(d)

    c = sub.add_parser("check", help="run a check and print a report")
    c.add_argument("kind", choices=CHECK_KINDS)
    c.add_argument("--other", help="second polytope JSON file")
    c.add_argument("--datum", help="mutation datum JSON file")
    c.add_argument("--u", help="admissible point for transfer-factorization")
    c.add_argument("--k-max", dest="k_max", type=int, default=3)
    c.add_argument("--frame-budget", dest="frame_budget", type=int, default=200_000)
    source(c)

    e = sub.add_parser("explore", help="walk the exchange graph and report per-node invariants")
    e.add_argument("--depth", type=int, default=3)
    e.add_argument("--k-max", dest="k_max", type=int, default=3)
    e.add_argument("--seed", help="root seed JSON file (defaults to the SL_4 initial seed)")
    source(e, gen=False)

    h = sub.add_parser("ehrhart", help="lattice-point counts of dilations")
    h.add_argument("--k-max", dest="k_max", type=int, default=3)
    h.add_argument("--dual", action="store_true", help="count the dual at the unique interior point")
    source(h)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "mutate":
            return cmd_mutate(args)
        if args.command == "dual":
            return cmd_dual(args)
        if args.command == "ehrhart":
            return cmd_ehrhart(args)
        if args.command == "check":
            return cmd_check(args, argv)
        if args.command == "explore":
            if args.depth < 0:
                raise UsageError("--depth must be nonnegative")
            return cmd_explore(args, argv)
    except UsageError as exc:
        print(f"polymut: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"polymut: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
