"""Command line interface.

Exit codes: 0 success, 2 parse error, 3 factor-free violation, 4 internal
invariant failure (including any failed check in ``verify``).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import agraph as ag
from .errors import ChiNonNegative, FactorFreeViolation, ParseError, RetriesExhausted
from .factors import FactorSystem
from .freegroup import (
    parse_free_word,
    product_to_free,
    stallings_build,
    stallings_pullback,
    verify_shnc,
)
from .instances import InstanceSpec, generate
from .magnus import embed
from .maxedges import check_certificate, find_all_certified, find_one_maximal_edge, verify_edge_count_bound
from .pullback import components, intersection_with_base, pullback, verify_theorem1
from .words import (
    compare,
    factorize_u1_u2,
    format_word,
    is_cyclically_reduced,
    is_strongly_negative,
    is_strongly_positive,
    parse_word,
    rotate,
    strongly_signed_cyclic_permutation,
)

EXIT_PARSE = 2
EXIT_FACTOR_FREE = 3
EXIT_INTERNAL = 4


class InvariantFailure(Exception):
    pass


@dataclass
class InstanceFile:
    factors: FactorSystem
    subgroups: dict[str, list]
    free_subgroups: dict[str, list]

    @classmethod
    def load(cls, path: str) -> "InstanceFile":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read instance file {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ParseError("instance file must hold a JSON object")
        factors = FactorSystem.from_spec(data.get("factors", []))
        subgroups = {
            name: [parse_word(w, factors) for w in words]
            for name, words in data.get("subgroups", {}).items()
        }
        free = {
            name: [parse_free_word(w) for w in words]
            for name, words in data.get("free", {}).get("subgroups", {}).items()
        }
        return cls(factors, subgroups, free)

    def gens(self, name: str):
        if name not in self.subgroups:
            raise ParseError(f"no subgroup named {name!r}")
        return self.subgroups[name]

    def graph(self, name: str) -> ag.AGraph:
        return ag.build_from_generators(self.gens(name))


def _emit(args, text_lines: list[str], payload) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


# -- subcommands ------------------------------------------------------------------


def cmd_rank(args) -> int:
    inst = InstanceFile.load(args.file)
    g = inst.graph(args.subgroup)
    b = ag.basis(g)
    chi = ag.euler_char(g)
    payload = {
        "subgroup": args.subgroup,
        "euler_char": chi,
        "reduced_rank": ag.reduced_rank(g),
        "basis_size": len(b),
        "basis": [format_word(w) for w in b],
    }
    lines = [
        f"subgroup {args.subgroup}: chi = {chi}, reduced rank = {ag.reduced_rank(g)}",
        f"basis size = {len(b)}",
    ] + [f"  {format_word(w)}" for w in b]
    _emit(args, lines, payload)
    return 0


def cmd_intersect(args) -> int:
    inst = InstanceFile.load(args.file)
    g1, g2 = inst.graph(args.h1), inst.graph(args.h2)
    p = pullback(g1, g2)
    comps = components(p)
    rep = verify_theorem1(g1, g2, p)
    base = intersection_with_base(g1, g2)
    payload = {
        "components": [c.summary() for c in comps],
        "intersection_basis": [format_word(w) for w in ag.basis(base)],
        "rank_inequality": rep.as_dict(),
    }
    lines = [f"{len(comps)} component(s)"]
    for i, c in enumerate(comps):
        lines.append(
            f"  [{i}] rank {c.rank}  representative {format_word(c.representative)}"
            f"  ({c.graph.n_vertices} vertices, {c.graph.n_edges} edges)"
        )
    lines.append(f"{args.h1} ∩ {args.h2} basis: " + ", ".join(payload["intersection_basis"] or ["(trivial)"]))
    lines.append(
        f"rbar({args.h1},{args.h2}) = {rep.rank12} <= {rep.rank1} * {rep.rank2}: "
        + ("HOLDS" if rep.holds else "VIOLATED")
    )
    _emit(args, lines, payload)
    if not rep.holds:
        raise InvariantFailure("rank inequality violated")
    return 0


def cmd_order_cmp(args) -> int:
    inst = InstanceFile.load(args.file)
    u, w = parse_word(args.w1, inst.factors), parse_word(args.w2, inst.factors)
    res = compare(u, w).value
    _emit(args, [res], {"result": res})
    return 0


def cmd_order_embed(args) -> int:
    inst = InstanceFile.load(args.file)
    w = parse_word(args.word, inst.factors)
    cap = args.cap if args.cap is not None else max(len(w), 1)
    s = embed(w, cap)
    payload = {"cap": cap, "terms": {" ".join(f"X{a}" for a in m) or "1": str(c) for m, c in s.terms.items()}}
    _emit(args, [f"cap {cap}: {s}"], payload)
    return 0


def cmd_word_classify(args) -> int:
    inst = InstanceFile.load(args.file)
    w = parse_word(args.word, inst.factors)
    u1, u2 = factorize_u1_u2(w)
    payload = {
        "word": format_word(w),
        "strongly_positive": bool(w) and is_strongly_positive(w),
        "strongly_negative": bool(w) and is_strongly_negative(w),
        "factorization": {"u1": format_word(u1), "u2": format_word(u2)},
    }
    lines = [
        f"word {format_word(w)}",
        f"strongly positive: {payload['strongly_positive']}, strongly negative: {payload['strongly_negative']}",
        f"W = U1 U2^-1 with U1 = {format_word(u1)}, U2 = {format_word(u2)}",
    ]
    if w and is_cyclically_reduced(w):
        r, kind = strongly_signed_cyclic_permutation(w)
        payload["rotation"] = {"by": r, "word": format_word(rotate(w, r)), "kind": kind.value}
        lines.append(f"rotation by {r}: {format_word(rotate(w, r))} is {kind.value}")
    else:
        lines.append("not cyclically reduced: no rotation classification")
    _emit(args, lines, payload)
    return 0


def cmd_maxedges(args) -> int:
    inst = InstanceFile.load(args.file)
    g1, g2 = inst.graph(args.h1), inst.graph(args.h2)
    p = pullback(g1, g2)
    payload: dict = {"pullback": {"vertices": p.graph.n_vertices, "edges": p.graph.n_edges,
                                  "euler_char": ag.euler_char(p.graph)}}
    lines = [f"pullback: {p.graph.n_vertices} vertices, {p.graph.n_edges} edges, chi = {ag.euler_char(p.graph)}"]
    for name, g in (("pullback", p.graph), (args.h1, g1), (args.h2, g2)):
        try:
            e, cert = find_one_maximal_edge(g)
            payload.setdefault("maximal_edge", {})[name] = {"edge": e, "certificate": cert.as_dict()}
            lines.append(f"{name}: maximal edge {e} (p spine {list(cert.p.spine)} cycle {list(cert.p.cycle)};"
                         f" q spine {list(cert.q.spine)} cycle {list(cert.q.cycle)})")
        except ChiNonNegative:
            payload.setdefault("maximal_edge", {})[name] = None
            lines.append(f"{name}: no component with chi < 0")
        found = find_all_certified(g, args.budget)
        payload.setdefault("find_all", {})[name] = found.as_dict()
        lines.append(
            f"{name}: certified maximal edges {sorted(found.edges)}; complete = {found.complete}"
            f" (good cut & |D| = -chi: {found.corroborated})"
        )
    chain = verify_edge_count_bound(p, args.budget)
    payload["edge_count"] = chain.as_dict()
    lines.append(
        f"chain: rbar = {chain.rank12}, |D| = {chain.d}, |tau1 D| * |tau2 D| = {chain.tau1_d}*{chain.tau2_d},"
        f" |D1| * |D2| = {chain.d1}*{chain.d2}: {chain.status}"
    )
    _emit(args, lines, payload)
    if chain.status == "violation":
        raise InvariantFailure("edge counting chain violated")
    return 0


def cmd_shnc(args) -> int:
    inst = InstanceFile.load(args.file)
    names = list(inst.free_subgroups)
    k1 = args.k1 or (names[0] if names else None)
    k2 = args.k2 or (names[1] if len(names) > 1 else k1)
    if k1 not in inst.free_subgroups or k2 not in inst.free_subgroups:
        raise ParseError("instance file needs free.subgroups entries")
    rep = verify_shnc(inst.free_subgroups[k1], inst.free_subgroups[k2])
    payload = {"K1": k1, "K2": k2, **rep.as_dict()}
    lines = [
        f"free side sum over double cosets: {rep.free_side}",
        f"product side (mu-images in Z*Z): {rep.product_side}",
        f"bound rbar({k1}) * rbar({k2}) = {rep.rbar1} * {rep.rbar2} = {rep.bound}",
        f"{rep.free_side} <= {rep.product_side} <= {rep.bound}: " + ("HOLDS" if rep.holds else "VIOLATED"),
    ]
    _emit(args, lines, payload)
    if not rep.holds:
        raise InvariantFailure("SHNC chain violated")
    return 0


def cmd_export_dot(args) -> int:
    inst = InstanceFile.load(args.file)
    if "," in args.graph:
        h1, h2 = args.graph.split(",", 1)
        g = pullback(inst.graph(h1.strip()), inst.graph(h2.strip())).graph
    else:
        g = inst.graph(args.graph)
    Path(args.out).write_text(ag.to_dot(g, "G"))
    print(f"wrote {args.out}")
    return 0


# -- verify sweep -------------------------------------------------------------------


def check_instance(spec: InstanceSpec, index: int, deep: bool = False) -> dict:
    """Run every cheap check on instance ``index``; return a result record."""
    try:
        inst = generate(spec, index)
    except RetriesExhausted as exc:
        return {"index": index, "skipped": True, "rejections": exc.rejections, "failures": []}
    g1, g2 = inst.graphs
    failures = []
    for name, g in (("H1", g1), ("H2", g2)):
        if ag.validate(g):
            failures.append(f"{name} graph is not irreducible")
        nb = len(ag.basis(g))
        if nb != max(1 - ag.euler_char(g), 0):
            failures.append(f"{name} basis size {nb} disagrees with chi")
    p = pullback(g1, g2)
    rep = verify_theorem1(g1, g2, p)
    if not rep.holds:
        failures.append("rank inequality violated")
    if ag.validate(p.graph):
        failures.append("pullback is not irreducible")
    base = intersection_with_base(g1, g2)
    for w in ag.basis(base):
        if not (ag.membership(w, g1) and ag.membership(w, g2)):
            failures.append("intersection basis word outside H1 or H2")
    record = {
        "index": index,
        "skipped": False,
        "factors": "".join(k.value for k in inst.factors.kinds),
        "rbar1": rep.rank1,
        "rbar2": rep.rank2,
        "rbar12": rep.rank12,
        "components": len(rep.components),
        "rejections": inst.rejections,
    }
    if all(k.value == "Z" for k in inst.factors.kinds):
        x1 = stallings_build([product_to_free(w) for w in inst.gens1])
        x2 = stallings_build([product_to_free(w) for w in inst.gens2])
        oracle = stallings_pullback(x1, x2)
        if (oracle.total, oracle.count) != (rep.rank12, len(rep.components)):
            failures.append("pullback disagrees with the Stallings oracle")
    if deep:
        if ag.euler_char(p.graph) < 0:
            e, cert = find_one_maximal_edge(p.graph)
            if not check_certificate(p.graph, e, cert):
                failures.append("maximal edge certificate rejected")
        chain = verify_edge_count_bound(p, max_nodes=20_000, max_cycles=2_000)
        record["edge_count"] = chain.status
        if chain.status == "violation":
            failures.append("edge counting chain violated")
    record["failures"] = failures
    return record


def _check_star(job):
    return check_instance(*job)


def cmd_verify(args) -> int:
    spec = InstanceSpec(
        seed=args.seed,
        min_factors=args.min_factors,
        max_factors=args.max_factors,
        kinds=args.kinds,
        max_gens=args.max_gens,
        max_syllables=args.max_syllables,
        share=args.share,
    )
    jobs = [(spec, i, args.deep) for i in range(args.count)]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            records = list(pool.map(_check_star, jobs, chunksize=8))
    else:
        records = [_check_star(j) for j in jobs]
    bad = [r for r in records if r["failures"]]
    skipped = sum(r["skipped"] for r in records)
    nontrivial = sum(1 for r in records if not r["skipped"] and r["rbar12"] > 0)
    if args.json:
        print(json.dumps({"records": records, "violations": len(bad), "skipped": skipped}, indent=2, sort_keys=True))
    else:
        if args.verbose:
            for r in records:
                if r["skipped"]:
                    print(f"#{r['index']}: skipped after {r['rejections']} rejections")
                else:
                    print(
                        f"#{r['index']} [{r['factors']}]: {r['rbar12']} <= {r['rbar1']}*{r['rbar2']}"
                        + ("  " + "; ".join(r["failures"]) if r["failures"] else "  ok")
                    )
        for r in bad:
            print(f"VIOLATION #{r['index']}: " + "; ".join(r["failures"]))
        print(
            f"verified {args.count - skipped} instance(s) (seed {args.seed}), skipped {skipped}, "
            f"nontrivial intersections {nontrivial}, violations {len(bad)}"
        )
    return EXIT_INTERNAL if bad else 0


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freeprod",
        description="Factor-free subgroups of free products of ordered groups.",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="reduced rank and basis of a subgroup")
    p.add_argument("file")
    p.add_argument("subgroup")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("intersect", help="pullback components and the rank inequality")
    p.add_argument("file")
    p.add_argument("h1")
    p.add_argument("h2")
    p.set_defaults(func=cmd_intersect)

    order = sub.add_parser("order", help="the left order on the free product")
    osub = order.add_subparsers(dest="order_command", required=True)
    p = osub.add_parser("cmp", help="compare two words")
    p.add_argument("file")
    p.add_argument("w1")
    p.add_argument("w2")
    p.set_defaults(func=cmd_order_cmp)
    p = osub.add_parser("embed", help="dump the truncated power series of a word")
    p.add_argument("file")
    p.add_argument("word")
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_order_embed)

    word = sub.add_parser("word", help="strongly positive word machinery")
    wsub = word.add_subparsers(dest="word_command", required=True)
    p = wsub.add_parser("classify")
    p.add_argument("file")
    p.add_argument("word")
    p.set_defaults(func=cmd_word_classify)

    p = sub.add_parser("maxedges", help="maximal edges and the edge counting chain")
    p.add_argument("file")
    p.add_argument("h1")
    p.add_argument("h2")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_maxedges)

    p = sub.add_parser("shnc", help="free-group intersection sums through Z*Z")
    p.add_argument("file")
    p.add_argument("k1", nargs="?")
    p.add_argument("k2", nargs="?")
    p.set_defaults(func=cmd_shnc)

    p = sub.add_parser("verify", help="random sweep of the rank inequality and related checks")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--kinds", choices=("mixed", "Z", "Q"), default="mixed")
    p.add_argument("--min-factors", type=int, default=2)
    p.add_argument("--max-factors", type=int, default=4)
    p.add_argument("--max-gens", type=int, default=4)
    p.add_argument("--max-syllables", type=int, default=8)
    p.add_argument("--share", type=float, default=0.5)
    p.add_argument("--deep", action="store_true", help="also run the maximal edge checks")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-dot", help="write a graph (subgroup name or 'H1,H2' pullback) as DOT")
    p.add_argument("file")
    p.add_argument("graph")
    p.add_argument("out")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FactorFreeViolation as exc:
        print(f"factor-free violation: {exc}; witness {format_word(exc.witness)}", file=sys.stderr)
        return EXIT_FACTOR_FREE
    except (InvariantFailure, AssertionError) as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
