"""Command-line entry point.

Exit codes: 0 when everything checked out, 1 when a check found a
violation or counterexample, 2 for usage and input errors. Every command
prints a human-readable report; ``--report PATH`` also writes it as JSON.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Any

from . import core, inverse, io, suites
from .compactness import compactness_construct
from .core import Impossible, SepSysError, SeparationSystem
from .examples import NAMES as EXAMPLE_NAMES
from .examples import certify, gen
from .graphsep import build_restriction_system, enumerate_separations, prefix_chain
from .inverse import InverseSystem
from .normality import normality_certificate

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class UsageError(SepSysError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 on its own; keep the message short
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _default_seed() -> int:
    raw = os.environ.get("SEPSYS_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SEPSYS_SEED must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# loading helpers


def _load_system_like(path: str) -> tuple[SeparationSystem, Any]:
    """A plain system, or the limit of an inverse system."""
    obj = io.load_any(path)
    if isinstance(obj, InverseSystem):
        lim = inverse.limit(obj)
        return lim.S, lim
    return obj, None


def _load_inverse(path: str) -> InverseSystem:
    obj = io.load_any(path)
    if not isinstance(obj, InverseSystem):
        raise UsageError(f"{path} is not an inverse-system document")
    return obj


def _labels(S: SeparationSystem, raw: str | None) -> frozenset[int]:
    if not raw:
        return frozenset()
    return frozenset(S.element(x.strip()) for x in raw.split(",") if x.strip())


def _point(IS: InverseSystem, raw: str) -> int:
    for i, p in enumerate(IS.poset.points):
        if str(p) == raw:
            return i
    raise inverse.UnknownPoint(raw)


# ---------------------------------------------------------------------------
# commands; each returns (exit code, report dict, text lines)


def cmd_validate(args) -> tuple[int, dict, list[str]]:
    obj = io.load_any(args.file)
    if isinstance(obj, InverseSystem):
        inverse.validate_inverse_system(obj)
        rep = {"kind": "inverse_system", "points": [str(p) for p in obj.poset.points],
               "surjective": inverse.is_surjective(obj)}
        return EXIT_OK, rep, [f"ok: inverse system over {len(obj.poset)} points"]
    rep = {"kind": "system", "elements": len(obj), "separations": len(obj.separations)}
    return EXIT_OK, rep, [f"ok: system with {len(obj)} elements and {len(obj.separations)} separations"]


def cmd_analyze(args) -> tuple[int, dict, list[str]]:
    S, _ = _load_system_like(args.file)
    rows, lines = [], [f"{'element':<24} small co-small degenerate trivial(witnesses) co-trivial(witnesses)"]
    for x in range(len(S)):
        c = core.classify(S, x)
        tw = [S.labels[w] for w in c.trivial or ()]
        cw = [S.labels[w] for w in c.co_trivial or ()]
        rows.append({"element": S.labels[x], "small": c.small, "co_small": c.co_small,
                     "degenerate": c.degenerate, "trivial": tw, "co_trivial": cw})
        lines.append(f"{S.labels[x]:<24} {c.small!s:<5} {c.co_small!s:<8} {c.degenerate!s:<10} "
                     f"{','.join(tw) or '-':<19} {','.join(cw) or '-'}")
    crossing = core.crossing_pair(S, range(len(S)))
    stars = core.splitting_subsets(S)
    rep = {
        "classification": rows,
        "nested": crossing is None,
        "crossing": None if crossing is None else [S.labels[x] for x in crossing],
        "tree_set": core.is_tree_set(S),
        "regular": core.is_regular(S),
        "splitting_stars": [S.names(s) for s in stars],
    }
    lines.append(f"nested: {crossing is None}" + ("" if crossing is None else
                                                   f" (crossing: {S.labels[crossing[0]]}, {S.labels[crossing[1]]})"))
    lines.append(f"tree set: {rep['tree_set']}; regular: {rep['regular']}")
    lines.append(f"splitting stars: {len(stars)}")
    lines += [f"  {{{', '.join(s)}}}" for s in rep["splitting_stars"]]
    return EXIT_OK, rep, lines


def cmd_orients(args) -> tuple[int, dict, list[str]]:
    S, _ = _load_system_like(args.file)
    orients = [S.names(O) for O in core.consistent_orientations(S)]
    lines = [f"{len(orients)} consistent orientation(s)"] + [f"  {{{', '.join(O)}}}" for O in orients]
    return EXIT_OK, {"orientations": orients}, lines


def cmd_stars(args) -> tuple[int, dict, list[str]]:
    S, _ = _load_system_like(args.file)
    out = []
    for sigma in core.splitting_subsets(S):
        out.append({"star": S.names(sigma), "proper": core.is_proper_star(S, sigma),
                    "minus": S.names(core.sigma_minus(S, sigma))})
    lines = [f"{len(out)} splitting subset(s)"]
    lines += [f"  {{{', '.join(d['star'])}}}{'' if d['proper'] else '  (not proper)'}" for d in out]
    return EXIT_OK, {"splitting_stars": out}, lines


def cmd_limit(args) -> tuple[int, dict, list[str]]:
    IS = _load_inverse(args.file)
    lim = inverse.limit(IS)
    pts = [str(p) for p in IS.poset.points]
    coords = {lim.S.labels[x]: {pts[p]: IS.levels[p].labels[lim.coords[x][p]] for p in lim.points}
              for x in range(len(lim.S))}
    rep = {"limit": io.system_to_doc(lim.S), "coordinates": coords,
           "nested": core.is_nested(lim.S), "surjective": inverse.is_surjective(IS)}
    lines = [f"limit: {len(lim.S)} elements, {len(lim.S.separations)} separations; nested: {rep['nested']}"]
    lines += [f"  {lab}: " + " ".join(f"{p}:{c}" for p, c in row.items()) for lab, row in coords.items()]
    return EXIT_OK, rep, lines


def cmd_closure(args) -> tuple[int, dict, list[str]]:
    IS = _load_inverse(args.file)
    lim = inverse.limit(IS)
    sub = _labels(lim.S, args.subset)
    pts = lim.probe_points if args.probe else None
    cl = inverse.closure(lim, sub, pts)
    rep = {"subset": lim.S.names(sub), "closure": lim.S.names(cl), "closed": cl == sub,
           "view": "probe" if args.probe else "exact"}
    lines = [f"closure ({rep['view']}): {{{', '.join(rep['closure'])}}}", f"closed: {rep['closed']}"]
    return EXIT_OK, rep, lines


def cmd_project(args) -> tuple[int, dict, list[str]]:
    IS = _load_inverse(args.file)
    lim = inverse.limit(IS)
    p = _point(IS, args.at)
    Sp = IS.levels[p]
    sub = _labels(lim.S, args.subset) if args.subset else frozenset(range(len(lim.S)))
    table = {lim.S.labels[x]: Sp.labels[lim.coords[x][p]] for x in sorted(sub)}
    image = sorted({Sp.labels[lim.coords[x][p]] for x in sub})
    lines = [f"projection to {args.at}:"] + [f"  {a} -> {b}" for a, b in table.items()]
    lines.append(f"image: {{{', '.join(image)}}}")
    return EXIT_OK, {"point": args.at, "projection": table, "image": image}, lines


def _parse_params(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} must look like key=value")
        key, val = item.split("=", 1)
        if key in ("A", "B", "C", "X"):
            out[key] = tuple(v for v in val.split(",") if v)
        else:
            try:
                out[key] = int(val)
            except ValueError:
                raise UsageError(f"parameter {key} must be an integer") from None
    return out


def cmd_gen(args) -> tuple[int, dict, list[str]]:
    params = _parse_params(args.param)
    if args.depth is not None:
        params["depth"] = args.depth
    IS = gen(args.example, **params)
    doc = io.inverse_system_to_doc(IS)
    return EXIT_OK, doc, [io.dumps(doc)]


def cmd_graph(args) -> tuple[int, dict, list[str]]:
    G = io.graph_from_text(Path(args.file).read_text())
    if args.chain is None:
        S = enumerate_separations(G, args.order_bound)
        doc = io.system_to_doc(S)
    else:
        if args.chain == "prefix":
            subsets = prefix_chain(G)
        else:
            subsets = [frozenset(v.strip() for v in part.split(",") if v.strip()) for part in args.chain.split(";")]
        doc = io.inverse_system_to_doc(build_restriction_system(G, args.order_bound, subsets))
    return EXIT_OK, doc, [io.dumps(doc)]


def cmd_check(args) -> tuple[int, dict, list[str]]:
    if args.input:
        report = suites.run_on_input(args.suite, io.load_any(args.input))
    else:
        suite = suites.get_suite(args.suite)
        count = args.count if args.count is not None else suite.default_count
        report = suites.run_suite(args.suite, suites.SuiteConfig(args.seed, count, args.size))
    lines = [report.summary()]
    lines += [f"  seed {s}: {v}" for s, v in report.violations[:20]]
    for f in report.findings():
        if f.get("kind") == "abnormal_witness":
            lines.append(f"  abnormal witness ({f['view']}): greatest element {f['greatest']}, "
                         f"inverse in closure via {f['inverse_in_closure']}")
        elif f.get("kind") == "certificate":
            lines.append(f"  [{'ok' if f['ok'] else 'FAIL'}] {f['check']}: {f['detail']}")
        elif f.get("kind") == "normality":
            lines.append(f"  {f['chain']}: {f['verdict']}")
    return (EXIT_OK if report.ok else EXIT_VIOLATION), report.to_dict(), lines


def cmd_search(args) -> tuple[int, dict, list[str]]:
    res = suites.search(args.property, args.count, args.seed, args.size)
    rep = res.to_dict()
    if res.found is None:
        return EXIT_OK, rep, [f"{args.property}: no counterexample in {res.tried} instance(s)"]
    lines = [f"{args.property}: counterexample at seed {res.found.seed}, size {res.found.size} "
             f"(first found at seed {res.shrunk_from[0]}, size {res.shrunk_from[1]})"]
    lines += [f"  {v}" for v in res.found.violations[:10]]
    inst = suites.get_suite(args.property).generate(res.found.seed, res.found.size)
    if isinstance(inst, InverseSystem):
        rep["instance"] = io.inverse_system_to_doc(inst)
    elif isinstance(inst, SeparationSystem):
        rep["instance"] = io.system_to_doc(inst)
    return EXIT_VIOLATION, rep, lines


def cmd_suites(args) -> tuple[int, dict, list[str]]:
    rows = {name: s.description for name, s in sorted(suites.SUITES.items())}
    return EXIT_OK, {"suites": rows}, [f"{name:<32} {d}" for name, d in rows.items()]


def cmd_certify(args) -> tuple[int, dict, list[str]]:
    params = _parse_params(args.param)
    if args.depth is not None:
        params["depth"] = args.depth
    checks = certify(args.example, **params)
    rep = {"example": args.example, "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]}
    lines = [f"[{'ok' if c.ok else 'FAIL'}] {c.name}: {c.detail}" for c in checks]
    return (EXIT_OK if all(c.ok for c in checks) else EXIT_VIOLATION), rep, lines


def cmd_normality(args) -> tuple[int, dict, list[str]]:
    cert = normality_certificate(args.chain, args.depth)
    rep = cert.to_dict()
    lines = [f"{cert.chain} at depth {cert.depth}: {cert.verdict}",
             f"  small elements: {cert.small_status}",
             f"  largest star per level: {list(cert.star_sizes)}",
             f"  non-closed splitting orientations (greatest element): {sorted(cert.non_closed_splitting)}"]
    return EXIT_OK, rep, lines


def cmd_compact(args) -> tuple[int, dict, list[str]]:
    IS, stars = io.star_family_from_doc(io.load_document(args.file))
    try:
        res = compactness_construct(IS, stars)
    except Impossible as exc:
        rep = {"tau": None, "reason": exc.reason,
               "point": None if exc.element is None else str(IS.poset.points[exc.element])}
        return EXIT_VIOLATION, rep, [f"no nested set over F: {exc.reason} at point {rep['point']}"]
    S = IS.levels[IS.top]
    rep = {"tau": S.names(res.tau), "branches": {",".join(S.names(s)): b for s, b in res.branches.items()},
           "p0": str(res.p0)}
    return EXIT_OK, rep, [f"tau: {{{', '.join(rep['tau'])}}}"] + [f"  {k}: {v}" for k, v in rep["branches"].items()]


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sepsys", description="Separation systems, inverse limits and property checks.")
    parser.add_argument("--report", metavar="PATH", help="also write the report as JSON to PATH")
    parser.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        return p

    for name, fn, text in [("validate", cmd_validate, "validate a system or inverse-system document"),
                           ("analyze", cmd_analyze, "classification table, nestedness and splitting stars"),
                           ("orients", cmd_orients, "list consistent orientations"),
                           ("stars", cmd_stars, "list splitting subsets")]:
        add(name, fn, text).add_argument("file")
    add("limit", cmd_limit, "compute the limit of an inverse system").add_argument("file")
    p = add("closure", cmd_closure, "closure of a subset of the limit")
    p.add_argument("file")
    p.add_argument("--subset", required=True, help="comma-separated limit labels")
    p.add_argument("--probe", action="store_true", help="quantify over all points but the top one")
    p = add("project", cmd_project, "project limit elements to a point")
    p.add_argument("file")
    p.add_argument("--at", required=True, help="point label")
    p.add_argument("--subset", help="comma-separated limit labels (default: all)")
    p = add("gen", cmd_gen, "emit a registered example as an inverse-system document")
    p.add_argument("example", choices=EXAMPLE_NAMES)
    p.add_argument("--depth", type=int)
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="extra parameters such as k=3")
    p = add("graph", cmd_graph, "separations of a graph, or a restriction system along a chain")
    p.add_argument("file", help="adjacency list or JSON graph document")
    p.add_argument("--order-bound", type=int, required=True, dest="order_bound")
    p.add_argument("--chain", help="'prefix' or vertex subsets like 'v1;v1,v2'")
    p = add("check", cmd_check, "run a named property suite")
    p.add_argument("suite")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--count", type=int)
    p.add_argument("--size", type=int)
    p.add_argument("--input", help="run the suite's checks on this document instead of random instances")
    p = add("search", cmd_search, "hunt for a counterexample and shrink it")
    p.add_argument("--property", required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--size", type=int)
    add("suites", cmd_suites, "list the property suites")
    p = add("certify", cmd_certify, "certificate checks for a registered example")
    p.add_argument("example", choices=EXAMPLE_NAMES)
    p.add_argument("--depth", type=int)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p = add("normality", cmd_normality, "normality certificate for a registered chain")
    p.add_argument("chain")
    p.add_argument("--depth", type=int, default=6)
    add("compact", cmd_compact, "nested set over a star family (star-family document)").add_argument("file")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "seed", None) is None and args.command in ("check", "search"):
            args.seed = _default_seed()
        code, report, lines = args.fn(args)
    except (SepSysError, OSError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        if args.report:
            Path(args.report).write_text(io.dumps({"error": type(exc).__name__, "detail": str(exc)}) + "\n")
        return EXIT_INPUT
    if args.json:
        print(io.dumps(report))
    else:
        print("\n".join(lines))
    if args.report:
        Path(args.report).write_text(io.dumps(report) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
