"""Line-oriented input documents and the ``semisat`` command.

Grammar (one declaration per line, ``#`` starts a comment)::

    version 1
    vertex NAME...
    edge NAME RANGE SOURCE
    gen NAME...
    rule GEN [:] SRC -> DST
    maprule SRC -> DST

A path token is a vertex name (empty path) or edge names joined by ``.``
in range-to-source order.  A document holds either generators with rules
(a partial action) or maprules (a Deaconu-Renault system), not both.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .boundary import Graph, GraphError, Path
from .homology import (
    DRSystem, LevelError, base_level, cohomology_tower, dr_check, dr_to_action, graph_oracle,
    homology_tower,
)
from .partial_action import PartialAction, PrefixMap, WordError
from .resolution import verify_homotopy

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class InputDocument:
    version: int
    graph: Graph
    action: Optional[PartialAction] = None
    dr: Optional[DRSystem] = None

    def as_action(self) -> PartialAction:
        """The partial action, converting a map section when needed."""
        if self.action is not None:
            return self.action
        if self.dr is not None:
            return dr_to_action(self.dr)
        return PartialAction(self.graph, [], [])


_TOKEN = re.compile(r"\S+")


def _tokens(line: str) -> List[Tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(line)]


def _rule_parts(toks, lineno, head: int):
    """Split ``SRC -> DST`` after ``head`` tokens; returns the two (token, column) pairs."""
    rest = toks[head:]
    if len(rest) != 3 or rest[1][0] != "->":
        col = rest[0][1] if rest else (toks[-1][1] + len(toks[-1][0]))
        raise ParseError("expected 'SRC -> DST'", lineno, col)
    return rest[0], rest[2]


def parse(text: str) -> InputDocument:
    lines = text.splitlines()
    version = None
    vertices: List[Tuple[str, int, int]] = []
    edges: List[Tuple[str, str, str, int, int, int]] = []
    gens: List[Tuple[str, int, int]] = []
    rules: List[Tuple[List, int]] = []
    maprules: List[Tuple[List, int]] = []
    names: Dict[str, int] = {}
    name_re = re.compile(r"[A-Za-z0-9_]+\Z")

    def declare(name, lineno, col, kind):
        if not name_re.match(name):
            raise ParseError(f"invalid {kind} name {name!r}", lineno, col)
        if name in names:
            raise ParseError(f"duplicate name {name!r} (first declared on line {names[name]})",
                             lineno, col)
        names[name] = lineno

    gen_names: Dict[str, int] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        kw, kcol = toks[0]
        if version is None and kw != "version":
            raise ParseError("document must start with 'version 1'", lineno, kcol)
        if kw == "version":
            if version is not None:
                raise ParseError("duplicate version line", lineno, kcol)
            if len(toks) != 2 or toks[1][0] != "1":
                raise ParseError("unsupported version (expected 'version 1')", lineno,
                                 toks[1][1] if len(toks) > 1 else kcol)
            version = 1
        elif kw == "vertex":
            if len(toks) < 2:
                raise ParseError("vertex needs at least one name", lineno, kcol)
            for name, col in toks[1:]:
                declare(name, lineno, col, "vertex")
                vertices.append((name, lineno, col))
        elif kw == "edge":
            if len(toks) != 4:
                raise ParseError("expected 'edge NAME RANGE SOURCE'", lineno, kcol)
            declare(toks[1][0], lineno, toks[1][1], "edge")
            edges.append((toks[1][0], toks[2][0], toks[3][0], lineno, toks[2][1], toks[3][1]))
        elif kw == "gen":
            if len(toks) < 2:
                raise ParseError("gen needs at least one name", lineno, kcol)
            for name, col in toks[1:]:
                if "^" in name or not name_re.match(name):
                    raise ParseError(f"invalid generator name {name!r}", lineno, col)
                if name in gen_names:
                    raise ParseError(f"duplicate generator {name!r}", lineno, col)
                gen_names[name] = len(gens)
                gens.append((name, lineno, col))
        elif kw == "rule":
            rules.append((toks, lineno))
        elif kw == "maprule":
            maprules.append((toks, lineno))
        else:
            raise ParseError(f"unknown declaration {kw!r}", lineno, kcol)
    if version is None:
        raise ParseError("empty document (expected 'version 1')", max(len(lines), 1))
    if not vertices:
        raise ParseError("no vertices declared", max(len(lines), 1))
    vnames = {v for v, _, _ in vertices}
    for name, r, s, lineno, rcol, scol in edges:
        for v, c in ((r, rcol), (s, scol)):
            if v not in vnames:
                raise ParseError(f"unknown vertex {v!r}", lineno, c)
    graph = Graph([v for v, _, _ in vertices], [(n, r, s) for n, r, s, *_ in edges])

    def path(tok: Tuple[str, int], lineno: int) -> Path:
        try:
            return graph.path(tok[0])
        except GraphError as exc:
            raise ParseError(str(exc), lineno, tok[1]) from None

    def rule_pair(src_tok, dst_tok, lineno) -> Tuple[Path, Path]:
        s, d = path(src_tok, lineno), path(dst_tok, lineno)
        if graph.end(s) != graph.end(d):
            raise ParseError(
                f"rule {src_tok[0]} -> {dst_tok[0]}: source ends at "
                f"{graph.vertices[graph.end(s)]}, target at {graph.vertices[graph.end(d)]}",
                lineno, src_tok[1])
        return s, d

    def check_antichain(seen: List[Tuple[Path, int]], p: Path, lineno: int, col: int, what: str):
        for q, qline in seen:
            if p[:len(q)] == q or q[:len(p)] == p:
                raise ParseError(
                    f"{what} {graph.format_path(p)} overlaps {graph.format_path(q)} "
                    f"(line {qline})", lineno, col)
        seen.append((p, lineno))

    if (gens or rules) and maprules:
        lineno = maprules[0][1]
        raise ParseError("a document cannot contain both rules and maprules", lineno)

    action = dr = None
    if gens or rules:
        per_gen: Dict[int, List[Tuple[Path, Path]]] = {i: [] for i in range(len(gens))}
        srcs: Dict[int, list] = {i: [] for i in range(len(gens))}
        dsts: Dict[int, list] = {i: [] for i in range(len(gens))}
        for toks, lineno in rules:
            if len(toks) < 2:
                raise ParseError("expected 'rule GEN SRC -> DST'", lineno, toks[0][1])
            gname, gcol = toks[1]
            head = 2
            if len(toks) > 2 and toks[2][0] == ":":
                head = 3
            elif gname.endswith(":"):
                gname = gname[:-1]
            if gname not in gen_names:
                raise ParseError(f"unknown generator {gname!r}", lineno, gcol)
            gi = gen_names[gname]
            src_tok, dst_tok = _rule_parts(toks, lineno, head)
            s, d = rule_pair(src_tok, dst_tok, lineno)
            check_antichain(srcs[gi], s, lineno, src_tok[1], "rule source")
            check_antichain(dsts[gi], d, lineno, dst_tok[1], "rule target")
            per_gen[gi].append((s, d))
        maps = [PrefixMap(graph, per_gen[i]) for i in range(len(gens))]
        action = PartialAction(graph, [g for g, _, _ in gens], maps)
    elif maprules:
        pieces = []
        seen: list = []
        for toks, lineno in maprules:
            src_tok, dst_tok = _rule_parts(toks, lineno, 1)
            s, d = rule_pair(src_tok, dst_tok, lineno)
            check_antichain(seen, s, lineno, src_tok[1], "maprule source")
            pieces.append((s, d))
        dr = DRSystem(graph, pieces)
    return InputDocument(version, graph, action, dr)


def format_document(doc: InputDocument) -> str:
    g = doc.graph
    fmt = g.format_path
    out = [f"version {doc.version}", "vertex " + " ".join(g.vertices)]
    out += [f"edge {n} {r} {s}" for n, r, s in g.edges]
    if doc.action is not None:
        act = doc.action
        if act.generators:
            out.append("gen " + " ".join(act.generators))
        for name, m in zip(act.generators, act.maps):
            out += [f"rule {name} {fmt(s)} -> {fmt(d)}" for s, d in m.sorted_rules()]
    if doc.dr is not None:
        out += [f"maprule {fmt(s)} -> {fmt(d)}" for s, d in doc.dr.pieces]
    return "\n".join(out) + "\n"


# -- commands ---------------------------------------------------------------------

class InputError(ValueError):
    pass



def cmd_homology(doc: InputDocument, args) -> Tuple[int, List[str]]:
    act = doc.as_action()
    n0 = base_level(act)
    res = homology_tower(act, args.max_level if args.max_level is not None else n0 + 6,
                         args.window)
    out = [f"H0 = {res.H0}", f"H1 = {res.H1}", "Hn = 0 for n >= 2",
           f"H0 stability: {res.H0.stable}", f"H1 stability: {res.H1.stable}", "tower:"]
    out += ["  " + line for line in res.log()]
    return EXIT_OK, out


def cmd_cohomology(doc: InputDocument, args) -> Tuple[int, List[str]]:
    act = doc.as_action()
    n0 = base_level(act)
    res = cohomology_tower(act, args.max_level if args.max_level is not None else n0 + 6,
                           args.window)
    out = [f"H^0 = {res.H0}", f"H^1 = {res.H1}", "H^n = 0 for n >= 2",
           f"H^0 stability: {res.H0.stable}", f"H^1 stability: {res.H1.stable}", "tower:"]
    out += ["  " + line for line in res.log()]
    return EXIT_OK, out


def cmd_verify(doc: InputDocument, args) -> Tuple[int, List[str]]:
    act = doc.as_action()
    rep = verify_homotopy(act, args.samples, args.seed, max_word_len=args.max_word_len,
                          max_depth=args.max_depth)
    return (EXIT_OK if rep.ok else EXIT_FAIL), rep.lines()


def cmd_word(doc: InputDocument, args) -> Tuple[int, List[str]]:
    act = doc.as_action()
    w = act.parse_word(args.word, strict=args.strict)
    m = act.theta(w)
    return EXIT_OK, [f"word: {act.format_word(w)}", f"rules: {m!r}",
                     f"domain: {m.domain!r}", f"range: {m.range!r}"]


def cmd_graph_oracle(doc: InputDocument, args) -> Tuple[int, List[str]]:
    h0, h1 = graph_oracle(doc.graph)
    return EXIT_OK, [f"H0 = {h0}", f"H1 = {h1}", "Hn = 0 for n >= 2"]


def cmd_dr_check(doc: InputDocument, args) -> Tuple[int, List[str]]:
    if doc.dr is None:
        raise InputError("dr-check needs a document with maprule lines")
    n0 = doc.dr.base_level()
    res = dr_check(doc.dr, args.max_level if args.max_level is not None else n0 + 6,
                   args.window)
    out = [f"direct (iota - T_*): H0 = {res.direct.coker}, H1 = {res.direct.ker}",
           f"via action:         H0 = {res.via_action.coker}, H1 = {res.via_action.ker}",
           f"H0 stability: {res.direct.coker.stable}",
           f"H1 stability: {res.direct.ker.stable}",
           f"routes agree: {'yes' if res.routes_agree else 'no'}", "direct tower:"]
    out += ["  " + line for line in res.direct.log()]
    out.append("action tower:")
    out += ["  " + line for line in res.via_action.log()]
    return (EXIT_OK if res.routes_agree else EXIT_FAIL), out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="semisat",
        description="Homology of free group partial actions on boundary path spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def tower_opts(sp):
        sp.add_argument("--max-level", type=int, default=None,
                        help="highest level of the tower (default: base level + 6)")
        sp.add_argument("--window", type=int, default=2,
                        help="consecutive isomorphic steps required to stabilize")

    sp = sub.add_parser("homology", help="H0 and H1 of the groupoid")
    sp.add_argument("file")
    tower_opts(sp)
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("cohomology", help="H^0 and H^1 with coefficients in Z[X]")
    sp.add_argument("file")
    tower_opts(sp)
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("verify", help="check the contracting homotopy on random elements")
    sp.add_argument("file")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-word-len", type=int, default=4)
    sp.add_argument("--max-depth", type=int, default=3)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("word", help="rule table, domain and range of theta_W")
    sp.add_argument("file")
    sp.add_argument("word")
    sp.add_argument("--strict", action="store_true", help="reject non-reduced words")
    sp.set_defaults(func=cmd_word)

    sp = sub.add_parser("graph-oracle", help="closed-form groups of the graph shift")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_graph_oracle)

    sp = sub.add_parser("dr-check", help="compare the two routes for a map document")
    sp.add_argument("file")
    tower_opts(sp)
    sp.set_defaults(func=cmd_dr_check)
    return p


def run(argv: Sequence[str] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    try:
        doc = parse(text)
    except ParseError as exc:
        print(f"{args.file}:{exc.line}:{exc.column}: error: {exc.message}", file=stderr)
        return EXIT_INPUT
    try:
        code, lines = args.func(doc, args)
    except (InputError, GraphError, WordError, LevelError, ValueError) as exc:
        print(f"{args.file}: error: {exc}", file=stderr)
        return EXIT_INPUT
    for line in lines:
        print(line, file=stdout)
    return code


def main() -> None:
    sys.exit(run())
