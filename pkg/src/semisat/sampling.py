"""Seeded random graphs, actions and ring elements for property checks.

All generators take an explicit ``random.Random`` so a run is reproducible
from its seed.  Coefficients are uniform in ``[-3, 3]``.  Elements are drawn
inside the sets they must live in (atoms of the target clopen set, then
random extensions), which is the restriction repair applied up front.
"""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from .algebra import AlgElement
from .boundary import ClopenSet, Graph, IntFun, Path, _absorb
from .partial_action import PartialAction, PrefixMap, Word
from .resolution import P1Element


def random_graph(rng: random.Random, max_vertices: int = 4, max_edges: int = 6, *,
                 min_edges: int = 0, no_terminal: bool = False) -> Graph:
    while True:
        nv = rng.randint(1, max_vertices)
        ne = rng.randint(min(min_edges, max_edges), max_edges)
        verts = [f"v{i}" for i in range(nv)]
        edges = [(f"e{j}", rng.choice(verts), rng.choice(verts)) for j in range(ne)]
        g = Graph(verts, edges)
        if no_terminal and any(g.is_terminal(v) for v in range(nv)):
            continue
        return g


def random_extension(g: Graph, rng: random.Random, p: Path, steps: int) -> Path:
    for _ in range(steps):
        kids = g.children(g.end(p))
        if not kids:
            break
        p = p + (rng.choice(kids),)
    return p


def random_path(g: Graph, rng: random.Random, max_len: int) -> Path:
    p = (rng.randrange(g.num_vertices),)
    return random_extension(g, rng, p, rng.randint(0, max_len))


def random_path_ending_at(g: Graph, rng: random.Random, v: int, max_len: int) -> Path:
    """Random path with source ``v``, grown backwards from ``v``."""
    into = [[] for _ in range(g.num_vertices)]
    for e in range(len(g.edges)):
        into[g.edge_source(e)].append(e)
    edges: List[int] = []
    cur = v
    for _ in range(rng.randint(0, max_len)):
        if not into[cur]:
            break
        e = rng.choice(into[cur])
        edges.insert(0, e)
        cur = g.edge_range(e)
    return (cur,) + tuple(edges)


def random_prefix_map(g: Graph, rng: random.Random, max_rules: int = 3,
                      max_len: int = 3) -> PrefixMap:
    rules: List[Tuple[Path, Path]] = []
    for _ in range(rng.randint(0, max_rules)):
        for _attempt in range(20):
            s = random_path(g, rng, max_len)
            d = random_path_ending_at(g, rng, g.end(s), max_len)
            srcs = [r[0] for r in rules] + [s]
            dsts = [r[1] for r in rules] + [d]
            if len(_absorb(srcs)) == len(srcs) and len(_absorb(dsts)) == len(dsts) \
                    and len(set(dsts)) == len(dsts):
                rules.append((s, d))
                break
    return PrefixMap(g, rules)


def random_action(rng: random.Random, *, max_vertices: int = 4, max_edges: int = 6,
                  max_gens: int = 3, max_rules: int = 3, max_len: int = 3,
                  graph: Optional[Graph] = None) -> PartialAction:
    g = graph or random_graph(rng, max_vertices, max_edges)
    k = rng.randint(1, max_gens)
    maps = [random_prefix_map(g, rng, max_rules, max_len) for _ in range(k)]
    return PartialAction(g, [chr(ord("a") + i) for i in range(k)], maps)


def random_intfun(g: Graph, rng: random.Random, max_depth: int, max_terms: int = 3) -> IntFun:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        p = random_path(g, rng, max_depth)
        terms[p] = terms.get(p, 0) + rng.randint(-3, 3)
    return IntFun(g, terms)


def random_intfun_in(c: ClopenSet, rng: random.Random, max_depth: int,
                     max_terms: int = 3) -> IntFun:
    """Random function supported inside ``c``."""
    g = c.graph
    if not c:
        return IntFun.zero(g)
    atoms = sorted(c.atoms)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        p = random_extension(g, rng, rng.choice(atoms), rng.randint(0, max_depth))
        terms[p] = terms.get(p, 0) + rng.randint(-3, 3)
    return IntFun(g, terms)


def random_word(action: PartialAction, rng: random.Random, max_len: int) -> Word:
    """Reduced word of length at most ``max_len`` whose ``X_w`` is nonempty.

    The target length is uniform; letters are uniform among reduced
    continuations that keep ``X_w`` nonempty, stopping early if none does.
    """
    target = rng.randint(0, max_len)
    w: Word = ()
    letters = action.letters()
    for _ in range(target):
        options = [x for x in letters if not (w and w[-1] == -x) and action.X(w + (x,))]
        if not options:
            break
        w = w + (rng.choice(options),)
    return w


def random_alg_element(action: PartialAction, rng: random.Random, max_word_len: int,
                       max_depth: int, max_components: int = 3) -> AlgElement:
    comps = {}
    for _ in range(rng.randint(0, max_components)):
        w = random_word(action, rng, max_word_len)
        f = random_intfun_in(action.X(w), rng, max_depth)
        comps[w] = comps[w] + f if w in comps else f
    return AlgElement(action, comps)


def random_p1_element(action: PartialAction, rng: random.Random, max_word_len: int,
                      max_depth: int, max_components: int = 3) -> P1Element:
    comps = {}
    if action.rank == 0:
        return P1Element.zero(action)
    for _ in range(rng.randint(0, max_components)):
        w = random_word(action, rng, max_word_len)
        a = rng.randrange(action.rank)
        f = random_intfun_in(action.edge_support(w, a), rng, max_depth)
        key = (w, a)
        comps[key] = comps[key] + f if key in comps else f
    return P1Element(action, comps)


def random_matrix(rng: random.Random, max_rows: int, max_cols: int, lo: int = -9,
                  hi: int = 9) -> List[List[int]]:
    m = rng.randint(0, max_rows)
    n = rng.randint(0, max_cols)
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]
