"""Boundary path spaces of finite graphs and their cylinder algebra.

Edges follow the range-to-source convention: a path ``e1.e2`` is composable
when ``s(e1) == r(e2)``.  A path is stored as a tuple of ints
``(base_vertex, edge, edge, ...)`` so that prefix tests are tuple slicing and
the natural tuple order is declaration order.  The cylinder ``Z(p)`` is the
set of boundary paths extending ``p``; it is the single point ``{p}`` when
``s(p)`` receives no edge.

Clopen sets and locally constant integer functions are kept in a canonical
form (a maximally collapsed antichain of cylinders), so semantic equality is
plain equality of the stored data.
"""

from __future__ import annotations

import re
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

Path = Tuple[int, ...]

_NAME = re.compile(r"[A-Za-z0-9_]+\Z")


class GraphError(ValueError):
    """Invalid graph data or a path that does not live in the graph."""


class Graph:
    """A finite directed graph given by named vertices and edges.

    ``edges`` holds triples ``(name, range_vertex, source_vertex)``.
    """

    __slots__ = (
        "vertices", "edges", "_vindex", "_eindex", "_range", "_source",
        "_children", "_levels", "_level_index", "_hash",
    )

    def __init__(self, vertices: Sequence[str], edges: Sequence[Tuple[str, str, str]] = ()):
        vertices = tuple(vertices)
        edges = tuple(tuple(e) for e in edges)
        if not vertices:
            raise GraphError("a graph needs at least one vertex")
        seen = set()
        for name in list(vertices) + [e[0] for e in edges]:
            if not _NAME.match(name):
                raise GraphError(f"invalid name {name!r}")
            if name in seen:
                raise GraphError(f"duplicate name {name!r}")
            seen.add(name)
        vindex = {v: i for i, v in enumerate(vertices)}
        rng, src = [], []
        for name, r, s in edges:
            for v in (r, s):
                if v not in vindex:
                    raise GraphError(f"edge {name}: unknown vertex {v!r}")
            rng.append(vindex[r])
            src.append(vindex[s])
        children: List[List[int]] = [[] for _ in vertices]
        for i, r in enumerate(rng):
            children[r].append(i)
        self.vertices = vertices
        self.edges = edges
        self._vindex = vindex
        self._eindex = {e[0]: i for i, e in enumerate(edges)}
        self._range = tuple(rng)
        self._source = tuple(src)
        self._children = tuple(tuple(c) for c in children)
        self._levels: Dict[int, Tuple[Path, ...]] = {}
        self._level_index: Dict[int, Dict[Path, int]] = {}
        self._hash = hash((vertices, edges))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Graph({list(self.vertices)!r}, {[tuple(e) for e in self.edges]!r})"

    # -- structure -------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def edge_range(self, e: int) -> int:
        return self._range[e]

    def edge_source(self, e: int) -> int:
        return self._source[e]

    def children(self, v: int) -> Tuple[int, ...]:
        """Edges ``g`` with ``r(g) == v``, i.e. the ways to extend a path ending at ``v``."""
        return self._children[v]

    def is_terminal(self, v: int) -> bool:
        return not self._children[v]

    def end(self, p: Path) -> int:
        """Source vertex ``s(p)`` of a path (its base when empty)."""
        return self._source[p[-1]] if len(p) > 1 else p[0]

    def whole(self) -> Tuple[Path, ...]:
        return tuple((v,) for v in range(len(self.vertices)))

    # -- paths -----------------------------------------------------------

    def check_path(self, p: Path) -> Path:
        p = tuple(p)
        if not p or not 0 <= p[0] < len(self.vertices):
            raise GraphError(f"invalid path {p!r}")
        cur = p[0]
        for e in p[1:]:
            if not 0 <= e < len(self.edges):
                raise GraphError(f"invalid edge index {e!r}")
            if self._range[e] != cur:
                raise GraphError(f"path {self.format_path(p[:1])}: edge {self.edges[e][0]} is not composable")
            cur = self._source[e]
        return p

    def path(self, token: str) -> Path:
        """Parse ``"v"`` (empty path at v) or ``"e.f.g"`` (edges, range to source)."""
        token = token.strip()
        if token in self._vindex:
            return (self._vindex[token],)
        names = token.split(".")
        idx = []
        for name in names:
            if name not in self._eindex:
                if name in self._vindex:
                    raise GraphError(f"vertex {name!r} cannot appear inside an edge path")
                raise GraphError(f"unknown edge {name!r}")
            idx.append(self._eindex[name])
        for a, b in zip(idx, idx[1:]):
            if self._source[a] != self._range[b]:
                raise GraphError(
                    f"edges {self.edges[a][0]}.{self.edges[b][0]} are not composable")
        return (self._range[idx[0]],) + tuple(idx)

    def format_path(self, p: Path) -> str:
        if len(p) == 1:
            return self.vertices[p[0]]
        return ".".join(self.edges[e][0] for e in p[1:])

    def subdivide(self, p: Path) -> Tuple[Path, ...]:
        """Children cylinders of ``Z(p)``; ``(p,)`` itself when ``s(p)`` is terminal."""
        kids = self._children[self.end(p)]
        if not kids:
            return (p,)
        return tuple(p + (g,) for g in kids)

    # -- level bases -----------------------------------------------------

    def level_atoms(self, n: int) -> Tuple[Path, ...]:
        """Paths of length ``n`` plus shorter paths ending at terminal vertices.

        Their cylinders partition the space; the order is lexicographic in
        declaration order.
        """
        if n < 0:
            raise ValueError("level must be nonnegative")
        cached = self._levels.get(n)
        if cached is not None:
            return cached
        if n == 0:
            atoms = self.whole()
        else:
            atoms = tuple(q for p in self.level_atoms(n - 1) for q in self.subdivide(p))
        self._levels[n] = atoms
        return atoms

    def level_index(self, n: int) -> Dict[Path, int]:
        idx = self._level_index.get(n)
        if idx is None:
            idx = {p: i for i, p in enumerate(self.level_atoms(n))}
            self._level_index[n] = idx
        return idx


def level_atoms(g: Graph, n: int) -> List[Path]:
    return list(g.level_atoms(n))


def is_prefix(p: Path, q: Path) -> bool:
    return len(p) <= len(q) and q[:len(p)] == p


def _has_prefix_in(p: Path, keys) -> bool:
    """True if some prefix of ``p`` (itself included) lies in ``keys``."""
    for k in range(1, len(p) + 1):
        if p[:k] in keys:
            return True
    return False


def _find_prefix(p: Path, terms: Mapping[Path, int]) -> int:
    for k in range(1, len(p) + 1):
        c = terms.get(p[:k])
        if c is not None:
            return c
    return 0


def _absorb(paths: Iterable[Path]) -> set:
    keys = set(paths)
    return {p for p in keys if not any(p[:k] in keys for k in range(1, len(p)))}


def _collapse(g: Graph, terms: Dict[Path, int]) -> Dict[Path, int]:
    """Merge complete sibling families carrying equal values into their parent.

    ``terms`` must be an antichain without zero values; it is modified in place.
    """
    if not terms:
        return terms
    buckets: Dict[int, set] = {}
    for p in terms:
        buckets.setdefault(len(p), set()).add(p)
    top = max(buckets)
    for length in range(top, 1, -1):
        level = buckets.get(length)
        if not level:
            continue
        parents = {p[:-1] for p in level}
        for par in parents:
            kids = g.children(g.end(par))
            c = terms.get(par + (kids[0],))
            if c is None:
                continue
            if all(terms.get(par + (k,)) == c for k in kids[1:]):
                for k in kids:
                    del terms[par + (k,)]
                terms[par] = c
                buckets.setdefault(length - 1, set()).add(par)
    return terms


def _refine(g: Graph, keys) -> set:
    """Common refinement of a family of cylinders.

    Returns an antichain ``R`` such that each ``Z(k)`` is a union of members
    of ``R`` and every member of ``R`` lies inside some ``Z(k)``.
    """
    keys = keys if isinstance(keys, (set, frozenset)) else set(keys)
    inner = set()
    for p in keys:
        for k in range(1, len(p)):
            inner.add(p[:k])
    if not inner & keys:
        return set(keys)
    out = {p for p in keys if p not in inner}
    for d in inner:
        if not _has_prefix_in(d, keys):
            continue
        for e in g.children(g.end(d)):
            c = d + (e,)
            if c not in inner and c not in keys:
                out.add(c)
    return out


def _same_graph(a: Graph, b: Graph) -> None:
    if a is not b and a != b:
        raise GraphError("operands live on different graphs")


class ClopenSet:
    """A clopen subset of the boundary path space, as a canonical antichain."""

    __slots__ = ("graph", "atoms")

    def __init__(self, graph: Graph, atoms: FrozenSet[Path]):
        # callers are expected to pass canonical data; use normalize() otherwise
        self.graph = graph
        self.atoms = frozenset(atoms)

    @classmethod
    def empty(cls, g: Graph) -> "ClopenSet":
        return cls(g, frozenset())

    @classmethod
    def whole(cls, g: Graph) -> "ClopenSet":
        return normalize(g, g.whole())

    def __eq__(self, other):
        if not isinstance(other, ClopenSet):
            return NotImplemented
        return self.atoms == other.atoms and self.graph == other.graph

    def __hash__(self):
        return hash(self.atoms)

    def __bool__(self):
        return bool(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(sorted(self.atoms))

    def __repr__(self):
        return "{" + ", ".join(self.graph.format_path(p) for p in self) + "}"

    def depth(self) -> int:
        return max((len(p) - 1 for p in self.atoms), default=0)

    def covers(self, p: Path) -> bool:
        """True if ``Z(p)`` lies inside this set (``p`` at least as deep as the atoms)."""
        return _has_prefix_in(p, self.atoms)

    def __and__(self, other: "ClopenSet") -> "ClopenSet":
        return meet(self, other)

    def __or__(self, other: "ClopenSet") -> "ClopenSet":
        return join(self, other)

    def __sub__(self, other: "ClopenSet") -> "ClopenSet":
        return difference(self, other)

    def complement(self) -> "ClopenSet":
        return complement(self.graph, self)

    def issubset(self, other: "ClopenSet") -> bool:
        return meet(self, other) == self


def cylinder(g: Graph, p) -> ClopenSet:
    if isinstance(p, str):
        p = g.path(p)
    p = g.check_path(p)
    return normalize(g, [p])


def normalize(g: Graph, paths: Iterable) -> ClopenSet:
    """Canonical clopen set equal to the union of the given cylinders."""
    paths = [g.path(p) if isinstance(p, str) else p for p in paths]
    terms = {p: 1 for p in _absorb(paths)}
    return ClopenSet(g, frozenset(_collapse(g, terms)))


def meet(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    _same_graph(a.graph, b.graph)
    out = [p for p in a.atoms if _has_prefix_in(p, b.atoms)]
    out.extend(q for q in b.atoms if _has_prefix_in(q, a.atoms))
    return normalize(a.graph, out)


def join(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    _same_graph(a.graph, b.graph)
    return normalize(a.graph, a.atoms | b.atoms)


def difference(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    _same_graph(a.graph, b.graph)
    pieces = _refine(a.graph, a.atoms | b.atoms)
    keep = [p for p in pieces if _has_prefix_in(p, a.atoms) and not _has_prefix_in(p, b.atoms)]
    return normalize(a.graph, keep)


def complement(g: Graph, c: ClopenSet) -> ClopenSet:
    return difference(ClopenSet.whole(g), c)


class IntFun:
    """A locally constant integer function ``sum c_p * 1_{Z(p)}`` in canonical form.

    Supports ``+``, ``-``, pointwise ``*`` (with another IntFun) and integer
    scaling.  Instances are treated as immutable.
    """

    __slots__ = ("graph", "terms", "_hash")

    def __init__(self, graph: Graph, terms: Mapping[Path, int] = (), *, canonical: bool = False):
        self.graph = graph
        if canonical:
            self.terms = dict(terms)
        else:
            terms = dict(terms)
            keys = set(terms)
            if _absorb(keys) != keys:
                # overlapping support: accumulate over a common refinement
                acc: Dict[Path, int] = {}
                for p in _refine(graph, keys):
                    s = 0
                    for k in range(1, len(p) + 1):
                        s += terms.get(p[:k], 0)
                    if s:
                        acc[p] = s
                terms = acc
            else:
                terms = {p: int(c) for p, c in terms.items() if c}
            self.terms = _collapse(graph, terms)
        self._hash = None

    @classmethod
    def zero(cls, g: Graph) -> "IntFun":
        return cls(g, {}, canonical=True)

    @classmethod
    def one(cls, g: Graph) -> "IntFun":
        return indicator(ClopenSet.whole(g))

    def __eq__(self, other):
        if not isinstance(other, IntFun):
            return NotImplemented
        return self.terms == other.terms and self.graph == other.graph

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for p in sorted(self.terms):
            c = self.terms[p]
            name = f"1_{{Z({self.graph.format_path(p)})}}"
            parts.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(parts)

    def _combine(self, other: "IntFun", op) -> "IntFun":
        _same_graph(self.graph, other.graph)
        f, h = self.terms, other.terms
        keys = f.keys() | h.keys()
        out = {}
        for p in _refine(self.graph, keys):
            v = op(_find_prefix(p, f), _find_prefix(p, h))
            if v:
                out[p] = v
        return IntFun(self.graph, _collapse(self.graph, out), canonical=True)

    def __add__(self, other: "IntFun") -> "IntFun":
        if not other.terms:
            return self
        if not self.terms:
            return other
        return self._combine(other, lambda x, y: x + y)

    def __sub__(self, other: "IntFun") -> "IntFun":
        if not other.terms:
            return self
        return self._combine(other, lambda x, y: x - y)

    def __neg__(self) -> "IntFun":
        return IntFun(self.graph, {p: -c for p, c in self.terms.items()}, canonical=True)

    def __mul__(self, other):
        if isinstance(other, IntFun):
            if not self.terms or not other.terms:
                return IntFun.zero(self.graph)
            return self._combine(other, lambda x, y: x * y)
        if isinstance(other, int):
            if other == 0:
                return IntFun.zero(self.graph)
            return IntFun(self.graph, {p: other * c for p, c in self.terms.items()}, canonical=True)
        return NotImplemented

    __rmul__ = __mul__

    def restrict(self, c: ClopenSet) -> "IntFun":
        return self * indicator(c)

    def support(self) -> ClopenSet:
        return normalize(self.graph, self.terms)

    def depth(self) -> int:
        return max((len(p) - 1 for p in self.terms), default=0)

    def value(self, p: Path) -> int:
        """Value on ``Z(p)``; ``p`` must be at least as fine as the support."""
        return _find_prefix(p, self.terms)

    def to_level_vector(self, n: int) -> List[int]:
        return to_level_vector(self, n)


def indicator(c: ClopenSet) -> IntFun:
    return IntFun(c.graph, {p: 1 for p in c.atoms}, canonical=True)


def to_level_vector(f: IntFun, n: int) -> List[int]:
    """Coefficients of ``f`` in the basis ``{1_{Z(p)} : p in level_atoms(n)}``."""
    if f.depth() > n:
        raise ValueError(f"function has depth {f.depth()} > level {n}")
    return [_find_prefix(p, f.terms) for p in f.graph.level_atoms(n)]


def from_level_vector(g: Graph, n: int, vec: Sequence[int]) -> IntFun:
    atoms = g.level_atoms(n)
    if len(vec) != len(atoms):
        raise ValueError(f"expected {len(atoms)} coefficients, got {len(vec)}")
    return IntFun(g, {p: int(c) for p, c in zip(atoms, vec) if c})
