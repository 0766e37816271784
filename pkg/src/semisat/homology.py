"""Homology and cohomology of ``F_A ⋉ X`` from the two-term complex

    ⊕_a Z[X_a]  --d-->  Z[X],      d = ⊕_a (ι_a - θ_a^*),

computed on the refining cylinder bases of each level and passed to the
colimit along subdivision maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .boundary import ClopenSet, Graph, GraphError, Path, _absorb, normalize
from .linalg import (
    GroupPresentation, IntMatrix, Stability, invariant_factors_sparse,
)
from .partial_action import PartialAction, PrefixMap

BasisElement = Tuple[Optional[int], Path]  # (generator block or None, level atom)


class LevelError(ValueError):
    pass


def _expand(g: Graph, p: Path, m: int) -> List[Path]:
    """Level-``m`` atoms inside ``Z(p)`` (``p`` of length at most ``m``)."""
    out = [p]
    while True:
        nxt = []
        grew = False
        for q in out:
            if len(q) - 1 < m and not g.is_terminal(g.end(q)):
                nxt.extend(q + (e,) for e in g.children(g.end(q)))
                grew = True
            else:
                nxt.append(q)
        out = nxt
        if not grew:
            return out


@dataclass
class LevelMap:
    """One rung of a tower: a sparse integer matrix between two level bases."""

    level: int
    domain: List[BasisElement]
    codomain: List[BasisElement]
    columns: List[Dict[int, int]]

    def dense(self) -> IntMatrix:
        m = IntMatrix(len(self.codomain), len(self.domain))
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                m.entries[i][j] = x
        return m


def subdivision_columns(g: Graph, basis: Sequence[BasisElement],
                        finer: Sequence[BasisElement]) -> List[Dict[int, int]]:
    """Sparse matrix sending each basis cylinder to the sum of its refinements."""
    index = {b: i for i, b in enumerate(finer)}
    return [{index[(blk, q)]: 1 for q in g.subdivide(p)} for blk, p in basis]


def subdivision_matrix(g: Graph, basis, finer) -> IntMatrix:
    cols = subdivision_columns(g, basis, finer)
    m = IntMatrix(len(finer), len(basis))
    for j, col in enumerate(cols):
        for i, x in col.items():
            m.entries[i][j] = x
    return m


# -- level matrices -----------------------------------------------------------

def base_level(act: PartialAction) -> int:
    """Smallest level at which every rule cylinder is a union of level atoms."""
    return act.max_rule_length()


def homology_codomain_shift(act: PartialAction) -> int:
    return max([0] + [len(s) - len(d) for m in act.maps for s, d in m.rules])


def cohomology_codomain_shift(act: PartialAction) -> int:
    return max([0] + [len(d) - len(s) for m in act.maps for s, d in m.rules])


def _check_level(act: PartialAction, n: int) -> None:
    n0 = base_level(act)
    if n < n0:
        raise LevelError(f"level {n} is below the base level {n0}")


def homology_level(act: PartialAction, n: int, sign: int = 1) -> LevelMap:
    """Matrix of ``⊕_a (ι_a - θ_a^*)`` from level ``n`` to level ``n + k``.

    ``sign=-1`` builds ``θ_a^* - ι_a`` instead.
    """
    _check_level(act, n)
    g = act.graph
    m = n + homology_codomain_shift(act)
    atoms = g.level_atoms(n)
    domain: List[BasisElement] = []
    for a in range(act.rank):
        xa = act.X((a + 1,))
        domain.extend((a, p) for p in atoms if xa.covers(p))
    codomain: List[BasisElement] = [(None, q) for q in g.level_atoms(m)]
    cidx = g.level_index(m)
    columns = []
    for a, p in domain:
        inv = act.theta((-(a + 1),))
        col: Dict[int, int] = {}
        for q in _expand(g, p, m):
            col[cidx[q]] = sign
        for q in _expand(g, inv.apply(p), m):
            i = cidx[q]
            v = col.get(i, 0) - sign
            if v:
                col[i] = v
            else:
                col.pop(i, None)
        columns.append(col)
    return LevelMap(n, domain, codomain, columns)


def assemble_d_matrix(act: PartialAction, n: int
                      ) -> Tuple[IntMatrix, List[BasisElement], List[BasisElement]]:
    lm = homology_level(act, n)
    return lm.dense(), lm.domain, lm.codomain


def cohomology_level(act: PartialAction, n: int) -> LevelMap:
    """Matrix of ``φ -> ((θ_a)_*(φ|X_{a^-1}) - φ|X_a)_a`` from level ``n`` to ``n + k'``."""
    _check_level(act, n)
    g = act.graph
    m = n + cohomology_codomain_shift(act)
    domain: List[BasisElement] = [(None, p) for p in g.level_atoms(n)]
    fine = g.level_atoms(m)
    codomain: List[BasisElement] = []
    for a in range(act.rank):
        xa = act.X((a + 1,))
        codomain.extend((a, q) for q in fine if xa.covers(q))
    cidx = {b: i for i, b in enumerate(codomain)}
    columns = []
    for _, p in domain:
        col: Dict[int, int] = {}
        for a in range(act.rank):
            img = act.maps[a].apply(p)
            if img is not None:
                for q in _expand(g, img, m):
                    i = cidx[(a, q)]
                    col[i] = col.get(i, 0) + 1
            if act.X((a + 1,)).covers(p):
                for q in _expand(g, p, m):
                    i = cidx[(a, q)]
                    col[i] = col.get(i, 0) - 1
        columns.append({i: x for i, x in col.items() if x})
    return LevelMap(n, domain, codomain, columns)


# -- towers ---------------------------------------------------------------------

@dataclass
class TowerLevel:
    level: int
    domain_dim: int
    codomain_dim: int
    coker: GroupPresentation
    ker_rank: int
    coker_iso: Optional[bool] = None
    ker_iso: Optional[bool] = None

    def line(self) -> str:
        s = (f"level {self.level}: {self.domain_dim} -> {self.codomain_dim}, "
             f"coker {self.coker}, ker rank {self.ker_rank}")
        if self.coker_iso is not None:
            yn = {True: "iso", False: "not iso"}
            s += f", step coker {yn[self.coker_iso]}, ker {yn[self.ker_iso]}"
        return s


@dataclass
class Tower:
    """Cokernel and kernel of a ladder of level maps, passed to the colimit."""

    coker: GroupPresentation
    ker: GroupPresentation
    levels: List[TowerLevel] = field(default_factory=list)
    maps: List[LevelMap] = field(default_factory=list, repr=False)

    def log(self) -> List[str]:
        return [lv.line() for lv in self.levels]


def _level_groups(lm: LevelMap) -> Tuple[GroupPresentation, int]:
    rank, factors = invariant_factors_sparse(lm.columns)
    coker = GroupPresentation.from_factors(len(lm.codomain) - rank, factors)
    return coker, len(lm.domain) - rank


def _coker_step_surjective(g: Graph, prev: LevelMap, cur: LevelMap) -> bool:
    sub = subdivision_columns(g, prev.codomain, cur.codomain)
    rank, factors = invariant_factors_sparse(sub + cur.columns)
    return rank == len(cur.codomain) and not factors


def _first_run(flags: Sequence[Optional[bool]], window: int) -> Optional[int]:
    """Index ``i`` of the first rung whose next ``window`` steps are all isomorphisms."""
    for i in range(len(flags)):
        run = flags[i + 1:i + 1 + window]
        if len(run) == window and all(run):
            return i
    return None


def run_tower(g: Graph, build: Callable[[int], LevelMap], n0: int, max_level: int,
              window: int = 2, exact_class: bool = False) -> Tower:
    """Compute levels ``n0..max_level`` until both groups have stabilized.

    A step ``n -> n+1`` counts as an isomorphism for the cokernel when the
    invariants agree and the induced map is onto; for the kernel (a pure
    sublattice, so the induced map is injective with torsion-free cokernel)
    equal ranks suffice.
    """
    if max_level < n0:
        raise LevelError(f"max level {max_level} is below the base level {n0}")
    if window < 1:
        raise ValueError("window must be at least 1")
    levels: List[TowerLevel] = []
    maps: List[LevelMap] = []
    cflags: List[Optional[bool]] = []
    kflags: List[Optional[bool]] = []
    c_at = k_at = None
    for n in range(n0, max_level + 1):
        lm = build(n)
        coker, kr = _level_groups(lm)
        lv = TowerLevel(n, len(lm.domain), len(lm.codomain), coker, kr)
        if maps:
            prev = levels[-1]
            lv.coker_iso = coker == prev.coker and _coker_step_surjective(g, maps[-1], lm)
            lv.ker_iso = kr == prev.ker_rank
        levels.append(lv)
        maps.append(lm)
        cflags.append(lv.coker_iso)
        kflags.append(lv.ker_iso)
        c_at = _first_run(cflags, window) if c_at is None else c_at
        k_at = _first_run(kflags, window) if k_at is None else k_at
        if c_at is not None and k_at is not None:
            break

    def stability(at: Optional[int]) -> Stability:
        if at is None:
            return Stability("approximate", levels[-1].level)
        level = levels[at].level
        if exact_class and level == n0:
            return Stability("exact", level)
        return Stability("stabilized", level)

    cl = levels[c_at] if c_at is not None else levels[-1]
    kl = levels[k_at] if k_at is not None else levels[-1]
    coker = cl.coker.with_stability(stability(c_at))
    ker = GroupPresentation(kl.ker_rank, (), stability(k_at))
    return Tower(coker, ker, levels, maps)


def is_graph_shift(act: PartialAction) -> bool:
    """Whether ``act`` is the edge action ``θ_e(z) = ez`` of a graph without sinks."""
    g = act.graph
    if any(g.is_terminal(v) for v in range(g.num_vertices)):
        return False
    if act.rank != len(g.edges):
        return False
    used = set()
    for m in act.maps:
        if len(m.rules) != 1:
            return False
        (s, d), = m.rules
        if len(s) != 1 or len(d) != 2 or s[0] != g.edge_source(d[1]):
            return False
        used.add(d[1])
    return len(used) == len(g.edges)


def _exact_class(act: PartialAction) -> bool:
    return not act.graph.edges or is_graph_shift(act)


def default_max_level(act: PartialAction) -> int:
    return base_level(act) + 6


@dataclass
class HomologyResult:
    H0: GroupPresentation
    H1: GroupPresentation
    tower: Tower

    def log(self) -> List[str]:
        return self.tower.log()


def homology_tower(act: PartialAction, max_level: int = None, window: int = 2, *,
                   sign: int = 1) -> HomologyResult:
    """``H0 = colim coker``, ``H1 = colim ker`` (free, reported by rank); ``Hn = 0`` for n >= 2."""
    n0 = base_level(act)
    if max_level is None:
        max_level = default_max_level(act)
    t = run_tower(act.graph, lambda n: homology_level(act, n, sign), n0, max_level, window,
                  _exact_class(act))
    return HomologyResult(t.coker, t.ker, t)


def cohomology_tower(act: PartialAction, max_level: int = None, window: int = 2
                     ) -> HomologyResult:
    """``H^0 = ker`` of the dual map (free), ``H^1 = coker``; ``H^n = 0`` for n >= 2."""
    n0 = base_level(act)
    if max_level is None:
        max_level = default_max_level(act)
    t = run_tower(act.graph, lambda n: cohomology_level(act, n), n0, max_level, window,
                  _exact_class(act))
    return HomologyResult(t.ker, t.coker, t)


# -- Deaconu-Renault systems ------------------------------------------------------

class DRSystem:
    """A local homeomorphism ``T`` with clopen domain given by pieces ``src.x -> dst.x``.

    Sources must be prefix-incomparable; targets may overlap.
    """

    def __init__(self, graph: Graph, pieces: Iterable[Tuple[Path, Path]]):
        pieces = tuple((tuple(s), tuple(d)) for s, d in pieces)
        for s, d in pieces:
            graph.check_path(s)
            graph.check_path(d)
            if graph.end(s) != graph.end(d):
                raise GraphError(
                    f"piece {graph.format_path(s)} -> {graph.format_path(d)}: "
                    "source and target end at different vertices")
        srcs = [s for s, _ in pieces]
        if len(set(srcs)) != len(srcs) or len(_absorb(srcs)) != len(srcs):
            raise GraphError("piece sources overlap, so T is not single-valued")
        self.graph = graph
        self.pieces = pieces

    def __eq__(self, other):
        if not isinstance(other, DRSystem):
            return NotImplemented
        return self.graph == other.graph and sorted(self.pieces) == sorted(other.pieces)

    def __repr__(self):
        fmt = self.graph.format_path
        return "DRSystem{" + ", ".join(f"{fmt(s)} -> {fmt(d)}" for s, d in self.pieces) + "}"

    @property
    def domain(self) -> ClopenSet:
        return normalize(self.graph, [s for s, _ in self.pieces])

    def base_level(self) -> int:
        return max((max(len(s), len(d)) - 1 for s, d in self.pieces), default=0)

    def apply(self, p: Path) -> Optional[Path]:
        for s, d in self.pieces:
            if p[:len(s)] == s:
                return d + p[len(s):]
        return None

    @classmethod
    def shift(cls, g: Graph) -> "DRSystem":
        """The shift ``e.x -> x`` on the boundary path space."""
        return cls(g, [((g.edge_range(e), e), (g.edge_source(e),)) for e in range(len(g.edges))])


def dr_to_action(sys: DRSystem) -> PartialAction:
    """One generator per piece with ``θ = (T|piece)^-1``; the result is orthogonal."""
    g = sys.graph
    maps = [PrefixMap(g, [(d, s)]) for s, d in sys.pieces]
    names = [f"a{i + 1}" for i in range(len(maps))]
    return PartialAction(g, names, maps)


def dr_level(sys: DRSystem, n: int) -> LevelMap:
    """Matrix of ``ι - T_*`` on ``Z[dom T]`` from level ``n`` to level ``n + k``."""
    n0 = sys.base_level()
    if n < n0:
        raise LevelError(f"level {n} is below the base level {n0}")
    g = sys.graph
    m = n + max([0] + [len(d) - len(s) for s, d in sys.pieces])
    dom = sys.domain
    domain: List[BasisElement] = [(None, p) for p in g.level_atoms(n) if dom.covers(p)]
    codomain: List[BasisElement] = [(None, q) for q in g.level_atoms(m)]
    cidx = g.level_index(m)
    columns = []
    for _, p in domain:
        col: Dict[int, int] = {}
        for q in _expand(g, p, m):
            col[cidx[q]] = 1
        for q in _expand(g, sys.apply(p), m):
            i = cidx[q]
            col[i] = col.get(i, 0) - 1
        columns.append({i: x for i, x in col.items() if x})
    return LevelMap(n, domain, codomain, columns)


@dataclass
class DRResult:
    H0: GroupPresentation
    H1: GroupPresentation
    direct: Tower
    via_action: Tower

    @property
    def routes_agree(self) -> bool:
        a, b = self.direct, self.via_action
        return (a.coker == b.coker and a.ker == b.ker
                and [(lv.coker, lv.ker_rank) for lv in a.levels]
                == [(lv.coker, lv.ker_rank) for lv in b.levels])

    def log(self) -> List[str]:
        return self.direct.log()


def dr_check(sys: DRSystem, max_level: int = None, window: int = 2) -> DRResult:
    """Both routes to the homology of ``G_(X,T)``, without asserting agreement."""
    act = dr_to_action(sys)
    n0 = sys.base_level()
    if max_level is None:
        max_level = n0 + 6
    exact = _exact_class(act)
    direct = run_tower(sys.graph, lambda n: dr_level(sys, n), n0, max_level, window, exact)
    via = run_tower(sys.graph, lambda n: homology_level(act, n), n0, max_level, window, exact)
    return DRResult(direct.coker, direct.ker, direct, via)


def dr_homology(sys: DRSystem, max_level: int = None, window: int = 2) -> DRResult:
    """``H0 = coker(ι - T_*)``, ``H1 = ker(ι - T_*)``; raises if the two routes disagree."""
    res = dr_check(sys, max_level, window)
    if not res.routes_agree:
        raise AssertionError("direct and action routes disagree")
    return res


# -- closed form for graph shifts -------------------------------------------------

def vertex_matrix(g: Graph) -> IntMatrix:
    """``B[u][v] = #{e : s(e) = u, r(e) = v} - δ_uv``."""
    n = g.num_vertices
    b = IntMatrix(n, n)
    for e in range(len(g.edges)):
        b.entries[g.edge_source(e)][g.edge_range(e)] += 1
    for i in range(n):
        b.entries[i][i] -= 1
    return b


def graph_oracle(g: Graph) -> Tuple[GroupPresentation, GroupPresentation]:
    """``(coker B, ker B)`` for the vertex matrix of the shift on the boundary path space."""
    if any(g.is_terminal(v) for v in range(g.num_vertices)):
        raise GraphError("graph oracle needs every vertex to receive an edge")
    b = vertex_matrix(g)
    cols = [{i: b.entries[i][j] for i in range(b.rows) if b.entries[i][j]} for j in range(b.cols)]
    rank, factors = invariant_factors_sparse(cols)
    exact = Stability("exact")
    return (GroupPresentation.from_factors(b.rows - rank, factors, exact),
            GroupPresentation(b.cols - rank, (), exact))
