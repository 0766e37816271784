"""Prefix-exchange partial homeomorphisms and semi-saturated free group actions.

A reduced word is a tuple of nonzero ints: generator ``k`` (0-based) is the
letter ``k + 1`` and its inverse is ``-(k + 1)``.  The empty tuple is the
identity of the free group.
"""

from __future__ import annotations

import re
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .boundary import (
    ClopenSet, Graph, GraphError, IntFun, Path, _absorb, _collapse, _same_graph,
    indicator, is_prefix, normalize,
)

Word = Tuple[int, ...]
Rule = Tuple[Path, Path]


class WordError(ValueError):
    pass


# -- free group words ------------------------------------------------------

def reduce_word(letters: Iterable[int]) -> Word:
    out: List[int] = []
    for x in letters:
        if x == 0:
            raise WordError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(x != 0 for x in w) and all(a != -b for a, b in zip(w, w[1:]))


def word_inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def word_mul(u: Word, v: Word) -> Word:
    k = 0
    while k < len(u) and k < len(v) and u[-1 - k] == -v[k]:
        k += 1
    return u[:len(u) - k] + v[k:]


def word_key(w: Word):
    """Total order on words: length first, then generator order with ``a`` before ``a^-1``."""
    return (len(w), tuple((abs(x), x < 0) for x in w))


# -- prefix maps -----------------------------------------------------------

class PrefixMap:
    """A clopen partial homeomorphism given by rules ``src.x -> dst.x``.

    The rule table is canonical: complete sibling families
    ``(p.g -> q.g)`` over all extension edges ``g`` are merged into
    ``(p -> q)``.  ``==`` compares tables; use :meth:`equivalent` for
    pointwise equality, which differs only on degenerate cylinders that
    are a single periodic point.
    """

    __slots__ = ("graph", "rules", "_domain", "_range", "_by_src", "_hash")

    def __init__(self, graph: Graph, rules: Iterable[Rule], *, check: bool = True):
        rules = {(tuple(s), tuple(d)) for s, d in rules}
        if check:
            for s, d in rules:
                graph.check_path(s)
                graph.check_path(d)
                if graph.end(s) != graph.end(d):
                    raise GraphError(
                        f"rule {graph.format_path(s)} -> {graph.format_path(d)}: "
                        "source and target end at different vertices")
            srcs = [s for s, _ in rules]
            dsts = [d for _, d in rules]
            if len(_absorb(srcs)) != len(srcs):
                raise GraphError("rule sources are not prefix-incomparable")
            if len(_absorb(dsts)) != len(dsts) or len(set(dsts)) != len(dsts):
                raise GraphError("rule targets are not prefix-incomparable")
        self.graph = graph
        self.rules: FrozenSet[Rule] = frozenset(_merge_rules(graph, rules))
        self._domain = None
        self._range = None
        self._by_src = None
        self._hash = None

    @classmethod
    def identity(cls, g: Graph) -> "PrefixMap":
        return cls(g, [(p, p) for p in g.whole()], check=False)

    @classmethod
    def empty(cls, g: Graph) -> "PrefixMap":
        return cls(g, [], check=False)

    def __eq__(self, other):
        if not isinstance(other, PrefixMap):
            return NotImplemented
        return self.rules == other.rules and self.graph == other.graph

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rules)
        return self._hash

    def __bool__(self):
        return bool(self.rules)

    def sorted_rules(self) -> List[Rule]:
        return sorted(self.rules)

    def __repr__(self):
        fmt = self.graph.format_path
        return "{" + ", ".join(f"{fmt(s)} -> {fmt(d)}" for s, d in self.sorted_rules()) + "}"

    @property
    def domain(self) -> ClopenSet:
        if self._domain is None:
            self._domain = normalize(self.graph, [s for s, _ in self.rules])
        return self._domain

    @property
    def range(self) -> ClopenSet:
        if self._range is None:
            self._range = normalize(self.graph, [d for _, d in self.rules])
        return self._range

    def max_rule_length(self) -> int:
        return max((max(len(s), len(d)) - 1 for s, d in self.rules), default=0)

    def inverse(self) -> "PrefixMap":
        return invert(self)

    def apply(self, p: Path) -> Optional[Path]:
        """Image path of ``Z(p)`` when it lies inside a single rule, else None."""
        if self._by_src is None:
            self._by_src = dict(self.rules)
        for k in range(1, len(p) + 1):
            d = self._by_src.get(p[:k])
            if d is not None:
                return d + p[k:]
        return None

    def image(self, c: ClopenSet) -> ClopenSet:
        """``m(C ∩ domain)`` as a clopen set."""
        return restrict(self, c).range

    def pullback(self, f: IntFun) -> IntFun:
        return pullback(self, f)

    def pushforward(self, f: IntFun) -> IntFun:
        return pushforward(self, f)

    def equivalent(self, other: "PrefixMap") -> bool:
        """Pointwise equality of the two partial maps."""
        _same_graph(self.graph, other.graph)
        if self.rules == other.rules:
            return True
        if self.domain != other.domain:
            return False
        g = self.graph
        keys = {s for s, _ in self.rules} | {s for s, _ in other.rules}
        from .boundary import _refine
        for p in _refine(g, keys):
            q1, q2 = self.apply(p), other.apply(p)
            if q1 is None and q2 is None:
                continue
            if q1 is None or q2 is None:
                return False
            if q1 != q2 and not _same_point(g, p, q1, q2):
                return False
        return True


def _same_point(g: Graph, p: Path, q1: Path, q2: Path) -> bool:
    """Whether ``q1.t == q2.t`` for every boundary tail ``t`` at ``s(p)``."""
    if len(q1) > len(q2):
        q1, q2 = q2, q1
    if not is_prefix(q1, q2):
        return False
    r = q2[len(q1):]
    # the tail space at s(p) must be one infinite path t with t = r.t
    tail = []
    v = g.end(p)
    bound = 2 * g.num_vertices + len(r) + 1
    while len(tail) < bound:
        kids = g.children(v)
        if len(kids) != 1:
            return False
        tail.append(kids[0])
        v = g.edge_source(kids[0])
    return all(tail[i] == r[i % len(r)] for i in range(len(tail)))


def _merge_rules(g: Graph, rules: set) -> set:
    rules = set(rules)
    changed = True
    while changed:
        changed = False
        fams: Dict[Tuple[Path, Path], set] = {}
        for s, d in rules:
            if len(s) > 1 and len(d) > 1 and s[-1] == d[-1]:
                fams.setdefault((s[:-1], d[:-1]), set()).add(s[-1])
        for (ps, pd), last in fams.items():
            kids = g.children(g.end(ps))
            if len(last) == len(kids) and last.issuperset(kids):
                for k in kids:
                    rules.discard((ps + (k,), pd + (k,)))
                rules.add((ps, pd))
                changed = True
    return rules


def invert(m: PrefixMap) -> PrefixMap:
    return PrefixMap(m.graph, [(d, s) for s, d in m.rules], check=False)


def compose(second: PrefixMap, first: PrefixMap) -> PrefixMap:
    """``second ∘ first`` (apply ``first``, then ``second``)."""
    _same_graph(second.graph, first.graph)
    out = set()
    if not first.rules or not second.rules:
        return PrefixMap(first.graph, out, check=False)
    by_src = {u: v for u, v in second.rules}
    for p, q in first.rules:
        # second-rule sources that are prefixes of q
        hit = False
        for k in range(1, len(q) + 1):
            v = by_src.get(q[:k])
            if v is not None:
                out.add((p, v + q[k:]))
                hit = True
                break
        if hit:
            continue
        # second-rule sources that properly extend q
        n = len(q)
        for u, v in second.rules:
            if len(u) > n and u[:n] == q:
                out.add((p + u[n:], v))
    return PrefixMap(first.graph, out, check=False)


def restrict(m: PrefixMap, c: ClopenSet) -> PrefixMap:
    """Restriction of ``m`` to ``domain(m) ∩ C``."""
    _same_graph(m.graph, c.graph)
    out = set()
    atoms = c.atoms
    for s, d in m.rules:
        if any(s[:k] in atoms for k in range(1, len(s) + 1)):
            out.add((s, d))
            continue
        n = len(s)
        for a in atoms:
            if len(a) > n and a[:n] == s:
                out.add((a, d + a[n:]))
    return PrefixMap(m.graph, out, check=False)


def pullback(m: PrefixMap, f: IntFun) -> IntFun:
    """``(f|range(m)) ∘ m``, extended by zero off ``domain(m)``."""
    _same_graph(m.graph, f.graph)
    out: Dict[Path, int] = {}
    if not f.terms or not m.rules:
        return IntFun.zero(m.graph)
    terms = f.terms
    for s, d in m.rules:
        c = None
        for k in range(1, len(d) + 1):
            c = terms.get(d[:k])
            if c is not None:
                out[s] = c
                break
        if c is not None:
            continue
        n = len(d)
        for p, c in terms.items():
            if len(p) > n and p[:n] == d:
                out[s + p[n:]] = c
    return IntFun(m.graph, _collapse(m.graph, out), canonical=True)


def pushforward(m: PrefixMap, f: IntFun) -> IntFun:
    """Transport of ``f|domain(m)`` along ``m``."""
    return pullback(invert(m), f)


# -- semi-saturated actions ---------------------------------------------------

_LETTER = re.compile(r"([A-Za-z0-9_]+)(?:\^(-?1))?\Z")


class PartialAction:
    """Semi-saturated partial action of the free group on ``generators``.

    ``maps[k]`` is the partial homeomorphism of generator ``k`` from
    ``X_{a^-1}`` (its domain) onto ``X_a`` (its range).  Values for longer
    reduced words are compositions of generator maps and are memoised.
    """

    def __init__(self, graph: Graph, generators: Sequence[str], maps: Sequence[PrefixMap]):
        generators = tuple(generators)
        maps = tuple(maps)
        if len(generators) != len(maps):
            raise ValueError("one map per generator is required")
        if len(set(generators)) != len(generators):
            raise ValueError("duplicate generator name")
        for name in generators:
            if not _LETTER.match(name) or "^" in name:
                raise ValueError(f"invalid generator name {name!r}")
        for m in maps:
            _same_graph(graph, m.graph)
        self.graph = graph
        self.generators = generators
        self.maps = maps
        self._gindex = {a: i for i, a in enumerate(generators)}
        self._theta: Dict[Word, PrefixMap] = {(): PrefixMap.identity(graph)}
        for i, m in enumerate(maps):
            self._theta[(i + 1,)] = m
            self._theta[(-(i + 1),)] = invert(m)
        self._edge_support: Dict[Tuple[Word, int], ClopenSet] = {}
        self._indicator: Dict[Word, IntFun] = {}

    def __eq__(self, other):
        if not isinstance(other, PartialAction):
            return NotImplemented
        return (self.graph == other.graph and self.generators == other.generators
                and self.maps == other.maps)

    def __hash__(self):
        return hash((self.graph, self.generators, self.maps))

    def __repr__(self):
        body = ", ".join(f"{a}: {m!r}" for a, m in zip(self.generators, self.maps))
        return f"PartialAction({body})"

    @property
    def rank(self) -> int:
        return len(self.generators)

    def letters(self) -> List[int]:
        return [s * (i + 1) for i in range(self.rank) for s in (1, -1)]

    def theta(self, w: Word) -> PrefixMap:
        m = self._theta.get(w)
        if m is None:
            if not is_reduced(w):
                raise WordError(f"word {w!r} is not reduced")
            for x in w:
                if not 1 <= abs(x) <= self.rank:
                    raise WordError(f"unknown generator index {abs(x) - 1}")
            m = compose(self.theta(w[:1]), self.theta(w[1:]))
            self._theta[w] = m
        return m

    def X(self, w: Word) -> ClopenSet:
        """Range of ``theta_w``."""
        return self.theta(w).range

    def indicator_of(self, w: Word) -> IntFun:
        f = self._indicator.get(w)
        if f is None:
            f = indicator(self.X(w))
            self._indicator[w] = f
        return f

    def edge_support(self, w: Word, a: int) -> ClopenSet:
        """``theta_w(X_{w^-1} ∩ X_a)`` for generator index ``a``."""
        key = (w, a)
        c = self._edge_support.get(key)
        if c is None:
            c = self.theta(w).image(self.X((a + 1,)))
            self._edge_support[key] = c
        return c

    def max_rule_length(self) -> int:
        return max((m.max_rule_length() for m in self.maps), default=0)

    def is_orthogonal(self) -> bool:
        ranges = [m.range for m in self.maps]
        return all(not (ranges[i] & ranges[j])
                   for i in range(len(ranges)) for j in range(i + 1, len(ranges)))

    # -- word syntax --------------------------------------------------------

    def parse_word(self, text: str, *, strict: bool = False) -> Word:
        """Parse ``a.b^-1.a``; ``1`` or the empty string is the identity."""
        text = text.strip()
        if text in ("", "1"):
            return ()
        letters = []
        for tok in text.split("."):
            m = _LETTER.match(tok.strip())
            if not m:
                raise WordError(f"bad letter {tok!r}")
            name, exp = m.group(1), m.group(2)
            if name not in self._gindex:
                raise WordError(f"unknown generator {name!r}")
            sign = -1 if exp == "-1" else 1
            letters.append(sign * (self._gindex[name] + 1))
        if strict and not is_reduced(letters):
            raise WordError(f"word {text!r} is not freely reduced")
        return reduce_word(letters)

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        return ".".join(self.generators[abs(x) - 1] + ("^-1" if x < 0 else "") for x in w)
