"""Length-one resolution ``0 -> P1 -> Z[G] -> Z[X] -> 0`` and its contracting homotopy.

``P1 = ⊕_a Z[G] 1_{X_a} γ_a``; an element is a map ``(w, a) -> f`` standing
for ``f δ_w γ_a``, i.e. the Cayley-graph edge ``w --a--> wa`` weighted by
``f``.  Generators are 0-based indices into the action's alphabet.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .algebra import AlgElement, SupportError, _accumulate, convolve, delta, r_star
from .boundary import IntFun
from .partial_action import PartialAction, Word, word_key, word_mul

Edge = Tuple[Word, int]


class P1Element:
    """Element ``Σ f δ_w γ_a`` of ``P1``; component ``(w, a)`` lives in ``θ_w(X_{w^-1} ∩ X_a)``."""

    __slots__ = ("action", "components")

    def __init__(self, action: PartialAction, components: Mapping[Edge, IntFun] = (), *,
                 check: bool = True):
        comps = {(tuple(w), a): f for (w, a), f in dict(components).items() if f}
        if check:
            for (w, a), f in comps.items():
                if not 0 <= a < action.rank:
                    raise ValueError(f"unknown generator index {a}")
                if f.restrict(action.edge_support(w, a)) != f:
                    raise SupportError(
                        f"component at ({action.format_word(w)}, {action.generators[a]}) "
                        "is not supported in θ_w(X_{w^-1} ∩ X_a)")
        self.action = action
        self.components: Dict[Edge, IntFun] = comps

    @classmethod
    def zero(cls, action: PartialAction) -> "P1Element":
        return cls(action, {}, check=False)

    def __eq__(self, other):
        if not isinstance(other, P1Element):
            return NotImplemented
        return self.components == other.components

    def __bool__(self):
        return bool(self.components)

    def items(self):
        return sorted(self.components.items(), key=lambda kv: (word_key(kv[0][0]), kv[0][1]))

    def __repr__(self):
        if not self.components:
            return "0"
        act = self.action
        return " + ".join(f"({f!r})δ[{act.format_word(w)}]γ[{act.generators[a]}]"
                          for (w, a), f in self.items())

    def __add__(self, other: "P1Element") -> "P1Element":
        out = dict(self.components)
        for k, f in other.components.items():
            _accumulate(out, k, f)
        return P1Element(self.action, out, check=False)

    def __neg__(self) -> "P1Element":
        return P1Element(self.action, {k: -f for k, f in self.components.items()}, check=False)

    def __sub__(self, other: "P1Element") -> "P1Element":
        return self + (-other)

    def __rmul__(self, n):
        if isinstance(n, int):
            return P1Element(self.action, {k: n * f for k, f in self.components.items()},
                             check=False)
        return NotImplemented

    def blocks(self) -> Dict[int, AlgElement]:
        """Split into ``{a: h_a}`` with ``h_a ∈ Z[G] 1_{X_a}``."""
        out: Dict[int, Dict[Word, IntFun]] = {}
        for (w, a), f in self.components.items():
            out.setdefault(a, {})[w] = f
        return {a: AlgElement(self.action, c, check=False) for a, c in out.items()}

    @classmethod
    def from_blocks(cls, action: PartialAction, blocks: Mapping[int, AlgElement]) -> "P1Element":
        comps = {}
        for a, h in blocks.items():
            for w, f in h.components.items():
                comps[(w, a)] = f
        return cls(action, comps)


def left_multiply(x: AlgElement, p: P1Element) -> P1Element:
    """Module action ``x · (h γ_a) = (x * h) γ_a``."""
    return P1Element.from_blocks(p.action, {a: convolve(x, h) for a, h in p.blocks().items()})


def boundary(p: P1Element) -> AlgElement:
    """``∂(f δ_w γ_a) = f δ_{wa} - f δ_w``."""
    out: Dict[Word, IntFun] = {}
    for (w, a), f in p.components.items():
        _accumulate(out, word_mul(w, (a + 1,)), f)
        _accumulate(out, w, -f)
    return AlgElement(p.action, out, check=False)


def boundary_by_blocks(p: P1Element) -> AlgElement:
    """Same map computed as ``Σ_a (h_a * δ_a - h_a)``."""
    total = AlgElement.zero(p.action)
    for a, h in p.blocks().items():
        total = total + convolve(h, delta(p.action, (a + 1,))) - h
    return total


def s0(action: PartialAction, f: IntFun) -> AlgElement:
    return AlgElement(action, {(): f}, check=False)


def edge_term(action: PartialAction, f: IntFun, w: Word, a: int, sign: int) -> P1Element:
    """``f[w, a^sign]``: the signed Cayley edge leaving ``w`` along ``a^sign``."""
    w = tuple(w)
    letter = sign * (a + 1)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if w and w[-1] == -letter:
        raise ValueError("w·a^sign must not cancel")
    wa = w + (letter,)
    if f.restrict(action.X(wa)) != f:
        raise SupportError(f"f is not supported in X_{action.format_word(wa)}")
    if sign == 1:
        return P1Element(action, {(w, a): f}, check=False)
    return P1Element(action, {(wa, a): -f}, check=False)


def s1(x: AlgElement) -> P1Element:
    """Signed sum of the weighted edges along each geodesic ``1 -> w``."""
    out: Dict[Edge, IntFun] = {}
    for w, f in x.components.items():
        for i, letter in enumerate(w):
            a = abs(letter) - 1
            if letter > 0:
                _accumulate(out, (w[:i], a), f)
            else:
                _accumulate(out, (w[:i + 1], a), -f)
    return P1Element(x.action, out, check=False)


# -- randomized verification ---------------------------------------------------

@dataclass
class IdentityCheck:
    name: str
    passed: int = 0
    total: int = 0
    counterexample: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name} ({self.passed}/{self.total})"


@dataclass
class HomotopyReport:
    checks: List[IdentityCheck] = field(default_factory=list)
    seed: int = 0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> List[str]:
        out = [c.line() for c in self.checks]
        for c in self.checks:
            if c.counterexample:
                out.append(f"  counterexample for {c.name}: {c.counterexample}")
        out.append("PASS" if self.ok else "FAIL")
        return out


IDENTITIES = ("r*s0=id", "ds1+s0r*=id", "s1d=id", "r*d=0")


def check_identities(action: PartialAction, f: IntFun, x: AlgElement,
                     p: P1Element) -> Dict[str, bool]:
    """Evaluate the four chain-level identities on one triple of elements."""
    zero = IntFun.zero(action.graph)
    return {
        "r*s0=id": r_star(s0(action, f)) == f,
        "ds1+s0r*=id": boundary(s1(x)) + s0(action, r_star(x)) == x,
        "s1d=id": s1(boundary(p)) == p,
        "r*d=0": r_star(boundary(p)) == zero,
    }


def verify_homotopy(action: PartialAction, samples: int = 200, seed: int = 0, *,
                    max_word_len: int = 4, max_depth: int = 3) -> HomotopyReport:
    """Check the contracting-homotopy identities on seeded random elements.

    Failures are recorded in the report, never raised.
    """
    from . import sampling

    if samples < 1:
        raise ValueError("samples must be positive")
    rng = random.Random(seed)
    checks = {name: IdentityCheck(name) for name in IDENTITIES}
    for i in range(samples):
        f = sampling.random_intfun(action.graph, rng, max_depth)
        x = sampling.random_alg_element(action, rng, max_word_len, max_depth)
        p = sampling.random_p1_element(action, rng, max_word_len, max_depth)
        for name, ok in check_identities(action, f, x, p).items():
            c = checks[name]
            c.total += 1
            if ok:
                c.passed += 1
            elif c.counterexample is None:
                arg = {"r*s0=id": f, "ds1+s0r*=id": x}.get(name, p)
                c.counterexample = f"sample {i}: {arg!r}"
    return HomotopyReport(list(checks.values()), seed)
