"""The convolution ring of ``F_A ⋉ X`` as a direct sum ``⊕_w Z[X_w] δ_w``."""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Tuple

from .boundary import IntFun
from .partial_action import (
    PartialAction, Word, WordError, is_reduced, word_inverse, word_key, word_mul,
)


class SupportError(ValueError):
    pass


class AlgElement:
    """Finitely supported map ``w -> f_w`` with ``f_w`` supported in ``X_w``.

    ``x * y`` is convolution, ``n * x`` integer scaling.
    """

    __slots__ = ("action", "components")

    def __init__(self, action: PartialAction, components: Mapping[Word, IntFun] = (), *,
                 check: bool = True):
        comps = {tuple(w): f for w, f in dict(components).items() if f}
        if check:
            for w, f in comps.items():
                if not is_reduced(w):
                    raise WordError(f"component word {w!r} is not reduced")
                if f.restrict(action.X(w)) != f:
                    raise SupportError(
                        f"component at {action.format_word(w)} is not supported in X_w")
        self.action = action
        self.components: Dict[Word, IntFun] = comps

    @classmethod
    def zero(cls, action: PartialAction) -> "AlgElement":
        return cls(action, {}, check=False)

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.components == other.components

    def __bool__(self):
        return bool(self.components)

    def items(self):
        return sorted(self.components.items(), key=lambda kv: word_key(kv[0]))

    def __repr__(self):
        if not self.components:
            return "0"
        fmt = self.action.format_word
        return " + ".join(f"({f!r})δ[{fmt(w)}]" for w, f in self.items())

    def __add__(self, other: "AlgElement") -> "AlgElement":
        return AlgElement(self.action, _add(self.components, other.components.items()),
                          check=False)

    def __neg__(self) -> "AlgElement":
        return AlgElement(self.action, {w: -f for w, f in self.components.items()}, check=False)

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return convolve(self, other)
        if isinstance(other, int):
            return AlgElement(self.action, {w: other * f for w, f in self.components.items()},
                              check=False)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented


def _add(acc: Mapping, items: Iterable[Tuple]) -> dict:
    out = dict(acc)
    for key, f in items:
        _accumulate(out, key, f)
    return out


def _accumulate(out: dict, key, f: IntFun) -> None:
    g = out.get(key)
    h = f if g is None else g + f
    if h:
        out[key] = h
    else:
        out.pop(key, None)


def delta(action: PartialAction, w) -> AlgElement:
    """``δ_w = 1_{X_w} δ_w``; the empty word gives the unit."""
    if isinstance(w, str):
        w = action.parse_word(w)
    action.theta(w)
    return AlgElement(action, {w: action.indicator_of(w)}, check=False)


def component(action: PartialAction, f: IntFun, w) -> AlgElement:
    """The element ``f δ_w``."""
    if isinstance(w, str):
        w = action.parse_word(w)
    return AlgElement(action, {w: f})


def convolve(x: AlgElement, y: AlgElement) -> AlgElement:
    """``f δ_u * g δ_v = θ_u-transport of (f∘θ_u · g)`` placed at ``uv``."""
    if x.action is not y.action and x.action != y.action:
        raise ValueError("operands belong to different actions")
    act = x.action
    out: Dict[Word, IntFun] = {}
    for u, f in x.components.items():
        tu = act.theta(u)
        back = act.theta(word_inverse(u))
        fu = tu.pullback(f)
        if not fu:
            continue
        for v, g in y.components.items():
            h = fu * g
            if not h:
                continue
            _accumulate(out, word_mul(u, v), back.pullback(h))
    return AlgElement(act, out, check=False)


def r_star(x: AlgElement) -> IntFun:
    total = IntFun.zero(x.action.graph)
    for f in x.components.values():
        total = total + f
    return total


def act_on_unit(x: AlgElement, g: IntFun) -> IntFun:
    """Trivial left module action of the ring on ``Z[X]``."""
    act = x.action
    total = IntFun.zero(act.graph)
    for w, f in x.components.items():
        total = total + f * act.theta(word_inverse(w)).pullback(g)
    return total
