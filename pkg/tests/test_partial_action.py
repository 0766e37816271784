import random

import pytest
from hypothesis import given, settings, strategies as st

from semisat.boundary import ClopenSet, GraphError, IntFun, indicator, normalize
from semisat.partial_action import (
    PartialAction, PrefixMap, WordError, compose, invert, is_reduced, pullback, pushforward,
    reduce_word, restrict, word_inverse, word_mul,
)
from semisat.sampling import (
    random_action, random_graph, random_intfun, random_prefix_map, random_word,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def pm(g, *rules):
    return PrefixMap(g, [(g.path(s), g.path(d)) for s, d in rules])


def test_compose_examples(G1, A1):
    ta, tb = A1.maps
    assert compose(invert(ta), tb) == PrefixMap.empty(G1)
    assert compose(ta, invert(tb)) == pm(G1, ("f", "e"))
    assert compose(ta, PrefixMap.identity(G1)) == ta
    assert compose(invert(ta), ta) == pm(G1, ("v", "v"))


def test_invert_examples(G1):
    assert invert(pm(G1, ("v", "e"))) == pm(G1, ("e", "v"))
    assert invert(PrefixMap.empty(G1)) == PrefixMap.empty(G1)


def test_restrict_examples(G1, A1):
    ta = A1.maps[0]
    assert restrict(ta, normalize(G1, ["f"])) == pm(G1, ("f", "e.f"))
    assert restrict(ta, ClopenSet.empty(G1)) == PrefixMap.empty(G1)
    assert restrict(ta, ta.domain) == ta


def test_theta_word_examples(G1, A1):
    assert A1.theta(A1.parse_word("a")) == A1.maps[0]
    assert A1.theta(A1.parse_word("a.b^-1")) == pm(G1, ("f", "e"))
    assert repr(A1.theta(A1.parse_word("a.b^-1"))) == "{f -> e}"
    assert A1.theta(A1.parse_word("a^-1.b")) == PrefixMap.empty(G1)
    assert A1.theta(()) == PrefixMap.identity(G1)


def test_pullback_pushforward_examples(G1, A1):
    ta = A1.maps[0]
    one = IntFun.one(G1)
    ind = lambda *t: indicator(normalize(G1, list(t)))
    assert pullback(ta, ind("e.e")) == ind("e")
    assert pullback(ta, ind("f")) == IntFun.zero(G1)
    assert pullback(ta, ind("e")) == one
    assert pushforward(ta, one) == ind("e")
    assert pushforward(PrefixMap.empty(G1), ind("e")) == IntFun.zero(G1)
    assert pushforward(PrefixMap.identity(G1), ind("e.f")) == ind("e.f")


def test_rule_validation(G1):
    with pytest.raises(GraphError, match="sources"):
        pm(G1, ("v", "e"), ("e", "f"))
    with pytest.raises(GraphError, match="targets"):
        pm(G1, ("e", "v"), ("f", "e"))
    g = random_graph(random.Random(1), 1, 0)
    assert PrefixMap.identity(g).domain == ClopenSet.whole(g)


def test_sibling_rules_merge(G1):
    assert pm(G1, ("e.e", "e"), ("e.f", "f")) == pm(G1, ("e", "v"))


def test_words(A1):
    assert reduce_word([1, 2, -2, -1, 1]) == (1,)
    assert word_mul((1, 2), (-2, 1)) == (1, 1)
    assert word_inverse((1, -2)) == (2, -1)
    assert is_reduced((1, 2)) and not is_reduced((1, -1))
    assert A1.parse_word("a.b.b^-1") == (1,)
    with pytest.raises(WordError):
        A1.parse_word("a.b.b^-1", strict=True)
    with pytest.raises(WordError):
        A1.parse_word("c")
    assert A1.format_word(A1.parse_word("a.b^-1.a")) == "a.b^-1.a"
    assert A1.format_word(()) == "1"


def _action(seed):
    rng = random.Random(seed)
    return rng, random_action(rng)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_compose_associative_and_invert_antihomomorphic(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 3, 5)
    m, n, k = (random_prefix_map(g, rng) for _ in range(3))
    assert compose(m, compose(n, k)).equivalent(compose(compose(m, n), k))
    assert invert(compose(m, n)).equivalent(compose(invert(n), invert(m)))
    assert compose(m, PrefixMap.identity(g)).equivalent(m)
    assert invert(invert(m)) == m


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_pullback_inverts_pushforward(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 3, 5)
    m = random_prefix_map(g, rng)
    f, h = random_intfun(g, rng, 3), random_intfun(g, rng, 3)
    assert pullback(m, pushforward(m, f)) == f.restrict(m.domain)
    assert pullback(m, f + h) == pullback(m, f) + pullback(m, h)
    assert pushforward(m, IntFun.one(g)) == indicator(m.range)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_action_word_laws(seed):
    rng, act = _action(seed)
    for _ in range(15):
        u, v = random_word(act, rng, 3), random_word(act, rng, 3)
        uv = word_mul(u, v)
        composite = compose(act.theta(u), act.theta(v))
        assert composite.equivalent(restrict(act.theta(uv), composite.domain))
        assert act.theta(word_inverse(u)).equivalent(invert(act.theta(u)))
        img = act.theta(u).image(act.X(v))
        assert img.issubset(act.X(uv))
        if len(uv) == len(u) + len(v):
            assert composite.equivalent(act.theta(uv))
            assert img == act.X(uv)
            assert act.X(uv).issubset(act.X(u))


def test_orthogonality_flag(A1, two_points):
    assert A1.is_orthogonal()
    g = two_points.graph
    both = PartialAction(g, ["a", "b"], [PrefixMap.identity(g)] * 2)
    assert not both.is_orthogonal()
