import pytest

from semisat.boundary import Graph
from semisat.partial_action import PartialAction, PrefixMap


def one_vertex_loops(n):
    names = [chr(ord("e") + i) for i in range(n)]
    return Graph(["v"], [(x, "v", "v") for x in names])


def full_shift_action(n):
    g = one_vertex_loops(n)
    maps = [PrefixMap(g, [((0,), (0, i))]) for i in range(n)]
    return PartialAction(g, [f"a{i + 1}" for i in range(n)], maps)


@pytest.fixture
def G1():
    return one_vertex_loops(2)


@pytest.fixture
def A1(G1):
    return PartialAction(G1, ["a", "b"], [PrefixMap(G1, [((0,), (0, 0))]),
                                          PrefixMap(G1, [((0,), (0, 1))])])


@pytest.fixture
def two_points():
    g = Graph(["u", "w"])
    return PartialAction(g, ["a"], [PrefixMap.identity(g)])


@pytest.fixture
def golden():
    # vertex matrix [[1,1],[1,0]]
    return Graph(["u", "w"], [("x", "u", "u"), ("y", "u", "w"), ("z", "w", "u")])
