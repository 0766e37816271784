"""Exact homology of semi-saturated partial actions of free groups on boundary path spaces."""

from .algebra import AlgElement, act_on_unit, convolve, delta, r_star
from .boundary import ClopenSet, Graph, GraphError, IntFun, cylinder, level_atoms, normalize
from .homology import (
    DRSystem, cohomology_tower, dr_check, dr_homology, dr_to_action, graph_oracle,
    homology_tower,
)
from .linalg import GroupPresentation, smith_normal_form
from .partial_action import PartialAction, PrefixMap, compose, invert, reduce_word
from .resolution import P1Element, boundary, s0, s1, verify_homotopy

__all__ = [
    "AlgElement", "ClopenSet", "DRSystem", "Graph", "GraphError", "GroupPresentation",
    "IntFun", "P1Element", "PartialAction", "PrefixMap", "act_on_unit", "boundary",
    "cohomology_tower", "compose", "convolve", "cylinder", "delta", "dr_check",
    "dr_homology", "dr_to_action", "graph_oracle", "homology_tower", "invert",
    "level_atoms", "normalize", "r_star", "reduce_word", "s0", "s1",
    "smith_normal_form", "verify_homotopy",
]
