"""Deterministic imitation dynamics for two-strategy games on graphs."""

__version__ = "0.1.0"

from .graph import Graph, Graph6Error, GraphError, decode_graph6, encode_graph6, make_complete, make_cycle, make_wheel
from .game import Game, GameError, PayoffParams, Scenario, UtilityKind, classify, normalize, utility
from .dynamics import CapacityError, System, UpdateOrder, UpdateRule, simulate
from .analysis import InvariantSet, build_state_map, enumerate_attractors, is_attractor

__all__ = [
    "CapacityError", "Game", "GameError", "Graph", "Graph6Error", "GraphError", "InvariantSet",
    "PayoffParams", "Scenario", "System", "UpdateOrder", "UpdateRule", "UtilityKind",
    "build_state_map", "classify", "decode_graph6", "encode_graph6", "enumerate_attractors",
    "is_attractor", "make_complete", "make_cycle", "make_wheel", "normalize", "simulate", "utility",
]
