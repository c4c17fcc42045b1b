"""Routing with collision avoidance: solvers, verifier, oracles and instance generators."""

from rca.errors import InvalidRoute, ParseError, RCAError, Refusal
from rca.graph import Graph, Instance, parse_graph, parse_instance
from rca.routes import Route, SolveResult, classify, shared_edges, verify_solution
from rca.solvers import solve

__all__ = [
    "Graph",
    "Instance",
    "InvalidRoute",
    "ParseError",
    "RCAError",
    "Refusal",
    "Route",
    "SolveResult",
    "classify",
    "parse_graph",
    "parse_instance",
    "shared_edges",
    "solve",
    "verify_solution",
]
