"""Circuits: IR, QASM I/O, benchmarks, routing, lowering and scheduling."""

from .benchmarks import by_name, gen_bv, gen_cuccaro, gen_qaoa, gen_qft, random_graph
from .ir import Circuit, Gate, gate_matrix
from .lowering import Lowerer, expand_controlled, fuse_1q, lower
from .qasm import emit_qasm, parse_qasm
from .routing import CouplingMap, RoutedCircuit, route
from .schedule import D_1Q, ScheduledCircuit, schedule
from .simulate import circuit_unitary, permutation_unitary, phase_distance

__all__ = [
    "Circuit", "Gate", "gate_matrix", "parse_qasm", "emit_qasm",
    "gen_bv", "gen_qft", "gen_qaoa", "gen_cuccaro", "random_graph", "by_name",
    "CouplingMap", "RoutedCircuit", "route",
    "Lowerer", "lower", "expand_controlled", "fuse_1q",
    "D_1Q", "ScheduledCircuit", "schedule",
    "circuit_unitary", "permutation_unitary", "phase_distance",
]
