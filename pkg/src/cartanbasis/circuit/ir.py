"""Gate-list circuit representation and the standard gate library."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..hamsim import unitary_from_json, unitary_to_json

ONE_QUBIT = {"x", "y", "z", "h", "s", "sdg", "t", "tdg", "rx", "ry", "rz", "u3"}
TWO_QUBIT = {"cx", "cz", "swap", "iswap", "cp", "crz"}
N_PARAMS = {"rx": 1, "ry": 1, "rz": 1, "u3": 3, "cp": 1, "crz": 1}

# Payload gates produced by lowering: an explicit 1Q matrix and a native 2Q
# basis gate (matrix in operand order).
PAYLOAD = {"u": 1, "native": 2, "unitary": 2}


def u3_matrix(theta, phi, lam):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -np.exp(1j * lam) * s],
                     [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]])


def _rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


_FIXED_1Q = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.diag([1.0, -1.0]).astype(complex),
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "s": np.diag([1, 1j]),
    "sdg": np.diag([1, -1j]),
    "t": np.diag([1, np.exp(0.25j * np.pi)]),
    "tdg": np.diag([1, np.exp(-0.25j * np.pi)]),
}

_FIXED_2Q = {
    "cx": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    "iswap": np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]]),
}


def gate_matrix(name, params=(), matrix=None):
    """Unitary of a named gate; operand 0 is the most significant qubit."""
    if name in PAYLOAD:
        return np.asarray(matrix, dtype=complex)
    if name in _FIXED_1Q:
        return _FIXED_1Q[name]
    if name in _FIXED_2Q:
        return _FIXED_2Q[name]
    if name == "rx":
        (t,) = params
        return np.array([[math.cos(t / 2), -1j * math.sin(t / 2)],
                         [-1j * math.sin(t / 2), math.cos(t / 2)]])
    if name == "ry":
        (t,) = params
        return np.array([[math.cos(t / 2), -math.sin(t / 2)],
                         [math.sin(t / 2), math.cos(t / 2)]], dtype=complex)
    if name == "rz":
        return _rz(params[0])
    if name == "u3":
        return u3_matrix(*params)
    if name == "cp":
        return np.diag([1, 1, 1, np.exp(1j * params[0])])
    if name == "crz":
        return np.diag([1, 1, np.exp(-0.5j * params[0]), np.exp(0.5j * params[0])])
    raise KeyError(name)


def arity(name):
    if name in ONE_QUBIT:
        return 1
    if name in TWO_QUBIT:
        return 2
    if name in PAYLOAD:
        return PAYLOAD[name]
    raise KeyError(name)


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple
    params: tuple = ()
    matrix: np.ndarray | None = field(default=None, compare=False, repr=False)
    label: str | None = None

    @property
    def unitary(self):
        return gate_matrix(self.name, self.params, self.matrix)

    @property
    def is_2q(self):
        return len(self.qubits) == 2

    def remap(self, mapping):
        return Gate(self.name, tuple(mapping[q] for q in self.qubits), self.params,
                    self.matrix, self.label)

    def to_json(self):
        d = {"name": self.name, "qubits": list(self.qubits)}
        if self.params:
            d["params"] = list(self.params)
        if self.matrix is not None:
            d["matrix"] = unitary_to_json(self.matrix)
        if self.label is not None:
            d["label"] = self.label
        return d

    @classmethod
    def from_json(cls, d):
        m = d.get("matrix")
        return cls(d["name"], tuple(d["qubits"]), tuple(d.get("params", ())),
                   unitary_from_json(m) if m is not None else None, d.get("label"))


class Circuit:
    """Ordered gate list on ``n_qubits`` qubits."""

    def __init__(self, n_qubits, gates=()):
        if n_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        self.n_qubits = int(n_qubits)
        self.gates = []
        for g in gates:
            self.append(g)

    def append(self, gate, qubits=None, params=(), matrix=None, label=None):
        if not isinstance(gate, Gate):
            gate = Gate(gate, tuple(qubits), tuple(float(p) for p in params), matrix, label)
        n = arity(gate.name)
        if len(gate.qubits) != n:
            raise ValueError(f"{gate.name} acts on {n} qubit(s), got {gate.qubits}")
        if any(not 0 <= q < self.n_qubits for q in gate.qubits):
            raise ValueError(f"operand out of range in {gate.name}{gate.qubits}")
        if n == 2 and gate.qubits[0] == gate.qubits[1]:
            raise ValueError(f"{gate.name} needs distinct operands")
        if len(gate.params) != N_PARAMS.get(gate.name, 0):
            raise ValueError(f"{gate.name} takes {N_PARAMS.get(gate.name, 0)} parameter(s)")
        self.gates.append(gate)
        return self

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __eq__(self, other):
        return (isinstance(other, Circuit) and self.n_qubits == other.n_qubits
                and self.gates == other.gates)

    def count(self, name=None):
        if name is None:
            return len(self.gates)
        return sum(1 for g in self.gates if g.name == name)

    def two_qubit_count(self):
        return sum(1 for g in self.gates if g.is_2q)

    def copy(self):
        return Circuit(self.n_qubits, list(self.gates))

    def to_json(self):
        return {"n_qubits": self.n_qubits, "gates": [g.to_json() for g in self.gates]}

    @classmethod
    def from_json(cls, d):
        return cls(d["n_qubits"], [Gate.from_json(g) for g in d["gates"]])
