"""Greedy SWAP-insertion router for a fixed coupling graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .ir import Circuit, Gate


class CouplingMap:
    """Undirected coupling graph on ``n`` physical qubits."""

    def __init__(self, n, edges):
        self.n = int(n)
        self.edges = sorted({tuple(sorted(e)) for e in edges})
        self.adj = {q: [] for q in range(self.n)}
        for a, b in self.edges:
            self.adj[a].append(b)
            self.adj[b].append(a)
        for q in self.adj:
            self.adj[q].sort()

    @classmethod
    def from_device(cls, device):
        return cls(len(device.qubits), device.edges.keys())

    @classmethod
    def grid(cls, rows, cols):
        edges = []
        for r in range(rows):
            for c in range(cols):
                q = r * cols + c
                if c + 1 < cols:
                    edges.append((q, q + 1))
                if r + 1 < rows:
                    edges.append((q, q + cols))
        return cls(rows * cols, edges)

    def adjacent(self, a, b):
        return b in self.adj[a]

    def shortest_path(self, a, b):
        """BFS path from ``a`` to ``b``; ties go to the lowest-index neighbour."""
        prev = {a: None}
        queue = deque([a])
        while queue:
            u = queue.popleft()
            if u == b:
                break
            for v in self.adj[u]:
                if v not in prev:
                    prev[v] = u
                    queue.append(v)
        if b not in prev:
            raise ValueError(f"qubits {a} and {b} are not connected")
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        return path[::-1]


@dataclass
class RoutedCircuit:
    """Physical circuit plus the logical -> physical layouts before and after."""

    circuit: Circuit
    initial_layout: list
    final_layout: list
    n_swaps: int

    def to_json(self):
        return {"circuit": self.circuit.to_json(), "initial_layout": list(self.initial_layout),
                "final_layout": list(self.final_layout), "n_swaps": self.n_swaps}


def _as_coupling(device):
    if isinstance(device, CouplingMap):
        return device
    if hasattr(device, "edges") and hasattr(device, "qubits"):
        return CouplingMap.from_device(device)
    n, edges = device
    return CouplingMap(n, edges)


def route(c: Circuit, device, initial_layout=None) -> RoutedCircuit:
    """Insert SWAPs so every two-qubit gate acts on a coupled pair.

    For a non-adjacent gate the first operand is walked along the shortest
    path towards the second until they are neighbours.

    Args:
        c: logical circuit.
        device: a ``DeviceModel``, a :class:`CouplingMap` or ``(n, edges)``.
        initial_layout: logical -> physical list; identity by default.

    Returns:
        RoutedCircuit on the device's physical qubits.
    """
    cm = _as_coupling(device)
    if c.n_qubits > cm.n:
        raise ValueError(f"circuit needs {c.n_qubits} qubits, device has {cm.n}")
    layout = list(range(c.n_qubits)) if initial_layout is None else list(initial_layout)
    if len(layout) != c.n_qubits or len(set(layout)) != len(layout) \
            or any(not 0 <= p < cm.n for p in layout):
        raise ValueError("initial_layout must map logical qubits to distinct physical ones")
    start = list(layout)
    phys_to_log = {p: q for q, p in enumerate(layout)}
    out = Circuit(cm.n)
    n_swaps = 0
    for g in c.gates:
        if len(g.qubits) == 2:
            a, b = (layout[q] for q in g.qubits)
            if not cm.adjacent(a, b):
                path = cm.shortest_path(a, b)
                for u, v in zip(path[:-2], path[1:-1]):
                    out.append(Gate("swap", (u, v)))
                    n_swaps += 1
                    lu, lv = phys_to_log.get(u), phys_to_log.get(v)
                    phys_to_log.pop(u, None)
                    phys_to_log.pop(v, None)
                    if lu is not None:
                        layout[lu] = v
                        phys_to_log[v] = lu
                    if lv is not None:
                        layout[lv] = u
                        phys_to_log[u] = lv
        out.append(g.remap(layout))
    return RoutedCircuit(out, start, list(layout), n_swaps)
