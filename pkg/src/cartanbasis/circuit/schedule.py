"""ASAP scheduling of native circuits with per-gate durations (ns)."""

from __future__ import annotations

from dataclasses import dataclass

from .ir import Circuit

D_1Q = 20.0


@dataclass(frozen=True)
class TimedGate:
    index: int
    name: str
    qubits: tuple
    start: float
    duration: float

    @property
    def end(self):
        return self.start + self.duration


@dataclass
class ScheduledCircuit:
    """Start time and duration for every gate, plus per-qubit activity windows.

    ``t_i[q]`` is the start of the first gate on ``q`` and ``t_f[q]`` the end of
    its last gate; idle qubits have ``t_i = t_f = 0``.
    """

    n_qubits: int
    gates: list
    t_i: list
    t_f: list

    @property
    def duration(self):
        return max(self.t_f, default=0.0)

    def active_time(self, q):
        return self.t_f[q] - self.t_i[q]

    def to_json(self):
        return {
            "n_qubits": self.n_qubits,
            "duration_ns": self.duration,
            "t_i_ns": list(self.t_i),
            "t_f_ns": list(self.t_f),
            "gates": [{"index": g.index, "name": g.name, "qubits": list(g.qubits),
                       "start_ns": g.start, "duration_ns": g.duration} for g in self.gates],
        }


def gate_duration(g, d_1q, durations_by_edge, d_2q_default):
    if len(g.qubits) == 1:
        return d_1q
    edge = tuple(sorted(g.qubits))
    if durations_by_edge is not None and edge in durations_by_edge:
        return float(durations_by_edge[edge])
    if d_2q_default is None:
        raise KeyError(f"no duration for two-qubit gate on edge {edge}")
    return float(d_2q_default)


def schedule(c: Circuit, d_1q=D_1Q, durations_by_edge=None, d_2q_default=None) -> ScheduledCircuit:
    """As-soon-as-possible list scheduling respecting qubit exclusivity.

    Args:
        c: circuit, normally the output of lowering.
        d_1q: single-qubit gate duration in ns.
        durations_by_edge: ``(e0, e1)`` -> two-qubit gate duration in ns.
        d_2q_default: duration for two-qubit gates on edges missing from
            ``durations_by_edge``.

    Returns:
        ScheduledCircuit; an isolated n-layer lowered gate spans
        ``n * d_2q + (n + 1) * d_1q``.
    """
    if d_1q <= 0:
        raise ValueError("durations must be positive")
    free = [0.0] * c.n_qubits
    t_i = [None] * c.n_qubits
    timed = []
    for k, g in enumerate(c.gates):
        d = gate_duration(g, d_1q, durations_by_edge, d_2q_default)
        if d <= 0:
            raise ValueError("durations must be positive")
        start = max(free[q] for q in g.qubits)
        for q in g.qubits:
            free[q] = start + d
            if t_i[q] is None:
                t_i[q] = start
        timed.append(TimedGate(k, g.name, tuple(g.qubits), start, d))
    t_f = [free[q] if t_i[q] is not None else 0.0 for q in range(c.n_qubits)]
    t_i = [0.0 if t is None else t for t in t_i]
    return ScheduledCircuit(c.n_qubits, timed, t_i, t_f)
