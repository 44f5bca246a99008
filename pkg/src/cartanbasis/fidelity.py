"""Coherence-limited fidelity of gates and scheduled circuits, plus report tables."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

T_DEFAULT = 80e-6


@dataclass(frozen=True)
class CoherenceParams:
    """Per-qubit coherence time ``T`` in seconds (``T1 = T2 = T``).

    ``per_qubit`` optionally overrides ``T`` for individual qubits.
    """

    T: float = T_DEFAULT
    per_qubit: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.T <= 0 or any(t <= 0 for t in self.per_qubit.values()):
            raise ValueError("coherence times must be positive")

    def of(self, q):
        return self.per_qubit.get(q, self.T)


def _params(cp):
    if cp is None:
        return CoherenceParams()
    if isinstance(cp, (int, float)):
        return CoherenceParams(float(cp))
    return cp


def circuit_fidelity(s, cp: CoherenceParams | None = None) -> float:
    """Product over qubits of ``exp(-(t_f - t_i) / T)``.

    Args:
        s: ScheduledCircuit with times in ns.
        cp: coherence parameters (seconds).
    """
    cp = _params(cp)
    log_f = 0.0
    for q in range(s.n_qubits):
        log_f -= (s.t_f[q] - s.t_i[q]) * 1e-9 / cp.of(q)
    return math.exp(log_f)


def qubit_process_fidelity(duration, T):
    """Entanglement fidelity of one qubit decohering for ``duration`` seconds."""
    return (1.0 + 3.0 * math.exp(-duration / T)) / 4.0


def gate_coherence_limit(duration, cp: CoherenceParams | None = None, n_qubits=2) -> float:
    """Average gate fidelity allowed by decoherence over ``duration`` seconds.

    The per-qubit process fidelities multiply, and the average fidelity
    follows from ``F_avg = (d F_pro + 1) / (d + 1)``.

    Args:
        duration: gate time in seconds.
        cp: coherence parameters; qubits 0 and 1 are the gate's operands.
        n_qubits: 1 or 2.
    """
    if duration < 0:
        raise ValueError("duration must be non-negative")
    if n_qubits not in (1, 2):
        raise ValueError("n_qubits must be 1 or 2")
    cp = _params(cp)
    f_pro = 1.0
    for q in range(n_qubits):
        f_pro *= qubit_process_fidelity(duration, cp.of(q))
    d = 2 ** n_qubits
    return (d * f_pro + 1.0) / (d + 1.0)


def synthesized_duration(n_layers, d_2q, d_1q=20.0):
    """``n * d_2q + (n + 1) * d_1q`` for an isolated lowered gate (ns)."""
    return n_layers * d_2q + (n_layers + 1) * d_1q


# ---------------------------------------------------------------------------
# Report tables


@dataclass
class GateRow:
    """One row of the gate table: durations in ns, fidelities as fractions."""

    name: str
    basis_ns: float
    swap_ns: float
    cnot_ns: float
    basis_f: float = None
    swap_f: float = None
    cnot_f: float = None

    def fill(self, cp=None):
        self.basis_f = gate_coherence_limit(self.basis_ns * 1e-9, cp)
        self.swap_f = gate_coherence_limit(self.swap_ns * 1e-9, cp)
        self.cnot_f = gate_coherence_limit(self.cnot_ns * 1e-9, cp)
        return self


GATE_HEADER = ["criterion", "basis_ns", "basis_fidelity_pct", "swap_ns", "swap_fidelity_pct",
               "cnot_ns", "cnot_fidelity_pct"]


def _gate_cells(r):
    return [r.name, f"{r.basis_ns:.2f}", f"{100 * r.basis_f:.3f}", f"{r.swap_ns:.2f}",
            f"{100 * r.swap_f:.3f}", f"{r.cnot_ns:.2f}", f"{100 * r.cnot_f:.3f}"]


def _to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _to_markdown(header, rows):
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(map(str, r)) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def gate_table(rows, fmt="markdown"):
    """Durations and coherence-limited fidelities per selection criterion."""
    cells = [_gate_cells(r) for r in rows]
    return _to_csv(GATE_HEADER, cells) if fmt == "csv" else _to_markdown(GATE_HEADER, cells)


def circuit_table(results, criteria, fmt="markdown"):
    """Circuit fidelities, one row per benchmark.

    Args:
        results: mapping benchmark -> {criterion: fidelity}.
        criteria: column order.
    """
    header = ["benchmark"] + [f"{c}_pct" for c in criteria]
    cells = []
    for bench in results:
        row = [bench]
        for c in criteria:
            v = results[bench].get(c)
            row.append("n/a" if v is None else f"{100 * v:.2f}")
        cells.append(row)
    return _to_csv(header, cells) if fmt == "csv" else _to_markdown(header, cells)
