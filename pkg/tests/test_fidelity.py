import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cartanbasis.circuit import Circuit, schedule
from cartanbasis.fidelity import (
    CoherenceParams,
    GateRow,
    circuit_fidelity,
    circuit_table,
    gate_coherence_limit,
    gate_table,
    synthesized_duration,
)

T = 80e-6


def _sched(n, spans):
    c = Circuit(n)
    s = schedule(c)
    for q, (a, b) in spans.items():
        s.t_i[q], s.t_f[q] = a, b
    return s


def test_one_qubit_active_for_T():
    s = _sched(1, {0: (0.0, T * 1e9)})
    assert circuit_fidelity(s, CoherenceParams(T)) == pytest.approx(math.exp(-1))


def test_two_qubits_100ns():
    s = _sched(2, {0: (0, 100), 1: (50, 150)})
    assert circuit_fidelity(s, CoherenceParams(T)) == pytest.approx(math.exp(-2 * 1.25e-3))
    assert round(circuit_fidelity(s, T), 5) == 0.99750


def test_empty_circuit_and_idle_qubits():
    assert circuit_fidelity(schedule(Circuit(4))) == 1.0
    c = Circuit(3).append("h", (0,))
    assert circuit_fidelity(schedule(c)) == pytest.approx(math.exp(-20e-9 / T))


def test_factorization():
    a = Circuit(4).append("h", (0,)).append("cx", (0, 1))
    b = Circuit(4).append("x", (2,)).append("cz", (2, 3)).append("h", (3,))
    both = Circuit(4, a.gates + b.gates)
    f = [circuit_fidelity(schedule(x, 20.0, d_2q_default=40.0)) for x in (a, b, both)]
    assert f[2] == pytest.approx(f[0] * f[1], rel=1e-12)


def test_per_qubit_coherence():
    cp = CoherenceParams(T, {1: T / 2})
    s = _sched(2, {0: (0, 100), 1: (0, 100)})
    assert circuit_fidelity(s, cp) == pytest.approx(math.exp(-100e-9 / T - 200e-9 / T))
    with pytest.raises(ValueError):
        CoherenceParams(0.0)
    with pytest.raises(ValueError):
        CoherenceParams(T, {0: -1.0})


def test_gate_limit_examples():
    assert gate_coherence_limit(0.0) == 1.0
    assert gate_coherence_limit(0.0, n_qubits=1) == 1.0
    assert abs(gate_coherence_limit(83.04e-9, CoherenceParams(T)) - 0.99884) < 5e-4
    assert abs(gate_coherence_limit(329.1e-9, CoherenceParams(T)) - 0.99541) < 5e-4
    with pytest.raises(ValueError):
        gate_coherence_limit(-1.0)
    with pytest.raises(ValueError):
        gate_coherence_limit(1e-9, n_qubits=3)


def test_single_qubit_formula():
    f = (1 + 3 * math.exp(-1e-6 / T)) / 4
    assert gate_coherence_limit(1e-6, T, n_qubits=1) == pytest.approx((2 * f + 1) / 3)


@given(st.floats(0, 1e-4), st.floats(1e-9, 1e-5))
def test_monotone_and_bounded(t, dt):
    f1 = gate_coherence_limit(t)
    assert gate_coherence_limit(t + dt) < f1
    assert gate_coherence_limit(t, CoherenceParams(2 * T)) >= f1
    assert f1 >= math.exp(-2 * t / T) - 1e-15


def test_synthesized_duration():
    assert synthesized_duration(3, 83.04) == pytest.approx(329.12)
    assert synthesized_duration(2, 10.76) == pytest.approx(81.52)


def test_tables():
    rows = [GateRow("a", 83.04, 329.12, 226.08).fill(CoherenceParams(T))]
    csv = gate_table(rows, "csv").splitlines()
    assert csv[0].startswith("criterion,basis_ns")
    assert csv[1].split(",")[:3] == ["a", "83.04", "99.876"]
    md = gate_table(rows)
    assert md.startswith("| criterion |")
    ct = circuit_table({"bv5": {"a": 0.9, "b": None}}, ["a", "b"], "csv")
    assert ct.splitlines()[1] == "bv5,90.00,n/a"
    assert np.isfinite(rows[0].cnot_f)
