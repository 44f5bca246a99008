import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from scipy.stats import unitary_group

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_su2(rng):
    return unitary_group.rvs(2, random_state=rng)


def random_local(rng):
    return np.kron(random_su2(rng), random_su2(rng))


def random_u4(rng):
    return unitary_group.rvs(4, random_state=rng)


GATES_1Q = ["x", "y", "z", "h", "s", "sdg", "t", "tdg", "rx", "ry", "rz", "u3"]
GATES_2Q = ["cx", "cz", "swap", "iswap", "cp", "crz"]


def random_circuit(n, n_gates, rng, two_qubit_share=0.5):
    """Seeded random circuit over the supported gate set."""
    from cartanbasis.circuit import Circuit
    from cartanbasis.circuit.ir import N_PARAMS

    c = Circuit(n)
    for _ in range(n_gates):
        if n > 1 and rng.random() < two_qubit_share:
            name = GATES_2Q[rng.integers(len(GATES_2Q))]
            qubits = tuple(int(q) for q in rng.choice(n, 2, replace=False))
        else:
            name = GATES_1Q[rng.integers(len(GATES_1Q))]
            qubits = (int(rng.integers(n)),)
        params = tuple(float(x) for x in rng.uniform(-np.pi, np.pi, N_PARAMS.get(name, 0)))
        c.append(name, qubits, params)
    return c


def semantic_error(original, routed, lowered):
    """Distance between the lowered circuit and the original, layout unwound."""
    from cartanbasis.circuit import circuit_unitary, permutation_unitary, phase_distance

    n = routed.circuit.n_qubits
    assert original.n_qubits == n and list(routed.initial_layout) == list(range(n))
    expected = permutation_unitary(routed.final_layout, n) @ circuit_unitary(original)
    return phase_distance(circuit_unitary(lowered), expected)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
