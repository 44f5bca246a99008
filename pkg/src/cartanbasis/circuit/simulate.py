"""Dense state-vector / unitary simulation for small circuits."""

import numpy as np


def apply_gate(state, u, qubits, n):
    """Apply ``u`` to ``qubits`` of a (2,)*n (+ batch) tensor.

    Qubit 0 is the most significant bit.
    """
    k = len(qubits)
    u = u.reshape((2,) * (2 * k))
    axes = (list(range(k, 2 * k)), list(qubits))
    out = np.tensordot(u, state, axes=axes)
    # tensordot puts the gate outputs first; move them back into place
    rest = [i for i in range(n) if i not in qubits]
    order = list(qubits) + rest
    inv = np.argsort(order + list(range(n, state.ndim)))
    return out.transpose(inv)


def circuit_unitary(circ):
    """Full 2^n x 2^n unitary of a circuit (n up to ~10)."""
    n = circ.n_qubits
    dim = 2 ** n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in circ.gates:
        state = apply_gate(state, g.unitary, g.qubits, n)
    return state.reshape(dim, dim)


def permutation_unitary(perm, n):
    """Unitary moving the state of qubit ``i`` to qubit ``perm[i]``."""
    dim = 2 ** n
    out = np.zeros((dim, dim))
    for idx in range(dim):
        bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
        new = [0] * n
        for q in range(n):
            new[perm[q]] = bits[q]
        j = int("".join(map(str, new)), 2)
        out[j, idx] = 1.0
    return out


def phase_distance(u, v):
    """max |u - e^{i phi} v| with the best global phase phi."""
    ov = np.vdot(v, u)
    phase = ov / abs(ov) if abs(ov) > 1e-15 else 1.0
    return float(np.max(np.abs(u - phase * v)))
