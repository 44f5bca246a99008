"""Textbook benchmark circuits: Bernstein-Vazirani, QFT, QAOA (p=1) and the
Cuccaro ripple-carry adder."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .ir import Circuit


def gen_bv(n, secret=None):
    """Bernstein-Vazirani on ``n`` qubits (``n - 1`` data qubits + ancilla).

    Args:
        n: total qubit count, at least 2.
        secret: integer below ``2**(n-1)``; bit ``k`` couples data qubit
            ``k`` to the ancilla.  Defaults to all ones.

    Returns:
        Circuit with one CX per set bit of ``secret``.  The ancilla is the
        last qubit.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    m = n - 1
    if secret is None:
        secret = (1 << m) - 1
    if not 0 <= secret < (1 << m):
        raise ValueError(f"secret must fit in {m} bits")
    c = Circuit(n)
    anc = n - 1
    c.append("x", [anc])
    for q in range(n):
        c.append("h", [q])
    for k in range(m):
        if (secret >> k) & 1:
            c.append("cx", [k, anc])
    for q in range(m):
        c.append("h", [q])
    return c


def gen_qft(n, swaps=True):
    """Quantum Fourier transform with ``n(n-1)/2`` controlled-phase gates."""
    if n < 2:
        raise ValueError("n must be >= 2")
    c = Circuit(n)
    for j in range(n):
        c.append("h", [j])
        for k in range(j + 1, n):
            c.append("cp", [k, j], [math.pi / 2 ** (k - j)])
    if swaps:
        for j in range(n // 2):
            c.append("swap", [j, n - 1 - j])
    return c


def random_graph(n, edge_prob, seed):
    """Seeded Erdos-Renyi graph as a sorted edge list."""
    rng = np.random.default_rng(seed)
    return [(i, j) for i, j in itertools.combinations(range(n), 2)
            if rng.random() < edge_prob]


def gen_qaoa(n, edge_prob=0.33, seed=0, gamma=0.7, beta=0.3):
    """Depth-1 MaxCut QAOA on a seeded random graph.

    Each cost term ``exp(-i gamma Z_i Z_j)`` is compiled as cx-rz-cx.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    c = Circuit(n)
    for q in range(n):
        c.append("h", [q])
    for i, j in random_graph(n, edge_prob, seed):
        c.append("cx", [i, j])
        c.append("rz", [j], [2 * gamma])
        c.append("cx", [i, j])
    for q in range(n):
        c.append("rx", [q], [2 * beta])
    return c


def _ccx(c, a, b, t):
    # standard 6-CX Toffoli
    c.append("h", [t])
    c.append("cx", [b, t])
    c.append("tdg", [t])
    c.append("cx", [a, t])
    c.append("t", [t])
    c.append("cx", [b, t])
    c.append("tdg", [t])
    c.append("cx", [a, t])
    c.append("t", [b])
    c.append("t", [t])
    c.append("h", [t])
    c.append("cx", [a, b])
    c.append("t", [a])
    c.append("tdg", [b])
    c.append("cx", [a, b])


def _maj(c, x, y, z):
    c.append("cx", [z, y])
    c.append("cx", [z, x])
    _ccx(c, x, y, z)


def _uma(c, x, y, z):
    _ccx(c, x, y, z)
    c.append("cx", [z, x])
    c.append("cx", [x, y])


def cuccaro_layout(n_bits):
    """Qubit indices ``(cin, a, b, cout)`` used by :func:`gen_cuccaro`."""
    b = [1 + 2 * i for i in range(n_bits)]
    a = [2 + 2 * i for i in range(n_bits)]
    return 0, a, b, 2 * n_bits + 1


def gen_cuccaro(n):
    """Cuccaro ripple-carry adder ``b <- a + b`` on ``n`` qubits.

    Args:
        n: total qubit count; must be even and at least 4, giving
            ``(n - 2) / 2``-bit operands plus carry-in and carry-out.
    """
    if n < 4 or n % 2:
        raise ValueError("the adder needs an even qubit count >= 4")
    bits = (n - 2) // 2
    cin, a, b, cout = cuccaro_layout(bits)
    c = Circuit(n)
    _maj(c, cin, b[0], a[0])
    for i in range(1, bits):
        _maj(c, a[i - 1], b[i], a[i])
    c.append("cx", [a[-1], cout])
    for i in range(bits - 1, 0, -1):
        _uma(c, a[i - 1], b[i], a[i])
    _uma(c, cin, b[0], a[0])
    return c


BENCHMARKS = {
    "bv": gen_bv,
    "qft": gen_qft,
    "qaoa": gen_qaoa,
    "cuccaro": gen_cuccaro,
}


def by_name(name, seed=0):
    """Build a benchmark from a short name.

    ``bv5``, ``qft4``, ``cuccaro6``, ``qaoa6`` and ``qaoa6_0.33`` (edge
    probability after the underscore) are understood.
    """
    if name.startswith("qaoa"):
        body = name[4:]
        n, _, p = body.partition("_")
        return gen_qaoa(int(n), float(p) if p else 0.33, seed=seed)
    for key in ("bv", "qft", "cuccaro"):
        if name.startswith(key) and name[len(key):].isdigit():
            return BENCHMARKS[key](int(name[len(key):]))
    raise ValueError(f"unknown benchmark {name!r}")
