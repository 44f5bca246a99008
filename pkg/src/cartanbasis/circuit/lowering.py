"""Lowering of routed circuits onto per-edge native basis gates.

Every two-qubit gate is rewritten as ``L_n G ... L_1 G L_0`` with the edge's
basis gate ``G``.  A gate locally equivalent to a cached target reuses that
decomposition: if ``M = p K1 Can K2`` and the cached circuit ``V = q K1' Can
K2'``, then ``M = (p/q) K1 K1'^dag V K2'^dag K2``, and the extra locals are
absorbed into the outer layers.  Anything else goes through numerical
synthesis with the analytically known depth.
"""

from __future__ import annotations

import numpy as np

from .. import weyl
from ..errors import LoweringFailed, SynthesisFailed
from ..synth import DecompositionCache, synthesize, trace_infidelity
from .ir import Circuit, Gate

SWAP = weyl.SWAP
CLASS_TOL = 1e-7
ADAPT_TOL = 1e-10


def _edge(a, b):
    return (a, b) if a < b else (b, a)


def _p(phi):
    return np.diag([1.0, np.exp(1j * phi)])


def _rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def expand_controlled(c: Circuit) -> Circuit:
    """Rewrite ``cp`` and ``crz`` with two CX gates and phase rotations."""
    out = Circuit(c.n_qubits)
    for g in c.gates:
        if g.name == "cp":
            (theta,) = g.params
            ctl, tgt = g.qubits
            out.append(Gate("u", (ctl,), matrix=_p(theta / 2)))
            out.append(Gate("cx", (ctl, tgt)))
            out.append(Gate("u", (tgt,), matrix=_p(-theta / 2)))
            out.append(Gate("cx", (ctl, tgt)))
            out.append(Gate("u", (tgt,), matrix=_p(theta / 2)))
        elif g.name == "crz":
            (theta,) = g.params
            ctl, tgt = g.qubits
            out.append(Gate("u", (tgt,), matrix=_rz(theta / 2)))
            out.append(Gate("cx", (ctl, tgt)))
            out.append(Gate("u", (tgt,), matrix=_rz(-theta / 2)))
            out.append(Gate("cx", (ctl, tgt)))
        else:
            out.append(g)
    return out


def fuse_1q(c: Circuit) -> Circuit:
    """Merge runs of single-qubit gates on each qubit into one ``u`` gate."""
    out = Circuit(c.n_qubits)
    pending = {}

    def flush(q):
        m = pending.pop(q, None)
        if m is not None:
            out.append(Gate("u", (q,), matrix=m))

    for g in c.gates:
        if len(g.qubits) == 1:
            (q,) = g.qubits
            pending[q] = g.unitary @ pending.get(q, np.eye(2))
        else:
            for q in g.qubits:
                flush(q)
            out.append(g)
    for q in sorted(pending):
        flush(q)
    return out


class _Candidate:
    """A known decomposition ``V`` of some class on one edge."""

    def __init__(self, dec):
        self.dec = dec
        v = dec.reassemble()
        self.kak = weyl.kak_decompose(v)
        self.coord = self.kak.coordinate


class Lowerer:
    """Stateful lowering pass that memoizes fallback syntheses per edge.

    Args:
        basis_by_edge: mapping ``(e0, e1)`` with ``e0 < e1`` -> 4x4 basis
            unitary in ``(e0, e1)`` operand order.
        cache: precomputed :class:`DecompositionCache` (optional).
        restarts, seed: budget for fallback synthesis.
        controlled_via_cx: expand ``cp``/``crz`` into CX form before lowering.
    """

    def __init__(self, basis_by_edge, cache: DecompositionCache | None = None, *,
                 restarts=32, seed=0, controlled_via_cx=True, fallback=synthesize):
        self.basis = {_edge(*e): np.asarray(u, dtype=complex) for e, u in basis_by_edge.items()}
        self.cache = cache
        self.restarts = restarts
        self.seed = seed
        self.controlled_via_cx = controlled_via_cx
        self.fallback = fallback
        self._known = {}
        self.n_synthesized = 0

    def candidates(self, edge):
        if edge not in self._known:
            found = []
            if self.cache is not None:
                for (e, _tid), dec in sorted(self.cache.entries.items(), key=lambda kv: str(kv[0])):
                    if _edge(*e) == edge:
                        found.append(_Candidate(dec))
            self._known[edge] = found
        return self._known[edge]

    def _adapt(self, m, kak_m, cand):
        k = cand.kak
        left = np.kron(*kak_m.left_locals) @ np.kron(*k.left_locals).conj().T
        right = np.kron(*k.right_locals).conj().T @ np.kron(*kak_m.right_locals)
        dec = cand.dec
        locs = [tuple(p) for p in dec.locals_]
        a0, b0, _ = weyl.kron_factor(np.kron(*locs[0]) @ right)
        an, bn, _ = weyl.kron_factor(left @ np.kron(*locs[-1]))
        locs[0], locs[-1] = (a0, b0), (an, bn)
        return locs, dec.layer_unitaries

    def decompose(self, m, edge, name="gate"):
        """Locals and layers reproducing ``m`` (edge operand order) up to phase."""
        kak_m = weyl.kak_decompose(m)
        c = kak_m.coordinate
        if weyl.weyl_distance(c, (0, 0, 0)) <= CLASS_TOL:
            a, b, _ = weyl.kron_factor(m)
            return [(a, b)], []
        for cand in self.candidates(edge):
            if weyl.weyl_distance(c, cand.coord) <= CLASS_TOL:
                locs, layers = self._adapt(m, kak_m, cand)
                if trace_infidelity(m, _reassemble(locs, layers)) < ADAPT_TOL:
                    return locs, layers
        if edge not in self.basis:
            raise LoweringFailed(edge, name, "no basis gate for this edge")
        try:
            dec = self.fallback(m, self.basis[edge], depth_from_theory=True,
                                restarts=self.restarts, seed=self.seed,
                                target_id=f"{name}@{c.tx:.6f},{c.ty:.6f},{c.tz:.6f}",
                                basis_ids=f"basis{edge}")
        except SynthesisFailed as exc:
            raise LoweringFailed(edge, name, exc) from exc
        self.n_synthesized += 1
        self._known.setdefault(edge, []).append(_Candidate(dec))
        return [tuple(p) for p in dec.locals_], dec.layer_unitaries

    def lower(self, c: Circuit) -> Circuit:
        if self.controlled_via_cx:
            c = expand_controlled(c)
        out = Circuit(c.n_qubits)
        for g in c.gates:
            if len(g.qubits) == 1:
                out.append(g)
                continue
            q0, q1 = g.qubits
            edge = _edge(q0, q1)
            m = g.unitary
            if (q0, q1) != edge:
                m = SWAP @ m @ SWAP
            locs, layers = self.decompose(m, edge, g.name)
            e0, e1 = edge
            for k, (a, b) in enumerate(locs):
                if k > 0:
                    out.append(Gate("native", edge, matrix=layers[k - 1], label=f"basis{edge}"))
                out.append(Gate("u", (e0,), matrix=a))
                out.append(Gate("u", (e1,), matrix=b))
        return fuse_1q(out)


def _reassemble(locs, layers):
    v = np.kron(*locs[0])
    for g, (a, b) in zip(layers, locs[1:]):
        v = np.kron(a, b) @ g @ v
    return v


def lower(c: Circuit, cache: DecompositionCache | None = None, basis_by_edge=None, **kw) -> Circuit:
    """Rewrite ``c`` over single-qubit ``u`` gates and per-edge ``native`` gates.

    Args:
        c: routed circuit (every two-qubit gate on a device edge).
        cache: decompositions to reuse; their layer unitaries double as the
            edge basis when ``basis_by_edge`` is not given.
        basis_by_edge: edge -> basis unitary, used for on-demand synthesis.

    Raises:
        LoweringFailed: fallback synthesis failed for some gate.
    """
    if basis_by_edge is None:
        basis_by_edge = {}
        if cache is not None:
            for (e, _tid), dec in cache.entries.items():
                basis_by_edge.setdefault(_edge(*e), dec.layer_unitaries[0])
    return Lowerer(basis_by_edge, cache, **kw).lower(c)


def native_layer_count(c: Circuit) -> int:
    return c.count("native")
