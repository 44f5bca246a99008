"""Numerical synthesis of two-qubit gates into (nonstandard) basis gates.

A depth-n decomposition interleaves n two-qubit basis layers with n + 1
layers of single-qubit gates::

    V = L_n G_n ... L_1 G_1 L_0,    L_k = a_k kron b_k

and the single-qubit Euler angles are fit by multi-start BFGS against the
phase-insensitive trace infidelity ``1 - |tr(W^dag V)|^2 / 16``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize

from . import weyl
from .config import TOL
from .errors import SynthesisFailed
from .hamsim import unitary_from_json as _j2u, unitary_to_json as _u2j


def euler_1q(theta, phi, lam):
    """``Rz(phi) Ry(theta) Rz(lam)``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    ep, el = np.exp(-0.5j * phi), np.exp(-0.5j * lam)
    return np.array([[ep * el * c, -ep * np.conj(el) * s],
                     [np.conj(ep) * el * s, np.conj(ep) * np.conj(el) * c]])


def angles_from_unitary(u):
    """Euler angles (theta, phi, lam) reproducing ``u`` up to global phase."""
    u = np.asarray(u, dtype=complex)
    u = u / np.sqrt(np.linalg.det(u))
    theta = 2 * np.arctan2(abs(u[1, 0]), abs(u[0, 0]))
    sum_half = -np.angle(u[0, 0]) if abs(u[0, 0]) > 1e-12 else 0.0
    diff_half = np.angle(u[1, 0]) if abs(u[1, 0]) > 1e-12 else 0.0
    # u00 = e^{-i(phi+lam)/2} c, u10 = e^{i(phi-lam)/2} s
    phi = sum_half + diff_half
    lam = sum_half - diff_half
    return theta, phi, lam


def trace_infidelity(target, v):
    return float(1.0 - abs(np.trace(np.asarray(target).conj().T @ v)) ** 2 / 16.0)


@dataclass
class GateDecomposition:
    """``layers`` of basis gates interleaved with ``len(layers) + 1`` local layers.

    ``locals_[0]`` is applied first, ``layers[0]`` second, and so on.
    """

    target_id: str
    layer_ids: list
    layer_unitaries: list
    locals_: list
    infidelity: float
    restarts: int = 0
    history: list = field(default_factory=list)

    @property
    def n_layers(self):
        return len(self.layer_unitaries)

    def to_json(self):
        return {
            "target_id": self.target_id,
            "layer_ids": list(self.layer_ids),
            "layer_unitaries": [_u2j(g) for g in self.layer_unitaries],
            "locals": [[_u2j(a), _u2j(b)] for a, b in self.locals_],
            "infidelity": self.infidelity,
            "restarts": self.restarts,
        }

    @classmethod
    def from_json(cls, d):
        return cls(d["target_id"], list(d["layer_ids"]),
                   [_j2u(g) for g in d["layer_unitaries"]],
                   [(_j2u(a), _j2u(b)) for a, b in d["locals"]],
                   float(d["infidelity"]), int(d.get("restarts", 0)))

    def reassemble(self):
        a, b = self.locals_[0]
        v = np.kron(a, b)
        for g, (a, b) in zip(self.layer_unitaries, self.locals_[1:]):
            v = np.kron(a, b) @ g @ v
        return v


class _Objective:
    def __init__(self, target, layers):
        self.wd = np.asarray(target, dtype=complex).conj().T
        self.layers = [np.asarray(g, dtype=complex) for g in layers]
        self.n = len(layers)

    def locals_from(self, x):
        x = x.reshape(self.n + 1, 2, 3)
        return [(euler_1q(*x[k, 0]), euler_1q(*x[k, 1])) for k in range(self.n + 1)]

    def matrix(self, x):
        locs = self.locals_from(x)
        v = np.kron(*locs[0])
        for g, ab in zip(self.layers, locs[1:]):
            v = np.kron(*ab) @ g @ v
        return v

    def value(self, x):
        return 1.0 - abs(np.trace(self.wd @ self.matrix(x))) ** 2 / 16.0

    def residual(self, x):
        # entrywise mismatch after removing the best global phase
        v = self.matrix(x)
        ov = np.trace(self.wd @ v)
        d = v * (np.conj(ov) / max(abs(ov), 1e-300)) - self.wd.conj().T
        return np.concatenate([d.real.ravel(), d.imag.ravel()])

    def value_and_grad(self, x):
        n = self.n
        u, du = _euler_batch(x.reshape(-1, 3))
        a, b = u[0::2], u[1::2]
        locs = (a[:, :, None, :, None] * b[:, None, :, None, :]).reshape(n + 1, 4, 4)
        # suffix[k]: everything applied before L_k; prefix[k]: everything after.
        suffix = np.empty((n + 1, 4, 4), dtype=complex)
        prefix = np.empty((n + 1, 4, 4), dtype=complex)
        suffix[0] = np.eye(4)
        for k in range(n):
            suffix[k + 1] = self.layers[k] @ locs[k] @ suffix[k]
        prefix[n] = np.eye(4)
        for k in range(n, 0, -1):
            prefix[k - 1] = prefix[k] @ locs[k] @ self.layers[k - 1]
        f = np.trace(self.wd @ locs[n] @ suffix[n])
        e = suffix @ self.wd @ prefix
        # tr(E (A kron B)) = sum_ij A_ij ma_ij = sum_kl B_kl mb_kl
        t = e.reshape(n + 1, 2, 2, 2, 2).transpose(0, 3, 1, 4, 2).reshape(n + 1, 4, 4)
        ma = t @ b.reshape(n + 1, 4, 1)
        mb = a.reshape(n + 1, 1, 4) @ t
        da, db = du[0::2].reshape(n + 1, 3, 4), du[1::2].reshape(n + 1, 3, 4)
        ga = (da @ ma)[..., 0]
        gb = (db @ mb.transpose(0, 2, 1))[..., 0]
        grad = np.stack([ga, gb], axis=1)
        grad = -np.real(np.conj(f) * grad) / 8.0
        return 1.0 - abs(f) ** 2 / 16.0, grad.ravel()


def _euler_batch(angles):
    """Euler unitaries and their angle derivatives for rows of (theta, phi, lam).

    Returns:
        (u, du) with shapes (m, 2, 2) and (m, 3, 2, 2).
    """
    theta, phi, lam = angles[:, 0], angles[:, 1], angles[:, 2]
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    ep, el = np.exp(-0.5j * phi), np.exp(-0.5j * lam)
    pp, pm, mp, mm = ep * el, ep * el.conj(), ep.conj() * el, (ep * el).conj()
    u = np.empty((len(c), 2, 2), dtype=complex)
    u[:, 0, 0], u[:, 0, 1] = pp * c, -pm * s
    u[:, 1, 0], u[:, 1, 1] = mp * s, mm * c
    du = np.empty((len(c), 3, 2, 2), dtype=complex)
    du[:, 0, 0, 0], du[:, 0, 0, 1] = -0.5 * pp * s, -0.5 * pm * c
    du[:, 0, 1, 0], du[:, 0, 1, 1] = 0.5 * mp * c, -0.5 * mm * s
    du[:, 1] = u * np.array([[-0.5j], [0.5j]])
    du[:, 2] = u * np.array([[-0.5j, 0.5j]])
    return u, du


POLISH_BELOW = 1e-6


def _polish(obj, x, fval):
    """Least squares on the entrywise residual to reach machine precision.

    Uses the trust-region solver: it also handles deep circuits with more
    angles than residuals, and unlike MINPACK's LM its result does not depend
    on heap state, so caches are reproducible bit for bit.
    """
    res = least_squares(obj.residual, x, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    f2 = obj.value(res.x)
    return (res.x, f2) if f2 <= fval else (x, fval)


def _as_layers(basis, n_layers):
    if isinstance(basis, np.ndarray) and basis.ndim == 2:
        return [basis] * n_layers
    basis = list(basis)
    if len(basis) == 1:
        return basis * n_layers
    if len(basis) != n_layers:
        raise ValueError(f"got {len(basis)} basis layers for n_layers={n_layers}")
    return basis


def synthesize(target, basis, n_layers=None, *, restarts=32, threshold=TOL.synthesis,
               seed=0, target_id="target", basis_ids=None, depth_from_theory=False,
               raise_on_failure=True, stop_early=True):
    """Fit single-qubit layers so the basis circuit reproduces ``target``.

    Args:
        target: 4x4 unitary to synthesize.
        basis: one 4x4 unitary (reused for every layer) or a list with one
            unitary per layer.
        n_layers: number of two-qubit layers.  Required unless
            ``depth_from_theory`` is set, in which case the analytic depth of
            :func:`min_layers` is used.
        restarts: number of random initial points.
        threshold: success level for the trace infidelity.
        seed: seed for the initial angles.
        stop_early: stop restarting once ``threshold`` is met.

    Returns:
        GateDecomposition of the best restart.

    Raises:
        SynthesisFailed: no restart reached ``threshold`` (only when
            ``raise_on_failure``; otherwise the best attempt is returned).
    """
    target = weyl.as_unitary(target)
    if depth_from_theory:
        if isinstance(basis, np.ndarray) and basis.ndim == 2:
            single = basis
        elif len(basis) == 1:
            single = basis[0]
        else:
            raise ValueError("depth_from_theory needs a single basis gate")
        n_layers = min_layers(weyl.cartan_coordinates(target), weyl.cartan_coordinates(single))
        n_layers = max(n_layers, 1)
    if n_layers is None or n_layers < 1:
        raise ValueError("n_layers must be >= 1")
    layers = _as_layers(basis, n_layers)
    if basis_ids is None:
        basis_ids = [f"basis{k}" for k in range(n_layers)]
    elif isinstance(basis_ids, str):
        basis_ids = [basis_ids] * n_layers

    obj = _Objective(target, layers)
    rng = np.random.default_rng(seed)
    dim = 6 * (n_layers + 1)
    best_x, best_f = None, np.inf
    history = []
    used = 0
    for _ in range(restarts):
        x0 = rng.uniform(-np.pi, np.pi, dim)
        res = minimize(obj.value_and_grad, x0, jac=True, method="BFGS",
                       options={"gtol": 1e-12, "maxiter": 2000})
        used += 1
        fval = obj.value(res.x)
        if fval < best_f:
            best_f, best_x = fval, res.x
        history.append(best_f)
        if stop_early and best_f < threshold:
            break
    if best_f < POLISH_BELOW:
        best_x, best_f = _polish(obj, best_x, best_f)
    locs = obj.locals_from(best_x)
    dec = GateDecomposition(
        target_id=target_id,
        layer_ids=list(basis_ids),
        layer_unitaries=layers,
        locals_=locs,
        infidelity=max(float(best_f), 0.0),
        restarts=used,
        history=history,
    )
    if dec.infidelity >= threshold and raise_on_failure:
        raise SynthesisFailed(dec.infidelity, used, dec)
    return dec


def min_layers(target, basis, *, max_layers=6, seed=0, restarts=32,
               return_analytic=False):
    """Minimal number of basis layers needed for ``target``.

    Args:
        target, basis: canonical coordinates.

    Returns:
        the depth, or ``(depth, analytic)`` with ``return_analytic``; the flag is
        False when the depth had to be found by incremental synthesis.
    """
    from .feasibility import swap_min_layers, two_layer_feasible, SwapLayers

    tol = TOL.region
    t = weyl.canonicalize(target)
    b = weyl.canonicalize(basis)

    def done(n, analytic=True):
        return (n, analytic) if return_analytic else n

    if weyl.weyl_distance(t, (0, 0, 0)) <= tol:
        return done(0)
    if weyl.weyl_distance(t, b) <= tol:
        return done(1)
    if two_layer_feasible(t, b, b):
        return done(2)
    if weyl.weyl_distance(t, weyl.NAMED_POINTS["SWAP"]) <= tol:
        if swap_min_layers(b) == SwapLayers.THREE:
            return done(3)
    tu = weyl.canonical_gate(t)
    bu = weyl.canonical_gate(b)
    for n in range(3, max_layers + 1):
        dec = synthesize(tu, bu, n, restarts=restarts, seed=seed, raise_on_failure=False)
        if dec.infidelity < TOL.synthesis:
            return done(n, False)
    return done(max_layers + 1, False)


# ---------------------------------------------------------------------------
# Decomposition cache


@dataclass
class DecompositionCache:
    """Decompositions keyed by ``(edge, target_id)`` for one calibration cycle."""

    entries: dict = field(default_factory=dict)
    timestamp: float = field(default_factory=time.time)
    threshold: float = TOL.synthesis
    failures: dict = field(default_factory=dict)

    def get(self, edge, target_id):
        return self.entries.get((tuple(edge), target_id))

    def put(self, edge, dec):
        if dec.infidelity >= self.threshold:
            raise ValueError("cache entries must meet the infidelity threshold")
        self.entries[(tuple(edge), dec.target_id)] = dec

    def __len__(self):
        return len(self.entries)

    def summary(self):
        return {"entries": len(self.entries), "failures": len(self.failures)}

    def to_json(self):
        keys = sorted(self.entries, key=lambda k: (k[0], k[1]))
        return {
            "timestamp": self.timestamp,
            "threshold": self.threshold,
            "entries": [{"edge": list(e), **self.entries[(e, t)].to_json()} for e, t in keys],
            "failures": [{"edge": list(e), "target_id": t, "error": self.failures[(e, t)]}
                         for e, t in sorted(self.failures)],
        }

    @classmethod
    def from_json(cls, d):
        cache = cls(timestamp=d["timestamp"], threshold=d.get("threshold", TOL.synthesis))
        for x in d["entries"]:
            cache.entries[(tuple(x["edge"]), x["target_id"])] = GateDecomposition.from_json(x)
        for x in d.get("failures", []):
            cache.failures[(tuple(x["edge"]), x["target_id"])] = x["error"]
        return cache


STANDARD_TARGETS = {"swap": weyl.SWAP, "cnot": weyl.CNOT}


def build_cache(basis_by_edge, targets=("swap", "cnot"), *, restarts=32, seed=0,
                timestamp=None, threshold=TOL.synthesis):
    """Precompute decompositions of ``targets`` into each edge's basis gate.

    Args:
        basis_by_edge: mapping edge -> 4x4 basis unitary.
        targets: names from ``STANDARD_TARGETS`` or ``(name, unitary)`` pairs.
        timestamp: calibration-cycle stamp (defaults to now).

    Failures are recorded in ``cache.failures`` and do not abort the build.
    """
    cache = DecompositionCache(timestamp=time.time() if timestamp is None else timestamp,
                               threshold=threshold)
    resolved = []
    for t in targets:
        if isinstance(t, str):
            resolved.append((t, STANDARD_TARGETS[t]))
        else:
            resolved.append((t[0], np.asarray(t[1], dtype=complex)))
    for edge in sorted(basis_by_edge):
        basis = np.asarray(basis_by_edge[edge], dtype=complex)
        for name, unitary in resolved:
            try:
                dec = synthesize(unitary, basis, depth_from_theory=True, restarts=restarts,
                                 seed=seed, target_id=name,
                                 basis_ids=f"basis{tuple(edge)}", threshold=threshold)
            except Exception as exc:  # recorded, build continues
                cache.failures[(tuple(edge), name)] = str(exc)
                continue
            cache.put(edge, dec)
    return cache
