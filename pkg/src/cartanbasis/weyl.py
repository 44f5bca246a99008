"""Cartan (KAK) geometry of two-qubit gates.

Coordinates use fractional units in which ``CNOT ~ (1/2, 0, 0)`` and
``SWAP ~ (1/2, 1/2, 1/2)``; a canonical gate is

    Can(tx, ty, tz) = exp(-i pi/2 (tx XX + ty YY + tz ZZ)).

The canonical chamber is ``0 <= tz <= ty <= tx``, ``tx + ty <= 1`` with the
bottom face identification ``(tx, ty, 0) ~ (1 - tx, ty, 0)`` resolved towards
``tx <= 1/2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial import ConvexHull

from .config import TOL
from .errors import NonUnitaryInput

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
XX = np.kron(X, X)
YY = np.kron(Y, Y)
ZZ = np.kron(Z, Z)

# Columns: Phi+, i Psi+, Psi-, i Phi-.  Local gates become SO(4) here.
MAGIC = np.array(
    [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]], dtype=complex
) / np.sqrt(2)
MAGIC_DAG = MAGIC.conj().T

# Row k holds the XX, YY, ZZ eigenvalues of magic column k.
_SIGNS = np.real(np.array([np.diag(MAGIC_DAG @ P @ MAGIC) for P in (XX, YY, ZZ)])).T


class CanonicalCoordinate(NamedTuple):
    tx: float
    ty: float
    tz: float

    def __repr__(self):
        return f"CanonicalCoordinate({self.tx:.6g}, {self.ty:.6g}, {self.tz:.6g})"


def canonical_gate(tx, ty=None, tz=None):
    """Return ``Can(tx, ty, tz)`` as a 4x4 matrix (accepts a triple as first arg)."""
    if ty is None:
        tx, ty, tz = tx
    theta = -0.5 * np.pi * (_SIGNS @ np.array([tx, ty, tz], dtype=float))
    return MAGIC @ np.diag(np.exp(1j * theta)) @ MAGIC_DAG


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
ISWAP = np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex)
SQRT_ISWAP = np.array(
    [[1, 0, 0, 0], [0, 1 / np.sqrt(2), 1j / np.sqrt(2), 0],
     [0, 1j / np.sqrt(2), 1 / np.sqrt(2), 0], [0, 0, 0, 1]], dtype=complex
)
SQRT_SWAP = np.array(
    [[1, 0, 0, 0], [0, (1 + 1j) / 2, (1 - 1j) / 2, 0],
     [0, (1 - 1j) / 2, (1 + 1j) / 2, 0], [0, 0, 0, 1]], dtype=complex
)
B_GATE = canonical_gate(0.5, 0.25, 0.0)

NAMED_POINTS = {
    "I0": CanonicalCoordinate(0.0, 0.0, 0.0),
    "I1": CanonicalCoordinate(1.0, 0.0, 0.0),
    "CNOT": CanonicalCoordinate(0.5, 0.0, 0.0),
    "CZ": CanonicalCoordinate(0.5, 0.0, 0.0),
    "ISWAP": CanonicalCoordinate(0.5, 0.5, 0.0),
    "SQRT_ISWAP": CanonicalCoordinate(0.25, 0.25, 0.0),
    "SQRT_ISWAP_DAG": CanonicalCoordinate(0.75, 0.25, 0.0),
    "SWAP": CanonicalCoordinate(0.5, 0.5, 0.5),
    "SQRT_SWAP": CanonicalCoordinate(0.25, 0.25, 0.25),
    "SQRT_SWAP_DAG": CanonicalCoordinate(0.75, 0.25, 0.25),
    "B": CanonicalCoordinate(0.5, 0.25, 0.0),
}

CHAMBER_VERTICES = np.array(
    [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, 0.5, 0.0], [0.5, 0.5, 0.5]]
)
CHAMBER_VOLUME = 1.0 / 24.0


def as_unitary(u, tol=TOL.unitarity):
    """Validate a 4x4 unitary and return it as a complex array.

    Raises:
        NonUnitaryInput: wrong shape, ``U^dag U != I`` or ``|det U| != 1``
            beyond ``tol`` (max absolute entry deviation).
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise NonUnitaryInput(f"expected a 4x4 matrix, got shape {u.shape}")
    dev = np.max(np.abs(u.conj().T @ u - np.eye(4)))
    if not dev <= tol:
        raise NonUnitaryInput(f"U^dag U deviates from identity by {dev:.3g}")
    if abs(abs(np.linalg.det(u)) - 1.0) > tol:
        raise NonUnitaryInput("determinant is not of unit modulus")
    return u


# ---------------------------------------------------------------------------
# Weyl-group moves.  Each acts on (coords, k1, k2) keeping
# k1 @ Can(coords) @ k2 fixed.

_FLIP_PAULI = {(0, 1): np.kron(Z, I2), (1, 2): np.kron(X, I2), (0, 2): np.kron(Y, I2)}
_S = np.diag([1, 1j])
_RX90 = np.array([[1, -1j], [-1j, 1]]) / np.sqrt(2)
_RY90 = np.array([[1, -1], [1, 1]], dtype=complex) / np.sqrt(2)
_SWAP_CONJ = {
    (0, 1): np.kron(_S, _S),
    (1, 2): np.kron(_RX90, _RX90),
    (0, 2): np.kron(_RY90, _RY90),
}


class _Tracker:
    def __init__(self, coords, k1=None, k2=None):
        self.c = [float(v) for v in coords]
        self.k1 = k1
        self.k2 = k2

    @property
    def tracking(self):
        return self.k1 is not None

    def shift(self, axis, n):
        if n == 0:
            return
        self.c[axis] += n
        if self.tracking:
            s = [0.0, 0.0, 0.0]
            s[axis] = -n
            self.k2 = canonical_gate(s) @ self.k2

    def flip(self, i, j):
        self.c[i], self.c[j] = -self.c[i], -self.c[j]
        if self.tracking:
            p = _FLIP_PAULI[(i, j)]
            self.k1 = self.k1 @ p
            self.k2 = p @ self.k2

    def swap(self, i, j):
        i, j = min(i, j), max(i, j)
        self.c[i], self.c[j] = self.c[j], self.c[i]
        if self.tracking:
            q = _SWAP_CONJ[(i, j)]
            self.k1 = self.k1 @ q.conj().T
            self.k2 = q @ self.k2


def _canonicalize_tracked(tr: _Tracker, tol):
    for axis in range(3):
        tr.shift(axis, -int(np.round(tr.c[axis])))
    # order by magnitude, descending (stable bubble sort keeps moves minimal)
    for _ in range(3):
        for i in range(2):
            if abs(tr.c[i]) < abs(tr.c[i + 1]) - tol:
                tr.swap(i, i + 1)
    x, y = tr.c[0], tr.c[1]
    if x < 0 and y < 0:
        tr.flip(0, 1)
    elif x < 0:
        tr.flip(0, 2)
    elif y < 0:
        tr.flip(1, 2)
    if tr.c[2] < -tol:
        tr.flip(0, 2)
        tr.shift(0, 1)
    elif abs(tr.c[2]) <= tol and tr.c[0] > 0.5 + tol:
        tr.flip(0, 2)
        tr.shift(0, 1)
    return tr


def canonicalize(raw, tol=TOL.geometry) -> CanonicalCoordinate:
    """Map any real triple to its representative in the canonical chamber.

    The orbit is generated by coordinate permutations, simultaneous sign
    flips of two coordinates and integer shifts of single coordinates.
    """
    tr = _canonicalize_tracked(_Tracker(raw), tol)
    return CanonicalCoordinate(*(0.0 if abs(v) < 1e-15 else v for v in tr.c))


def in_chamber(c, tol=TOL.geometry) -> bool:
    x, y, z = c
    ok = -tol <= z <= y + tol and y <= x + tol and x + y <= 1 + tol
    if ok and abs(z) <= tol:
        ok = x <= 0.5 + tol
    return bool(ok)


# ---------------------------------------------------------------------------
# KAK


def kron_factor(k):
    """Split ``k ~ phase * (a kron b)`` into SU(2) factors.

    Returns:
        (a, b, phase) with ``phase * np.kron(a, b) == k``.
    """
    r = k.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    a = u[:, 0].reshape(2, 2) * np.sqrt(s[0])
    b = vh[0, :].reshape(2, 2) * np.sqrt(s[0])
    a = a / np.sqrt(np.linalg.det(a))
    b = b / np.sqrt(np.linalg.det(b))
    ab = np.kron(a, b)
    idx = np.unravel_index(np.argmax(np.abs(ab)), ab.shape)
    phase = k[idx] / ab[idx]
    return a, b, phase / abs(phase)


def _real_eigvecs(m2):
    """Real orthogonal P with ``P.T @ m2 @ P`` diagonal, for symmetric unitary m2.

    Re(m2) and Im(m2) commute; a fixed sequence of real mixtures breaks
    degeneracies deterministically.
    """
    re, im = m2.real, m2.imag
    for mix in (0.5773502691896258, 1.0, 0.0, 0.1318, 2.7182818, -0.6180339887, 7.389):
        p = np.linalg.eigh(re + mix * im)[1]
        d = p.T @ m2 @ p
        if np.max(np.abs(d - np.diag(np.diag(d)))) < 1e-10:
            break
    else:  # pragma: no cover - deterministic mixtures cover measure-zero cases
        raise NonUnitaryInput("failed to diagonalize U^T U in the magic basis")
    phases = np.angle(np.diag(d))
    order = np.lexsort((np.round(p[0], 12), np.round(phases, 12)))
    p = p[:, order]
    if np.linalg.det(p) < 0:
        p[:, -1] = -p[:, -1]
    return p


@dataclass(frozen=True)
class KakFactorization:
    """``u = global_phase * (l0 kron l1) @ Can(coordinate) @ (r0 kron r1)``."""

    left_locals: tuple
    right_locals: tuple
    coordinate: CanonicalCoordinate
    global_phase: complex

    def reassemble(self):
        k1 = np.kron(*self.left_locals)
        k2 = np.kron(*self.right_locals)
        return self.global_phase * k1 @ canonical_gate(self.coordinate) @ k2


def kak_decompose(u, tol=TOL.geometry) -> KakFactorization:
    """Cartan decomposition of a two-qubit unitary.

    Raises:
        NonUnitaryInput: if ``u`` fails the unitarity check.
    """
    u = as_unitary(u)
    det_root = np.linalg.det(u) ** 0.25
    su = u / det_root
    up = MAGIC_DAG @ su @ MAGIC
    m2 = up.T @ up
    p = _real_eigvecs(m2)
    theta = np.angle(np.diag(p.T @ m2 @ p)) / 2
    theta[0] -= np.pi * np.round(theta.sum() / np.pi)
    k1m = up @ p @ np.diag(np.exp(-1j * theta))
    raw = -(_SIGNS.T @ theta) / (2 * np.pi)

    k1 = MAGIC @ k1m @ MAGIC_DAG
    k2 = MAGIC @ p.T @ MAGIC_DAG
    tr = _canonicalize_tracked(_Tracker(raw, k1, k2), tol)
    a1, b1, ph1 = kron_factor(tr.k1)
    a2, b2, ph2 = kron_factor(tr.k2)
    coord = CanonicalCoordinate(*(0.0 if abs(v) < 1e-15 else v for v in tr.c))
    return KakFactorization((a1, b1), (a2, b2), coord, complex(det_root * ph1 * ph2))


def cartan_coordinates(u, tol=TOL.geometry) -> CanonicalCoordinate:
    return kak_decompose(u, tol).coordinate


# ---------------------------------------------------------------------------
# LogSpec


class LogSpec(NamedTuple):
    a: float
    b: float
    c: float
    d: float


def normalize_logspec(vals) -> LogSpec:
    """Bring log-eigenvalues (units of 2 pi) into the alcove.

    Result is sorted non-increasing, sums to zero and spans at most 1.
    """
    v = np.asarray(vals, dtype=float)
    v = v - np.round(v)
    v = np.sort(v)[::-1]
    s = int(np.round(v.sum()))
    while s > 0:
        v[0] -= 1.0
        v = np.sort(v)[::-1]
        s -= 1
    while s < 0:
        v[-1] += 1.0
        v = np.sort(v)[::-1]
        s += 1
    return LogSpec(*(float(x) + 0.0 for x in v))


def gamma(u):
    """``u (Y kron Y) u^T (Y kron Y)`` for ``u`` rescaled into SU(4)."""
    u = np.asarray(u, dtype=complex)
    su = u / np.linalg.det(u) ** 0.25
    return su @ YY @ su.T @ YY


def logspec_of_unitary(u) -> LogSpec:
    """LogSpec from the eigenphases of :func:`gamma` (independent of the KAK path)."""
    ev = np.linalg.eigvals(gamma(u))
    return normalize_logspec(np.angle(ev) / (2 * np.pi))


def to_logspec(c) -> LogSpec:
    """LogSpec of the class ``c``.

    The map is ``(a, b, c, d) = sort(-(S @ t) / 2)`` with ``S`` the XX/YY/ZZ
    sign table of the magic basis, i.e. the multiset
    ``{(tx+ty+tz)/2, (tx-ty-tz)/2, (-tx+ty-tz)/2, (-tx-ty+tz)/2}``.
    """
    t = np.asarray(c, dtype=float)
    return normalize_logspec(-(_SIGNS @ t) / 2)


def from_logspec(spec) -> CanonicalCoordinate:
    """Inverse of :func:`to_logspec`; both rho-representatives map to one class."""
    alpha = np.asarray(spec, dtype=float)
    return canonicalize(-(_SIGNS.T @ alpha) / 2)


def rho(spec) -> LogSpec:
    a, b, c, d = spec
    return normalize_logspec((c + 0.5, d + 0.5, a - 0.5, b - 0.5))


def logspec_variants(c, tol=TOL.geometry):
    """Distinct LogSpec points of a class: one if rho-fixed, else two."""
    l0 = to_logspec(c)
    l1 = rho(l0)
    if np.max(np.abs(np.subtract(l0, l1))) <= tol:
        return [l0]
    return [l0, l1]


# ---------------------------------------------------------------------------
# Entanglement


def entangling_power(c) -> float:
    cx, cy, cz = (np.cos(2 * np.pi * v) for v in c)
    return (3.0 - cx * cy - cy * cz - cz * cx) / 18.0


PE_VERTICES = np.array([
    NAMED_POINTS["CZ"], NAMED_POINTS["ISWAP"], NAMED_POINTS["SQRT_SWAP"],
    NAMED_POINTS["SQRT_SWAP_DAG"], NAMED_POINTS["SQRT_ISWAP"],
    NAMED_POINTS["SQRT_ISWAP_DAG"],
])
# rows [n | offset] with n . p + offset <= 0 inside
_PE_HALFSPACES = np.unique(np.round(ConvexHull(PE_VERTICES).equations, 12), axis=0)


def is_perfect_entangler(c, eps=TOL.geometry) -> bool:
    p = np.asarray(c, dtype=float)
    return bool(np.all(_PE_HALFSPACES[:, :3] @ p + _PE_HALFSPACES[:, 3] <= eps))


def is_perfect_entangler_batch(points, eps=TOL.geometry):
    p = np.asarray(points, dtype=float)
    return np.all(p @ _PE_HALFSPACES[:, :3].T + _PE_HALFSPACES[:, 3] <= eps, axis=1)


# ---------------------------------------------------------------------------
# Distance


_ORBIT_MOVES = [
    (perm, signs, shift)
    for perm in itertools.permutations(range(3))
    for signs in ((1, 1, 1), (-1, -1, 1), (-1, 1, -1), (1, -1, -1))
    for shift in itertools.product((-1, 0, 1), repeat=3)
]
_PERMS = np.array([m[0] for m in _ORBIT_MOVES])
_SIGNS_ORBIT = np.array([m[1] for m in _ORBIT_MOVES], dtype=float)
_SHIFTS = np.array([m[2] for m in _ORBIT_MOVES], dtype=float)


def orbit_images(c):
    """Weyl-group images of ``c`` within one unit cell of the chamber."""
    c = np.asarray(c, dtype=float)
    return c[_PERMS] * _SIGNS_ORBIT + _SHIFTS


def weyl_distance(c1, c2) -> float:
    """Euclidean distance between two classes, minimized over the orbit of c2."""
    a = np.asarray(canonicalize(c1), dtype=float)
    imgs = orbit_images(canonicalize(c2))
    return float(np.min(np.linalg.norm(imgs - a, axis=1)))


def segment_distance(c, a, b) -> float:
    """Distance from the class of ``c`` to the chamber segment ``a``-``b``."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    imgs = orbit_images(canonicalize(c))
    d = b - a
    t = np.clip((imgs - a) @ d / (d @ d), 0.0, 1.0)
    return float(np.min(np.linalg.norm(imgs - (a + t[:, None] * d), axis=1)))


def xy_deviation(c) -> float:
    """Distance to the standard XY line from identity to iSWAP."""
    return segment_distance(c, (0.0, 0.0, 0.0), (0.5, 0.5, 0.0))


def sample_chamber(n, rng):
    """Uniform samples from the chamber by rejection from its bounding box."""
    out = []
    have = 0
    while have < n:
        m = max(2 * (n - have) * 24 // 4, 64)
        p = rng.random((m, 3)) * np.array([1.0, 0.5, 0.5])
        keep = (p[:, 2] <= p[:, 1]) & (p[:, 1] <= p[:, 0]) & (p[:, 0] + p[:, 1] <= 1.0)
        p = p[keep]
        out.append(p)
        have += len(p)
    return np.concatenate(out)[:n]
