"""Polyhedral regions of the Weyl chamber used for basis-gate selection."""

from __future__ import annotations

import enum
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.spatial import ConvexHull

from .. import weyl
from ..config import TOL
from ..errors import NoIntersection
from .monodromy import two_layer_feasible

P = weyl.NAMED_POINTS

# Chamber planes as (normal, offset): normal . p + offset == 0 on the face.
_CHAMBER_PLANES = [
    (np.array([0.0, 0.0, 1.0]), 0.0),
    (np.array([0.0, 1.0, -1.0]), 0.0),
    (np.array([1.0, -1.0, 0.0]), 0.0),
    (np.array([1.0, 1.0, 0.0]), -1.0),
]


def _on_chamber_face(points, tol=1e-12):
    return any(np.all(np.abs(points @ n + off) <= tol) for n, off in _CHAMBER_PLANES)


class Tetrahedron:
    """Four chamber points plus their outward half-space description."""

    def __init__(self, vertices):
        v = np.array([np.asarray(p, dtype=float) for p in vertices])
        if v.shape != (4, 3):
            raise ValueError("a tetrahedron needs four 3D vertices")
        vol = abs(np.linalg.det(v[1:] - v[0])) / 6.0
        if vol <= 1e-12:
            raise ValueError("degenerate tetrahedron")
        self.vertices = v
        self.volume = vol
        normals, offsets, internal = [], [], []
        for face in combinations(range(4), 3):
            (other,) = set(range(4)) - set(face)
            a, b, c = v[list(face)]
            n = np.cross(b - a, c - a)
            n = n / np.linalg.norm(n)
            off = -n @ a
            if n @ v[other] + off > 0:
                n, off = -n, -off
            normals.append(n)
            offsets.append(off)
            internal.append(not _on_chamber_face(v[list(face)]))
        self.normals = np.array(normals)
        self.offsets = np.array(offsets)
        self.internal_faces = np.array(internal)

    def signed_distances(self, points):
        p = np.atleast_2d(np.asarray(points, dtype=float))
        return p @ self.normals.T + self.offsets

    def interior(self, points, eps=TOL.region):
        """Membership in the part of the tetrahedron that is open inside the chamber.

        Faces interior to the chamber are excluded (strict by ``eps``); faces on
        the chamber boundary are included.
        """
        s = self.signed_distances(points)
        strict = np.where(self.internal_faces, s < -eps, s <= eps)
        return np.all(strict, axis=1)

    def contains_closed(self, points, eps=TOL.region):
        return np.all(self.signed_distances(points) <= eps, axis=1)

    def barycentric(self, points):
        p = np.atleast_2d(np.asarray(points, dtype=float))
        t = (self.vertices[1:] - self.vertices[0]).T
        lam = np.linalg.solve(t, (p - self.vertices[0]).T).T
        return np.column_stack([1 - lam.sum(axis=1), lam])

    def to_json(self):
        return [list(map(float, p)) for p in self.vertices]


def _bottom_images(points):
    """Points plus their ``(1 - x, y, 0)`` images on the identified bottom face."""
    p = np.atleast_2d(np.asarray(points, dtype=float))
    q = p.copy()
    q[:, 0] = 1.0 - q[:, 0]
    return p, q


@dataclass
class Region:
    """Chamber region defined by its complement: a union of tetrahedra."""

    name: str
    complement_tetrahedra: list = field(default_factory=list)

    def contains_batch(self, points, eps=TOL.region):
        p, q = _bottom_images(points)
        on_bottom = np.abs(p[:, 2]) <= eps
        outside = np.zeros(len(p), dtype=bool)
        for t in self.complement_tetrahedra:
            outside |= t.interior(p, eps)
            outside |= on_bottom & t.interior(q, eps)
        return ~outside

    def contains(self, c, eps=TOL.region):
        return bool(self.contains_batch([c], eps)[0])

    def to_json(self):
        return {"name": self.name, "kind": "complement",
                "tetrahedra": [t.to_json() for t in self.complement_tetrahedra]}


@dataclass
class ConvexRegion:
    """Closed convex polyhedron given by its vertices (e.g. perfect entanglers)."""

    name: str
    vertices: np.ndarray

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        eq = ConvexHull(self.vertices).equations
        self._eq = np.unique(np.round(eq, 12), axis=0)

    def contains_batch(self, points, eps=TOL.region):
        p = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all(p @ self._eq[:, :3].T + self._eq[:, 3] <= eps, axis=1)

    def contains(self, c, eps=TOL.region):
        return bool(self.contains_batch([c], eps)[0])

    def to_json(self):
        return {"name": self.name, "kind": "convex",
                "vertices": [list(map(float, p)) for p in self.vertices]}


def region_from_json(obj):
    if obj.get("kind", "complement") == "convex":
        return ConvexRegion(obj["name"], np.array(obj["vertices"]))
    return Region(obj["name"], [Tetrahedron(v) for v in obj["tetrahedra"]])


def dump_regions(regions, path):
    with open(path, "w") as fh:
        json.dump([r.to_json() for r in regions], fh, indent=2)


def load_regions(path):
    with open(path) as fh:
        return [region_from_json(o) for o in json.load(fh)]


S_SWAP3 = Region("s_swap3", [
    Tetrahedron([P["I0"], P["CZ"], (0.25, 0.25, 0.0), (1 / 6, 1 / 6, 1 / 6)]),
    Tetrahedron([P["CZ"], P["I1"], (0.75, 0.25, 0.0), (5 / 6, 1 / 6, 1 / 6)]),
    Tetrahedron([P["SWAP"], (0.5, 1 / 6, 1 / 6), (1 / 6, 1 / 6, 1 / 6), (1 / 3, 1 / 3, 1 / 6)]),
    Tetrahedron([P["SWAP"], (0.5, 1 / 6, 1 / 6), (5 / 6, 1 / 6, 1 / 6), (2 / 3, 1 / 3, 1 / 6)]),
])

S_CNOT2 = Region("s_cnot2", [
    Tetrahedron([P["I0"], (0.25, 0.0, 0.0), (0.25, 0.25, 0.0), P["SQRT_SWAP"]]),
    Tetrahedron([P["I1"], (0.75, 0.0, 0.0), (0.75, 0.25, 0.0), P["SQRT_SWAP_DAG"]]),
    Tetrahedron([P["SWAP"], P["SQRT_SWAP"], P["SQRT_SWAP_DAG"], (0.5, 0.5, 0.25)]),
])

PE_REGION = ConvexRegion("pe", weyl.PE_VERTICES)

REGIONS = {"s_swap3": S_SWAP3, "s_cnot2": S_CNOT2, "pe": PE_REGION}


# ---------------------------------------------------------------------------
# SWAP / CNOT depth queries


def mirror_point(c) -> weyl.CanonicalCoordinate:
    """The unique class that completes ``c`` to a two-layer SWAP."""
    x, y, z = c
    return weyl.canonicalize((0.5 - x, 0.5 - y, 0.5 - z))


class SwapLayers(enum.IntEnum):
    ONE = 1
    TWO = 2
    THREE = 3
    MORE_THAN_3 = 4


_L0 = (np.array(P["B"]), np.array(P["SQRT_SWAP"]))
_L1 = (np.array(P["B"]), np.array(P["SQRT_SWAP_DAG"]))


def _segment_distance(p, seg):
    a, b = seg
    d = b - a
    t = np.clip((p - a) @ d / (d @ d), 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * d)))


def on_two_layer_swap_segments(c, eps=TOL.region) -> bool:
    p = np.asarray(weyl.canonicalize(c), dtype=float)
    images = [p]
    if abs(p[2]) <= eps:
        images.append(np.array([1 - p[0], p[1], p[2]]))
    return any(_segment_distance(q, s) <= eps for q in images for s in (_L0, _L1))


def swap_min_layers(g, eps=TOL.region) -> SwapLayers:
    g = weyl.canonicalize(g)
    if weyl.weyl_distance(g, P["SWAP"]) <= eps:
        return SwapLayers.ONE
    if on_two_layer_swap_segments(g, eps):
        return SwapLayers.TWO
    if S_SWAP3.contains(g, eps):
        return SwapLayers.THREE
    return SwapLayers.MORE_THAN_3


def swap3_by_theory(g, eps=TOL.geometry) -> bool:
    """S_SWAP,3 membership from the inequality system: mirror(g) from two g layers."""
    return two_layer_feasible(mirror_point(g), g, g, eps)


def cnot_two_layer(g, eps=TOL.region) -> bool:
    return S_CNOT2.contains(weyl.canonicalize(g), eps)


# ---------------------------------------------------------------------------
# Volumes


def region_volume(region, n_samples=1_000_000, seed=0, *, chunk=100_000, jobs=1):
    """Monte-Carlo fraction of the chamber covered by ``region``.

    Chunk ``i`` draws from ``SeedSequence(seed, spawn_key=(i,))`` so the
    estimate does not depend on ``jobs``.

    Returns:
        (fraction, standard_error)
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    sizes = [chunk] * (n_samples // chunk)
    if n_samples % chunk:
        sizes.append(n_samples % chunk)

    def work(i):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        pts = weyl.sample_chamber(sizes[i], rng)
        return int(np.count_nonzero(region.contains_batch(pts)))

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            hits = sum(ex.map(work, range(len(sizes))))
    else:
        hits = sum(work(i) for i in range(len(sizes)))
    frac = hits / n_samples
    return frac, float(np.sqrt(frac * (1 - frac) / n_samples))


# ---------------------------------------------------------------------------
# Trajectory intersection


@dataclass(frozen=True)
class SelectionCriterion:
    name: str
    regions: tuple
    eps: float = TOL.region

    def __post_init__(self):
        if not self.regions:
            raise ValueError("a criterion needs at least one region")
        if not self.eps > 0:
            raise ValueError("eps must be positive")

    def accepts(self, c):
        return all(r.contains(c, self.eps) for r in self.regions)


CRITERION1 = SelectionCriterion("criterion1", (S_SWAP3,))
CRITERION2 = SelectionCriterion("criterion2", (S_SWAP3, S_CNOT2))


@dataclass(frozen=True)
class Hit:
    """First qualifying trajectory sample.

    ``crossing_duration`` is linearly interpolated between the last rejected
    and first accepted samples; ``interpolated`` tells whether it differs
    from ``sample.duration``.
    """

    sample: object
    index: int
    crossing_duration: float
    interpolated: bool


def _nearest_image(ref, c):
    imgs = weyl.orbit_images(c)
    return imgs[np.argmin(np.linalg.norm(imgs - np.asarray(ref), axis=1))]


def first_hit(traj, crit: SelectionCriterion, *, bisect_steps=40) -> Hit:
    """Earliest trajectory sample inside every region of ``crit``.

    Raises:
        NoIntersection: no sample qualifies.
    """
    samples = traj.samples if hasattr(traj, "samples") else traj
    prev = None
    for i, s in enumerate(samples):
        if crit.accepts(s.coordinate):
            if prev is None:
                return Hit(s, i, s.duration, False)
            a = np.asarray(prev.coordinate, dtype=float)
            b = _nearest_image(a, s.coordinate)
            lo, hi = 0.0, 1.0
            for _ in range(bisect_steps):
                mid = 0.5 * (lo + hi)
                if crit.accepts(weyl.canonicalize(a + mid * (b - a))):
                    hi = mid
                else:
                    lo = mid
            # crossings within eps of the accepted sample count as exact
            if hi > 1.0 - 1e-3:
                return Hit(s, i, s.duration, False)
            dur = prev.duration + hi * (s.duration - prev.duration)
            return Hit(s, i, dur, True)
        prev = s
    span = samples[-1].duration if len(samples) else 0.0
    raise NoIntersection(f"trajectory never enters {crit.name} (max duration {span})", span)
