"""Cartan trajectories of two fixed-frequency transmons joined by a tunable coupler.

Model (rotating-wave form, hbar = 1, angular frequencies in rad/s)::

    H(t) = sum_q [w_q n_q + a_q/2 n_q (n_q - 1)] + w_c(t) n_c + a_c/2 n_c (n_c - 1)
           - (g_ab a^dag b + g_bc b^dag c + g_ca c^dag a + h.c.)
    w_c(t) = w_c0 + delta sin(w_d t)

The Hamiltonian conserves the total excitation number, so propagation is
done sector by sector in a frame rotating at the mean qubit frequency.
The computational block only touches sectors with at most two excitations.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from itertools import product

import numpy as np
from scipy.optimize import minimize_scalar

from . import weyl
from .config import TOL
from .errors import (
    ExcessiveLeakage,
    FlatLandscape,
    NoSignChange,
    StateIdentificationAmbiguous,
    StepTooLarge,
    TruncationTooSmall,
)

TWO_PI = 2.0 * np.pi
GHZ = TWO_PI * 1e9
MHZ = TWO_PI * 1e6
KHZ = TWO_PI * 1e3
NS = 1e-9

MIN_LEVELS_Q = 3
MIN_LEVELS_C = 4
DEFAULT_DT = 2e-12
DEFAULT_SPACING = 1e-9

# delta = KAPPA * xi.  Fixed by calibrate_kappa() on DEFAULT_PAIR so that the
# low-drive (xi = 0.005) XY trajectory reaches sqrt(iSWAP) at 83.04 ns.
KAPPA = 1.3383e11
BASELINE_XI = 0.005
BASELINE_DURATION = 83.04e-9

# Computational states |n_a n_b> in the order 00, 01, 10, 11.
_COMP = ((0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0))


@dataclass(frozen=True)
class PairParams:
    """Physical parameters of one qubit pair and its coupler (rad/s)."""

    omega_a: float
    omega_b: float
    alpha_a: float = -250 * MHZ
    alpha_b: float = -250 * MHZ
    omega_c0: float | None = None
    alpha_c: float = 150 * MHZ
    g_ab: complex = 5 * MHZ
    g_bc: complex = 160 * MHZ
    g_ca: complex = 160 * MHZ
    levels_q: int = 3
    levels_c: int = 4

    def __post_init__(self):
        if self.omega_a == self.omega_b:
            raise ValueError("qubit frequencies must differ")

    @property
    def dim(self):
        return self.levels_q ** 2 * self.levels_c

    def with_bias(self, omega_c0):
        return replace(self, omega_c0=float(omega_c0))

    def to_json(self):
        d = asdict(self)
        for k in ("g_ab", "g_bc", "g_ca"):
            z = complex(d[k])
            d[k] = [z.real, z.imag]
        return d

    @classmethod
    def from_json(cls, d):
        d = dict(d)
        for k in ("g_ab", "g_bc", "g_ca"):
            if isinstance(d.get(k), (list, tuple)):
                re, im = d[k]
                d[k] = complex(re, im) if im else float(re)
        return cls(**d)


DEFAULT_PAIR = PairParams(omega_a=5.0 * GHZ, omega_b=3.0 * GHZ)


@dataclass(frozen=True)
class DrivePulse:
    """Rectangular flux modulation of the coupler."""

    delta: float
    omega_d: float
    duration: float = 0.0
    xi: float | None = None
    envelope: str = "rectangular"

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("duration must be non-negative")
        if self.envelope != "rectangular":
            raise ValueError("only rectangular envelopes are supported")

    @classmethod
    def from_xi(cls, xi, omega_d, duration=0.0, kappa=KAPPA):
        return cls(delta=kappa * xi, omega_d=omega_d, duration=duration, xi=xi)


# ---------------------------------------------------------------------------
# Hilbert space


def _check_levels(p):
    if p.levels_q < MIN_LEVELS_Q or p.levels_c < MIN_LEVELS_C:
        raise TruncationTooSmall(
            f"need levels_q >= {MIN_LEVELS_Q} and levels_c >= {MIN_LEVELS_C}, "
            f"got {p.levels_q}, {p.levels_c}"
        )


@lru_cache(maxsize=None)
def _space(levels_q, levels_c):
    """Bare basis states, ladder operators and excitation numbers."""
    dims = (levels_q, levels_q, levels_c)
    states = list(product(*(range(d) for d in dims)))
    eyes = [np.eye(d) for d in dims]
    ladders = []
    for k, d in enumerate(dims):
        mats = list(eyes)
        mats[k] = np.diag(np.sqrt(np.arange(1, d)), 1)
        ladders.append(np.kron(np.kron(mats[0], mats[1]), mats[2]))
    occ = np.array(states)
    n_exc = occ.sum(axis=1)
    index = {s: i for i, s in enumerate(states)}
    return states, index, ladders, occ, n_exc


def _static_parts(p):
    """(H with the coupler at zero frequency, coupler number diagonal)."""
    _check_levels(p)
    _, _, (a, b, c), occ, _ = _space(p.levels_q, p.levels_c)
    na, nb, nc = occ[:, 0], occ[:, 1], occ[:, 2]
    diag = (p.omega_a * na + p.alpha_a / 2 * na * (na - 1)
            + p.omega_b * nb + p.alpha_b / 2 * nb * (nb - 1)
            + p.alpha_c / 2 * nc * (nc - 1))
    hg = -(p.g_ab * a.T @ b + p.g_bc * b.T @ c + p.g_ca * c.T @ a)
    h = np.diag(diag).astype(complex) + hg + hg.conj().T
    return h, nc.astype(float)


def build_hamiltonian(p: PairParams, t=0.0, drive: DrivePulse | None = None):
    """Full Hamiltonian matrix (rad/s) at time ``t``.

    Raises:
        TruncationTooSmall: fewer than 3 qubit or 4 coupler levels.
    """
    if p.omega_c0 is None:
        raise ValueError("PairParams.omega_c0 is unset; run zero_zz_bias first")
    h, nc = _static_parts(p)
    wc = p.omega_c0
    if drive is not None:
        wc = wc + drive.delta * math.sin(drive.omega_d * t)
    return h + np.diag(wc * nc)


def _sectors(p, max_exc=None):
    _, _, _, _, n_exc = _space(p.levels_q, p.levels_c)
    top = n_exc.max() if max_exc is None else max_exc
    return [np.flatnonzero(n_exc == k) for k in range(top + 1)]


# ---------------------------------------------------------------------------
# Dressed states and static ZZ


@dataclass(frozen=True)
class DressedBasis:
    energies: np.ndarray  # E_00, E_01, E_10, E_11 (rad/s)
    vectors: np.ndarray  # dim x 4, columns in the same order
    overlaps: np.ndarray

    @property
    def omega_a(self):
        return self.energies[2] - self.energies[0]

    @property
    def omega_b(self):
        return self.energies[1] - self.energies[0]


def dressed_basis(p: PairParams) -> DressedBasis:
    """Eigenstates of the undriven Hamiltonian with largest bare overlap.

    Raises:
        StateIdentificationAmbiguous: a computational state has no dressed
            partner with overlap above 1/2.
    """
    h = build_hamiltonian(p)
    _, index, _, _, _ = _space(p.levels_q, p.levels_c)
    sectors = _sectors(p, 2)
    vecs = np.zeros((p.dim, 4), dtype=complex)
    energies, overlaps = np.zeros(4), np.zeros(4)
    for col, s in enumerate(_COMP):
        sec = sectors[sum(s)]
        e, v = np.linalg.eigh(h[np.ix_(sec, sec)])
        row = int(np.flatnonzero(sec == index[s])[0])
        ov = np.abs(v[row]) ** 2
        k = int(np.argmax(ov))
        if ov[k] <= 0.5:
            raise StateIdentificationAmbiguous(
                f"bare state {s} has maximal dressed overlap {ov[k]:.3f}"
            )
        vecs[sec, col] = v[:, k] * np.exp(-1j * np.angle(v[row, k]))
        energies[col], overlaps[col] = e[k], ov[k]
    return DressedBasis(energies, vecs, overlaps)


def static_zz(p: PairParams) -> float:
    """E_11 - E_10 - E_01 + E_00 of the dressed states, in rad/s."""
    e = dressed_basis(p).energies
    return float(e[3] - e[2] - e[1] + e[0])


def _zz_at(p, wc):
    return static_zz(p.with_bias(wc))


def _bisect_zz(p, lo, hi, tol):
    flo = _zz_at(p, lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = _zz_at(p, mid)
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def zero_zz_bias(p: PairParams, bracket=None, *, tol=100 * TWO_PI, threshold=1 * KHZ,
                 n_scan=120):
    """Coupler DC frequency between the qubits where static ZZ vanishes.

    Args:
        p: pair parameters (``omega_c0`` is ignored).
        bracket: optional ``(lo, hi)`` in rad/s with a sign change of ZZ.
            Without it the open interval between the qubits is scanned and
            the lowest genuine root is returned (the branch below the
            coupler two-photon resonance, which every pair has).
        tol: bisection width in rad/s.
        threshold: |ZZ| a root must reach; sign changes across poles fail it.

    Raises:
        NoSignChange: no acceptable root.
    """
    lo_q, hi_q = sorted((p.omega_a, p.omega_b))
    if bracket is not None:
        lo, hi = sorted(bracket)
        if np.sign(_zz_at(p, lo)) == np.sign(_zz_at(p, hi)):
            raise NoSignChange(f"static ZZ has one sign on [{lo:.6g}, {hi:.6g}] rad/s")
        root = _bisect_zz(p, lo, hi, tol)
        if abs(_zz_at(p, root)) > threshold:
            raise NoSignChange("sign change in bracket is a pole, not a root")
        return root
    margin = 0.02 * (hi_q - lo_q)
    grid = np.linspace(lo_q + margin, hi_q - margin, n_scan)
    vals = []
    for w in grid:
        try:
            vals.append(_zz_at(p, w))
        except StateIdentificationAmbiguous:
            vals.append(np.nan)
    roots = []
    for i in range(n_scan - 1):
        a, b = vals[i], vals[i + 1]
        if np.isfinite(a) and np.isfinite(b) and np.sign(a) != np.sign(b):
            try:
                r = _bisect_zz(p, grid[i], grid[i + 1], tol)
                if abs(_zz_at(p, r)) <= threshold:
                    roots.append(r)
            except StateIdentificationAmbiguous:
                continue  # an avoided crossing, not a root
    if not roots:
        raise NoSignChange("static ZZ has no zero between the qubit frequencies")
    return float(min(roots))


def biased(p: PairParams) -> PairParams:
    """``p`` with its coupler at the zero-ZZ point (kept if already set)."""
    return p if p.omega_c0 is not None else p.with_bias(zero_zz_bias(p))


# ---------------------------------------------------------------------------
# Propagation


def _frame(p):
    return 0.5 * (p.omega_a + p.omega_b)


def _ordered_product(mats):
    """``mats[-1] @ ... @ mats[0]`` by pairwise reduction."""
    while len(mats) > 1:
        tail = mats[-1:] if len(mats) % 2 else None
        even = mats[: len(mats) - (len(mats) % 2)]
        mats = even[1::2] @ even[0::2]
        if tail is not None:
            mats = np.concatenate([mats, tail])
    return mats[0]


class _SectorPropagator:
    """Rotating-frame propagator restricted to a set of excitation sectors."""

    def __init__(self, p, drive, dt, max_exc=None, t0=0.0):
        self.p, self.drive = p, drive
        h, nc = _static_parts(p)
        wr = _frame(p)
        _, _, _, _, n_exc = _space(p.levels_q, p.levels_c)
        h = h + np.diag(p.omega_c0 * nc - wr * n_exc)
        self.sectors = _sectors(p, max_exc)
        self.blocks = [(h[np.ix_(s, s)], nc[s]) for s in self.sectors]
        self.u = [np.eye(len(s), dtype=complex) for s in self.sectors]
        self.t0 = self.t = t0
        self.dt = dt
        wmax = max(np.max(np.abs(np.linalg.eigvalsh(b))) for b, _ in self.blocks)
        wmax += abs(drive.delta) * (p.levels_c - 1) if drive is not None else 0.0
        limit = TWO_PI / (20.0 * wmax) if wmax > 0 else np.inf
        if dt > limit:
            raise StepTooLarge(f"dt = {dt:.3g} s exceeds resolution limit {limit:.3g} s")

    def advance(self, duration, chunk=2000):
        if duration <= 0:
            return
        n = max(1, int(math.ceil(duration / self.dt - 1e-9)))
        h = duration / n
        done = 0
        while done < n:
            m = min(chunk, n - done)
            tm = self.t + (done + np.arange(m) + 0.5) * h
            if self.drive is not None and self.drive.delta != 0:
                mod = self.drive.delta * np.sin(self.drive.omega_d * tm)
            else:
                mod = np.zeros(m)
            for k, (h0, nc) in enumerate(self.blocks):
                if len(nc) == 1:
                    phase = np.exp(-1j * (h0[0, 0].real * m * h + nc[0] * mod.sum() * h))
                    self.u[k] = phase * self.u[k]
                    continue
                hs = h0[None] + mod[:, None, None] * np.diag(nc)[None]
                w, v = np.linalg.eigh(hs)
                steps = (v * np.exp(-1j * w * h)[:, None, :]) @ v.conj().transpose(0, 2, 1)
                self.u[k] = _ordered_product(steps) @ self.u[k]
            done += m
        self.t += duration

    def lab(self):
        """Assembled lab-frame propagator (zero outside the tracked sectors)."""
        _, _, _, _, n_exc = _space(self.p.levels_q, self.p.levels_c)
        wr = _frame(self.p)
        out = np.zeros((self.p.dim, self.p.dim), dtype=complex)
        for s, u in zip(self.sectors, self.u):
            out[np.ix_(s, s)] = u
        left = np.exp(-1j * wr * n_exc * self.t)
        right = np.exp(1j * wr * n_exc * self.t0)
        return left[:, None] * out * right[None, :]


def propagate(p: PairParams, drive: DrivePulse | None, duration, dt=DEFAULT_DT, *, t0=0.0):
    """Time-ordered propagator from ``t0`` to ``t0 + duration``.

    Piecewise-constant midpoint exponentials; the step is shrunk so an
    integer number of equal steps fits the interval.

    Raises:
        StepTooLarge: ``dt`` above 2 pi / (20 max|eigenfrequency|) in the
            rotating frame.
    """
    p = biased(p)
    prop = _SectorPropagator(p, drive, dt, t0=t0)
    prop.advance(duration)
    return prop.lab()


def effective_unitary(propagator, p: PairParams, duration, *, dressed=None,
                      max_leakage=TOL.leakage, check=True):
    """Computational-subspace gate of a full propagator.

    The 4x4 block is taken in the dressed basis and the free evolution of
    the dressed qubit frequencies (plus a global phase) is removed.

    Returns:
        (unitary, leakage) with ``leakage = 1 - tr(P^dag P) / 4`` and the
        unitary the polar factor of the block ``P``.

    Raises:
        ExcessiveLeakage: leakage above ``max_leakage`` (when ``check``).
    """
    p = biased(p)
    db = dressed if dressed is not None else dressed_basis(p)
    blk = db.vectors.conj().T @ propagator @ db.vectors
    e = db.energies
    frame = np.array([e[0], e[0] + db.omega_b, e[0] + db.omega_a,
                      e[0] + db.omega_a + db.omega_b])
    blk = np.exp(1j * frame * duration)[:, None] * blk
    leakage = float(max(0.0, 1.0 - np.real(np.trace(blk.conj().T @ blk)) / 4.0))
    if check and leakage > max_leakage:
        raise ExcessiveLeakage(leakage)
    u, _, vh = np.linalg.svd(blk)
    return u @ vh, leakage


# ---------------------------------------------------------------------------
# Drive frequency


def _period_propagator(h0, nc, delta, omega_d, substeps):
    period = TWO_PI / omega_d
    h = period / substeps
    tm = (np.arange(substeps) + 0.5) * h
    hs = h0[None] + (delta * np.sin(omega_d * tm))[:, None, None] * np.diag(nc)[None]
    w, v = np.linalg.eigh(hs)
    steps = (v * np.exp(-1j * w * h)[:, None, :]) @ v.conj().transpose(0, 2, 1)
    return _ordered_product(steps), period


def swap_transfer(p: PairParams, delta, omega_d, window=2e-6, substeps=200):
    """Largest |01> -> |10> population over stroboscopic times up to ``window``.

    Uses the one-period propagator of the single-excitation sector and its
    powers (the drive is periodic).
    """
    p = biased(p)
    db = dressed_basis(p)
    h, nc = _static_parts(p)
    sec = _sectors(p, 1)[1]
    h0 = h[np.ix_(sec, sec)] + np.diag(p.omega_c0 * nc[sec])
    u, period = _period_propagator(h0, nc[sec], delta, omega_d, substeps)
    w, v = np.linalg.eig(u)
    ket01 = db.vectors[sec, 1]
    bra10 = db.vectors[sec, 2].conj()
    coef = (bra10 @ v) * np.linalg.solve(v, ket01)
    k = np.arange(int(window / period) + 1)
    amp = (coef[None, :] * w[None, :] ** k[:, None]).sum(axis=1)
    return float(np.max(np.abs(amp) ** 2))


def find_drive_frequency(p: PairParams, xi, *, kappa=KAPPA, span=25 * MHZ,
                         step=0.25 * MHZ, window=2e-6, return_transfer=False):
    """Modulation frequency with maximal qubit-qubit population swap.

    Grid search on ``[w0 - span, w0 + span]`` around the dressed qubit
    detuning ``w0``, refined by a bounded scalar search.

    Raises:
        FlatLandscape: best transfer below 1/2.
    """
    p = biased(p)
    db = dressed_basis(p)
    w0 = abs(db.omega_a - db.omega_b)
    delta = kappa * xi
    grid = w0 + np.arange(-span, span + step / 2, step)
    vals = np.array([swap_transfer(p, delta, w, window) for w in grid])
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda w: -swap_transfer(p, delta, w, window),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1 * KHZ})
    wd, best = (res.x, -res.fun) if -res.fun >= vals[i] else (grid[i], vals[i])
    if best < 0.5:
        raise FlatLandscape(f"maximal population transfer {best:.3f} < 0.5")
    return (float(wd), float(best)) if return_transfer else float(wd)


# ---------------------------------------------------------------------------
# Trajectories


@dataclass
class TrajectorySample:
    duration: float
    unitary: np.ndarray
    coordinate: weyl.CanonicalCoordinate
    leakage: float

    def to_json(self):
        return {
            "duration": self.duration,
            "unitary": unitary_to_json(self.unitary),
            "coordinate": list(self.coordinate),
            "leakage": self.leakage,
        }

    @classmethod
    def from_json(cls, d):
        return cls(float(d["duration"]), unitary_from_json(d["unitary"]),
                   weyl.CanonicalCoordinate(*d["coordinate"]), float(d["leakage"]))


@dataclass
class Trajectory:
    pair_id: str
    drive: DrivePulse
    samples: list = field(default_factory=list)
    spacing: float = DEFAULT_SPACING
    params: PairParams | None = None

    @property
    def durations(self):
        return np.array([s.duration for s in self.samples])

    @property
    def coordinates(self):
        return np.array([tuple(s.coordinate) for s in self.samples])

    def to_json(self):
        return {
            "pair_id": self.pair_id,
            "drive": asdict(self.drive),
            "spacing": self.spacing,
            "params": self.params.to_json() if self.params else None,
            "samples": [s.to_json() for s in self.samples],
        }

    @classmethod
    def from_json(cls, d):
        return cls(
            pair_id=d["pair_id"],
            drive=DrivePulse(**d["drive"]),
            samples=[TrajectorySample.from_json(s) for s in d["samples"]],
            spacing=float(d["spacing"]),
            params=PairParams.from_json(d["params"]) if d.get("params") else None,
        )


def unitary_to_json(u):
    return [[float(z.real), float(z.imag)] for z in np.asarray(u).ravel()]


def unitary_from_json(obj):
    arr = np.array([complex(re, im) for re, im in obj])
    n = int(round(math.sqrt(arr.size)))
    return arr.reshape(n, n)


def sample_trajectory(p: PairParams, drive: DrivePulse, t_max, spacing=DEFAULT_SPACING,
                      dt=DEFAULT_DT, *, pair_id="pair", max_leakage=None):
    """Effective gate every ``spacing`` seconds up to ``t_max``.

    Propagation is incremental: each sample extends the previous one.
    Only the zero-, one- and two-excitation sectors are integrated, which is
    all the computational block needs.  ``max_leakage`` (optional) stops
    the trajectory at the first sample leaking more than that.
    """
    if spacing < dt:
        raise ValueError("spacing must be at least dt")
    p = biased(p)
    db = dressed_basis(p)
    prop = _SectorPropagator(p, drive, dt, max_exc=2)
    n = int(math.floor(t_max / spacing + 1e-9))
    traj = Trajectory(pair_id, drive, [], spacing, p)
    for i in range(1, n + 1):
        prop.advance(spacing)
        t = i * spacing
        u, leak = effective_unitary(prop.lab(), p, t, dressed=db, check=False)
        if max_leakage is not None and leak > max_leakage:
            break
        traj.samples.append(TrajectorySample(t, u, weyl.cartan_coordinates(u), leak))
    return traj


def first_perfect_entangler(traj: Trajectory):
    """Duration of the first sample that is a perfect entangler, or None."""
    for s in traj.samples:
        if weyl.is_perfect_entangler(s.coordinate, TOL.region):
            return s.duration
    return None


def simulate_xi(p: PairParams, xi, t_max, spacing=DEFAULT_SPACING, dt=DEFAULT_DT, *,
                kappa=KAPPA, pair_id="pair", max_leakage=None):
    """Bias the coupler, find the drive frequency and sample the trajectory."""
    p = biased(p)
    wd = find_drive_frequency(p, xi, kappa=kappa)
    drive = DrivePulse.from_xi(xi, wd, duration=t_max, kappa=kappa)
    return sample_trajectory(p, drive, t_max, spacing, dt, pair_id=pair_id,
                             max_leakage=max_leakage)


def calibrate_kappa(p: PairParams = DEFAULT_PAIR, xi=BASELINE_XI,
                    target=BASELINE_DURATION, probe_delta=100 * MHZ, iterations=2):
    """Flux-to-frequency constant putting sqrt(iSWAP) at ``target`` for ``xi``.

    The XY coordinate grows linearly in time for weak drives, so the probe
    delta is rescaled by the ratio of the reached time to the target.
    """
    p = biased(p)
    delta = probe_delta
    for _ in range(iterations):
        kappa = delta / xi
        wd = find_drive_frequency(p, xi, kappa=kappa)
        drive = DrivePulse(delta, wd, xi=xi)
        t_probe = 0.5 * target
        traj = sample_trajectory(p, drive, t_probe * delta / probe_delta + 5 * NS,
                                 spacing=1 * NS)
        t = traj.durations
        x = np.array([0.5 * (c[0] + c[1]) if c[0] <= 0.5 else 0.5 * (1 - c[0] + c[1])
                      for c in traj.coordinates])
        slope = np.polyfit(t, x, 1)[0]
        reached = 0.25 / slope
        delta = delta * reached / target
    return delta / xi


# ---------------------------------------------------------------------------
# Devices


@dataclass
class Qubit:
    index: int
    row: int
    col: int
    color: int  # 0 = high-frequency population, 1 = low
    omega: float
    T: float


@dataclass
class DeviceModel:
    rows: int
    cols: int
    seed: int
    qubits: list
    edges: dict  # (i, j) with i < j -> PairParams
    meta: dict = field(default_factory=dict)

    @property
    def n_qubits(self):
        return len(self.qubits)

    def edge_list(self):
        return sorted(self.edges)

    def index(self, row, col):
        return row * self.cols + col

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "seed": self.seed,
            "meta": self.meta,
            "qubits": [asdict(q) for q in self.qubits],
            "edges": [{"qubits": list(e), "params": self.edges[e].to_json()}
                      for e in self.edge_list()],
        }

    @classmethod
    def from_json(cls, d):
        return cls(
            rows=d["rows"], cols=d["cols"], seed=d["seed"],
            qubits=[Qubit(**q) for q in d["qubits"]],
            edges={tuple(e["qubits"]): PairParams.from_json(e["params"]) for e in d["edges"]},
            meta=d.get("meta", {}),
        )

    def dumps(self):
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def grid_edges(rows, cols):
    out = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                out.append((i, i + 1))
            if r + 1 < rows:
                out.append((i, i + cols))
    return sorted(out)


def generate_device(rows, cols, seed, freq_mean_lo=3.0 * GHZ, freq_mean_hi=5.0 * GHZ,
                    rel_std=0.05, T=80e-6, *, pair_defaults=None, bias=False):
    """Grid device with checkerboard high/low frequency qubits.

    Args:
        rows, cols: grid size.
        seed: RNG seed; the device is a deterministic function of it.
        freq_mean_lo, freq_mean_hi: means of the two frequency populations (rad/s).
        rel_std: relative standard deviation of each population.
        T: coherence time of every qubit (s).
        pair_defaults: keyword overrides for every edge's PairParams.
        bias: compute each edge's zero-ZZ coupler bias now (otherwise lazily).
    """
    if rows * cols < 2:
        raise ValueError("device needs at least two qubits")
    rng = np.random.default_rng(seed)
    qubits = []
    for r in range(rows):
        for c in range(cols):
            color = (r + c) % 2
            mean = freq_mean_hi if color == 0 else freq_mean_lo
            qubits.append(Qubit(r * cols + c, r, c, color,
                                float(rng.normal(mean, rel_std * mean)), T))
    extra = dict(pair_defaults or {})
    edges = {}
    for i, j in grid_edges(rows, cols):
        hi, lo = sorted((qubits[i], qubits[j]), key=lambda q: -q.omega)
        pp = PairParams(omega_a=hi.omega, omega_b=lo.omega, **extra)
        edges[(i, j)] = biased(pp) if bias else pp
    return DeviceModel(rows, cols, seed, qubits, edges)
