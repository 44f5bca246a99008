"""Per-edge basis-gate selection on simulated trajectories.

The baseline picks the sample closest to sqrt(iSWAP) on a weakly driven
(XY-like) trajectory; the two criteria take the earliest sample of a strongly
driven trajectory inside S_SWAP3 (criterion 1) or inside S_SWAP3 and S_CNOT2
(criterion 2).
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import hamsim, weyl
from .config import TOL
from .errors import CartanBasisError, NoIntersection
from .feasibility import CRITERION1, CRITERION2, SelectionCriterion, first_hit
from .fidelity import CoherenceParams, gate_coherence_limit, synthesized_duration
from .hamsim import TrajectorySample, unitary_from_json, unitary_to_json

log = logging.getLogger(__name__)

BASELINE = "baseline_sqiswap"
SQRT_ISWAP_POINT = (0.25, 0.25, 0.0)
BASELINE_RADIUS = 0.02
MAX_LEAKAGE = TOL.leakage
CRITERIA = {"criterion1": CRITERION1, "criterion2": CRITERION2}
DEFAULT_XI = {BASELINE: hamsim.BASELINE_XI, "criterion1": 0.04, "criterion2": 0.04}


def resolve_criterion(crit):
    """Map a name (``baseline``, ``criterion1``, ``criterion2``) to its criterion."""
    if isinstance(crit, SelectionCriterion):
        return crit
    if crit in ("baseline", BASELINE):
        return BASELINE
    try:
        return CRITERIA[crit]
    except KeyError:
        raise ValueError(f"unknown criterion {crit!r}") from None


def criterion_id(crit):
    crit = resolve_criterion(crit)
    if crit == BASELINE:
        return BASELINE
    return crit.name if crit.name in CRITERIA else "custom"


def default_t_max(xi):
    """Trajectory length that comfortably covers sqrt(iSWAP) at drive ``xi``."""
    return 2.0 * hamsim.BASELINE_DURATION * hamsim.BASELINE_XI / xi + 20e-9


@dataclass
class BasisAssignment:
    """Basis gate chosen for one edge.

    ``sample.unitary`` is stored in ``(edge[0], edge[1])`` operand order.
    Durations are in seconds.
    """

    edge: tuple
    criterion: str
    sample: TrajectorySample
    crossing_duration: float | None = None
    xi: float | None = None

    @property
    def duration(self):
        return self.sample.duration

    @property
    def coordinate(self):
        return self.sample.coordinate

    @property
    def unitary(self):
        return self.sample.unitary

    def to_json(self):
        return {"edge": list(self.edge), "criterion": self.criterion,
                "sample": self.sample.to_json(),
                "crossing_duration": self.crossing_duration, "xi": self.xi}

    @classmethod
    def from_json(cls, d):
        return cls(tuple(d["edge"]), d["criterion"], TrajectorySample.from_json(d["sample"]),
                   d.get("crossing_duration"), d.get("xi"))


def _usable(samples, max_leakage):
    return [s for s in samples if s.leakage <= max_leakage]


def select_basis(traj, crit, *, edge=None, max_leakage=MAX_LEAKAGE) -> BasisAssignment:
    """Choose the basis gate on one trajectory.

    Args:
        traj: a ``Trajectory`` (or list of samples).
        crit: ``"baseline"``, ``"criterion1"``, ``"criterion2"`` or a
            SelectionCriterion.
        edge: edge id recorded in the assignment.
        max_leakage: samples leaking more than this are never chosen.

    Raises:
        NoIntersection: no usable sample qualifies; carries the trajectory's
            maximal duration.
    """
    crit = resolve_criterion(crit)
    samples = traj.samples if hasattr(traj, "samples") else list(traj)
    drive = getattr(traj, "drive", None)
    xi = getattr(drive, "xi", None)
    usable = _usable(samples, max_leakage)
    span = samples[-1].duration if samples else 0.0
    if crit == BASELINE:
        if not usable:
            raise NoIntersection("no usable trajectory samples", span)
        dist = [weyl.weyl_distance(s.coordinate, SQRT_ISWAP_POINT) for s in usable]
        k = int(np.argmin(dist))
        if dist[k] > BASELINE_RADIUS:
            raise NoIntersection(
                f"closest sample is {dist[k]:.3g} from sqrt(iSWAP) (max duration {span})", span)
        return BasisAssignment(edge, BASELINE, usable[k], usable[k].duration, xi)
    try:
        hit = first_hit(usable, crit)
    except NoIntersection as exc:
        raise NoIntersection(str(exc), span) from None
    return BasisAssignment(edge, criterion_id(crit), hit.sample, hit.crossing_duration, xi)


def to_edge_order(u, edge, qubits):
    """Reorder a pair unitary (high-frequency qubit first) into edge order."""
    hi_first = qubits[edge[0]].omega >= qubits[edge[1]].omega
    if hi_first:
        return u
    return weyl.SWAP @ u @ weyl.SWAP


# ---------------------------------------------------------------------------
# Whole devices


def _simulate_edge(args):
    edge, params, xi, t_max, spacing, dt = args
    traj = hamsim.simulate_xi(params, xi, t_max, spacing, dt, pair_id=f"{edge[0]}-{edge[1]}",
                              max_leakage=None)
    return edge, traj


def simulate_device(device, xi, *, t_max=None, spacing=hamsim.DEFAULT_SPACING,
                    dt=hamsim.DEFAULT_DT, edges=None, jobs=1):
    """Trajectory of every edge at drive amplitude ``xi``.

    Returns:
        (trajectories, failures): dicts keyed by edge.  Unitaries are kept
        in the simulator's order (high-frequency qubit first).
    """
    t_max = default_t_max(xi) if t_max is None else t_max
    edges = device.edge_list() if edges is None else [tuple(e) for e in edges]
    work = [(e, device.edges[e], xi, t_max, spacing, dt) for e in edges]
    trajs, failures = {}, {}
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {e[0]: pool.submit(_simulate_edge, e) for e in work}
            for e, fut in futures.items():
                try:
                    trajs[e] = fut.result()[1]
                except CartanBasisError as exc:
                    failures[e] = f"{type(exc).__name__}: {exc}"
    else:
        for w in work:
            try:
                trajs[w[0]] = _simulate_edge(w)[1]
            except CartanBasisError as exc:
                failures[w[0]] = f"{type(exc).__name__}: {exc}"
    for e, msg in failures.items():
        log.warning("edge %s: trajectory failed: %s", e, msg)
    return trajs, failures


@dataclass
class DeviceSelection:
    """Assignments for every edge of a device under one criterion."""

    criterion: str
    assignments: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def basis_by_edge(self):
        return {e: a.unitary for e, a in sorted(self.assignments.items())}

    def durations_ns(self):
        return {e: a.duration * 1e9 for e, a in sorted(self.assignments.items())}

    def summary(self, cp: CoherenceParams | None = None, d_1q=20.0):
        """Mean durations (ns) and coherence-limited fidelities in gate-table shape.

        SWAP and CNOT durations use the analytic layer counts of each edge's
        basis gate.
        """
        from .synth import min_layers

        if not self.assignments:
            return {"criterion": self.criterion, "n_edges": 0}
        rows = []
        for a in self.assignments.values():
            d = a.duration * 1e9
            n_swap = min_layers(weyl.NAMED_POINTS["SWAP"], a.coordinate)
            n_cnot = min_layers(weyl.NAMED_POINTS["CNOT"], a.coordinate)
            rows.append((d, synthesized_duration(n_swap, d, d_1q),
                         synthesized_duration(n_cnot, d, d_1q)))
        rows = np.array(rows)
        fid = np.array([[gate_coherence_limit(x * 1e-9, cp) for x in r] for r in rows])
        m, mf = rows.mean(axis=0), fid.mean(axis=0)
        return {
            "criterion": self.criterion, "n_edges": len(self.assignments),
            "n_failures": len(self.failures),
            "basis_ns": float(m[0]), "swap_ns": float(m[1]), "cnot_ns": float(m[2]),
            "basis_fidelity": float(mf[0]), "swap_fidelity": float(mf[1]),
            "cnot_fidelity": float(mf[2]),
        }

    def to_json(self):
        return {
            "criterion": self.criterion,
            "meta": self.meta,
            "assignments": [self.assignments[e].to_json() for e in sorted(self.assignments)],
            "failures": [{"edge": list(e), "error": self.failures[e]}
                         for e in sorted(self.failures)],
        }

    @classmethod
    def from_json(cls, d):
        a = {tuple(x["edge"]): BasisAssignment.from_json(x) for x in d["assignments"]}
        f = {tuple(x["edge"]): x["error"] for x in d.get("failures", [])}
        return cls(d["criterion"], a, f, d.get("meta", {}))

    def dumps(self):
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def select_from_trajectories(device, trajectories, crit, *, failures=None,
                             max_leakage=MAX_LEAKAGE) -> DeviceSelection:
    """Apply ``crit`` to precomputed per-edge trajectories."""
    cid = criterion_id(crit)
    sel = DeviceSelection(cid, failures=dict(failures or {}))
    for e in sorted(trajectories):
        traj = trajectories[e]
        try:
            a = select_basis(traj, crit, edge=e, max_leakage=max_leakage)
        except NoIntersection as exc:
            sel.failures[e] = f"NoIntersection: {exc}"
            continue
        s = a.sample
        u = to_edge_order(s.unitary, e, device.qubits)
        a.sample = TrajectorySample(s.duration, u, weyl.cartan_coordinates(u), s.leakage)
        sel.assignments[e] = a
    return sel


def select_device(device, crit, *, xi=None, t_max=None, spacing=hamsim.DEFAULT_SPACING,
                  dt=hamsim.DEFAULT_DT, edges=None, jobs=1,
                  max_leakage=MAX_LEAKAGE) -> DeviceSelection:
    """Simulate every edge and select its basis gate.

    Args:
        device: DeviceModel.
        crit: criterion name or SelectionCriterion.
        xi: drive amplitude; defaults to 0.005 for the baseline and 0.04
            otherwise.
        jobs: worker processes for the per-edge simulations.

    Per-edge failures are recorded in ``failures`` and do not stop the run.
    """
    cid = criterion_id(crit)
    xi = DEFAULT_XI.get(cid, 0.04) if xi is None else xi
    trajs, failures = simulate_device(device, xi, t_max=t_max, spacing=spacing, dt=dt,
                                      edges=edges, jobs=jobs)
    sel = select_from_trajectories(device, trajs, crit, failures=failures,
                                   max_leakage=max_leakage)
    sel.meta.update({"xi": xi, "device_seed": device.seed})
    return sel
