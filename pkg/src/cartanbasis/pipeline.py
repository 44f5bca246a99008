"""File-based end-to-end pipeline: device -> trajectories -> basis -> cache ->
transpiled benchmarks -> fidelity report."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import hamsim, selector
from .circuit import CouplingMap, Circuit, by_name, lower, route, schedule
from .circuit.lowering import Lowerer
from .errors import CartanBasisError, StageError
from .fidelity import CoherenceParams, GateRow, circuit_fidelity, circuit_table, gate_table
from .synth import DecompositionCache, build_cache

log = logging.getLogger(__name__)

CRITERIA = ("baseline", "criterion1", "criterion2")
LABELS = {"baseline": selector.BASELINE, "criterion1": "criterion1", "criterion2": "criterion2"}


@dataclass
class PipelineConfig:
    """Everything that determines a pipeline run.

    Times are in seconds except ``d_1q_ns``.  ``out_dir`` and ``jobs`` do not
    enter the config hash.
    """

    seed: int = 7
    rows: int = 4
    cols: int = 4
    baseline_xi: float = hamsim.BASELINE_XI
    xi: float = 0.04
    criteria: tuple = CRITERIA
    benchmarks: tuple = ("bv5", "qft4", "qaoa6_0.33")
    out_dir: str = "out"
    device_path: str | None = None
    spacing: float = hamsim.DEFAULT_SPACING
    dt: float = hamsim.DEFAULT_DT
    restarts: int = 32
    T: float = 80e-6
    d_1q_ns: float = 20.0
    max_leakage: float = selector.MAX_LEAKAGE
    calibration_timestamp: float = 0.0
    jobs: int = 1
    overrides: dict = field(default_factory=dict)

    def hashed_fields(self):
        d = asdict(self)
        d.pop("out_dir")
        d.pop("jobs")
        d["criteria"] = list(self.criteria)
        d["benchmarks"] = list(self.benchmarks)
        return d

    @property
    def config_hash(self):
        blob = json.dumps(self.hashed_fields(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    @classmethod
    def from_json(cls, d):
        d = dict(d)
        for k in ("criteria", "benchmarks"):
            if k in d:
                d[k] = tuple(d[k])
        return cls(**d)


def _stamp(cfg, payload):
    return {"config_hash": cfg.config_hash, "seed": cfg.seed, **payload}


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    return path


def read_json(path, stage):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise StageError(stage, str(path), "file not found") from None
    except json.JSONDecodeError as exc:
        raise StageError(stage, str(path), f"invalid JSON: {exc}") from None


def transpile(circ: Circuit, device, selection, cache: DecompositionCache, *, d_1q_ns=20.0,
              restarts=32, seed=0, lowerer=None):
    """Route, lower and schedule ``circ`` on a device with selected basis gates.

    Returns:
        (routed, lowered, scheduled)
    """
    cm = CouplingMap.from_device(device)
    routed = route(circ, cm)
    lw = lowerer or Lowerer(selection.basis_by_edge(), cache, restarts=restarts, seed=seed)
    lowered = lw.lower(routed.circuit)
    sched = schedule(lowered, d_1q_ns, selection.durations_ns())
    return routed, lowered, sched


def _trajectory_csv(path, trajs):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["edge", "duration_ns", "tx", "ty", "tz", "leakage"])
        for e in sorted(trajs):
            for s in trajs[e].samples:
                w.writerow([f"{e[0]}-{e[1]}", f"{s.duration * 1e9:.3f}",
                            *(f"{v:.9f}" for v in s.coordinate), f"{s.leakage:.3e}"])


def run_pipeline(cfg: PipelineConfig):
    """Run every stage and write the artifacts under ``cfg.out_dir``.

    Returns:
        dict with the gate-table rows and circuit fidelities.

    Raises:
        StageError: tagged with the failing stage and artifact; files from
            earlier stages are kept.
    """
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "config.json", _stamp(cfg, {"config": cfg.hashed_fields()}))
    cp = CoherenceParams(cfg.T)

    # device
    if cfg.device_path:
        d = read_json(cfg.device_path, "device")
        device = hamsim.DeviceModel.from_json(d.get("device", d))
    else:
        try:
            device = hamsim.generate_device(cfg.rows, cfg.cols, cfg.seed, bias=True)
        except CartanBasisError as exc:
            raise StageError("device", "device.json", exc) from exc
    write_json(out / "device.json", _stamp(cfg, {"device": device.to_json()}))

    # trajectories, one set per drive amplitude
    needed = {}
    for c in cfg.criteria:
        xi = cfg.baseline_xi if c == "baseline" else cfg.xi
        needed.setdefault(xi, []).append(c)
    trajs = {}
    for xi in sorted(needed):
        log.info("simulating %d edges at xi=%g", len(device.edges), xi)
        t, fails = selector.simulate_device(device, xi, spacing=cfg.spacing, dt=cfg.dt,
                                            jobs=cfg.jobs)
        if not t:
            raise StageError("trajectories", f"xi={xi}", f"every edge failed: {fails}")
        trajs[xi] = (t, fails)
        _trajectory_csv(out / f"trajectories_xi{xi:g}.csv", t)

    # basis selection and decomposition caches
    selections, caches = {}, {}
    for c in cfg.criteria:
        xi = cfg.baseline_xi if c == "baseline" else cfg.xi
        t, fails = trajs[xi]
        sel = selector.select_from_trajectories(device, t, c, failures=fails,
                                                max_leakage=cfg.max_leakage)
        sel.meta.update({"xi": xi, "device_seed": device.seed})
        if not sel.assignments:
            raise StageError("basis", f"basis_{c}.json", f"no edge qualified: {sel.failures}")
        selections[c] = sel
        write_json(out / f"basis_{c}.json", _stamp(cfg, sel.to_json()))
        cache = build_cache(sel.basis_by_edge(), restarts=cfg.restarts, seed=cfg.seed,
                            timestamp=cfg.calibration_timestamp)
        caches[c] = cache
        write_json(out / f"cache_{c}.json", _stamp(cfg, cache.to_json()))

    # benchmarks
    results = {}
    for name in cfg.benchmarks:
        circ = by_name(name, seed=cfg.seed)
        results[name] = {}
        for c in cfg.criteria:
            sel = selections[c]
            if len(sel.assignments) != len(device.edges):
                log.warning("%s: %d edges without a basis gate", c, len(sel.failures))
            try:
                routed, lowered, sched = transpile(circ, device, sel, caches[c],
                                                   d_1q_ns=cfg.d_1q_ns, restarts=cfg.restarts,
                                                   seed=cfg.seed)
            except (CartanBasisError, KeyError) as exc:
                raise StageError("transpile", f"{name}/{c}", exc) from exc
            f = circuit_fidelity(sched, cp)
            results[name][c] = f
            write_json(out / "circuits" / f"{name}_{c}.json", _stamp(cfg, {
                "benchmark": name, "criterion": LABELS[c], "fidelity": f,
                "n_swaps": routed.n_swaps, "native_gates": lowered.count("native"),
                "schedule": sched.to_json()}))

    return write_report(cfg, out, selections, results, cp)


def write_report(cfg, out, selections, results, cp):
    rows = []
    for c, sel in selections.items():
        s = sel.summary(cp, cfg.d_1q_ns)
        rows.append(GateRow(LABELS[c], s["basis_ns"], s["swap_ns"], s["cnot_ns"]).fill(cp))
    crits = [c for c in cfg.criteria]
    named = {b: {LABELS[c]: v for c, v in r.items()} for b, r in results.items()}
    cols = [LABELS[c] for c in crits]
    (out / "gate_table.csv").write_text(gate_table(rows, "csv"))
    (out / "circuit_table.csv").write_text(circuit_table(named, cols, "csv"))
    md = [f"# Basis-gate comparison (config {cfg.config_hash}, seed {cfg.seed})", "",
          "## Gate durations and coherence-limited fidelities", "", gate_table(rows),
          "## Coherence-limited circuit fidelities", "", circuit_table(named, cols)]
    (out / "report.md").write_text("\n".join(md))
    report = _stamp(cfg, {
        "gates": [asdict(r) for r in rows],
        "circuits": named,
    })
    write_json(out / "report.json", report)
    return report


def regenerate_report(out_dir, cfg: PipelineConfig | None = None):
    """Rebuild the report from artifacts already written by :func:`run_pipeline`."""
    out = Path(out_dir)
    if cfg is None:
        cfg = PipelineConfig.from_json({**read_json(out / "config.json", "report")["config"],
                                        "out_dir": str(out)})
    cp = CoherenceParams(cfg.T)
    selections, results = {}, {}
    for c in cfg.criteria:
        selections[c] = selector.DeviceSelection.from_json(
            read_json(out / f"basis_{c}.json", "report"))
    for name in cfg.benchmarks:
        results[name] = {c: read_json(out / "circuits" / f"{name}_{c}.json", "report")["fidelity"]
                         for c in cfg.criteria}
    return write_report(cfg, out, selections, results, cp)
