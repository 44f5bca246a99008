"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 stage failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import re
import sys
from pathlib import Path

import numpy as np

from . import hamsim, selector, weyl
from .errors import CartanBasisError, StageError

EXIT_OK, EXIT_USAGE, EXIT_STAGE = 0, 2, 3

_UNITS = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12}


def parse_time(text):
    """``"200ns"``, ``"1.5us"`` or plain seconds -> seconds."""
    m = re.fullmatch(r"\s*([-+0-9.eE]+)\s*([a-z]*)\s*", text)
    if not m or m.group(2) not in ("", *_UNITS):
        raise argparse.ArgumentTypeError(f"bad duration {text!r}")
    try:
        value = float(m.group(1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad duration {text!r}") from None
    return value * _UNITS.get(m.group(2), 1.0)


def parse_floats(n):
    def parse(text):
        try:
            vals = [float(v) for v in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers") from None
        if len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers")
        return vals
    return parse


def parse_ints(text):
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _args_hash(args):
    d = {k: v for k, v in vars(args).items()
         if k not in ("func", "out", "jobs", "verbose") and not callable(v)}
    blob = json.dumps(d, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _stamp(args, payload):
    return {"config_hash": _args_hash(args), "seed": getattr(args, "seed", None), **payload}


def _emit(args, obj):
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path, stage):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise StageError(stage, str(path), "file not found") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise StageError(stage, str(path), f"invalid JSON: {exc}") from None


def _load_device(path, stage):
    d = _load(path, stage)
    try:
        return hamsim.DeviceModel.from_json(d.get("device", d))
    except (KeyError, TypeError) as exc:
        raise StageError(stage, str(path), f"not a device file: {exc}") from None


def _load_unitary(path, stage):
    if str(path).endswith(".npy"):
        try:
            d = np.load(path)
        except (OSError, ValueError) as exc:
            raise StageError(stage, str(path), f"unreadable array: {exc}") from None
        if d.shape != (4, 4):
            raise StageError(stage, str(path), f"expected a 4x4 array, got {d.shape}")
        return d.astype(complex)
    d = _load(path, stage)
    if isinstance(d, dict):
        d = d.get("unitary", d)
    try:
        return hamsim.unitary_from_json(d)
    except (TypeError, ValueError) as exc:
        raise StageError(stage, str(path), f"not a unitary: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_device_gen(args):
    dev = hamsim.generate_device(args.rows, args.cols, args.seed, T=args.T, bias=args.bias)
    _emit(args, _stamp(args, {"device": dev.to_json()}))


def _edge_from_cells(dev, cells):
    if len(cells) == 2:
        e = tuple(sorted(cells))
    elif len(cells) == 4:
        r1, c1, r2, c2 = cells
        e = tuple(sorted((dev.index(r1, c1), dev.index(r2, c2))))
    else:
        raise StageError("traj", "--edge", "expected i,j or r1,c1,r2,c2")
    if e not in dev.edges:
        raise StageError("traj", "--edge", f"{e} is not a device edge")
    return e


def cmd_traj_simulate(args):
    dev = _load_device(args.device, "traj")
    e = _edge_from_cells(dev, args.edge)
    t_max = selector.default_t_max(args.xi) if args.t_max is None else args.t_max
    traj = hamsim.simulate_xi(dev.edges[e], args.xi, t_max, args.spacing, args.dt,
                              pair_id=f"{e[0]}-{e[1]}")
    _emit(args, _stamp(args, {"edge": list(e), "trajectory": traj.to_json()}))


def cmd_basis_select(args):
    dev = _load_device(args.device, "basis")
    sel = selector.select_device(dev, args.criterion, xi=args.xi, t_max=args.t_max,
                                 spacing=args.spacing, dt=args.dt, jobs=args.jobs)
    if not sel.assignments:
        raise StageError("basis", args.device, f"no edge qualified: {sel.failures}")
    payload = sel.to_json()
    payload["summary"] = sel.summary()
    _emit(args, _stamp(args, payload))


def _selection(path, stage):
    d = _load(path, stage)
    try:
        return selector.DeviceSelection.from_json(d)
    except (KeyError, TypeError) as exc:
        raise StageError(stage, str(path), f"not a basis file: {exc}") from None


def cmd_synth(args):
    from .synth import STANDARD_TARGETS, build_cache, synthesize

    d = _load(args.basis, "synth")
    if isinstance(d, dict) and "assignments" in d:
        basis = selector.DeviceSelection.from_json(d).basis_by_edge()
        if args.edge:
            e = tuple(sorted(args.edge))
            if e not in basis:
                raise StageError("synth", args.basis, f"no basis gate for edge {e}")
            basis = {e: basis[e]}
    else:
        basis = {(0, 1): _load_unitary(args.basis, "synth")}
    if args.unitary:
        targets = [("unitary", _load_unitary(args.unitary, "synth"))]
    else:
        targets = [(args.target, STANDARD_TARGETS[args.target])]
    if args.layers:
        out = []
        for e, b in sorted(basis.items()):
            name, u = targets[0]
            dec = synthesize(u, b, args.layers, restarts=args.restarts, seed=args.seed,
                             target_id=name, basis_ids=f"basis{e}", raise_on_failure=False)
            out.append({"edge": list(e), **dec.to_json()})
        failed = [x for x in out if x["infidelity"] >= 1e-8]
        _emit(args, _stamp(args, {"entries": out}))
        if failed:
            raise StageError("synth", args.basis,
                             f"{len(failed)} decomposition(s) above threshold")
        return
    cache = build_cache(basis, targets, restarts=args.restarts, seed=args.seed,
                        timestamp=args.timestamp)
    _emit(args, _stamp(args, cache.to_json()))
    if cache.failures:
        raise StageError("synth", args.basis, f"{len(cache.failures)} failure(s)")


def cmd_feas_volume(args):
    from .feasibility import REGIONS, region_volume

    frac, err = region_volume(REGIONS[args.region], args.samples, args.seed, jobs=args.jobs)
    _emit(args, _stamp(args, {"region": args.region, "samples": args.samples,
                              "fraction": frac, "stderr": err}))


def cmd_feas_check(args):
    from .feasibility import S_CNOT2, S_SWAP3, PE_REGION

    c = weyl.canonicalize(args.coords)
    region = {"swap3": S_SWAP3, "cnot2": S_CNOT2, "pe": PE_REGION}[args.query]
    _emit(args, {"coordinate": list(c), "query": args.query, "member": region.contains(c)})


def cmd_weyl_coords(args):
    u = _load_unitary(args.unitary, "weyl")
    c = weyl.cartan_coordinates(u)
    print(f"{c.tx:.10f},{c.ty:.10f},{c.tz:.10f}")


def _read_circuit(path):
    from .circuit import Circuit, by_name, parse_qasm

    p = Path(path)
    if not p.exists():
        try:
            return by_name(path)
        except ValueError:
            raise StageError("transpile", path, "file not found") from None
    text = p.read_text()
    if p.suffix == ".json":
        return Circuit.from_json(json.loads(text))
    return parse_qasm(text)


def cmd_transpile(args):
    from .fidelity import CoherenceParams, circuit_fidelity
    from .pipeline import transpile
    from .synth import DecompositionCache

    dev = _load_device(args.device, "transpile")
    sel = _selection(args.basis_set, "transpile")
    if args.cache:
        d = _load(args.cache, "transpile")
        cache = DecompositionCache.from_json(d)
    else:
        cache = None
    try:
        circ = _read_circuit(args.circuit)
        routed, lowered, sched = transpile(circ, dev, sel, cache, d_1q_ns=args.d_1q,
                                           restarts=args.restarts, seed=args.seed)
    except (CartanBasisError, KeyError, ValueError) as exc:
        if isinstance(exc, StageError):
            raise
        raise StageError("transpile", args.circuit, exc) from exc
    _emit(args, _stamp(args, {
        "circuit": args.circuit, "n_swaps": routed.n_swaps,
        "native_gates": lowered.count("native"),
        "fidelity": circuit_fidelity(sched, CoherenceParams(args.T)),
        "schedule": sched.to_json()}))


def cmd_report(args):
    from .pipeline import regenerate_report

    if not Path(args.dir).is_dir():
        raise StageError("report", args.dir, "directory not found")
    regenerate_report(args.dir)
    print((Path(args.dir) / "report.md").read_text())


def cmd_pipeline_run(args):
    from .pipeline import PipelineConfig, run_pipeline

    base = {}
    if args.config:
        base = _load(args.config, "pipeline")
    cfg = PipelineConfig.from_json({**base, **{k: v for k, v in {
        "seed": args.seed, "rows": args.rows, "cols": args.cols, "xi": args.xi,
        "baseline_xi": args.baseline_xi,
        "criteria": tuple(args.criteria) if args.criteria else None,
        "benchmarks": tuple(args.benchmarks) if args.benchmarks else None,
        "out_dir": args.out_dir, "device_path": args.device, "restarts": args.restarts,
        "jobs": args.jobs}.items() if v is not None}})
    run_pipeline(cfg)
    print((Path(cfg.out_dir) / "report.md").read_text())


# ---------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="cartanbasis", description=__doc__.splitlines()[0])
    p.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def add(parent, name, func, help_):
        sp = parent.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    def out(sp):
        sp.add_argument("--out", help="output file (default: stdout)")

    def sim(sp, xi_default):
        sp.add_argument("--xi", type=float, default=xi_default, help="drive amplitude (flux quanta)")
        sp.add_argument("--t-max", type=parse_time, default=None, help="trajectory length, e.g. 200ns")
        sp.add_argument("--spacing", type=parse_time, default=hamsim.DEFAULT_SPACING)
        sp.add_argument("--dt", type=parse_time, default=hamsim.DEFAULT_DT)

    dev = sub.add_parser("device", help="device models").add_subparsers(dest="sub", required=True)
    sp = add(dev, "gen", cmd_device_gen, "sample a grid device")
    sp.add_argument("--rows", type=int, required=True)
    sp.add_argument("--cols", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--T", type=float, default=80e-6, help="coherence time in seconds")
    sp.add_argument("--bias", action="store_true", help="solve zero-ZZ coupler biases now")
    out(sp)

    traj = sub.add_parser("traj", help="trajectories").add_subparsers(dest="sub", required=True)
    sp = add(traj, "simulate", cmd_traj_simulate, "simulate one edge")
    sp.add_argument("--device", required=True)
    sp.add_argument("--edge", type=parse_ints, required=True, help="i,j or r1,c1,r2,c2")
    sim(sp, 0.04)
    out(sp)

    basis = sub.add_parser("basis", help="basis selection").add_subparsers(dest="sub", required=True)
    sp = add(basis, "select", cmd_basis_select, "select a basis gate per edge")
    sp.add_argument("--device", required=True)
    sp.add_argument("--criterion", required=True, choices=["baseline", "criterion1", "criterion2"])
    sim(sp, None)
    sp.add_argument("--jobs", type=int, default=1)
    out(sp)

    sp = add(sub, "synth", cmd_synth, "synthesize gates into basis gates")
    sp.add_argument("--basis", required=True, help="basis.json or a unitary file")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--target", choices=["swap", "cnot"])
    grp.add_argument("--unitary", help="target unitary file")
    sp.add_argument("--layers", type=int, help="fixed depth (default: analytic)")
    sp.add_argument("--edge", type=parse_ints, help="restrict to one edge i,j")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--restarts", type=int, default=32)
    sp.add_argument("--timestamp", type=float, default=0.0, help="calibration-cycle stamp")
    out(sp)

    feas = sub.add_parser("feas", help="feasibility regions").add_subparsers(dest="sub", required=True)
    sp = add(feas, "volume", cmd_feas_volume, "Monte-Carlo volume fraction of a region")
    sp.add_argument("--region", required=True, choices=["s_swap3", "s_cnot2", "pe"])
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    out(sp)
    sp = add(feas, "check", cmd_feas_check, "membership of one coordinate")
    sp.add_argument("--coords", type=parse_floats(3), required=True)
    sp.add_argument("--query", required=True, choices=["swap3", "cnot2", "pe"])
    out(sp)

    wc = sub.add_parser("weyl", help="chamber geometry").add_subparsers(dest="sub", required=True)
    sp = add(wc, "coords", cmd_weyl_coords, "canonical coordinates of a unitary")
    sp.add_argument("--unitary", required=True)

    sp = add(sub, "transpile", cmd_transpile, "route, lower and schedule a circuit")
    sp.add_argument("--circuit", required=True, help=".qasm, circuit .json or benchmark name")
    sp.add_argument("--device", required=True)
    sp.add_argument("--basis-set", required=True)
    sp.add_argument("--cache")
    sp.add_argument("--seed", type=int, default=0, help="seed for on-demand synthesis")
    sp.add_argument("--restarts", type=int, default=32)
    sp.add_argument("--d-1q", type=float, default=20.0, help="single-qubit gate time (ns)")
    sp.add_argument("--T", type=float, default=80e-6)
    out(sp)

    sp = add(sub, "report", cmd_report, "regenerate the report from pipeline artifacts")
    sp.add_argument("--dir", required=True)

    pl = sub.add_parser("pipeline", help="end-to-end runs").add_subparsers(dest="sub", required=True)
    sp = add(pl, "run", cmd_pipeline_run, "device -> basis -> cache -> benchmarks -> report")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--config", help="PipelineConfig JSON; flags override it")
    sp.add_argument("--out-dir", default=None)
    sp.add_argument("--rows", type=int)
    sp.add_argument("--cols", type=int)
    sp.add_argument("--xi", type=float)
    sp.add_argument("--baseline-xi", type=float)
    sp.add_argument("--criteria", nargs="+", choices=["baseline", "criterion1", "criterion2"])
    sp.add_argument("--benchmarks", nargs="+")
    sp.add_argument("--device", help="use an existing device.json")
    sp.add_argument("--restarts", type=int)
    sp.add_argument("--jobs", type=int)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except CartanBasisError as exc:
        print(f"error: [{args.command}] {exc}", file=sys.stderr)
        return EXIT_STAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
