import json

import numpy as np
import pytest

from cartanbasis import weyl
from cartanbasis.cli import main, parse_time
from cartanbasis.errors import StageError
from cartanbasis.hamsim import unitary_to_json
from cartanbasis.pipeline import PipelineConfig, regenerate_report, run_pipeline
from cartanbasis.selector import default_t_max


def test_parse_time():
    assert parse_time("83.04ns") == pytest.approx(83.04e-9)
    assert parse_time("2 us") == pytest.approx(2e-6)
    assert parse_time("1e-9") == pytest.approx(1e-9)
    with pytest.raises(Exception):
        parse_time("fast")


def test_usage_errors_exit_2(capsys):
    assert main([]) == 2
    assert main(["feas", "volume", "--region", "s_swap3"]) == 2  # --seed is mandatory
    assert main(["weyl", "coords"]) == 2


def test_missing_device_is_stage_error(tmp_path, capsys):
    code = main(["basis", "select", "--device", str(tmp_path / "nope.json"),
                 "--criterion", "criterion1"])
    assert code == 3
    assert "[basis]" in capsys.readouterr().err


def test_weyl_coords(tmp_path, capsys):
    path = tmp_path / "u.json"
    path.write_text(json.dumps(unitary_to_json(weyl.CNOT)))
    assert main(["weyl", "coords", "--unitary", str(path)]) == 0
    x, y, z = map(float, capsys.readouterr().out.split(","))
    assert (x, y, z) == pytest.approx((0.5, 0, 0), abs=1e-9)


def test_weyl_coords_npy_and_bad_files(tmp_path, capsys):
    np.save(tmp_path / "b.npy", weyl.B_GATE)
    assert main(["weyl", "coords", "--unitary", str(tmp_path / "b.npy")]) == 0
    coords = tuple(map(float, capsys.readouterr().out.split(",")))
    assert coords == pytest.approx((0.5, 0.25, 0), abs=1e-9)
    np.save(tmp_path / "v.npy", np.zeros(3))
    (tmp_path / "bin.json").write_bytes(b"\x93NUMPY")
    for name in ("v.npy", "bin.json"):
        assert main(["weyl", "coords", "--unitary", str(tmp_path / name)]) == 3
        assert "[weyl]" in capsys.readouterr().err


def test_feas_commands(tmp_path):
    out = tmp_path / "vol.json"
    assert main(["feas", "volume", "--region", "pe", "--samples", "100000", "--seed", "1",
                 "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert abs(d["fraction"] - 0.5) < 0.01 and d["seed"] == 1
    out2 = tmp_path / "chk.json"
    assert main(["feas", "check", "--coords", "0.25,0.25,0", "--query", "cnot2",
                 "--out", str(out2)]) == 0
    assert json.loads(out2.read_text())["member"] is True


def test_device_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["device", "gen", "--rows", "2", "--cols", "2", "--seed", "3",
                     "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(json.loads(a.read_text())["device"]["edges"]) == 4


def test_synth_from_unitary_files(tmp_path):
    basis = tmp_path / "b.json"
    basis.write_text(json.dumps(unitary_to_json(weyl.SQRT_ISWAP)))
    out = tmp_path / "cache.json"
    assert main(["synth", "--basis", str(basis), "--target", "swap", "--seed", "0",
                 "--out", str(out)]) == 0
    entries = json.loads(out.read_text())["entries"]
    assert len(entries) == 1 and len(entries[0]["layer_ids"]) == 3
    # depth 2 cannot produce SWAP from sqrt(iSWAP): reported as a stage failure
    assert main(["synth", "--basis", str(basis), "--target", "swap", "--layers", "2",
                 "--seed", "0", "--restarts", "4", "--out", str(out)]) == 3


def test_transpile_chain(tmp_path):
    dev = tmp_path / "device.json"
    assert main(["device", "gen", "--rows", "1", "--cols", "2", "--seed", "3", "--bias",
                 "--out", str(dev)]) == 0
    basis = tmp_path / "basis.json"
    assert main(["basis", "select", "--device", str(dev), "--criterion", "criterion2",
                 "--out", str(basis)]) == 0
    cache = tmp_path / "cache.json"
    assert main(["synth", "--basis", str(basis), "--target", "cnot", "--seed", "0",
                 "--out", str(cache)]) == 0
    qasm = tmp_path / "c.qasm"
    qasm.write_text("OPENQASM 2.0;\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n")
    out = tmp_path / "sched.json"
    assert main(["transpile", "--circuit", str(qasm), "--device", str(dev),
                 "--basis-set", str(basis), "--cache", str(cache), "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["native_gates"] == 2 and 0 < d["fidelity"] < 1
    bad = tmp_path / "bad.qasm"
    bad.write_text("qreg q[2];\nccx q[0],q[1],q[1];\n")
    assert main(["transpile", "--circuit", str(bad), "--device", str(dev),
                 "--basis-set", str(basis)]) == 3


def test_config_hash_ignores_output_location():
    a = PipelineConfig(out_dir="x", jobs=1)
    b = PipelineConfig(out_dir="y", jobs=4)
    assert a.config_hash == b.config_hash
    assert a.config_hash != PipelineConfig(seed=8).config_hash


def _small(out_dir):
    return PipelineConfig(seed=3, rows=1, cols=3, benchmarks=("bv3", "qft3"),
                          out_dir=str(out_dir), restarts=16)


@pytest.mark.slow
def test_pipeline_is_reproducible(tmp_path):
    r1 = run_pipeline(_small(tmp_path / "a"))
    run_pipeline(_small(tmp_path / "b"))
    names = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*")
                   if p.is_file())
    assert "report.md" in map(str, names)
    for rel in names:
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes(), rel
    for rel in names:
        if rel.suffix == ".json":
            d = json.loads((tmp_path / "a" / rel).read_text())
            assert d["config_hash"] == r1["config_hash"] and d["seed"] == 3
    md = (tmp_path / "a" / "report.md").read_text()
    for col in ("baseline_sqiswap", "criterion1", "criterion2"):
        assert col in md
    # regeneration from retained artifacts is idempotent
    before = (tmp_path / "a" / "report.md").read_bytes()
    regenerate_report(tmp_path / "a")
    assert (tmp_path / "a" / "report.md").read_bytes() == before
    assert main(["report", "--dir", str(tmp_path / "a")]) == 0


def test_pipeline_stage_errors(tmp_path):
    cfg = _small(tmp_path / "c")
    cfg.device_path = str(tmp_path / "missing.json")
    with pytest.raises(StageError) as info:
        run_pipeline(cfg)
    assert info.value.stage == "device"
    assert (tmp_path / "c" / "config.json").exists()
    assert main(["pipeline", "run", "--seed", "1", "--device", str(tmp_path / "missing.json"),
                 "--out-dir", str(tmp_path / "d")]) == 3
    assert main(["report", "--dir", str(tmp_path / "nowhere")]) == 3


def test_traj_simulate_default_length(tmp_path):
    dev = tmp_path / "device.json"
    assert main(["device", "gen", "--rows", "1", "--cols", "2", "--seed", "3", "--bias",
                 "--out", str(dev)]) == 0
    out = tmp_path / "traj.json"
    assert main(["traj", "simulate", "--device", str(dev), "--edge", "0,1", "--xi", "0.04",
                 "--out", str(out)]) == 0
    samples = json.loads(out.read_text())["trajectory"]["samples"]
    assert len(samples) == int(default_t_max(0.04) / 1e-9)
