import json

import numpy as np
import pytest

from cartanbasis import weyl
from cartanbasis.errors import NoIntersection
from cartanbasis.feasibility import (
    CRITERION1,
    CRITERION2,
    PE_REGION,
    S_CNOT2,
    S_SWAP3,
    SelectionCriterion,
    SwapLayers,
    cnot_two_layer,
    first_hit,
    inequality_table,
    load_regions,
    dump_regions,
    mirror_point,
    n_variant_sets,
    region_volume,
    swap3_by_theory,
    swap_min_layers,
    two_layer_feasible,
)
from cartanbasis.feasibility.qlr import horn_inequalities
from cartanbasis.hamsim import TrajectorySample
from cartanbasis.synth import synthesize

P = weyl.NAMED_POINTS
B = (0.5, 0.25, 0.0)


def close(a, b, tol=1e-12):
    return weyl.weyl_distance(a, b) < tol


def test_mirror_examples():
    assert close(mirror_point((0.5, 0, 0)), (0.5, 0.5, 0))
    assert close(mirror_point((0.25, 0.25, 0.25)), (0.25, 0.25, 0.25))


def test_mirror_is_involution(rng):
    for c in weyl.sample_chamber(1000, rng):
        assert close(mirror_point(mirror_point(c)), c, 1e-9)


def test_mirror_pair_gives_two_layer_swap(rng):
    for c in weyl.sample_chamber(5, rng):
        m = mirror_point(c)
        dec = synthesize(weyl.SWAP, [weyl.canonical_gate(c), weyl.canonical_gate(m)], 2,
                         restarts=16, seed=1)
        assert dec.infidelity < 1e-8


def test_inequality_table_shape():
    table = inequality_table()
    assert len(table) == 72
    # the table is generated from quantum Littlewood-Richardson data, not transcribed
    assert len(horn_inequalities(4)) == 72


def test_b_gate_reaches_everything(rng):
    for c in weyl.sample_chamber(500, rng):
        assert two_layer_feasible(c, B, B)


def test_swap_from_two_cnots_infeasible():
    assert not two_layer_feasible(P["SWAP"], P["CNOT"], P["CNOT"])
    assert two_layer_feasible(P["CNOT"], P["SQRT_ISWAP"], P["SQRT_ISWAP"])
    assert n_variant_sets(P["CNOT"], P["CNOT"], P["CNOT"]) in (1, 2, 4, 8)


def test_identity_from_gate_and_inverse(rng):
    for c in weyl.sample_chamber(20, rng):
        inv = weyl.canonicalize(-np.asarray(c))
        assert two_layer_feasible((0, 0, 0), c, inv)


def test_swap3_theory_matches_tetrahedra_inside_and_outside():
    inside = [(0.5, 0, 0), (0.25, 0.25, 0), (0.5, 0.25, 0.1), (0.4, 0.3, 0.2)]
    # centroids of the complement tetrahedra, mapped back into the chamber
    outside = [(0.125, 0.0625, 0)] + [
        tuple(weyl.canonicalize(t.vertices.mean(axis=0))) for t in S_SWAP3.complement_tetrahedra]
    for g in inside:
        assert S_SWAP3.contains(g) and swap3_by_theory(g)
    for g in outside:
        assert not S_SWAP3.contains(g) and not swap3_by_theory(g)


@pytest.mark.parametrize("g, expected", [
    ((0.5, 0.5, 0.5), SwapLayers.ONE),
    ((0.5, 0.25, 0), SwapLayers.TWO),
    ((0.375, 0.25, 0.125), SwapLayers.TWO),
    ((0.5, 0, 0), SwapLayers.THREE),
    ((0.25, 0.25, 0), SwapLayers.THREE),
    ((0.125, 0.0625, 0), SwapLayers.MORE_THAN_3),
])
def test_swap_min_layers(g, expected):
    assert swap_min_layers(g) == expected


def test_more_than_3_point_fails_numerically():
    dec = synthesize(weyl.SWAP, weyl.canonical_gate(0.125, 0.0625, 0), 3, restarts=32, seed=0,
                     raise_on_failure=False)
    assert dec.infidelity > 1e-3


@pytest.mark.parametrize("g, expected", [
    ((0.25, 0.25, 0), True),
    ((0.5, 0, 0), True),
    ((0.15, 0.05, 0.02), False),
    ((0.5, 0.5, 0.5), False),
])
def test_cnot_two_layer(g, expected):
    assert cnot_two_layer(g) is expected


def test_cnot_two_layer_matches_inequalities(rng):
    for c in weyl.sample_chamber(300, rng):
        if min(abs(np.asarray(S_CNOT2.complement_tetrahedra[0].signed_distances(c))).min(),
               1) < 1e-4:
            continue
        assert cnot_two_layer(c) == two_layer_feasible(P["CNOT"], c, c)


@pytest.mark.slow
def test_volumes():
    for region, expected, tol in ((PE_REGION, 0.5, 0.01), (S_SWAP3, 0.685, 0.015),
                                  (S_CNOT2, 0.75, 0.015)):
        frac, err = region_volume(region, 200_000, seed=5)
        assert abs(frac - expected) < tol
        assert 0 < err < 0.002


def test_volume_deterministic_and_jobs_independent():
    a = region_volume(S_SWAP3, 100_000, seed=1)
    b = region_volume(S_SWAP3, 100_000, seed=1, jobs=2)
    assert a == b
    with pytest.raises(ValueError):
        region_volume(S_SWAP3, 0)


def test_region_json_round_trip(tmp_path):
    path = tmp_path / "regions.json"
    dump_regions([S_SWAP3, S_CNOT2, PE_REGION], path)
    loaded = load_regions(path)
    pts = weyl.sample_chamber(2000, np.random.default_rng(9))
    for orig, new in zip([S_SWAP3, S_CNOT2, PE_REGION], loaded):
        assert np.array_equal(orig.contains_batch(pts), new.contains_batch(pts))
    json.loads(path.read_text())


def _samples(points, step=1e-9):
    return [TrajectorySample((k + 1) * step, None, weyl.canonicalize(p), 0.0)
            for k, p in enumerate(points)]


def test_first_hit_xy_trajectory():
    ts = np.linspace(0, 0.5, 201)[1:]
    hit = first_hit(_samples([(t, t, 0) for t in ts]), CRITERION1)
    assert close(hit.sample.coordinate, (0.25, 0.25, 0), 1e-9)
    assert not hit.interpolated


def test_first_hit_xx_trajectory():
    ts = np.linspace(0, 0.5, 201)[1:]
    hit = first_hit(_samples([(t, 0, 0) for t in ts]), CRITERION1)
    assert close(hit.sample.coordinate, (0.5, 0, 0), 1e-9)


def test_first_hit_interpolates_between_samples():
    pts = [(0.05, 0.05, 0), (0.1, 0.1, 0), (0.2, 0.2, 0), (0.3, 0.3, 0)]
    hit = first_hit(_samples(pts, 10e-9), CRITERION1)
    assert hit.index == 3 and hit.interpolated
    # the crossing of (t,t,0) with the face sits at t = 1/4
    assert abs(hit.crossing_duration - 35e-9) < 1e-12  # boundary eps shifts it slightly


def test_first_hit_no_intersection():
    ts = np.linspace(0.01, 0.1, 30)
    with pytest.raises(NoIntersection) as info:
        first_hit(_samples([(t, t / 2, 0) for t in ts]), CRITERION1)
    assert info.value.max_duration == pytest.approx(30e-9)


def test_first_hit_monotone_in_regions():
    rng = np.random.default_rng(4)
    walk = np.cumsum(rng.uniform(0, 0.01, (200, 3)) * [1, 0.6, 0.3], axis=0)
    samples = _samples(walk)
    try:
        h2 = first_hit(samples, CRITERION2)
    except NoIntersection:
        return
    h1 = first_hit(samples, CRITERION1)
    assert h1.index <= h2.index


def test_selection_criterion_validation():
    with pytest.raises(ValueError):
        SelectionCriterion("empty", ())
    with pytest.raises(ValueError):
        SelectionCriterion("bad", (S_SWAP3,), eps=0)


@pytest.mark.slow
def test_two_layer_oracle_agreement():
    rng = np.random.default_rng(77)
    targets = weyl.sample_chamber(500, rng)
    bases = weyl.sample_chamber(500, rng)
    disagreements = []
    for i, (t, b) in enumerate(zip(targets, bases)):
        theory = two_layer_feasible(t, b, b)
        dec = synthesize(weyl.canonical_gate(t), weyl.canonical_gate(b), 2, restarts=32,
                         seed=i, raise_on_failure=False)
        if theory != (dec.infidelity < 1e-8):
            disagreements.append((tuple(t), tuple(b), dec.infidelity))
    assert not disagreements
