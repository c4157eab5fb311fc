# Copyright 2026 The costlab Authors.
# SPDX-License-Identifier: Apache-2.0

import math
import pathlib
import random

import pytest

import costlab

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def brute_front(points):
    front = []
    for label, lat, en in points:
        dominated = any(
            ql <= lat and qe <= en and (ql < lat or qe < en) for _, ql, qe in points
        )
        if not dominated:
            front.append((label, lat, en))
    return front


def test_fixture_counts():
    f = costlab.fixtures()
    lenet = costlab.count_model(f["lenet"])["total"]
    resnet = costlab.count_model(f["resnet20"])["total"]
    assert lenet["params"] == 82618
    assert 3.0 <= resnet["params"] / lenet["params"] <= 3.8
    assert abs(resnet["maccs"] / lenet["maccs"] / 141.3 - 1) <= 0.15


def test_load_and_round_trip():
    model = costlab.load_model(str(DATA / "models" / "lenet.json"))
    assert model == costlab.fixtures()["lenet"]
    assert costlab.parse_model(model.to_json()) == model
    assert model.shapes()[1] == (24, 24, 6)
    assert len(model) == 13


def test_errors_map_to_python():
    with pytest.raises(costlab.ParseError):
        costlab.parse_model("{")
    doc = '{"name": "m", "input": {"h": 2, "w": 2, "c": 1}, "layers": [{"type": "conv2d", "kernel": 3, "filters": 1}]}'
    with pytest.raises(costlab.ValidationError):
        costlab.parse_model(doc)
    assert issubclass(costlab.ValidationError, costlab.Error)


def test_footprint_band():
    lenet = costlab.fixtures()["lenet"]
    f32 = costlab.footprint(lenet, 32)
    f8 = costlab.footprint(lenet, 8)
    assert abs(f32["total_kib"] / 320.28 - 1) <= 0.02
    assert 0.25 <= f8["total_kib"] / f32["total_kib"] <= 0.28


def test_estimate_and_speedup():
    lenet = costlab.fixtures()["lenet"]
    l4 = costlab.resolve_profile("l4")
    est = costlab.estimate(lenet, l4, "Q+CMSIS")
    total = sum(layer["latency_ms"] for layer in est["per_layer"])
    assert math.isclose(total, est["total_latency_ms"], rel_tol=1e-12)
    assert 10 <= costlab.speedup(lenet, l4, "U", "Q+CMSIS") <= 17


def test_fit_check():
    resnet = costlab.fixtures()["resnet20"]
    l4 = costlab.resolve_profile("L4")
    assert costlab.fit_check(resnet, l4, "U+FPU")["reason"] == "flash"
    assert costlab.fit_check(resnet, l4, "Q+CMSIS")["fits"]


def test_pareto_matches_brute_force():
    rng = random.Random(4)
    for _ in range(20):
        pts = [(str(i), rng.randint(1, 30), rng.randint(1, 30)) for i in range(rng.randint(1, 200))]
        got = sorted(costlab.pareto_front(pts))
        assert got == sorted((l, float(a), float(b)) for l, a, b in brute_front(pts))


def test_fit_line():
    x = [1.0, 2.0, 3.0, 4.0]
    fit = costlab.fit_line(x, [2 * v + 1 for v in x])
    assert math.isclose(fit["slope"], 2.0)
    assert abs(fit["pearson_r"] - 1.0) <= 1e-12
    with pytest.raises(costlab.DegenerateFitError):
        costlab.fit_line([1.0, 1.0], [1.0, 2.0])


def test_lint():
    doc = '{"name": "c", "input": {"h": 8, "w": 8, "c": 7}, "weight_bits": 8, "layers": [{"type": "conv2d", "kernel": 3, "filters": 4}]}'
    findings = costlab.lint_model(costlab.parse_model(doc), costlab.resolve_profile("l4"))
    r1 = [f for f in findings if f["rule_id"] == "R1"]
    assert len(r1) == 1
    assert abs(r1[0]["estimated_gain"] - 7.03 / 6.42) < 1e-6
    assert r1[0]["suggested"] == 8


def test_sweep():
    entries = costlab.generate("conv_filters", 4, 8)
    assert [e["alignment"] for e in entries] == ["div4", "odd", "even", "odd", "div4"]
    maccs = [e["maccs"] for e in entries]
    assert maccs == sorted(set(maccs))
    with pytest.raises(costlab.Error):
        costlab.generate("lstm", 1, 2)
