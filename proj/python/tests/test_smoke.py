import math

import isolab


def test_ball_counts():
    f2 = isolab.parse_group("F2")
    assert f2.n_generators == 2
    ball = isolab.ball(f2, 1)
    assert ball.n_vertices == 5
    assert ball.n_edges == 4
    assert ball.labels()[0] == "e"

    ball2 = isolab.ball(f2, 2)
    assert ball2.n_vertices == 17
    assert ball2.n_edges == 16


def test_boundaries_and_min_ratio():
    f2 = isolab.parse_group("F2")
    ball = isolab.ball(f2, 3)
    b1 = [v for v, s in enumerate(ball.sphere) if s <= 1]
    assert isolab.edge_boundary(ball, b1) == 12
    assert isolab.inner_boundary(ball, b1) == 4
    assert abs(isolab.kazhdan_ratio(ball, b1) - math.sqrt(6 / 5)) < 1e-12

    best = isolab.min_ratio(ball, 5)
    assert best["ratio"] == (12, 5)
    assert best["members"] == b1


def test_profile_values():
    f2 = isolab.parse_group("F2")
    rows = isolab.profile(f2, 3)
    assert rows[0]["ratio"] == (12, 5)
    assert rows[1]["ratio"] == (36, 17)
    floats = [r["ratio_float"] for r in rows]
    assert floats == sorted(floats, reverse=True)


def test_growth_estimate():
    f2 = isolab.parse_group("F2")
    g = isolab.growth(f2, 6)
    assert g["estimate"] == 3.0
    z = isolab.parse_group("Z")
    assert isolab.growth(z, 8)["estimate"] == 1.0


def test_beta1_and_determinism():
    f2 = isolab.parse_group("F2")
    stats = isolab.beta1_estimate(f2, 4, mode="free", samples=50, seed=3)
    assert stats["beta1_estimate"] == 1.0
    assert stats["variance"] == 0.0

    z2 = isolab.parse_group("Z^2")
    a = isolab.beta1_estimate(z2, 4, samples=200, seed=11)
    b = isolab.beta1_estimate(z2, 4, samples=200, seed=11)
    assert a == b


def test_wilson_tree():
    edges = [(0, 1), (1, 2), (2, 0)]
    tree = isolab.wilson_tree(3, edges, root=0, seed=5)
    assert len(tree) == 2


def test_center_trace():
    z = isolab.parse_group("Z")
    rows = isolab.center_trace_sweep(z, [2, 5, 10])
    for row in rows:
        assert row["dim"] == 1
        assert abs(row["trace"] - 1.0 / (2 * row["radius"])) < 1e-8


def test_hzero():
    out = isolab.hzero(1000, 10, "0.01")
    assert out["cost"] == (101, 100)
    num, den = out["witness_ratio"]
    assert num * 11 <= 4 * den  # ratio <= 4/(n+1)
    assert out["segment_ok"]
    assert out["main_inequality_ok"]


def test_run_report_roundtrip():
    cfg = {"command": "relsim", "subcommand": "hzero", "N": 500, "n": 5, "eps": "0.01"}
    first = isolab.run_report(cfg)
    second = isolab.run_report(cfg)
    assert first["all_passed"]
    assert first["json"] == second["json"]
