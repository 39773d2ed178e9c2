"""Metric/distance brackets against closed forms and certified samplers."""

import io
import math

import numpy as np
import pytest

from invmet import (
    HalfPlaneProduct,
    Polydisc,
    SampleStream,
    UnitBall,
    distance_ball_sample,
    distance_scale,
    indicatrix,
    indicatrix_volume,
    kobayashi_distance,
    kobayashi_metric,
    write_indicatrix_csv,
    zoo_domain,
    zoo_names,
)
from invmet.metrics import indicatrix_gauge_upper, metric_lower_paired, metric_upper_paired


def test_polydisc_metric_closed_form(pd2):
    b = kobayashi_metric(pd2, [0.9, 0], [1, 0])
    assert b.is_exact and b.width == 0.0
    assert b.value == pytest.approx(1.0 / (1.0 - 0.81), abs=1e-15)
    assert b.lower_method == "closed-form"
    # max over components, weighted by the radii
    d = Polydisc([1.0, 2.0])
    b2 = kobayashi_metric(d, [0, 0], [1, 1])
    assert b2.value == pytest.approx(1.0, abs=1e-15)


def test_ball_metric_closed_form(ball2):
    b = kobayashi_metric(ball2, [0.5, 0], [0, 1])
    assert b.is_exact
    # orthogonal direction at |z| = 1/2: 1/sqrt(1 - 1/4)
    assert b.value == pytest.approx(1.1547005383792515, abs=1e-15)
    assert kobayashi_metric(ball2, [0, 0], [0.6, 0.8j]).value == pytest.approx(1.0, abs=1e-15)


def test_halfplane_metric_pin():
    hp = HalfPlaneProduct(1)
    b = kobayashi_metric(hp, [1j], [1])
    assert b.value == 0.5 and b.width == 0.0


def test_metric_homogeneity_in_the_direction(three_face):
    x = np.array([0.1 + 0.1j, -0.2 + 0j])
    v = np.array([0.7, 0.4j])
    b1 = kobayashi_metric(three_face, x, v)
    b3 = kobayashi_metric(three_face, x, 3 * v)
    assert b3.lower == pytest.approx(3 * b1.lower, rel=1e-9)
    assert b3.upper == pytest.approx(3 * b1.upper, rel=1e-9)


def test_three_face_origin_brackets(three_face):
    b = kobayashi_metric(three_face, [0, 0], [1, 0])
    assert b.lower == pytest.approx(0.5, abs=1e-12)
    assert b.upper == pytest.approx(1.0, abs=1e-12)
    b2 = kobayashi_metric(three_face, [0, 0], [1, 1])
    assert b2.lower == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert b2.upper == pytest.approx(4.0 / 3.0, abs=1e-12)


def test_sandwich_holds_across_the_zoo():
    stream = SampleStream(17)
    for name in zoo_names():
        d = zoo_domain(name)
        P = d.interior_samples(40, stream.fork(hash(name) % 1000))
        V = stream.unit_directions(40, d.dim)
        upper = metric_upper_paired(d, P, V)
        lower = metric_lower_paired(d, P, V)
        assert np.all(np.isfinite(upper))
        assert np.all(lower <= upper * (1 + 1e-12) + 1e-12), name


def test_larger_domain_has_smaller_metric():
    small = Polydisc([1.0, 1.0])
    big = Polydisc([2.0, 2.0])
    x = np.array([0.3 + 0.1j, 0.2j])
    v = np.array([1.0, 0.5j])
    assert big.metric_value(x, v) < small.metric_value(x, v)


def test_distance_closed_forms_and_conventions(pd2, ball2):
    d1 = kobayashi_distance(pd2, [0, 0], [1 / 3, 0])
    assert d1.width == 0.0
    assert d1.value == pytest.approx(math.atanh(1 / 3), abs=1e-15)
    d2 = kobayashi_distance(pd2, [0, 0], [1 / 3, 0], convention="paper")
    assert d2.value == pytest.approx(2 * math.atanh(1 / 3), abs=1e-15)
    db = kobayashi_distance(ball2, [0, 0], [0.5, 0])
    assert db.value == pytest.approx(math.atanh(0.5), rel=1e-12)
    hp = HalfPlaneProduct(1)
    dh = kobayashi_distance(hp, [1j], [2j])
    assert dh.value == pytest.approx(math.atanh(1 / 3), rel=1e-12)


def test_distance_scale_guards_convention():
    assert distance_scale("standard") == 1.0
    assert distance_scale("paper") == 2.0
    with pytest.raises(ValueError):
        distance_scale("fancy")


def test_distance_symmetry_and_triangle_upper(three_face):
    x = np.array([0.0j, 0.0j])
    y = np.array([0.3 + 0.1j, -0.2 + 0j])
    z = np.array([-0.1 + 0j, 0.25j])
    dxy = kobayashi_distance(three_face, x, y)
    dyx = kobayashi_distance(three_face, y, x)
    # both brackets must cover the one true distance
    assert dxy.lower <= dyx.upper + 1e-12
    assert dyx.lower <= dxy.upper + 1e-12
    assert dxy.lower <= dxy.upper
    dxz = kobayashi_distance(three_face, x, z)
    dzy = kobayashi_distance(three_face, z, y)
    # triangle inequality on the certified upper bounds
    assert dxy.lower <= dxz.upper + dzy.upper + 1e-9


def test_distance_ball_sample_is_certified(pd2):
    x = np.array([0.3 + 0.1j, -0.2 + 0j])
    ball = distance_ball_sample(pd2, x, 0.5, 400, seed=11)
    assert len(ball) == 400
    assert float(ball.distance_upper.max()) < 0.5
    margins = np.array([pd2.contains(p) for p in ball.points])
    assert margins.min() > 0
    # distance upper bounds certify: recompute a few via the distance oracle
    for p in ball.points[:5]:
        db = kobayashi_distance(pd2, x, p)
        assert db.lower <= 0.5
    again = distance_ball_sample(pd2, x, 0.5, 400, seed=11)
    np.testing.assert_array_equal(ball.points, again.points)


def test_distance_ball_respects_convention(ball2):
    x = np.zeros(2, complex)
    std = distance_ball_sample(ball2, x, 0.5, 300, seed=3, convention="standard")
    pap = distance_ball_sample(ball2, x, 0.5, 300, seed=3, convention="paper")
    # paper distances are twice the standard ones, so the paper ball is smaller
    r_std = float(np.linalg.norm(std.points, axis=1).max())
    r_pap = float(np.linalg.norm(pap.points, axis=1).max())
    assert r_pap < r_std
    assert r_std <= math.tanh(0.5) + 1e-9
    assert r_pap <= math.tanh(0.25) + 1e-9


def test_indicatrix_radii_bracket_model(pd2):
    s = indicatrix(pd2, [0, 0], directions=128)
    # unit-polydisc indicatrix radii lie between 1 (axes) and sqrt(2) (diagonal)
    assert np.all(s.radius_lower <= s.radius_upper + 1e-12)
    assert float(s.radius_mid.min()) >= 1.0 - 1e-9
    assert float(s.radius_mid.max()) <= math.sqrt(2) + 1e-9
    fh = io.StringIO()
    write_indicatrix_csv(s, fh)
    lines = fh.getvalue().splitlines()
    assert lines[0] == "dir0_re,dir0_im,dir1_re,dir1_im,radius_lo,radius_hi"
    assert len(lines) == 1 + 128


def test_indicatrix_gauge_upper_matches_polydisc_model(pd2):
    x = np.zeros(2, complex)
    W = np.array([[0.5, 0.25], [0.1j, 0.9]], dtype=complex)
    g = indicatrix_gauge_upper(pd2, x, W)
    np.testing.assert_allclose(g, [0.5, 0.9], atol=1e-9)


def test_indicatrix_volume_disc_exact():
    disc = zoo_domain("disc")
    ve = indicatrix_volume(disc, [0.5], samples=2000, seed=1)
    # radius 1 - a^2 = 0.75 disc: area pi (1 - a^2)^2, zero sampling variance
    assert ve.value == pytest.approx(math.pi * 0.5625, rel=1e-12)
    assert ve.se < 1e-12
    assert ve.lower <= ve.value <= ve.upper + 1e-15
