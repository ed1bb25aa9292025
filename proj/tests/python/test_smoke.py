"""Smoke tests for the Python bindings."""

import math

import pytest

import subpix


def checkerboard(n):
    return subpix.BinaryImage2D(n, [(i + j) % 2 for i in range(n) for j in range(n)])


def test_identity_distance_zero():
    img = checkerboard(8)
    assert subpix.distance(img, img, subpix.AffineMap2D.identity()) == 0.0


def test_out_of_image_translation_distance_one():
    img = checkerboard(8)
    far = subpix.AffineMap2D.translation(100, 100)
    assert subpix.distance(img, img, far) == 1.0


def test_image_round_trip_values():
    img = subpix.BinaryImage2D(4, [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1])
    assert img.n == 4
    assert img.get(1, 1) is True
    assert img.get(1, 2) is False
    img.set(1, 2, True)
    assert img.values()[1] == 1


def test_estimator_budget_formulas():
    assert subpix.samples_per_estimate(0.1) == 200
    assert subpix.median_repetitions(256) == 17
    assert subpix.general_sample_count(64, 0.1) == 106865


def test_estimate_close_to_exact():
    m1, m2 = subpix.gen_d1(32, 1, 7)
    t = subpix.AffineMap2D.translation(1, -2)
    exact = subpix.distance(m1, m2, t)
    est = subpix.estimate_distance(m1, m2, t, epsilon=0.1, key=5)
    assert abs(est - exact) <= 0.2


def test_match_smooth_finds_planted_translation():
    n = 16
    _, m2 = subpix.gen_d1(n, 1, 3)
    planted = subpix.AffineMap2D.translation(2, 1)
    m1 = subpix.BinaryImage2D(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            qi, qj = i + 2, j + 1
            inside = 1 <= qi <= n and 1 <= qj <= n
            m1.set(i, j, m2.get(qi, qj) if inside else False)
    exact = subpix.distance(m1, m2, planted)
    # delta_prime = 0.222 puts the translation grid on the integers at n=16,
    # so the planted shift is a cover member even for this non-smooth pair
    r = subpix.match_smooth(m1, m2, family="translation", delta_prime=0.222, epsilon=0.1, seed=9)
    found = subpix.AffineMap2D(r["a"], r["t"])
    assert r["distance"] <= exact + 0.15
    assert subpix.distance(m1, m2, found) <= exact + 0.25
    assert r["stats"]["queries"] == 2 * r["stats"]["candidates"] * r["stats"]["repetitions"] * r["stats"]["samples_per_estimate"]


def test_match_general_ranks_planted_candidate_first():
    n = 32
    _, m2 = subpix.gen_d1(n, 1, 11)
    planted = subpix.AffineMap2D.translation(3, -2)
    m1 = subpix.BinaryImage2D(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            qi, qj = i + 3, j - 2
            inside = 1 <= qi <= n and 1 <= qj <= n
            m1.set(i, j, m2.get(qi, qj) if inside else False)
    candidates = [subpix.AffineMap2D.identity(), planted, subpix.AffineMap2D.translation(-5, 4)]
    r = subpix.match_general(m1, m2, candidates, epsilon=0.25, seed=2)
    assert r["candidate_index"] == 1
    assert not r["all_discarded"]


def test_worker_count_never_changes_results():
    m1, m2 = subpix.gen_d1(16, 1, 21)
    one = subpix.match_smooth(m1, m2, family="translation", epsilon=0.3, seed=5, workers=1)
    four = subpix.match_smooth(m1, m2, family="translation", epsilon=0.3, seed=5, workers=4)
    assert one == four


def test_reduction_consistency_on_quantized_values():
    n = 8
    vals1 = [((3 * i + j) % (n + 1)) / n for i in range(n) for j in range(n)]
    vals2 = [((i + 2 * j) % (n + 1)) / n for i in range(n) for j in range(n)]
    g1 = subpix.GrayImage2D(n, vals1)
    g2 = subpix.GrayImage2D(n, vals2)
    rep = subpix.reduction_consistency(
        g1, g2, subpix.AffineMap2D.translation(1, 0), subpix.IntensityMap(con=1.25, bri=0.125)
    )
    assert rep["gap"] <= 1.0 / n + 1e-12


def test_reduce_to_3d_columns():
    n = 4
    g = subpix.GrayImage2D(n, [0.0, 0.25, 0.5, 1.0] * 4)
    vol = subpix.reduce_to_3d(g)
    assert vol.n == n
    # column height equals the number of levels at or below the value
    assert sum(vol.get(1, 4, k) for k in range(1, n + 1)) == 4
    assert sum(vol.get(1, 1, k) for k in range(1, n + 1)) == 0


def test_gen_d2_plants_a_cheap_translation():
    m1, m2, s_h, s_v = subpix.gen_d2(32, 2, 13)
    assert s_h % 2 == 0 and s_v % 2 == 0
    planted = subpix.distance(m1, m2, subpix.AffineMap2D.translation(s_h, s_v))
    assert planted <= 15.0 / 64.0


def test_gen_d1_separated_under_translations():
    m1, m2 = subpix.gen_d1(64, 1, 17)
    assert subpix.min_translation_distance(m1, m2, 16) > 0.3


def test_cover_size_matches_axis_product():
    size = subpix.cover_size("2d", "translation", 16, delta_prime=0.5)
    # per-axis count for translations over [-n, n]: ceil(2 / (sqrt(2) * delta)) + 1
    delta = 0.5 / 5.0
    per_axis = math.ceil(2.0 / (math.sqrt(2.0) * delta)) + 1
    assert size == per_axis * per_axis


def test_file_round_trip(tmp_path):
    img = checkerboard(8)
    path = str(tmp_path / "cb.pbm")
    subpix.write_pbm(path, img)
    back = subpix.read_pbm(path)
    assert back.values() == img.values()


def test_volume_matcher_recovers_depth_shift():
    n = 6
    vol2 = subpix.BinaryImage3D(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                vol2.set(i, j, k, (i + j + k) % 3 == 0)
    r = subpix.match_volume(vol2, vol2, family="identity", delta_prime=1.2, epsilon=0.3, seed=3)
    assert r["distance"] <= 0.2


def test_invalid_arguments_raise():
    with pytest.raises(ValueError):
        subpix.BinaryImage2D(4, [1, 0])
    with pytest.raises(ValueError):
        subpix.cover_size("4d", "affine", 8)
