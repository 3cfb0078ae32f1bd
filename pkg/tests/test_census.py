import numpy as np
import pytest

from latrot.angle import context_from_text
from latrot.census import (
    CensusKind,
    Method,
    brute_force_census,
    collision_census,
    collision_preimages,
    collision_site_exact,
    growth_fit,
    hole_census,
    hole_test_exact,
    neighbor_boxes,
)
from latrot.errors import CapExceeded, DegenerateCounts, UnsupportedMode
from latrot.exactnum import ZERO, compare, rational
from latrot.kernels import make_form, rotation_forms
from latrot.rotation import RoundingMode, discrete_rotate

EXACT_ANGLES = ["pi/4", "pi/6", "pi/3", "pyth:3,4,5", "pyth:5,12,13"]
QUADRANT_ANGLES = ["pi*3/4", "pi*7/6", "pi*7/4", "pyth:-3,4,5", "pyth:3,-4,5"]


def test_cardinal_censuses_are_zero():
    for text in ["0", "pi/2", "pi", "pi*3/2"]:
        ctx = context_from_text(text)
        for M in (0, 10):
            assert collision_census(ctx, M).count == 0
            assert hole_census(ctx, M).count == 0
            assert brute_force_census(
                ctx, M, RoundingMode.FLOOR, CensusKind.COLLISIONS
            ).count == 0


def test_pi_quarter_collision_contains_origin():
    ctx = context_from_text("pi/4")
    rep = collision_census(ctx, 2, keep_points=True)
    assert (0, 0) in rep.points
    assert discrete_rotate(ctx, (0, 0)) == discrete_rotate(ctx, (1, 0)) == (0, 0)


@pytest.mark.parametrize("text", EXACT_ANGLES + QUADRANT_ANGLES)
def test_characterization_equals_oracle(text):
    ctx = context_from_text(text)
    for M in (3, 17):
        c = collision_census(ctx, M, keep_points=True)
        co = brute_force_census(
            ctx, M, RoundingMode.FLOOR, CensusKind.COLLISIONS, keep_points=True
        )
        assert (c.count, c.points) == (co.count, co.points)
        h = hole_census(ctx, M, keep_points=True)
        ho = brute_force_census(
            ctx, M, RoundingMode.FLOOR, CensusKind.HOLES, keep_points=True
        )
        assert (h.count, h.points) == (ho.count, ho.points)


def test_characterization_equals_oracle_numeric():
    for text in ["rad:~1.0", "quad:sin=sqrt(3)/3,cos=sqrt(6)/3"]:
        ctx = context_from_text(text)
        for M in (5, 20):
            assert (
                collision_census(ctx, M).count
                == brute_force_census(
                    ctx, M, RoundingMode.FLOOR, CensusKind.COLLISIONS
                ).count
            )
            assert (
                hole_census(ctx, M).count
                == brute_force_census(
                    ctx, M, RoundingMode.FLOOR, CensusKind.HOLES
                ).count
            )


def test_colliding_pairs_are_unit_neighbors():
    for text in ["pi/4", "pyth:3,4,5", "rad:~1.0"]:
        ctx = context_from_text(text)
        groups = collision_preimages(ctx, 12)
        assert groups  # collisions exist away from cardinal angles
        for image, pres in groups.items():
            assert len(pres) == 2
            (a1, b1), (a2, b2) = pres
            assert (a1 - a2) ** 2 + (b1 - b2) ** 2 == 1


def test_hole_corner_test_counterexample():
    # The containing cell's corners all miss (1,0), yet (2,0) maps there:
    # a hole test restricted to those four corners would be wrong.
    ctx = context_from_text("pyth:5,12,13")
    assert discrete_rotate(ctx, (2, 0)) == (1, 0)
    assert not hole_test_exact(ctx, 1, 0)


def test_hole_exact_test_matches_census():
    ctx = context_from_text("pyth:3,4,5")
    rep = hole_census(ctx, 8, keep_points=True)
    holes = set(rep.points)
    for n in range(-8, 9):
        for m in range(-8, 9):
            assert hole_test_exact(ctx, n, m) == ((n, m) in holes)


def test_hole_closed_form_systems_match():
    # Per-quadrant double inequalities on the hole cell, cross-checked
    # against the census (one angle per quadrant).
    cases = {
        "pyth:3,4,5": (
            (rational(1, 5), rational(3, 5)),  # X in [1-cos, sin)
            (rational(-2, 5), rational(0)),  # Y in [1-sin-cos, 0)
        ),
        "pyth:-4,3,5": (  # quadrant 4 (sin<0<cos): X in [1+sin-cos, 0), Y in [1-cos, -sin)
            (rational(-2, 5), rational(0)),
            (rational(2, 5), rational(4, 5)),
        ),
    }
    M = 12
    for text, ((lox, hix), (loy, hiy)) in cases.items():
        ctx = context_from_text(text)
        holes = set(hole_census(ctx, M, keep_points=True).points)
        found = set()
        R = 2 * M
        for a in range(-R, R + 1):
            for b in range(-R, R + 1):
                x = ctx.cos * a - ctx.sin * b
                y = ctx.sin * a + ctx.cos * b
                # n with X = x - n in [lox, hix): n in (x - hix, x - lox]
                from latrot.exactnum import floor_exact

                n = floor_exact(x - lox)
                m = floor_exact(y - loy)
                okx = compare(x - n, lox) >= 0 and compare(x - n, hix) < 0
                oky = compare(y - m, loy) >= 0 and compare(y - m, hiy) < 0
                if okx and oky and abs(n) <= M and abs(m) <= M:
                    found.add((n, m))
        assert found == holes, text


def test_monotone_in_window():
    ctx = context_from_text("pyth:3,4,5")
    counts = [collision_census(ctx, M).count for M in (4, 8, 16, 24)]
    assert counts == sorted(counts)
    counts = [hole_census(ctx, M).count for M in (4, 8, 16, 24)]
    assert counts == sorted(counts)


def test_pair_count_diagnostics():
    ctx = context_from_text("pi/4")
    rep = collision_census(ctx, 16, count_pairs=True)
    oracle = brute_force_census(
        ctx, 16, RoundingMode.FLOOR, CensusKind.COLLISIONS, count_pairs=True
    )
    assert rep.pair_count == oracle.pair_count == rep.count  # multiplicity 2 each


def test_unsupported_mode_and_fallback():
    ctx = context_from_text("pyth:3,4,5")
    with pytest.raises(UnsupportedMode):
        collision_census(ctx, 8, RoundingMode.ROUND, method=Method.CHARACTERIZATION)
    rep = collision_census(ctx, 8, RoundingMode.ROUND)  # auto falls back
    assert rep.method is Method.BRUTE_FORCE
    assert rep.count == 0  # rounded rational rotations are bijective
    assert hole_census(ctx, 8, RoundingMode.ROUND).count == 0
    trunc = brute_force_census(ctx, 8, RoundingMode.TRUNC, CensusKind.COLLISIONS)
    assert trunc.count > 0


def test_oracle_cap():
    ctx = context_from_text("pi/4")
    with pytest.raises(CapExceeded):
        brute_force_census(ctx, 600, RoundingMode.FLOOR, CensusKind.HOLES)
    rep = brute_force_census(
        ctx, 600, RoundingMode.FLOOR, CensusKind.HOLES, cap=1024
    )
    assert rep.count > 0


def test_growth_fit_exponents_small():
    ctx = context_from_text("pyth:3,4,5")
    fit = growth_fit(ctx, [16, 32, 64, 128], kind=CensusKind.HOLES)
    assert 1.7 <= fit.exponent <= 2.2
    assert fit.r_squared > 0.99
    with pytest.raises(DegenerateCounts):
        growth_fit(context_from_text("pi/2"), [16, 32, 64])
    with pytest.raises(ValueError):
        growth_fit(ctx, [16, 32])


def test_threads_do_not_change_results():
    ctx = context_from_text("pyth:5,12,13")
    a = collision_census(ctx, 20, keep_points=True, threads=1)
    b = collision_census(ctx, 20, keep_points=True, threads=4)
    assert (a.count, a.points) == (b.count, b.points)
    ha = hole_census(ctx, 20, keep_points=True, threads=1)
    hb = hole_census(ctx, 20, keep_points=True, threads=4)
    assert (ha.count, ha.points) == (hb.count, hb.points)


def test_points_sorted_by_y_then_x():
    ctx = context_from_text("pi/4")
    pts = hole_census(ctx, 10, keep_points=True).points
    assert pts == sorted(pts, key=lambda p: (p[1], p[0]))


def test_kernels_match_exact_layer():
    rng = np.random.default_rng(11)
    for text in EXACT_ANGLES + ["rad:~1.0"]:
        ctx = context_from_text(text)
        k1, k2 = rotation_forms(ctx, max_abs=200)
        X = rng.integers(-200, 201, size=150)
        Y = rng.integers(-200, 201, size=150)
        F1, u1 = k1.floor(X, Y)
        F2, u2 = k2.floor(X, Y)
        for i in range(len(X)):
            x, y = int(X[i]), int(Y[i])
            e = discrete_rotate(ctx, (x, y))
            got = (
                F1[i] if (u1 is None or not u1[i]) else k1.exact_floor(x, y),
                F2[i] if (u2 is None or not u2[i]) else k2.exact_floor(x, y),
            )
            assert got == e


def test_collision_site_exact_agrees_with_neighbors():
    for text in ["pi/4", "pyth:3,4,5", "rad:~1.0"]:
        ctx = context_from_text(text)
        for a in range(-6, 7, 3):
            for b in range(-6, 7, 2):
                image, fired = collision_site_exact(ctx, a, b)
                truth = [
                    (da, db)
                    for da, db in ((0, 1), (1, 0), (0, -1), (-1, 0))
                    if discrete_rotate(ctx, (a + da, b + db)) == image
                ]
                assert fired == truth, (text, a, b)


def test_neighbor_boxes_interval_shapes():
    ctx = context_from_text("pyth:3,4,5")
    for _, (lo1, hi1), (lo2, hi2) in neighbor_boxes(ctx):
        assert compare(lo1, ZERO) >= 0 and compare(hi1, rational(1)) <= 0
        assert compare(lo2, ZERO) >= 0 and compare(hi2, rational(1)) <= 0
