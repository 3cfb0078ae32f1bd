import random

import pytest

from latrot.angle import context_from_text
from latrot.errors import InvalidSpec
from latrot.exactnum import quad, rational
from latrot.udist import (
    InequalityBox,
    Parity,
    PythTriple,
    count_solutions,
    count_solutions_residue,
    gen_primitive_triples,
    residue_d1,
    verify_case3_congruences,
)


def test_full_box_counts_everything():
    box = InequalityBox(rational(1), rational(1))
    for text in ["pi/4", "pyth:3,4,5", "rad:~1.0"]:
        ctx = context_from_text(text)
        M = 9
        assert count_solutions(ctx, box, M) == (2 * M + 1) ** 2


def test_cardinal_angle_all_fractions_zero():
    ctx = context_from_text("pi/2")
    box = InequalityBox(rational(1, 1000), rational(1, 1000))
    M = 11
    assert count_solutions(ctx, box, M) == (2 * M + 1) ** 2


def test_box_validation():
    with pytest.raises(InvalidSpec):
        InequalityBox(rational(0), rational(1, 2))
    with pytest.raises(InvalidSpec):
        InequalityBox(rational(1, 2), rational(3, 2))
    InequalityBox(rational(1), quad(0, 1, 2, 2))  # sqrt2/2 is fine


def test_triple_generation():
    fives = gen_primitive_triples(5)
    assert len(fives) == 1
    t = fives[0]
    assert (t.u, t.v, t.p1, t.p2, t.q, t.h) == (2, 1, 3, 4, 5, 2)
    assert (2 * t.u * t.v * t.h - (t.u**2 - t.v**2)) % t.q == 0

    thirteens = gen_primitive_triples(13)
    assert [(t.p1, t.p2, t.q) for t in thirteens] == [(3, 4, 5), (5, 12, 13)]
    assert thirteens[1].h == 8 and (12 * 8) % 13 == 5

    # (3,1) has equal parity and generates no primitive triple
    assert all((t.u, t.v) != (3, 1) for t in gen_primitive_triples(100))
    with pytest.raises(InvalidSpec):
        PythTriple.from_uv(3, 1)


def test_triple_invariants_bulk():
    import math

    triples = gen_primitive_triples(2000)
    qs = [t.q for t in triples]
    assert qs == sorted(qs)
    for t in triples:
        assert t.p1**2 + t.p2**2 == t.q**2
        assert math.gcd(t.p1, t.q) == math.gcd(t.p2, t.q) == 1
        assert 1 <= t.h <= t.q - 1
        assert (2 * t.u * t.v * t.h - (t.u**2 - t.v**2)) % t.q == 0


def test_residue_d1_examples():
    t = PythTriple.from_uv(2, 1)
    assert residue_d1(t.h, 1, t) == 0
    assert residue_d1(7, 1, t) == 0  # 7 - 2 = 5 == 0 (mod 5)
    assert residue_d1(1, 0, t) == 1
    # {L1(1,0)} = {cos} = 4/5 = {p2 * d1 / q}
    assert (t.p2 * 1) % t.q == 4


def test_congruence_examples_and_random():
    t = PythTriple.from_uv(2, 1)
    rep = verify_case3_congruences(t, [(1, 0), (0, 0), (7, 1)])
    assert rep.all_passed
    assert rep.checks[0].d1 == 1
    assert rep.checks[1].d1 == 0

    t2 = PythTriple.from_uv(3, 2)
    rng = random.Random(7)
    samples = [(rng.randint(-500, 500), rng.randint(-500, 500)) for _ in range(100)]
    assert verify_case3_congruences(t2, samples).all_passed


def test_direct_and_residue_counters_agree():
    box = InequalityBox(rational(1, 2), rational(1, 2))
    for text in ["pyth:3,4,5", "pyth:5,12,13", "pyth:-3,4,5", "pyth:4,3,5"]:
        ctx = context_from_text(text)
        for M in (7, 40):
            for parity in Parity:
                d = count_solutions(ctx, box, M, parity)
                r = count_solutions_residue(ctx, box, M, parity)
                assert d == r, (text, M, parity)


def test_residue_counter_rejects_irrational():
    with pytest.raises(InvalidSpec):
        count_solutions_residue(
            context_from_text("pi/4"), InequalityBox(rational(1, 2), rational(1, 2)), 5
        )


def test_odd_odd_never_exceeds_all():
    box = InequalityBox(rational(2, 5), rational(4, 7))
    for text in ["pi/4", "pyth:3,4,5", "rad:~1.0"]:
        ctx = context_from_text(text)
        assert count_solutions(ctx, box, 25, Parity.ODD_ODD) <= count_solutions(
            ctx, box, 25, Parity.ALL
        )


def test_equidistribution_ratio_generic():
    # rationally independent 1, sin, cos: density of the box
    ctx = context_from_text("quad:sin=sqrt(3)/3,cos=sqrt(6)/3")
    box = InequalityBox(rational(1, 2), rational(1, 2))
    M = 2000
    count = count_solutions(ctx, box, M)
    ratio = count / (2 * M + 1) ** 2
    assert abs(ratio - 0.25) < 0.03


def test_quadratic_bound_boxes_match_census_thresholds():
    # the neighbor-system thresholds 1-cos, 1-sin of a quadrant-1 angle
    # are legal box sides
    ctx = context_from_text("pyth:3,4,5")
    box = InequalityBox(rational(1, 5), rational(2, 5))  # 1-cos, 1-sin
    d = count_solutions(ctx, box, 30)
    r = count_solutions_residue(ctx, box, 30)
    assert d == r > 0
