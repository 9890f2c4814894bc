"""Tower layout, closed-form evaluation, and snapshot round trips."""

import io
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jnbench.errors import DomainError, PreconditionError, RangeLimitError
from jnbench.geometry import Coord, Interval, overlap_free
from jnbench.towers import (FAMILIES, Schedule, build, gap_inner,
                            parse_snapshot, reach)
from jnbench.xreal import ExtReal, ZERO, cmp, exp2, pow_real

KAPPA = Fraction(1)  # widths are kappa * 2^(-i^2-i); kappa carried in Coord


def u2(depth=8):
    return build(Schedule("u", 2), depth)


def g2(depth=8):
    return build(Schedule("g", 2), depth)


def test_family_validation():
    with pytest.raises(DomainError):
        Schedule("nope", 2)
    with pytest.raises(DomainError):
        Schedule("u", 1.0)
    with pytest.raises(DomainError):
        Schedule("custom", 2)  # needs the s_i sequence


def test_heights_match_definitions():
    sch = Schedule("u", 2)
    for i in (1, 2, 5):
        x = pow_real(ExtReal.from_int(i), Fraction(-1, 2))
        h = exp2(Fraction(i * i, 2))
        assert cmp(sch.a_ext(i), (ExtReal.from_int(1) - x) * h) == 0
        assert cmp(sch.b_ext(i), (ExtReal.from_int(1) + x) * h) == 0
    flat = Schedule("g0", 2)
    for i in (1, 3):
        want = pow_real(exp2(i * i) * ExtReal.from_int_ratio(1, i),
                        Fraction(1, 2))
        assert cmp(flat.a_ext(i), want) == 0
        assert cmp(flat.b_ext(i), flat.a_ext(i)) == 0


def test_custom_family_heights_and_errors():
    sch = Schedule("custom", 2, custom_s=[1.0, 0.0, 0.25])
    assert cmp(sch.b_ext(1), exp2(Fraction(1, 2))) == 0
    assert sch.b_ext(2).is_zero()
    with pytest.raises(RangeLimitError):
        sch.b_ext(4)
    with pytest.raises(DomainError):
        Schedule("custom", 2, custom_s=[-1.0]).b_ext(1)


def test_node_intervals_disjoint():
    ts = u2(8)
    assert overlap_free([iv for _l, _i, iv in ts.nodes()])


def test_child_placement_exact():
    ts = u2(6)
    sch = ts.schedule
    for level in range(1, 6):
        for idx in (0, (1 << (level - 1)) - 1):
            parent = ts.node_interval(level, idx)
            left = ts.node_interval(level + 1, 2 * idx)
            right = ts.node_interval(level + 1, 2 * idx + 1)
            assert left.hi + sch.d_coord(level) == parent.lo
            assert parent.hi + sch.d_coord(level) == right.lo


def test_level_counts_and_widths():
    ts = g2(6)
    for level in range(1, 7):
        ivs = [iv for l, _i, iv in ts.nodes() if l == level]
        assert len(ivs) == 1 << (level - 1)
        for iv in ivs:
            assert iv.measure() == ts.schedule.l_coord(level)


def test_eval_at_roof_edges_and_gaps():
    ts = u2(6)
    sch = ts.schedule
    for level in (1, 2, 4):
        iv = ts.node_interval(level, 0)
        assert cmp(ts.eval_at(iv.lo), sch.a_ext(level)) == 0
        mid = Interval(iv.lo, iv.hi).lo + sch.l_coord(level).scaled(Fraction(1, 2))
        want = (sch.a_ext(level) + sch.b_ext(level)) * ExtReal.from_float(0.5)
        got = ts.eval_at(mid)
        assert abs(got - want).to_fraction() <= want.to_fraction() / (1 << 50)
    gap_pt = ts.node_interval(1, 0).hi + sch.d_coord(1).scaled(Fraction(1, 2))
    assert ts.eval_at(gap_pt).is_zero()


def test_flat_roof_is_constant():
    ts = g2(4)
    iv = ts.node_interval(2, 1)
    h = ts.schedule.b_ext(2)
    for num in (1, 7, 15):
        x = iv.lo + iv.measure().scaled(Fraction(num, 16))
        assert cmp(ts.eval_at(x), h) == 0


def test_integral_additivity():
    ts = u2(8)
    J = Interval(Coord(Fraction(1, 8)), Coord(Fraction(7, 8)))
    mid = Coord(Fraction(1, 2))
    whole = ts.integral(J)
    split = ts.integral(Interval(J.lo, mid)) + ts.integral(Interval(mid, J.hi))
    assert abs(whole - split).to_fraction() <= whole.to_fraction() / (1 << 45)


def test_node_integral_matches_interval_integral():
    for fam in FAMILIES[:3]:
        ts = build(Schedule(fam, 2), 8)
        for level in (1, 3):
            iv = ts.node_interval(level, 0)
            a = ts.node_integral(level)
            b = ts.integral(iv)
            assert abs(a - b).to_fraction() <= a.to_fraction() / (1 << 45)


def test_power_transform_integrals():
    ts = g2(6)
    v = ts.with_power(Fraction(2, 3))
    # flat tower: integral of h^(2/3) over the tower is l * h^(2/3)
    lv = ts.schedule.l_ext(3)
    want = lv * pow_real(ts.schedule.b_ext(3), Fraction(2, 3))
    got = v.node_integral(3)
    assert abs(got - want).to_fraction() <= want.to_fraction() / (1 << 45)


def test_shift_translation_invariance():
    ts = u2(8)
    s = Coord(Fraction(3, 16))
    moved = ts.shifted(s)
    J = Interval(Coord(Fraction(1, 4)), Coord(Fraction(3, 4)))
    a = ts.integral(J)
    b = moved.integral(J.shifted(s))
    assert abs(a - b).to_fraction() <= a.to_fraction() / (1 << 40)
    da = ts.integral_abs_dev(J, a / J.measure().to_extreal())
    db = moved.integral_abs_dev(J.shifted(s), a / J.measure().to_extreal())
    assert abs(da - db).to_fraction() <= da.to_fraction() / (1 << 40)


def test_distribution_step_structure():
    ts = g2(6)
    sch = ts.schedule
    # heights increase with the level, so {f > t} at t just below h_k is
    # the union of all towers of level >= k
    for k in (1, 3):
        t = sch.b_ext(k) * ExtReal.from_float(1.0 - 2.0 ** -20)
        lam = ts.distribution(t)
        want = ZERO
        for m in range(k, 7):
            want = want + ExtReal.from_int(1 << (m - 1)) * sch.l_ext(m)
        assert abs(lam - want).to_fraction() <= want.to_fraction() / (1 << 45)
    above = sch.b_ext(6) * ExtReal.from_int(2)
    assert ts.distribution(above).is_zero()


@given(st.integers(0, (1 << 12) - 2), st.integers(1, 100))
@settings(max_examples=40)
def test_distribution_monotone(lo_num, span):
    ts = u2(6)
    t1 = ExtReal.from_fraction(Fraction(lo_num + 1, 1 << 8))
    t2 = t1 * (ExtReal.from_int(1) + ExtReal.from_int_ratio(span, 100))
    assert cmp(ts.distribution(t1), ts.distribution(t2)) >= 0


def test_median_two_cell_example():
    # a deepest-level tower has no descendants, so the stretch just past it
    # is empty: J = tower + equal-length gap is a clean two-cell example
    # where every center between 0 and h gives deviation h/2 * |J|
    ts = g2(6)
    iv = ts.node_interval(6, 0)
    J = Interval(iv.lo, iv.hi + iv.measure())
    med = ts.median(J)
    h = ts.schedule.b_ext(6)
    dev = ts.integral_abs_dev(J, med)
    want = h * ExtReal.from_float(0.5) * J.measure().to_extreal()
    assert abs(dev - want).to_fraction() <= want.to_fraction() / (1 << 45)


def test_lp_mass_partial_reaches_total():
    ts = build(Schedule("g0", 2), 10)
    assert cmp(ts.lp_mass_partial(2, 10), ts.lp_mass(2)) == 0
    a = ts.lp_mass_partial(2, 4)
    b = ts.lp_mass_partial(2, 9)
    assert cmp(a, b) < 0


def test_margin_guards():
    ts = u2(8)
    with pytest.raises(RangeLimitError):
        gap_inner(ts, 0)
    with pytest.raises(RangeLimitError):
        gap_inner(ts, 7)
    with pytest.raises(RangeLimitError):
        reach(ts, 8)
    assert cmp(gap_inner(ts, 3), ts.delta_coord(3).to_extreal()) == 0
    assert cmp(reach(ts, 3), ts.big_d_coord(3).to_extreal()) == 0


def test_snapshot_round_trip():
    ts = build(Schedule("g0", 2), 6)
    buf = io.StringIO()
    ts.serialize(buf, max_level=4)
    buf.seek(0)
    rows = parse_snapshot(buf)
    assert len(rows) == (1 << 4) - 1
    level, path, lo, hi = rows[0]
    assert level == 1
    assert cmp(lo, ts.node_interval(1, 0).lo.to_extreal()) == 0
    assert cmp(hi, ts.node_interval(1, 0).hi.to_extreal()) == 0
    # every recorded node reproduces its rebuilt twin bit for bit
    rebuilt = build(Schedule("g0", 2), 6)
    for level, path, lo, hi in rows:
        idx = int(path, 2) if path != "-" else 0
        iv = rebuilt.node_interval(level, idx)
        assert cmp(lo, iv.lo.to_extreal()) == 0
        assert cmp(hi, iv.hi.to_extreal()) == 0


@given(st.integers(0, (1 << 10) - 1), st.integers(1, (1 << 10)))
@settings(max_examples=60)
def test_deviation_dominates_signed_gap(a_num, width):
    # integral |f - c| >= |integral f - c |J||, any c
    ts = u2(6)
    lo = Fraction(a_num, 1 << 10)
    hi = min(lo + Fraction(width, 1 << 10), Fraction(1))
    if lo == hi:
        return
    J = Interval(Coord(lo), Coord(hi))
    m = J.measure().to_extreal()
    c = ExtReal.from_float(1.25)
    dev = ts.integral_abs_dev(J, c)
    signed = abs(ts.integral(J) - c * m)
    slack = ExtReal.from_float(1.0 + 2.0 ** -30)
    assert cmp(dev * slack, signed) >= 0
