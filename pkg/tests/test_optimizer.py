"""Partition search: grid construction, pair evaluation, DP optimality
against exhaustive enumeration, and the explicit witness families."""

from fractions import Fraction

import pytest

from jnbench.errors import DomainError, PreconditionError, SizeError
from jnbench.functional import osc_term
from jnbench.geometry import (Coord, COORD_ONE, COORD_ZERO, Interval,
                              overlap_free)
from jnbench.optimizer import (BreakpointGrid, MIDPOINT, PairEvaluator,
                               branch_grid, candidate_grid, cover_interval,
                               dp_max, minimal_cover_level,
                               modulus_lower_curve, witness_cover,
                               witness_dyadic, witness_dyadic_sums)
from jnbench.oracle import brute_force_max
from jnbench.towers import Schedule, build
from jnbench.xreal import ExtReal, cmp, exp2


def u2(depth=8):
    return build(Schedule("u", 2), depth)


def test_candidate_grid_counts():
    # depth 2 without refinement: 3 towers (6 edges) plus the two domain
    # endpoints
    ts = u2(2)
    g0 = candidate_grid(ts, 0)
    assert len(g0) == 8
    pts = g0.positions
    assert all(a < b for a, b in zip(pts, pts[1:]))
    assert pts[0] == COORD_ZERO and pts[-1] == COORD_ONE
    g1 = candidate_grid(ts, 1)
    assert len(g1) > len(g0)
    held = set()
    for pos in g1.positions:
        held.add(pos)
    for pos in g0.positions:
        assert pos in held
    with pytest.raises(DomainError):
        candidate_grid(ts, -1)


def test_pair_evaluator_matches_direct():
    ts = u2(8)
    grid = candidate_grid(ts, 1, max_level=4)
    ev = PairEvaluator(ts, grid, 2)
    n = len(grid)
    step = max(1, n // 6)
    for j in range(0, n - 1, step):
        for k in range(j + 1, n, step):
            frac, ext = ev.term(j, k)
            assert frac == ext.to_fraction()
            direct = osc_term(ts, ev.interval(j, k), 2).term
            if direct.sign == 0:
                assert ext.sign == 0
            else:
                gap = abs(ext - direct).to_fraction()
                assert gap <= abs(direct).to_fraction() / (1 << 35)


def test_holder_cap_bounds_terms():
    ts = u2(8)
    grid = candidate_grid(ts, 0, max_level=3)
    ev = PairEvaluator(ts, grid, 2)
    pm = ev.holder_cap()
    assert pm == sorted(pm)
    n = len(grid)
    for j in range(n - 1):
        for k in range(j + 1, n):
            f = ev.term(j, k)[1]
            assert f.to_float() <= (pm[k] - pm[j]) * 1.001 + 1e-12


def test_dp_matches_exhaustive():
    ts = u2(10)
    cuts = [Fraction(k, 10) for k in range(11)]
    grid = BreakpointGrid([(Coord(c), MIDPOINT) for c in cuts])
    ev = PairEvaluator(ts, grid, 2)
    val, parts = dp_max(ts, 2, grid, evaluator=ev)
    assert val == brute_force_max(ts, 2, grid, evaluator=ev)
    assert overlap_free(parts)
    pts = grid.positions
    recon = Fraction(0)
    for J in parts:
        recon += ev.term(pts.index(J.lo), pts.index(J.hi))[0]
    assert ExtReal.from_fraction(recon) == val
    cap = Fraction(3, 10)
    vc, pc = dp_max(ts, 2, grid, max_len=cap, evaluator=ev)
    assert vc == brute_force_max(ts, 2, grid, max_len=cap, evaluator=ev)
    assert cmp(vc, val) <= 0
    for J in pc:
        assert not J.measure() > Coord(cap)


def test_dp_prune_and_feasible_floor():
    ts = u2(10)
    grid = candidate_grid(ts, 0, max_level=4)
    ev = PairEvaluator(ts, grid, 2)
    v0, _p0 = dp_max(ts, 2, grid, evaluator=ev)
    v1, _p1 = dp_max(ts, 2, grid, evaluator=ev, prune=True)
    assert v0 == v1
    # the consecutive full partition is feasible, so the optimum dominates it
    full = Fraction(0)
    for i in range(len(grid) - 1):
        full += ev.term(i, i + 1)[0]
    assert cmp(v0, ExtReal.from_fraction(full)) >= 0


def test_dp_degenerate_grid():
    ts = u2(6)
    g = BreakpointGrid([(COORD_ZERO, MIDPOINT)])
    val, parts = dp_max(ts, 2, g)
    assert val.sign == 0 and parts == []


def test_witness_dyadic_family():
    ts = u2(6)
    fam = witness_dyadic(ts, 4)
    assert len(fam) == (1 << 4) - 1
    assert overlap_free(fam)
    with pytest.raises(SizeError):
        witness_dyadic(build(Schedule("u", 2), 17))


def test_witness_sums_closed_form():
    # sloped roofs: the level total collapses to 2^(-5/4-p)/level
    ts = u2(8)
    for level, count, per, total in witness_dyadic_sums(ts, 2):
        assert count == 1 << (level - 1)
        want = exp2(Fraction(-13, 4)) / ExtReal.from_int(level)
        assert abs(total - want).to_fraction() <= want.to_fraction() / (1 << 30)
    # flat roofs: a bare tower interval has zero oscillation
    for _level, _count, per, total in witness_dyadic_sums(
            build(Schedule("g", 2), 6), 2):
        assert per.sign == 0 and total.sign == 0


def test_cover_family_and_minimal_level():
    ts = build(Schedule("g", 2), 8)
    assert minimal_cover_level(ts) == 1
    fam = witness_cover(ts, 3)
    assert len(fam) == 4
    assert overlap_free(fam)
    assert fam[0] == cover_interval(ts, 3, 0)
    for J in fam:
        assert J.measure() == ts.schedule.l_coord(3).scaled(Fraction(2))
    with pytest.raises(PreconditionError):
        witness_cover(ts, 7)
    with pytest.raises(SizeError):
        witness_cover(ts, 5, limit=8)


def test_cover_minimal_level_can_exceed_one():
    # a huge second-level height drags the cover average at level 1 above
    # three quarters of the roof, pushing the minimal valid level to 2
    s = [1.0, 1e6, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]
    ts = build(Schedule("custom", 2, custom_s=s), 8)
    assert minimal_cover_level(ts) == 2
    with pytest.raises(PreconditionError):
        witness_cover(ts, 1)
    assert len(witness_cover(ts, 2)) == 2


def test_modulus_curve_non_increasing():
    ts = build(Schedule("g", 2), 10)
    g = branch_grid(ts)
    pts = g.positions
    assert all(a < b for a, b in zip(pts, pts[1:]))
    curve = modulus_lower_curve(ts, 2, range(3, 9), grid=g)
    assert [k for k, _c, _v in curve] == list(range(3, 9))
    for (k, c, v) in curve:
        assert cmp(c, ts.delta_coord(k).to_extreal()) == 0
        assert v.sign > 0
    for (_k1, c1, v1), (_k2, c2, v2) in zip(curve, curve[1:]):
        assert cmp(c1, c2) > 0
        assert cmp(v1, v2) >= 0
