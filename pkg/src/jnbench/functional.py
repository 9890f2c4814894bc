"""Oscillation functionals over tower constructions.

Everything here is a pure function of an immutable TowerSet and exact
interval geometry: mean and infimum oscillation, the per-interval quantity
F(J) = |J| (mean osc)^p, partition sums, length-capped partition sums (the
small-scale modulus), the short-interval mass condition, big-cube decay for
trivial extensions to n dimensions, the product-rectangle reduction, the
weak-L^p quasinorm, interval classification against the gap geometry, and
two standalone inequality kernels (power-mean monotonicity, a Taylor-type
two-point bound).
"""

from fractions import Fraction

from .errors import DomainError, PreconditionError, UnsupportedCaseError
from .geometry import Coord, Interval, overlap_free
from .xreal import (
    ExtReal, ZERO, ONE, cmp, exp2, pow_real, sum_compensated, xmax,
)

# interval classes relative to the anchor tower
NONE = "NONE"
CONTAINED = "CONTAINED"
SHORT = "SHORT"
MEDIUM = "MEDIUM"
LONG = "LONG"


class OscTerm:
    """One partition member: interval, its mean oscillation, its F(J) term,
    and where it sits relative to the tower family."""

    __slots__ = ("J", "mean_osc", "term", "cls", "anchor_level")

    def __init__(self, J, mean_osc, term, cls, anchor_level):
        self.J = J
        self.mean_osc = mean_osc
        self.term = term
        self.cls = cls
        self.anchor_level = anchor_level


def _measure_ext(J):
    m = J.measure()
    if m.is_zero():
        raise DomainError("interval has zero length")
    return m.to_extreal()


def _pow(v, expo):
    if v.sign == 0:
        return ZERO
    return pow_real(v, expo)


def mean_osc(ts, J, prof=None):
    """Average deviation from the interval average: (1/|J|) int_J |f - f_J|."""
    m = _measure_ext(J)
    if prof is None:
        prof = ts.profile(J)
    f_j = ts.integral_from_profile(prof) / m
    return ts.integral_abs_dev(J, f_j, prof) / m


def inf_osc(ts, J, prof=None):
    """Infimum over centers of the average deviation; the median attains it."""
    m = _measure_ext(J)
    if prof is None:
        prof = ts.profile(J)
    c = ts.median(J, prof)
    return ts.integral_abs_dev(J, c, prof) / m


def osc_term(ts, J, p):
    """Bundle mean oscillation, F(J) = |J| mean^p, and the classification."""
    m = _measure_ext(J)
    prof = ts.profile(J)
    mo = mean_osc(ts, J, prof)
    cls, anchor = classify(ts, J, prof)
    return OscTerm(J, mo, m * _pow(mo, Fraction(p)), cls,
                   anchor[0] if anchor else None)


def jnp_sum(ts, intervals, p):
    """Sum of |J_i| (mean osc over J_i)^p over pairwise disjoint intervals."""
    if not overlap_free(intervals):
        raise PreconditionError("partition intervals overlap")
    dom = ts.domain()
    pf = Fraction(p)
    terms = []
    for J in intervals:
        if not (dom.lo <= J.lo and J.hi <= dom.hi):
            raise PreconditionError("interval outside the unit domain")
        if J.is_empty():
            continue
        terms.append(J.measure().to_extreal() * _pow(mean_osc(ts, J), pf))
    return sum_compensated(terms)


def vjn_modulus_terms(ts, a, intervals, p):
    """jnp_sum restricted to partitions with every |J_i| <= a."""
    cap = _as_coord_len(a)
    for J in intervals:
        if J.measure() > cap:
            raise PreconditionError("interval longer than the cap")
    return jnp_sum(ts, intervals, p)


def classify(ts, J, prof=None):
    """Position of J relative to the widest tower it meets (the anchor).

    Returns (cls, anchor) with cls one of NONE/CONTAINED/SHORT/MEDIUM/LONG
    and anchor = (level, idx) or None.  The mass of J outside the anchor
    tower is compared exactly against the nearest-descendant gap delta_i
    and twice the farthest-descendant reach D_i."""
    if prof is None:
        prof = ts.profile(J)
    if prof.anchor is None:
        return (NONE, None)
    level, idx = prof.anchor
    hat = ts.node_interval(level, idx)
    inter = J.intersect(hat)
    inside = inter.measure() if inter is not None else Coord(Fraction(0))
    outside = J.measure() - inside
    if outside.is_zero():
        return (CONTAINED, prof.anchor)
    if outside <= ts.delta_coord(level):
        return (SHORT, prof.anchor)
    if outside <= ts.big_d_coord(level).scaled(Fraction(2)):
        return (MEDIUM, prof.anchor)
    return (LONG, prof.anchor)


def fj_bound_check(ts, J):
    """Both sides of the per-interval bound for v = u^(p/q), constant-free.

    lhs = F(J) = |J| (mean osc of v over J)^q.  rhs is the three-term
    majorant: |J|^(1-q) (int over J minus the anchor tower of v)^q
    + min(|J minus anchor|, |J cap anchor|) b_i^p
    + |J cap anchor| i^(-q/p) 2^(i^2), with i the anchor level.
    Returns (lhs, rhs, ratio) with ratio = lhs/rhs as a float."""
    prof = ts.profile(J)
    cls, anchor = classify(ts, J, prof)
    if cls == NONE:
        raise PreconditionError("interval meets no tower")
    p = ts.schedule.p_frac
    q = p / ts.r
    i, idx = anchor
    hat = ts.node_interval(i, idx)
    m = _measure_ext(J)
    mo = mean_osc(ts, J, prof)
    lhs = m * _pow(mo, q)

    inter = J.intersect(hat)
    inside = inter.measure()
    outside = J.measure() - inside
    out_int = ZERO
    if J.lo < hat.lo:
        out_int = out_int + ts.integral(Interval(J.lo, hat.lo if hat.lo < J.hi else J.hi))
    if hat.hi < J.hi:
        out_int = out_int + ts.integral(Interval(hat.hi if hat.hi > J.lo else J.lo, J.hi))
    t1 = _pow(m, 1 - q) * _pow(out_int, q)
    small = outside if outside < inside else inside
    t2 = small.to_extreal() * _pow(ts.schedule.b_ext(i), p)
    t3 = inside.to_extreal() * _pow(ExtReal.from_int(i), -q / p) * exp2(i * i)
    rhs = t1 + t2 + t3
    return (lhs, rhs, (lhs / rhs).to_float())


def auki(ts, J, p):
    """Short-interval mass functional |J|^(1-p) (int_J f)^p."""
    m = _measure_ext(J)
    total = ts.integral(J)
    if total.sign == 0:
        return ZERO
    pf = Fraction(p)
    return _pow(m, 1 - pf) * _pow(total, pf)


def big_cube_osc(ts, side, n_dims, p):
    """|Q|^(1/p) times the mean oscillation of the trivial n-D extension
    (f on [0,1]^n, zero outside) over a cube Q of the given side >= 1."""
    side = side if isinstance(side, ExtReal) else ExtReal.from_float(side)
    if n_dims < 1:
        raise DomainError("need at least one dimension")
    if cmp(side, ONE) < 0:
        raise UnsupportedCaseError("cube must contain the support box")
    vol = _pow(side, Fraction(n_dims))
    mass = ts.lp_mass(1)
    if mass.sign == 0:
        return ZERO
    mean = mass / vol
    dev_in = ts.integral_abs_dev(ts.domain(), mean)
    dev_out = (vol - ONE) * mean
    return _pow(vol, Fraction(1) / Fraction(p) - 1) * (dev_in + dev_out)


def product_reduction(ts, J, K_measure):
    """Mean oscillation over the rectangle J x K of the extension constant
    along the second axis, against the plain 1-D value; they must agree."""
    K = K_measure if isinstance(K_measure, ExtReal) else ExtReal.from_float(K_measure)
    if K.sign <= 0:
        raise PreconditionError("second-axis measure must be positive")
    m = _measure_ext(J)
    prof = ts.profile(J)
    area = K * m
    f_rect = (K * ts.integral_from_profile(prof)) / area
    dev_rect = K * ts.integral_abs_dev(J, f_rect, prof)
    return (dev_rect / area, mean_osc(ts, J, prof))


def weak_lp(ts, p, t_samples):
    """max over samples of t^p |{f > t}|."""
    pf = Fraction(p)
    best = ZERO
    for t in t_samples:
        t = t if isinstance(t, ExtReal) else ExtReal.from_float(t)
        if t.sign <= 0:
            raise DomainError("samples must be positive")
        lam = ts.distribution(t)
        if lam.sign == 0:
            continue
        best = xmax(best, _pow(t, pf) * lam)
    return best


def per_interval_q_monotonicity(u_set, J, p, q):
    """lhs = |J| inf_osc(u^(p/q), J)^q against rhs = |J| inf_osc(u, J)^p.
    Raising the exponent never increases the per-interval term."""
    pf, qf = Fraction(p), Fraction(q)
    if qf < pf:
        raise PreconditionError("need q >= p")
    if u_set.r != 1:
        raise PreconditionError("base set must carry power 1")
    m = _measure_ext(J)
    v = u_set.with_power(pf / qf)
    lhs = m * _pow(inf_osc(v, J), qf)
    rhs = m * _pow(inf_osc(u_set, J), pf)
    return (lhs, rhs)


def taylor_check(i, p, q):
    """Two-point power-difference bound:
    (1 + i^(-1/p))^(p/q) - (1 - i^(-1/p))^(p/q) <= 2 i^(-1/p)."""
    if i < 1:
        raise PreconditionError("need i >= 1")
    pf, qf = Fraction(p), Fraction(q)
    if not (1 < pf < qf):
        raise PreconditionError("need 1 < p < q")
    x = _pow(ExtReal.from_int(i), Fraction(-1) / pf)
    c = pf / qf
    lhs = _pow(ONE + x, c) - _pow(ONE - x, c)
    rhs = x + x
    return (lhs, rhs)


def _as_coord_len(a):
    if isinstance(a, Coord):
        return a
    if isinstance(a, ExtReal):
        return Coord(a.to_fraction())
    return Coord(Fraction(a))
