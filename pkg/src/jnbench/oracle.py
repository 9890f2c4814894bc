"""Independent cross-checks: sampling quadrature, exhaustive partition
search, and the classical power-decay reference function.

The quadrature path deliberately avoids the closed forms used everywhere
else: tower segments are integrated by adaptive Simpson sampling in
normalized coordinates (roof values scaled into [0,1] so the samples are
ordinary floats regardless of the tower height), and deviation integrands
are split analytically at their single kink before sampling.  Agreement
with the antiderivative-based closed forms is therefore a genuine check of
the algebra, if not of the shared arithmetic kernel.
"""

import math
from fractions import Fraction

from .errors import AccuracyError, DomainError, PreconditionError, SizeError
from .geometry import Interval
from .xreal import ExtReal, ONE, ZERO, cmp, exp2, pow_real, sum_compensated


class RefFunction:
    """The power-decay reference x^(-1/p) on (0,1]."""

    __slots__ = ("p",)

    def __init__(self, p):
        if not p > 1:
            raise DomainError("need p > 1")
        self.p = Fraction(p)

    def value(self, x):
        x = x if isinstance(x, ExtReal) else ExtReal.from_float(x)
        if x.sign <= 0:
            raise DomainError("reference function lives on (0,1]")
        return pow_real(x, Fraction(-1) / self.p)

    def antiderivative(self, x):
        """(p/(p-1)) x^(1-1/p), the exact primitive, 0 at 0."""
        x = x if isinstance(x, ExtReal) else ExtReal.from_float(x)
        if x.sign == 0:
            return ZERO
        if x.sign < 0:
            raise DomainError("reference function lives on (0,1]")
        scale = ExtReal.from_fraction(self.p / (self.p - 1))
        return scale * pow_real(x, 1 - Fraction(1) / self.p)

    def integral(self, a, b):
        return self.antiderivative(b) - self.antiderivative(a)

    def abs_dev(self, a, b, c):
        """Integral of |x^(-1/p) - c| over [a,b] via the primitive; the
        integrand crosses zero at x = c^(-p)."""
        a = a if isinstance(a, ExtReal) else ExtReal.from_float(a)
        b = b if isinstance(b, ExtReal) else ExtReal.from_float(b)
        c = c if isinstance(c, ExtReal) else ExtReal.from_float(c)
        if c.sign <= 0:
            return self.integral(a, b)
        xc = pow_real(c, -self.p)
        if cmp(xc, a) <= 0:
            return c * (b - a) - self.integral(a, b)
        if cmp(xc, b) >= 0:
            return self.integral(a, b) - c * (b - a)
        left = self.integral(a, xc) - c * (xc - a)
        right = c * (b - xc) - self.integral(xc, b)
        return left + right

    def osc_term(self, a, b):
        """|Q| (mean osc over Q = [a,b])^p."""
        a = a if isinstance(a, ExtReal) else ExtReal.from_float(a)
        b = b if isinstance(b, ExtReal) else ExtReal.from_float(b)
        size = b - a
        mean = self.integral(a, b) / size
        osc = self.abs_dev(a, b, mean) / size
        return size * pow_real(osc, self.p)

    def distribution(self, t):
        """|{x in (0,1) : x^(-1/p) > t}| = min(1, t^(-p))."""
        t = t if isinstance(t, ExtReal) else ExtReal.from_float(t)
        if t.sign <= 0:
            return ONE
        lam = pow_real(t, -self.p)
        return lam if cmp(lam, ONE) < 0 else ONE


def ref_dyadic_terms(p, count):
    """Oscillation terms of x^(-1/p) on Q_i = [2^-i, 2^(-i+1)); the scaling
    x -> x/2 multiplies f by 2^(1/p), so every term comes out equal."""
    if count < 1:
        raise DomainError("need count >= 1")
    ref = RefFunction(p)
    out = []
    for i in range(1, count + 1):
        out.append(ref.osc_term(exp2(-i), exp2(-i + 1)))
    return out


# -- adaptive sampling ---------------------------------------------------------


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, fa, b, fb, whole, m, fm, tol, depth):
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    err = left + right - whole
    if abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    if depth <= 0:
        raise AccuracyError("quadrature failed to converge")
    h = _adaptive(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
    return h + _adaptive(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)


def _sample_unit(f, tol):
    """Adaptive Simpson of f over [0,1], float in, float out."""
    fa, fb = f(0.0), f(1.0)
    m, fm, whole = _simpson(f, 0.0, fa, 1.0, fb)
    scale = max(abs(whole), 1e-300)
    return _adaptive(f, 0.0, fa, 1.0, fb, whole, m, fm, tol * scale, 48)


def _segment_quad(ts, level, vs, ve, length_ext, tol):
    """Sampled integral of roof^r over one tower segment: roof values are
    normalized by the level's top height so samples stay in [0,1]."""
    top = ts.schedule.b_ext(level)
    if top.sign == 0:
        return ZERO
    alpha = (vs / top).to_float()
    beta = (ve / top).to_float()
    rf = float(ts.r)
    unit = _sample_unit(lambda s: (alpha + (beta - alpha) * s) ** rf, tol)
    return length_ext * pow_real(top, ts.r) * ExtReal.from_float(unit)


def _segment_quad_dev(ts, level, vs, ve, length_ext, c, y, tol):
    """Sampled integral of |roof^r - c| over one segment; the integrand has
    one kink, located exactly in normalized coordinates, so each smooth side
    is sampled separately."""
    if cmp(y, vs) <= 0:
        return _segment_quad(ts, level, vs, ve, length_ext, tol) - c * length_ext
    if cmp(y, ve) >= 0:
        return c * length_ext - _segment_quad(ts, level, vs, ve, length_ext, tol)
    top = ts.schedule.b_ext(level)
    alpha = (vs / top).to_float()
    beta = (ve / top).to_float()
    yn = (y / top).to_float()
    rf = float(ts.r)
    gamma = yn ** rf
    split = (yn - alpha) / (beta - alpha)
    lo = _sample_unit(
        lambda s: gamma - (alpha + (beta - alpha) * (s * split)) ** rf, tol
    ) * split
    hi = _sample_unit(
        lambda s: (alpha + (beta - alpha) * (split + s * (1.0 - split))) ** rf - gamma,
        tol,
    ) * (1.0 - split)
    return length_ext * pow_real(top, ts.r) * ExtReal.from_float(lo + hi)


def _tower_quad(ts, J, tol, c=None):
    """Sampled integral of f (c = None) or |f - c| over J: one sampled
    representative per level of full towers (they are exact translates),
    direct sampling for the at-most-two partial pieces, and the exact gap
    mass times |c|."""
    prof = ts.profile(J)
    sch = ts.schedule
    y = None
    if c is not None and c.sign > 0:
        y = c if ts.r == 1 else pow_real(c, 1 / ts.r)
    terms = []
    if y is not None:
        terms.append(c * prof.gap.to_extreal())
    for level, n in prof.full.items():
        vs, ve = sch.a_ext(level), sch.b_ext(level)
        ln = sch.l_ext(level)
        if y is None:
            seg = _segment_quad(ts, level, vs, ve, ln, tol)
        else:
            seg = _segment_quad_dev(ts, level, vs, ve, ln, c, y, tol)
        terms.append(ExtReal.from_int(n) * seg)
    for level, _idx, s_rel, e_rel in prof.partials:
        vs = ts.roof_at(level, s_rel.to_extreal())
        ve = ts.roof_at(level, e_rel.to_extreal())
        ln = (e_rel - s_rel).to_extreal()
        if y is None:
            seg = _segment_quad(ts, level, vs, ve, ln, tol)
        else:
            seg = _segment_quad_dev(ts, level, vs, ve, ln, c, y, tol)
        terms.append(seg)
    return sum_compensated(terms)


def _ref_quad(ref, J, tol):
    """Blockwise sampled integral of x^(-1/p) over J: dyadic blocks toward
    the origin keep each block smooth; the sub-2^(-80) remainder uses the
    primitive (it is below any meaningful tolerance)."""
    a = J.lo.to_extreal()
    b = J.hi.to_extreal()
    if a.sign < 0 or cmp(b, ONE) > 0:
        raise DomainError("reference quadrature needs J inside [0,1]")
    terms = []
    hi = b
    rf = float(Fraction(-1) / ref.p)
    for _block in range(90):
        if cmp(hi, a) <= 0 or hi.sign == 0:
            break
        half = hi * ExtReal.from_fraction(Fraction(1, 2))
        lo = half if cmp(half, a) > 0 else a
        if hi.e < -80:
            terms.append(ref.integral(a, hi))
            break
        lo_f, hi_f = lo.to_float(), hi.to_float()
        unit = _sample_unit(lambda s: (lo_f + (hi_f - lo_f) * s) ** rf, tol)
        terms.append((hi - lo) * ExtReal.from_float(unit))
        hi = lo
    return sum_compensated(terms)


def quad(f, J, tol=1e-9):
    """Sampling integral of a TowerSet or RefFunction over J."""
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    if isinstance(f, RefFunction):
        return _ref_quad(f, J, tol)
    return _tower_quad(f, J, tol)


def quad_abs_dev(f, J, c, tol=1e-9):
    """Sampling integral of |f - c| over J."""
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    c = c if isinstance(c, ExtReal) else ExtReal.from_float(c)
    if c.sign < 0:
        raise DomainError("deviation center must be nonnegative")
    if isinstance(f, RefFunction):
        raise PreconditionError("deviation sampling is for tower sets")
    if c.sign == 0:
        return _tower_quad(f, J, tol)
    return _tower_quad(f, J, tol, c)


def brute_force_max(ts, p, grid, max_len=None, evaluator=None):
    """Exhaustively enumerate every selection of disjoint grid intervals and
    return the best sum of F(J); exponential, so the grid is kept tiny."""
    from . import optimizer

    n = len(grid.positions)
    if n > 16:
        raise SizeError("brute force needs a grid of at most 16 points")
    ev = evaluator if evaluator is not None else optimizer.PairEvaluator(ts, grid, p)
    cap = None
    if max_len is not None:
        cap = optimizer._as_coord_len(max_len)
    pts = grid.positions

    def rec(start):
        best = Fraction(0)
        for j in range(start, n):
            for k in range(j + 1, n):
                if cap is not None and pts[k] - pts[j] > cap:
                    continue
                cand = ev.term(j, k)[0] + rec(k)
                if cand > best:
                    best = cand
        return best

    return ExtReal.from_fraction(rec(0))
