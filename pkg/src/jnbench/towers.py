"""Truncated fractal tower constructions with closed-form evaluation.

A construction is a binary tree of disjoint intervals ("towers") in [0,1]:
the root interval (level 1, width l_1) sits centered, and each node spawns a
left and right child at exact gap d_i from its own interval, recursively up
to a truncation depth N.  Widths shrink as l_i = 2^(-(i+1/2)^2) and gaps as
d_i = 2^(-(i+1)^2), so level i holds 2^(i-1) congruent towers.  On each
tower the function is a linear "roof" from a_i (left edge) to b_i (right
edge), raised to a fixed power r; everything else is 0.

Built-in height families:
    u      a_i = (1 - i^(-1/p)) 2^(i^2/p),  b_i = (1 + i^(-1/p)) 2^(i^2/p)
    g      a_i = b_i = 2^(i^2/p)
    g0     a_i = b_i = (2^(i^2)/i)^(1/p)
    custom a_i = b_i = (2^(i^2) s_i)^(1/p) for a caller-supplied s_i >= 0

All geometry is exact (see geometry.Coord); integrals, absolute deviations,
distribution functions and medians are evaluated from closed forms over a
descent "profile" of the query interval, so cost is O(depth), never
O(number of towers).  Intervals are half-open throughout.
"""

from fractions import Fraction

from . import xreal
from .errors import DomainError, RangeLimitError
from .geometry import Coord, Interval, COORD_ZERO
from .xreal import ExtReal, ZERO, ONE, cmp, exp2, pow_real, sum_compensated

_HALF = Fraction(1, 2)

FAMILIES = ("u", "g", "g0", "custom")


class Schedule:
    """Width/gap/height sequences for one construction family."""

    def __init__(self, family, p, custom_s=None):
        if family not in FAMILIES:
            raise DomainError("unknown family %r" % (family,))
        if not p > 1:
            raise DomainError("need p > 1, got %r" % (p,))
        if family == "custom" and custom_s is None:
            raise DomainError("custom family needs the s_i sequence")
        self.family = family
        self.p = float(p)
        self.p_frac = Fraction(p)
        self.custom_s = list(custom_s) if custom_s is not None else None
        self._a = {}
        self._b = {}
        self._lext = {}
        self._dext = {}

    # widths and gaps -------------------------------------------------------

    def l_coord(self, i):
        # l_i = 2^(-(i+1/2)^2) = 2^(-i^2-i) * kappa
        return Coord(Fraction(0), Fraction(1, 1 << (i * i + i)))

    def d_coord(self, i):
        return Coord(Fraction(1, 1 << (i + 1) * (i + 1)))

    def l_ext(self, i):
        v = self._lext.get(i)
        if v is None:
            v = self.l_coord(i).to_extreal()
            self._lext[i] = v
        return v

    def d_ext(self, i):
        v = self._dext.get(i)
        if v is None:
            v = self.d_coord(i).to_extreal()
            self._dext[i] = v
        return v

    # roof heights ----------------------------------------------------------

    def _heights(self, i):
        fam = self.family
        if fam == "u":
            x = pow_real(ExtReal.from_int(i), Fraction(-1) / self.p_frac)
            h = exp2(Fraction(i * i) / self.p_frac)
            return ((ONE - x) * h, (ONE + x) * h)
        if fam == "g":
            h = exp2(Fraction(i * i) / self.p_frac)
            return (h, h)
        if fam == "g0":
            h = exp2(Fraction(i * i) / self.p_frac) * pow_real(
                ExtReal.from_int(i), Fraction(-1) / self.p_frac
            )
            return (h, h)
        # custom
        if i - 1 >= len(self.custom_s):
            raise RangeLimitError("custom s_i sequence shorter than level %d" % i)
        s = self.custom_s[i - 1]
        if s < 0:
            raise DomainError("custom s_i must be nonnegative")
        if s == 0:
            return (ZERO, ZERO)
        h = pow_real(exp2(i * i) * ExtReal.from_float(s), Fraction(1) / self.p_frac)
        return (h, h)

    def a_ext(self, i):
        if i not in self._a:
            self._a[i], self._b[i] = self._heights(i)
        return self._a[i]

    def b_ext(self, i):
        if i not in self._b:
            self._a[i], self._b[i] = self._heights(i)
        return self._b[i]

    def is_flat(self):
        return self.family != "u"


class _Profile:
    """Decomposition of a query interval against the tree.

    full: {level: count of towers entirely inside}
    partials: [(level, idx, s_rel, e_rel)] clipped pieces, offsets from the
              tower's left edge (exact Coords), at most ~2 per level
    gap: exact measure of the part of the interval meeting no tower
    anchor: (level, idx) of the widest tower met, leftmost on ties, or None
    """

    __slots__ = ("full", "partials", "gap", "anchor")

    def __init__(self, full, partials, gap, anchor):
        self.full = full
        self.partials = partials
        self.gap = gap
        self.anchor = anchor

    def is_empty(self):
        return self.anchor is None


class TowerSet:
    """One built construction: schedule + depth + power, immutable."""

    def __init__(self, schedule, depth, power=1, shift=COORD_ZERO, _layout=None):
        if depth < 1:
            raise DomainError("depth must be >= 1")
        r = Fraction(power) if not isinstance(power, Fraction) else power
        if not r > 0:
            raise DomainError("power must be > 0")
        self.schedule = schedule
        self.depth = int(depth)
        self.r = r
        self.shift = shift
        self._tpos = _layout if _layout is not None else {}
        self._reach = {}
        self._node_int = {}
        self._slope = {}
        self._roof_lo = {}
        self._roof_hi = {}

    # -- derived constructions ---------------------------------------------

    def with_power(self, power):
        """Same geometry and heights, different outer power (shares layout)."""
        return TowerSet(self.schedule, self.depth, power, self.shift, self._tpos)

    def shifted(self, s):
        """Whole construction translated by the exact Coord s (shares layout)."""
        return TowerSet(self.schedule, self.depth, self.r, self.shift + s, self._tpos)

    def domain(self):
        return Interval(self.shift, self.shift + Coord(Fraction(1)))

    # -- layout --------------------------------------------------------------

    def pos(self, level, idx):
        """Left endpoint of tower (level, idx); exact."""
        if not 1 <= level <= self.depth:
            raise RangeLimitError("level %d outside 1..%d" % (level, self.depth))
        if not 0 <= idx < (1 << (level - 1)):
            raise RangeLimitError("index %d outside level %d" % (idx, level))
        t = self._pos_raw(level, idx)
        return t + self.shift if not self.shift.is_zero() else t

    def _pos_raw(self, level, idx):
        key = (level, idx)
        t = self._tpos.get(key)
        if t is None:
            sch = self.schedule
            if level == 1:
                t = Coord(_HALF) - sch.l_coord(1).scaled(_HALF)
            else:
                par = self._pos_raw(level - 1, idx >> 1)
                if idx & 1:
                    t = par + sch.l_coord(level - 1) + sch.d_coord(level - 1)
                else:
                    t = par - sch.d_coord(level - 1) - sch.l_coord(level)
            self._tpos[key] = t
        return t

    def node_interval(self, level, idx):
        t = self.pos(level, idx)
        return Interval(t, t + self.schedule.l_coord(level))

    def nodes(self, max_level=None):
        """Yield (level, idx, Interval) in level/index order."""
        top = self.depth if max_level is None else min(max_level, self.depth)
        for level in range(1, top + 1):
            for idx in range(1 << (level - 1)):
                yield level, idx, self.node_interval(level, idx)

    def reach_coord(self, i):
        """Farthest extent of a level-i subtree beyond its own tower (exact,
        truncated at the build depth): sum of d_m + l_(m+1) for m = i..N-1."""
        r = self._reach.get(i)
        if r is None:
            if i >= self.depth:
                r = COORD_ZERO
            else:
                sch = self.schedule
                r = sch.d_coord(i) + sch.l_coord(i + 1) + self.reach_coord(i + 1)
            self._reach[i] = r
        return r

    def delta_coord(self, i):
        """Nearest approach of descendants to a level-i tower (exact).
        At the deepest level there are no descendants; d_N is used there so
        the classification bands stay nested."""
        if i >= self.depth:
            return self.schedule.d_coord(i)
        return self.schedule.d_coord(i) - self.reach_coord(i + 1)

    def big_d_coord(self, i):
        """Farthest-descendant distance; d_N at the deepest level (see above)."""
        if i >= self.depth:
            return self.schedule.d_coord(i)
        return self.reach_coord(i)

    def support_bounds(self):
        t = self.pos(1, 0)
        return (t - self.reach_coord(1), t + self.schedule.l_coord(1) + self.reach_coord(1))

    # -- descent -------------------------------------------------------------

    def profile(self, J):
        full = {}
        partials = []
        anchor = [None]
        sch = self.schedule
        depth = self.depth

        def visit(level, idx, t):
            l = sch.l_coord(level)
            rc = self.reach_coord(level)
            box_lo = t - rc
            box_hi = t + l + rc
            if not (J.lo < box_hi and box_lo < J.hi):
                return
            if J.lo <= box_lo and box_hi <= J.hi:
                for m in range(level, depth + 1):
                    full[m] = full.get(m, 0) + (1 << (m - level))
                if anchor[0] is None or level < anchor[0][0]:
                    anchor[0] = (level, idx)
                return
            e = t + l
            if J.lo < e and t < J.hi:
                if J.lo <= t and e <= J.hi:
                    full[level] = full.get(level, 0) + 1
                else:
                    s_rel = J.lo - t if J.lo > t else COORD_ZERO
                    e_rel = J.hi - t if J.hi < e else Coord(l.a, l.b)
                    partials.append((level, idx, s_rel, e_rel))
                if anchor[0] is None or level < anchor[0][0]:
                    anchor[0] = (level, idx)
            if level < depth:
                visit(level + 1, idx << 1, t - sch.d_coord(level) - sch.l_coord(level + 1))
                visit(level + 1, (idx << 1) | 1, t + l + sch.d_coord(level))

        visit(1, 0, self.pos(1, 0))
        covered = COORD_ZERO
        for m, n in full.items():
            covered = covered + sch.l_coord(m).scaled(n)
        for _lv, _ix, s_rel, e_rel in partials:
            covered = covered + (e_rel - s_rel)
        gap = J.measure() - covered
        return _Profile(full, partials, gap, anchor[0])

    # -- closed-form pieces ---------------------------------------------------

    def slope(self, level):
        """(b-a)/l in ExtReal; None for flat roofs."""
        k = self._slope.get(level)
        if k is None:
            sch = self.schedule
            a, b = sch.a_ext(level), sch.b_ext(level)
            k = None if a == b else (b - a) / sch.l_ext(level)
            self._slope[level] = k
        return k

    def roof_at(self, level, offset_ext):
        """Roof (pre-power) value at an offset from the tower's left edge."""
        a = self.schedule.a_ext(level)
        k = self.slope(level)
        if k is None:
            return a
        return a + k * offset_ext

    def _powv(self, v, expo):
        if v.sign == 0:
            return ZERO
        return pow_real(v, expo)

    def _segment_integral(self, level, vs, ve, length_ext, expo):
        """Integral of roof^expo over a tower segment with end roof values
        vs <= ve and the given length (all ExtReal)."""
        k = self.slope(level)
        if k is None:
            return length_ext * self._powv(self.schedule.a_ext(level), expo)
        if expo == 1:
            return length_ext * (vs + ve) * ExtReal.from_fraction(_HALF)
        e1 = expo + 1
        num = self._powv(ve, e1) - self._powv(vs, e1)
        return num / (k * ExtReal.from_fraction(e1))

    def node_integral(self, level, expo=None):
        """Integral of roof^expo over one full level-`level` tower."""
        expo = self.r if expo is None else expo
        key = (level, expo)
        v = self._node_int.get(key)
        if v is None:
            sch = self.schedule
            v = self._segment_integral(
                level, sch.a_ext(level), sch.b_ext(level), sch.l_ext(level), expo
            )
            self._node_int[key] = v
        return v

    def roof_bounds(self, level):
        """(a, b) roof end values."""
        return self.schedule.a_ext(level), self.schedule.b_ext(level)

    # -- public queries --------------------------------------------------------

    def eval_at(self, x):
        """Function value at a point (0 off towers)."""
        x = _as_coord(x)
        level, idx = 1, 0
        t = self.pos(1, 0)
        sch = self.schedule
        while True:
            l = sch.l_coord(level)
            rc = self.reach_coord(level)
            if not (t - rc <= x < t + l + rc):
                return ZERO
            if t <= x < t + l:
                off = (x - t).to_extreal()
                return self._powv(self.roof_at(level, off), self.r)
            if level == self.depth:
                return ZERO
            if x < t:
                level, idx, t = level + 1, idx << 1, t - sch.d_coord(level) - sch.l_coord(level + 1)
            else:
                level, idx, t = level + 1, (idx << 1) | 1, t + l + sch.d_coord(level)

    def integral(self, J, expo=None):
        """Exact closed-form integral over J of roof^expo (expo defaults to
        the set's power r, i.e. the function itself)."""
        return self.integral_from_profile(self.profile(J), expo)

    def integral_from_profile(self, prof, expo=None):
        expo = self.r if expo is None else expo
        terms = []
        for level, n in prof.full.items():
            terms.append(ExtReal.from_int(n) * self.node_integral(level, expo))
        for level, _idx, s_rel, e_rel in prof.partials:
            vs = self.roof_at(level, s_rel.to_extreal())
            ve = self.roof_at(level, e_rel.to_extreal())
            terms.append(
                self._segment_integral(level, vs, ve, (e_rel - s_rel).to_extreal(), expo)
            )
        return sum_compensated(terms)

    def _segment_absdev(self, level, vs, ve, length_ext, c, y):
        """Integral of |roof^r - c| over one tower segment.  y = c^(1/r) is
        the roof-space threshold (precomputed once per query)."""
        k = self.slope(level)
        r = self.r
        if k is None:
            v = self._powv(self.schedule.a_ext(level), r)
            return abs(v - c) * length_ext
        if cmp(y, vs) <= 0:  # roof >= threshold on the whole segment
            return abs(self._segment_integral(level, vs, ve, length_ext, r) - c * length_ext)
        if cmp(y, ve) >= 0:
            return abs(c * length_ext - self._segment_integral(level, vs, ve, length_ext, r))
        len_lo = (y - vs) / k
        len_hi = (ve - y) / k
        p_lo = self._segment_integral(level, vs, y, len_lo, r)
        p_hi = self._segment_integral(level, y, ve, len_hi, r)
        return abs(c * len_lo - p_lo) + abs(p_hi - c * len_hi)

    def integral_abs_dev(self, J, c, prof=None):
        """Exact closed-form integral of |f - c| over J, c >= 0."""
        if not isinstance(c, ExtReal):
            c = ExtReal.from_float(c)
        if c.sign < 0:
            raise DomainError("deviation center must be nonnegative")
        if prof is None:
            prof = self.profile(J)
        if c.sign == 0:
            return self.integral_from_profile(prof)
        y = c if self.r == 1 else pow_real(c, 1 / self.r)
        terms = [c * prof.gap.to_extreal()]
        sch = self.schedule
        for level, n in prof.full.items():
            dev = self._segment_absdev(
                level, sch.a_ext(level), sch.b_ext(level), sch.l_ext(level), c, y
            )
            terms.append(ExtReal.from_int(n) * dev)
        for level, _idx, s_rel, e_rel in prof.partials:
            vs = self.roof_at(level, s_rel.to_extreal())
            ve = self.roof_at(level, e_rel.to_extreal())
            terms.append(
                self._segment_absdev(level, vs, ve, (e_rel - s_rel).to_extreal(), c, y)
            )
        return sum_compensated(terms)

    def distribution(self, t):
        """Measure of {x : f(x) > t} over the whole construction, t >= 0."""
        if not isinstance(t, ExtReal):
            t = ExtReal.from_float(t)
        if t.sign < 0:
            raise DomainError("level must be nonnegative")
        y = t if (self.r == 1 or t.sign == 0) else pow_real(t, 1 / self.r)
        sch = self.schedule
        terms = []
        for level in range(1, self.depth + 1):
            a, b = sch.a_ext(level), sch.b_ext(level)
            k = self.slope(level)
            if k is None:
                if cmp(self._powv(a, self.r), t) > 0:
                    per = sch.l_ext(level)
                else:
                    continue
            elif cmp(y, a) <= 0:
                per = sch.l_ext(level)
            elif cmp(y, b) >= 0:
                continue
            else:
                per = (b - y) / k
            terms.append(ExtReal.from_int(1 << (level - 1)) * per)
        return sum_compensated(terms)

    def median(self, J, prof=None):
        """Smallest m with |{x in J : f(x) <= m}| >= |J|/2."""
        if J.is_empty():
            raise DomainError("median needs |J| > 0")
        if prof is None:
            prof = self.profile(J)
        half = ExtReal.from_fraction(_HALF)
        target = J.measure().to_extreal() * half
        zero_mass = prof.gap.to_extreal()
        jumps = []  # (value_roof, mass)
        ramps = []  # (vs, ve, mass)
        sch = self.schedule

        def add_piece(level, vs, ve, length_ext):
            nonlocal zero_mass
            if self.slope(level) is None:
                v = sch.a_ext(level)
                if v.sign == 0:
                    zero_mass = zero_mass + length_ext
                else:
                    jumps.append((v, length_ext))
            else:
                ramps.append((vs, ve, length_ext))

        for level, n in prof.full.items():
            ln = ExtReal.from_int(n) * sch.l_ext(level)
            add_piece(level, sch.a_ext(level), sch.b_ext(level), ln)
        for level, _idx, s_rel, e_rel in prof.partials:
            vs = self.roof_at(level, s_rel.to_extreal())
            ve = self.roof_at(level, e_rel.to_extreal())
            add_piece(level, vs, ve, (e_rel - s_rel).to_extreal())

        if cmp(zero_mass, target) >= 0:
            return ZERO

        bps = set()
        for v, _mass in jumps:
            bps.add(v)
        for vs, ve, _mass in ramps:
            bps.add(vs)
            bps.add(ve)
        bps = sorted(bps, key=lambda v: (v.sign, v.e, v.m))
        m_plus = zero_mass
        # mass of jumps sitting exactly at roof value 0 was already folded in
        prev = ZERO
        for v in bps:
            if v.sign == 0:
                prev = v
                continue
            dens = ZERO
            for vs, ve, mass in ramps:
                if cmp(vs, v) < 0 and cmp(ve, prev) > 0:
                    lo = vs if cmp(vs, prev) >= 0 else prev
                    hi = v if cmp(v, ve) <= 0 else ve
                    # linear share of this ramp over (prev, v)
                    dens = dens + mass * (hi - lo) / (ve - vs)
            m_minus = m_plus + dens
            if cmp(m_minus, target) >= 0 and cmp(m_plus, target) < 0 and dens.sign > 0:
                # crossing inside (prev, v): invert the accumulated linear part
                frac = (target - m_plus) / dens
                y = prev + (v - prev) * frac
                return self._powv(y, self.r)
            m_plus = m_minus
            for jv, mass in jumps:
                if jv == v:
                    m_plus = m_plus + mass
            if cmp(m_plus, target) >= 0:
                return self._powv(v, self.r)
            prev = v
        return self._powv(bps[-1], self.r) if bps else ZERO

    def lp_mass(self, p):
        """Integral of f^p over the whole construction, closed form."""
        expo = self.r * Fraction(p) if not isinstance(p, Fraction) else self.r * p
        terms = [
            ExtReal.from_int(1 << (level - 1)) * self.node_integral(level, expo)
            for level in range(1, self.depth + 1)
        ]
        return sum_compensated(terms)

    def lp_mass_partial(self, p, max_level):
        expo = self.r * (Fraction(p) if not isinstance(p, Fraction) else p)
        return sum_compensated(
            ExtReal.from_int(1 << (level - 1)) * self.node_integral(level, expo)
            for level in range(1, min(max_level, self.depth) + 1)
        )

    # -- serialization -----------------------------------------------------------

    def serialize(self, fh, max_level=None):
        """Line-oriented snapshot: level, path bits, endpoint triples."""
        sch = self.schedule
        fh.write("# towers family=%s p=%.17g depth=%d power=%s max_level=%s\n"
                 % (sch.family, sch.p, self.depth, self.r,
                    max_level if max_level is not None else self.depth))
        for level, idx, iv in self.nodes(max_level):
            path = format(idx, "0%db" % (level - 1)) if level > 1 else "-"
            lo = iv.lo.to_extreal()
            hi = iv.hi.to_extreal()
            fh.write("%d %s %d %.17g %d %d %.17g %d\n"
                     % (level, path, lo.sign, lo.m, lo.e, hi.sign, hi.m, hi.e))


def parse_snapshot(fh):
    """Parse a serialize() snapshot back into (level, path, lo, hi) records."""
    out = []
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        f = line.split()
        if len(f) != 8:
            raise DomainError("bad snapshot line %r" % line)
        lo = xreal.compose(int(f[2]), float(f[3]), int(f[4]))
        hi = xreal.compose(int(f[5]), float(f[6]), int(f[7]))
        out.append((int(f[0]), f[1], lo, hi))
    return out


def _as_coord(x):
    if isinstance(x, Coord):
        return x
    if isinstance(x, ExtReal):
        return Coord(x.to_fraction())
    return Coord(Fraction(x))


# -- module-level operation names -------------------------------------------


def build(schedule, depth, power=1):
    """Construct the truncated tower set (layout is lazy; build is O(1))."""
    return TowerSet(schedule, depth, power)


def gap_inner(ts, i):
    """delta_i = d_i - sum of d_m + l_(m+1) for m > i (truncated at depth).
    Nearest approach of the descendant family to a level-i tower."""
    _check_margin(ts, i)
    return ts.delta_coord(i).to_extreal()


def reach(ts, i):
    """D_i = sum of d_m + l_(m+1) for m >= i (truncated at depth).
    Farthest extent of the descendant family beyond a level-i tower."""
    _check_margin(ts, i)
    return ts.big_d_coord(i).to_extreal()


def _check_margin(ts, i):
    if not 1 <= i <= ts.depth - 2:
        raise RangeLimitError(
            "level %d needs margin below depth %d" % (i, ts.depth)
        )
    # truncation remainder is under twice the first omitted term: the ratio
    # between consecutive gap/width terms collapses super-geometrically
    sch = ts.schedule
    n = ts.depth
    assert sch.l_coord(n + 1) < sch.d_coord(n)
    assert sch.d_coord(n + 1) < sch.d_coord(n).scaled(Fraction(1, 8))


def eval_at(ts, x):
    return ts.eval_at(x)


def integral(ts, J):
    return ts.integral(J)


def integral_abs_dev(ts, J, c):
    return ts.integral_abs_dev(J, c)


def distribution(ts, t):
    return ts.distribution(t)


def median(ts, J):
    return ts.median(J)
