"""Partition search: grids, DP lower bounds, and explicit witness families.

The partition supremum behind the oscillation sums can only be lower-bounded
by search; every value produced here is a *search lower bound*.  The DP
maximizes sum of F(J) = |J| (mean osc)^p over disjoint intervals with
endpoints on a finite breakpoint grid (gaps allowed), optionally under a
length cap, via best[k] = max(best[k-1], best[j] + F([g_j, g_k])).

Interval terms are evaluated in O(depth) per pair from per-point descent
records (per-level counts of towers fully to the left, the containing tower
with exact offset, and the exact uncovered measure to the left), so the DP
never walks the tree per pair.  DP totals accumulate exactly as rationals,
which makes the brute-force cross-check an exact equality.
"""

from fractions import Fraction

from . import functional
from .errors import DomainError, PreconditionError, RangeLimitError, SizeError
from .geometry import Coord, Interval, COORD_ZERO
from .xreal import ExtReal, TWO, ZERO, cmp, pow_real, sum_compensated

TOWER_EDGE = "TOWER_EDGE"
MIDPOINT = "MIDPOINT"
DYADIC_REFINE = "DYADIC_REFINE"

_HALF = Fraction(1, 2)


class BreakpointGrid:
    """Strictly increasing Coord positions with provenance tags."""

    __slots__ = ("positions", "tags")

    def __init__(self, tagged):
        seen = {}
        for pos, tag in tagged:
            if pos not in seen:
                seen[pos] = tag
        order = sorted(seen.items(), key=lambda it: _SortKey(it[0]))
        self.positions = [pos for pos, _tag in order]
        self.tags = [tag for _pos, tag in order]

    def __len__(self):
        return len(self.positions)


class _SortKey:
    __slots__ = ("c",)

    def __init__(self, c):
        self.c = c

    def __lt__(self, other):
        return self.c < other.c


def candidate_grid(ts, refine, max_level=10):
    """Tower endpoints (levels capped for tractability) plus `refine` rounds
    of gap-midpoint insertion; always includes the domain endpoints."""
    if refine < 0:
        raise DomainError("refine must be nonnegative")
    top = min(ts.depth, max_level)
    dom = ts.domain()
    tagged = [(dom.lo, MIDPOINT), (dom.hi, MIDPOINT)]
    for _level, _idx, iv in ts.nodes(top):
        tagged.append((iv.lo, TOWER_EDGE))
        tagged.append((iv.hi, TOWER_EDGE))
    grid = BreakpointGrid(tagged)
    for round_no in range(refine):
        tag = MIDPOINT if round_no == 0 else DYADIC_REFINE
        extra = []
        pts = grid.positions
        for a, b in zip(pts, pts[1:]):
            mid = (a + b).scaled(_HALF)
            if not _in_tower(ts, mid, top):
                extra.append((mid, tag))
        grid = BreakpointGrid(list(zip(grid.positions, grid.tags)) + extra)
    return grid


def _in_tower(ts, x, top):
    level, t = 1, ts.pos(1, 0)
    sch = ts.schedule
    while level <= top:
        l = sch.l_coord(level)
        rc = ts.reach_coord(level)
        if not (t - rc <= x < t + l + rc):
            return False
        if t <= x < t + l:
            return True
        if level == ts.depth:
            return False
        if x < t:
            t = t - sch.d_coord(level) - sch.l_coord(level + 1)
        else:
            t = t + l + sch.d_coord(level)
        level += 1
    return False


class _PointRec:
    __slots__ = ("nl", "inside", "off", "off_ext", "gap_left")

    def __init__(self, nl, inside, off, off_ext, gap_left):
        self.nl = nl
        self.inside = inside
        self.off = off
        self.off_ext = off_ext
        self.gap_left = gap_left


class PairEvaluator:
    """O(depth) evaluation of F([g_j, g_k]) from per-point descent records,
    with a per-pair cache usable across DP runs on the same grid."""

    def __init__(self, ts, grid, p):
        self.ts = ts
        self.grid = grid
        self.p = Fraction(p)
        self.recs = [self._descend(g) for g in grid.positions]
        self._terms = {}

    def _descend(self, g):
        ts = self.ts
        sch = ts.schedule
        depth = ts.depth
        nl = [0] * (depth + 1)
        inside = None
        off = COORD_ZERO
        level, idx, t = 1, 0, ts.pos(1, 0)
        while True:
            l = sch.l_coord(level)
            if level < depth:
                rc = ts.reach_coord(level + 1)
                tl = t - sch.d_coord(level) - sch.l_coord(level + 1)
                if g < tl - rc:
                    break
                if g < tl + sch.l_coord(level + 1) + rc:
                    level, idx, t = level + 1, idx << 1, tl
                    continue
                for m in range(level + 1, depth + 1):
                    nl[m] += 1 << (m - level - 1)
            if g < t:
                break
            if g < t + l:
                inside = (level, idx)
                off = g - t
                break
            nl[level] += 1
            if level == depth:
                break
            rc = ts.reach_coord(level + 1)
            tr = t + l + sch.d_coord(level)
            if g < tr - rc:
                break
            if g < tr + sch.l_coord(level + 1) + rc:
                level, idx, t = level + 1, (idx << 1) | 1, tr
                continue
            for m in range(level + 1, depth + 1):
                nl[m] += 1 << (m - level - 1)
            break
        covered = Fraction(0)
        for m in range(1, depth + 1):
            if nl[m]:
                covered += Fraction(nl[m], 1 << (m * m + m))
        cov = Coord(Fraction(0), covered)
        if inside is not None:
            cov = cov + off
        return _PointRec(nl, inside, off, off.to_extreal(), g - cov)

    def interval(self, j, k):
        return Interval(self.grid.positions[j], self.grid.positions[k])

    def term(self, j, k):
        """Returns (F as exact Fraction of the rounded ExtReal, F as ExtReal)."""
        got = self._terms.get((j, k))
        if got is None:
            got = self._eval(j, k)
            self._terms[(j, k)] = got
        return got

    def _pieces(self, j, k):
        ts = self.ts
        rj, rk = self.recs[j], self.recs[k]
        fulls = []
        parts = []
        same = rj.inside is not None and rj.inside == rk.inside
        if same:
            lv = rj.inside[0]
            parts.append((lv, rj.off, rj.off_ext, rk.off, rk.off_ext))
        else:
            if rj.inside is not None:
                lv = rj.inside[0]
                l = ts.schedule.l_coord(lv)
                parts.append((lv, rj.off, rj.off_ext, l, ts.schedule.l_ext(lv)))
            if rk.inside is not None and not rk.off.is_zero():
                lv = rk.inside[0]
                parts.append((lv, COORD_ZERO, ZERO, rk.off, rk.off_ext))
        for m in range(1, ts.depth + 1):
            c = rk.nl[m] - rj.nl[m]
            if rj.inside is not None and rj.inside[0] == m and not same:
                c -= 1
            if c:
                fulls.append((m, c))
        return fulls, parts

    def _eval(self, j, k):
        ts = self.ts
        sch = ts.schedule
        gj, gk = self.grid.positions[j], self.grid.positions[k]
        len_ext = (gk - gj).to_extreal()
        gap_ext = (self.recs[k].gap_left - self.recs[j].gap_left).to_extreal()
        fulls, parts = self._pieces(j, k)

        terms = []
        for m, c in fulls:
            terms.append(ExtReal.from_int(c) * ts.node_integral(m, ts.r))
        pvals = []
        for m, s, s_ext, e, e_ext in parts:
            vs = ts.roof_at(m, s_ext)
            ve = ts.roof_at(m, e_ext)
            plen = (e - s).to_extreal()
            pvals.append((m, vs, ve, plen))
            terms.append(ts._segment_integral(m, vs, ve, plen, ts.r))
        total = sum_compensated(terms)
        c_avg = total / len_ext
        if c_avg.sign == 0:
            return (Fraction(0), ZERO)
        y = c_avg if ts.r == 1 else pow_real(c_avg, 1 / ts.r)
        dev_terms = [c_avg * gap_ext]
        for m, c in fulls:
            dev = ts._segment_absdev(
                m, sch.a_ext(m), sch.b_ext(m), sch.l_ext(m), c_avg, y
            )
            dev_terms.append(ExtReal.from_int(c) * dev)
        for m, vs, ve, plen in pvals:
            dev_terms.append(ts._segment_absdev(m, vs, ve, plen, c_avg, y))
        dev = sum_compensated(dev_terms)
        if dev.sign == 0:
            return (Fraction(0), ZERO)
        f_ext = len_ext * pow_real(dev / len_ext, self.p)
        return (f_ext.to_fraction(), f_ext)

    def holder_cap(self):
        """Per-point prefix of 2^p int f^p, an upper bound usable for pruning."""
        ts = self.ts
        expo = ts.r * self.p
        scale = pow_real(TWO, self.p)
        out = []
        for rec in self.recs:
            terms = []
            for m in range(1, ts.depth + 1):
                if rec.nl[m]:
                    terms.append(ExtReal.from_int(rec.nl[m]) * ts.node_integral(m, expo))
            if rec.inside is not None:
                m = rec.inside[0]
                vs = ts.roof_at(m, ZERO)
                ve = ts.roof_at(m, rec.off_ext)
                terms.append(ts._segment_integral(m, vs, ve, rec.off_ext, expo))
            pm = sum_compensated(terms) * scale
            try:
                out.append(pm.to_float())
            except RangeLimitError:
                return None
        return out


def dp_max(ts, p, grid, max_len=None, evaluator=None, prune=False):
    """Best sum of F(J) over disjoint grid intervals (gaps allowed), with an
    optional exact length cap; returns (value, achieving partition).

    Totals accumulate as exact rationals.  With prune=True an upper-bound
    pass may skip dominated pairs (big grids only; trades the exact-equality
    guarantee for speed)."""
    ev = evaluator if evaluator is not None else PairEvaluator(ts, grid, p)
    pts = grid.positions
    n = len(pts)
    if n < 2:
        return (ZERO, [])
    cap = None if max_len is None else _as_coord_len(max_len)
    j_lo = [0] * n
    if cap is not None:
        lo = 0
        for k in range(n):
            while pts[k] - pts[lo] > cap:
                lo += 1
            j_lo[k] = lo
    pm = ev.holder_cap() if prune else None
    best = [Fraction(0)] * n
    bestf = [0.0] * n
    choice = [None] * n
    for k in range(1, n):
        b, bf, ch = best[k - 1], bestf[k - 1], None
        for j in range(j_lo[k], k):
            if pm is not None and bestf[j] + (pm[k] - pm[j]) * 1.001 + 1e-300 <= bf:
                continue
            cand = best[j] + ev.term(j, k)[0]
            if cand > b:
                b = cand
                ch = j
                if pm is not None:
                    try:
                        bf = float(cand)
                    except OverflowError:
                        pm = None
        best[k] = b
        bestf[k] = bf
        choice[k] = ch
    parts = []
    k = n - 1
    while k > 0:
        if choice[k] is None:
            k -= 1
        else:
            parts.append(ev.interval(choice[k], k))
            k = choice[k]
    parts.reverse()
    return (ExtReal.from_fraction(best[n - 1]), parts)


def witness_dyadic(ts, max_level=None, limit=1 << 16):
    """Every tower interval down to max_level; pairwise disjoint."""
    top = ts.depth if max_level is None else min(max_level, ts.depth)
    if (1 << top) - 1 > limit:
        raise SizeError("witness family of %d intervals; cap max_level" % ((1 << top) - 1))
    return [iv for _l, _i, iv in ts.nodes(top)]


def witness_dyadic_sums(ts, p):
    """Per-level totals of the tower-interval witness, using congruence:
    towers on a level are exact translates, so one representative term is
    evaluated and multiplied by the level count.
    Returns [(level, count, per_term, level_total)]."""
    pf = Fraction(p)
    rows = []
    for level in range(1, ts.depth + 1):
        J = ts.node_interval(level, 0)
        mo = functional.mean_osc(ts, J)
        per = J.measure().to_extreal() * (
            pow_real(mo, pf) if mo.sign else ZERO
        )
        count = 1 << (level - 1)
        rows.append((level, count, per, ExtReal.from_int(count) * per))
    return rows


def minimal_cover_level(ts):
    """Smallest k whose double-width cover has average at most 3/4 of the
    roof height; the cover construction is only valid from there on."""
    for k in range(1, ts.depth - 1):
        if _cover_mean_ok(ts, k):
            return k
    raise PreconditionError("no valid cover level below depth-1")


def _cover_mean_ok(ts, k):
    J = cover_interval(ts, k, 0)
    mean = ts.integral(J) / J.measure().to_extreal()
    h = ts.schedule.b_ext(k)
    hv = h if ts.r == 1 else pow_real(h, ts.r)
    return cmp(mean + mean + mean + mean, hv + hv + hv) <= 0


def cover_interval(ts, k, idx):
    """Double-width interval at tower (k, idx): the tower plus the equal
    stretch to its right (covering only its own one-sided descendants)."""
    iv = ts.node_interval(k, idx)
    return Interval(iv.lo, iv.hi + ts.schedule.l_coord(k))

def witness_cover(ts, k, limit=1 << 13):
    """All 2^(k-1) double-width covers at level k, validated against the
    minimal level; disjoint, each meeting exactly one level-k tower."""
    kmin = minimal_cover_level(ts)
    if k < kmin:
        raise PreconditionError(
            "cover level %d below the minimal valid level %d "
            "(average exceeds 3/4 of the roof height)" % (k, kmin)
        )
    if k > ts.depth - 2:
        raise PreconditionError("cover level %d needs margin below depth %d"
                                % (k, ts.depth))
    count = 1 << (k - 1)
    if count > limit:
        raise SizeError("cover family of %d intervals; sample instead" % count)
    return [cover_interval(ts, k, idx) for idx in range(count)]


def lp_mass(ts, p):
    """Closed-form integral of f^p over the whole construction."""
    return ts.lp_mass(p)


def branch_grid(ts):
    """Localized grid along the leftmost descent branch: for each level the
    tower's endpoints, its right child's endpoints, and the flanking gap
    midpoints.  Small (O(depth)) but deep, built for the capped DP."""
    sch = ts.schedule
    tagged = []
    for m in range(1, ts.depth + 1):
        iv = ts.node_interval(m, 0)
        tagged.append((iv.lo, TOWER_EDGE))
        tagged.append((iv.hi, TOWER_EDGE))
        tagged.append((iv.lo - sch.d_coord(m).scaled(_HALF), MIDPOINT))
        if m < ts.depth:
            rc_lo = iv.hi + sch.d_coord(m)
            tagged.append((iv.hi + sch.d_coord(m).scaled(_HALF), MIDPOINT))
            tagged.append((rc_lo, TOWER_EDGE))
            tagged.append((rc_lo + sch.l_coord(m + 1), TOWER_EDGE))
    dom = ts.domain()
    tagged.append((dom.lo, MIDPOINT))
    tagged.append((dom.hi, MIDPOINT))
    return BreakpointGrid(tagged)


def modulus_lower_curve(ts, p, k_range, grid=None):
    """Search lower bounds for the length-capped partition sum at caps
    a = delta_k: DP over one fixed localized grid, so the feasible family
    shrinks as k grows and the curve is non-increasing by construction.
    Returns [(k, cap_ext, value_ext)]."""
    g = grid if grid is not None else branch_grid(ts)
    ev = PairEvaluator(ts, g, p)
    out = []
    for k in k_range:
        cap = ts.delta_coord(k)
        val, _parts = dp_max(ts, p, g, max_len=cap, evaluator=ev)
        out.append((k, cap.to_extreal(), val))
    return out


def _as_coord_len(a):
    if isinstance(a, Coord):
        return a
    if isinstance(a, ExtReal):
        return Coord(a.to_fraction())
    return Coord(Fraction(a))
