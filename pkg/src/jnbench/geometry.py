"""Exact coordinates for the tower layout.

Every endpoint in the construction is a dyadic rational plus a dyadic
multiple of kappa = 2^(-1/4): tower widths are 2^(-(i+1/2)^2) =
2^(-i^2-i) * kappa and the gaps 2^(-(i+1)^2) are dyadic, so positions stay in
the field Q + Q*kappa under the recursive placement.  Keeping coordinates
exact is what makes disjointness, classification boundaries and the Carleson
audit honest comparisons instead of floating-point coin flips at depth 24
(where gaps drop under 2^-600).

Coord supports +, -, scaling by rationals, exact sign/comparison (mixed-sign
cases use fourth powers: kappa^4 = 1/2), and conversion to ExtReal through a
one-time high-precision integer approximation of kappa.
"""

from fractions import Fraction
from math import isqrt

from .errors import DomainError
from .xreal import ExtReal

_ZERO = Fraction(0)

# cache of floor(kappa * 2^bits) keyed by bits
_KAPPA_INT = {}


def _kappa_int(bits):
    k = _KAPPA_INT.get(bits)
    if k is None:
        # kappa * 2^bits = (2^(4*bits - 1))^(1/4)
        k = isqrt(isqrt(1 << (4 * bits - 1)))
        _KAPPA_INT[bits] = k
    return k


class Coord:
    """a + b * 2^(-1/4) with exact rational a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=_ZERO):
        self.a = a
        self.b = b

    @staticmethod
    def from_float(x):
        return Coord(Fraction(x))

    def __repr__(self):
        return "Coord(%s + %s*k)" % (self.a, self.b)

    def __add__(self, other):
        return Coord(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return Coord(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return Coord(-self.a, -self.b)

    def scaled(self, q):
        """Multiply by an exact rational."""
        return Coord(self.a * q, self.b * q)

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def sign(self):
        a, b = self.a, self.b
        if b == 0:
            return -1 if a < 0 else (0 if a == 0 else 1)
        if a == 0:
            return -1 if b < 0 else 1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # mixed signs: compare |a| against |b|*kappa via fourth powers
        lhs = a ** 4
        rhs = b ** 4 / 2  # (|b| kappa)^4
        if lhs == rhs:
            # kappa is irrational: impossible for nonzero a, b
            raise DomainError("degenerate coordinate %r" % self)
        big_a = lhs > rhs
        if a > 0:
            return 1 if big_a else -1
        return -1 if big_a else 1

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def to_extreal(self, bits=192):
        """Nearest ExtReal (relative error well under 2^-50).

        Evaluates (na * 2^B + nb * floor(kappa * 2^B)) / (den * 2^B) in exact
        integers; B doubles until the kappa truncation error (at most |nb|)
        is at least 64 bits below the numerator, so heavy cancellation
        between the rational and kappa parts cannot poison the result."""
        a, b = self.a, self.b
        if b == 0:
            if a == 0:
                return ExtReal.from_int(0)
            return ExtReal.from_int_ratio(a.numerator, a.denominator)
        na = a.numerator * b.denominator
        nb = b.numerator * a.denominator
        den = a.denominator * b.denominator
        guard = abs(nb) << 64
        while True:
            t = (na << bits) + nb * _kappa_int(bits)
            if t != 0 and abs(t) >= guard:
                break
            bits *= 2
        return ExtReal.from_int_ratio(t, den << bits)


COORD_ZERO = Coord(_ZERO)
COORD_ONE = Coord(Fraction(1))


class Interval:
    """Half-open [lo, hi) with exact Coord endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if not lo <= hi:
            raise DomainError("interval endpoints out of order")
        self.lo = lo
        self.hi = hi

    @staticmethod
    def from_floats(lo, hi):
        return Interval(Coord.from_float(lo), Coord.from_float(hi))

    def measure(self):
        return self.hi - self.lo

    def is_empty(self):
        return not self.lo < self.hi

    def shifted(self, s):
        return Interval(self.lo + s, self.hi + s)

    def intersect(self, other):
        lo = self.lo if self.lo >= other.lo else other.lo
        hi = self.hi if self.hi <= other.hi else other.hi
        if lo < hi:
            return Interval(lo, hi)
        return None

    def contains_point(self, x):
        return self.lo <= x < self.hi

    def __repr__(self):
        return "Interval(%r, %r)" % (self.lo, self.hi)

    def __eq__(self, other):
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))


def overlap_free(intervals):
    """True iff the (already constructed) intervals are pairwise disjoint."""
    xs = sorted(intervals, key=_order_key)
    for u, v in zip(xs, xs[1:]):
        if v.lo < u.hi:
            return False
    return True


class _order_key:
    __slots__ = ("iv",)

    def __init__(self, iv):
        self.iv = iv

    def __lt__(self, other):
        return self.iv.lo < other.iv.lo
