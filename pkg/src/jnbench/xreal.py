"""Extended-range real arithmetic.

A value is sign * m * 2^e with sign in {-1, 0, +1}, m a double in [1, 2) and
e an arbitrary-precision signed integer.  This survives the magnitudes the
tower construction needs (2^(i^2) and 2^(-(i+1/2)^2) compose freely for any
truncation depth) while keeping double-precision resolution on the
significand.  There is no NaN, no infinity and no signed zero: anything
outside the domain raises immediately.

Zero is canonical: sign 0, m 1.0, e 0.
"""

import math
from fractions import Fraction

from .errors import DomainError

# additions whose exponents differ by more than the significand width cannot
# move the larger operand; 53 = double significand bits
_ABSORB = 53

# terms this far (in exponent) below the largest one cannot affect a
# compensated sum at double resolution, but still keep them well inside the
# normal range after scaling
_SUM_WINDOW = 960


class ExtReal:
    __slots__ = ("sign", "m", "e")

    def __init__(self, sign, m, e):
        # raw constructor: inputs must already be normalized
        self.sign = sign
        self.m = m
        self.e = e

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_float(x):
        if x != x or x in (math.inf, -math.inf):
            raise DomainError("non-finite float %r" % x)
        if x == 0.0:
            return ZERO
        fr, k = math.frexp(abs(x))
        return ExtReal(1 if x > 0 else -1, fr * 2.0, k - 1)

    @staticmethod
    def from_int(n):
        return ExtReal.from_int_ratio(n, 1)

    @staticmethod
    def from_fraction(fr):
        return ExtReal.from_int_ratio(fr.numerator, fr.denominator)

    @staticmethod
    def from_int_ratio(n, d):
        """n/d for (big) integers, rounded to the nearest representable value."""
        if d == 0:
            raise DomainError("zero denominator")
        if n == 0:
            return ZERO
        sign = 1
        if n < 0:
            sign, n = -sign, -n
        if d < 0:
            sign, d = -sign, -d
        # scale so the integer quotient carries ~57 significant bits
        t = 57 - (n.bit_length() - d.bit_length())
        if t >= 0:
            q = (n << t) // d
        else:
            q = n // (d << -t)
        sh = q.bit_length() - 53
        if sh > 0:
            q = (q + (1 << (sh - 1))) >> sh
        else:
            sh = 0
        return _norm(sign, float(q), sh - t)

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return self.sign == 0

    def decompose(self):
        return (self.sign, self.m, self.e)

    def to_float(self):
        if self.sign == 0:
            return 0.0
        if not (-1020 <= self.e <= 1020):
            raise DomainError("exponent %d outside double range" % self.e)
        return math.ldexp(self.sign * self.m, self.e)

    def to_fraction(self):
        """Exact rational value (the significand is a dyadic rational)."""
        if self.sign == 0:
            return Fraction(0)
        f = Fraction(self.m) * self.sign
        if self.e >= 0:
            return f * (1 << self.e)
        return f / (1 << -self.e)

    def __repr__(self):
        if self.sign == 0:
            return "ExtReal(0)"
        return "ExtReal(%.17g * 2^%d)" % (self.sign * self.m, self.e)

    # -- arithmetic --------------------------------------------------------

    def __neg__(self):
        if self.sign == 0:
            return self
        return ExtReal(-self.sign, self.m, self.e)

    def __abs__(self):
        if self.sign < 0:
            return ExtReal(1, self.m, self.e)
        return self

    def __add__(self, other):
        a, b = self, other
        if a.sign == 0:
            return b
        if b.sign == 0:
            return a
        if a.e - b.e > _ABSORB:
            return a
        if b.e - a.e > _ABSORB:
            return b
        e0 = a.e if a.e >= b.e else b.e
        s = math.ldexp(a.sign * a.m, a.e - e0) + math.ldexp(b.sign * b.m, b.e - e0)
        if s == 0.0:
            return ZERO
        return _norm(1 if s > 0 else -1, abs(s), e0)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return _norm(self.sign * other.sign, self.m * other.m, self.e + other.e)

    def __truediv__(self, other):
        if other.sign == 0:
            raise DomainError("division by zero")
        if self.sign == 0:
            return ZERO
        return _norm(self.sign * other.sign, self.m / other.m, self.e - other.e)

    # -- order -------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, ExtReal)
            and self.sign == other.sign
            and self.m == other.m
            and self.e == other.e
        )

    def __hash__(self):
        return hash((self.sign, self.m, self.e))

    def __lt__(self, other):
        return cmp(self, other) < 0

    def __le__(self, other):
        return cmp(self, other) <= 0

    def __gt__(self, other):
        return cmp(self, other) > 0

    def __ge__(self, other):
        return cmp(self, other) >= 0


def _norm(sign, m, e):
    """Normalize a positive finite float m into [1,2), folding into e."""
    fr, k = math.frexp(m)
    return ExtReal(sign, fr * 2.0, e + k - 1)


ZERO = ExtReal(0, 1.0, 0)
ONE = ExtReal(1, 1.0, 0)
TWO = ExtReal(1, 1.0, 1)


def compose(sign, m, e):
    """Build a value from a decompose() triple (normalizes if needed)."""
    if sign == 0 or m == 0.0:
        return ZERO
    if m < 0:
        raise DomainError("significand must be nonnegative; use sign")
    return _norm(sign, m, e)


def cmp(a, b):
    """Total order: -1, 0, +1."""
    if a.sign != b.sign:
        return 1 if a.sign > b.sign else -1
    if a.sign == 0:
        return 0
    # same nonzero sign: compare magnitudes, flip for negatives
    if a.e != b.e:
        mag = 1 if a.e > b.e else -1
    elif a.m != b.m:
        mag = 1 if a.m > b.m else -1
    else:
        return 0
    return mag * a.sign


def xmax(a, b):
    return a if cmp(a, b) >= 0 else b


def xmin(a, b):
    return a if cmp(a, b) <= 0 else b


def sum_compensated(terms):
    """Error-compensated sum.  Terms are scaled to the largest exponent and
    fed to math.fsum (exactly rounded); terms more than _SUM_WINDOW binary
    orders below the maximum cannot influence the result and are dropped."""
    nz = [t for t in terms if t.sign != 0]
    if not nz:
        return ZERO
    e0 = max(t.e for t in nz)
    s = math.fsum(
        math.ldexp(t.sign * t.m, t.e - e0) for t in nz if t.e >= e0 - _SUM_WINDOW
    )
    if s == 0.0:
        return ZERO
    return _norm(1 if s > 0 else -1, abs(s), e0)


def _as_fraction(r):
    """Exact rational view of an exponent/ratio parameter."""
    if isinstance(r, Fraction):
        return r
    if isinstance(r, int):
        return Fraction(r)
    if isinstance(r, float):
        if r != r or r in (math.inf, -math.inf):
            raise DomainError("non-finite exponent %r" % r)
        return Fraction(r)  # exact binary expansion
    raise DomainError("unsupported exponent type %r" % type(r))


def _exp2_split(t_exact, t_float):
    """2^(t_exact + t_float) with t_exact an exact rational and |t_float| < 1."""
    ip = math.floor(t_exact)
    s = float(t_exact - ip) + t_float
    k = math.floor(s)
    return _norm(1, 2.0 ** (s - k), ip + k)


def exp2(t):
    """2^t for t int/float/Fraction, exact split of integer and fractional parts."""
    return _exp2_split(_as_fraction(t), 0.0)


def pow_real(x, r):
    """x^r for x > 0.  r may be int, float or Fraction; r*exp2(x) is split
    exactly so huge exponents lose no precision."""
    if x.sign <= 0:
        raise DomainError("pow_real needs a positive base")
    rf = _as_fraction(r)
    if rf == 0:
        return ONE
    if rf == 1:
        return x
    t_exact = rf * x.e
    t_float = float(rf) * math.log2(x.m)
    return _exp2_split(t_exact, t_float)


def fmt(x):
    """Compact reader-friendly rendering, stable across runs."""
    if x.sign == 0:
        return "0"
    if -40 <= x.e <= 40:
        return "%.12g" % x.to_float()
    return "%.12g*2^%d" % (x.sign * x.m, x.e)
