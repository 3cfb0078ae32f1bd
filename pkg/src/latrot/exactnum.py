"""Exact and adaptive-precision real scalars with provably correct floors.

Three representations cover everything the lattice machinery needs:

* ``Rational``    -- fractions in lowest terms.
* ``QuadIrr``     -- (p + q*sqrt(d))/den with integer p, q, den > 0 and
  squarefree d >= 2.  Floors and comparisons are decided purely by integer
  square comparisons, never by floating point.
* ``HighPrec``    -- a lazily re-evaluable dyadic interval (midpoint +
  error radius) backed by mpmath.  Every derived value can be recomputed
  at any working precision, so floor/comparison decisions escalate
  precision (doubling, up to a cap) until they are certain.  If a value
  sits exactly on a boundary the operation raises
  :class:`UndecidableAtPrecision` rather than guessing.

Arithmetic between exact variants stays exact; anything mixed with a
``HighPrec`` degrades to ``HighPrec``.  Quadratic irrationals over
different radicands cannot be combined (:class:`IncompatibleField`).

All values are immutable and safe to share between workers.
"""

from __future__ import annotations

import math
import numbers
import os
import re
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import IncompatibleField, InvalidSpec, UndecidableAtPrecision

DEFAULT_PRECISION_BITS = 128
MAX_PRECISION_BITS = 2048
_ENV_BITS = "LATTICE_ROT_PRECISION_BITS"


def default_precision_bits() -> int:
    """HighPrec starting precision; overridable via LATTICE_ROT_PRECISION_BITS."""
    env = os.environ.get(_ENV_BITS)
    if env:
        bits = int(env)
        if bits < 8:
            raise InvalidSpec(f"{_ENV_BITS}={env!r}: need at least 8 bits")
        return bits
    return DEFAULT_PRECISION_BITS


def _is_squarefree(d: int) -> bool:
    if d < 2:
        return False
    i = 2
    while i * i <= d:
        if d % (i * i) == 0:
            return False
        i += 1
    return True


def _floor_sqrt_multiple(q: int, d: int) -> int:
    """floor(q * sqrt(d)) for integer q, squarefree d >= 2.

    q*sqrt(d) is irrational for q != 0, so the negative branch never sits
    on an integer.
    """
    if q == 0:
        return 0
    r = math.isqrt(q * q * d)
    return r if q > 0 else -r - 1


class Scalar:
    """Common operator surface; concrete subclasses below."""

    __slots__ = ()

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(self, other)

    def __radd__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(other, self)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(self, _neg(other))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(other, _neg(self))

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _mul(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _mul(other, self)

    def __neg__(self):
        return _neg(self)

    def __lt__(self, other):
        return compare(self, _coerce_strict(other)) < 0

    def __le__(self, other):
        return compare(self, _coerce_strict(other)) <= 0

    def __gt__(self, other):
        return compare(self, _coerce_strict(other)) > 0

    def __ge__(self, other):
        return compare(self, _coerce_strict(other)) >= 0

    def __str__(self):
        return format_scalar(self)


class Rational(Scalar):
    __slots__ = ("_frac",)

    def __init__(self, numerator, denominator=1):
        if isinstance(numerator, Fraction) and denominator == 1:
            self._frac = numerator
        else:
            self._frac = Fraction(numerator, denominator)

    @property
    def numerator(self) -> int:
        return self._frac.numerator

    @property
    def denominator(self) -> int:
        return self._frac.denominator

    def as_fraction(self) -> Fraction:
        return self._frac

    def __eq__(self, other):
        if isinstance(other, Rational):
            return self._frac == other._frac
        if isinstance(other, (int, Fraction)):
            return self._frac == other
        return NotImplemented

    def __hash__(self):
        return hash(("latrot.Rational", self._frac))

    def __float__(self):
        return float(self._frac)

    def __repr__(self):
        return f"Rational({self.numerator}, {self.denominator})"


class QuadIrr(Scalar):
    """(p + q*sqrt(d))/den in canonical form: gcd(p,q,den)=1, den>0, q!=0."""

    __slots__ = ("p", "q", "d", "den")

    def __init__(self, p: int, q: int, d: int, den: int = 1):
        if q == 0:
            raise InvalidSpec("q=0 is rational; use quad() which canonicalizes")
        if den == 0:
            raise ZeroDivisionError("den=0")
        if not _is_squarefree(d):
            raise InvalidSpec(f"radicand {d} is not squarefree >= 2")
        if den < 0:
            p, q, den = -p, -q, -den
        g = math.gcd(math.gcd(abs(p), abs(q)), den)
        self.p = p // g
        self.q = q // g
        self.d = d
        self.den = den // g

    def __eq__(self, other):
        if isinstance(other, QuadIrr):
            return (self.p, self.q, self.d, self.den) == (
                other.p,
                other.q,
                other.d,
                other.den,
            )
        if isinstance(other, (Rational, int, Fraction)):
            return False  # q != 0 means irrational
        return NotImplemented

    def __hash__(self):
        return hash(("latrot.QuadIrr", self.p, self.q, self.d, self.den))

    def __float__(self):
        return (self.p + self.q * math.sqrt(self.d)) / self.den

    def __repr__(self):
        return f"QuadIrr({self.p}, {self.q}, {self.d}, {self.den})"


def rational(numerator, denominator=1) -> Rational:
    return Rational(numerator, denominator)

def quad(p: int, q: int, d: int, den: int = 1) -> Scalar:
    """Canonical (p + q*sqrt(d))/den; collapses to Rational when q == 0."""
    if q == 0:
        return Rational(p, den)
    return QuadIrr(p, q, d, den)


ZERO = Rational(0)
ONE = Rational(1)
HALF = Rational(1, 2)


# --------------------------------------------------------------------------
# HighPrec: lazily re-evaluable dyadic intervals.
#
# A node carries fn(bits) -> (mid, rad), both mpf, guaranteeing
# |true - mid| <= rad when evaluated at working precision `bits`.  Radii
# shrink like 2^-bits, so escalation terminates for any value that is not
# exactly on the decision boundary.  Sums/products of radius-zero nodes
# use mpmath's exact libmp kernels so dyadic chains stay exact.
# --------------------------------------------------------------------------

from mpmath.libmp import mpf_add, mpf_mul, mpf_neg  # noqa: E402


def _ulp(x, bits):
    if x == 0:
        return mpf(2) ** (-bits)
    return mpf(2) ** (mpmath.mag(x) - bits + 1)


class HighPrec(Scalar):
    __slots__ = ("_fn", "precision_bits", "_cache")

    def __init__(self, fn, precision_bits: int):
        self._fn = fn
        self.precision_bits = precision_bits
        self._cache = {}

    def eval(self, bits: int):
        """(mid, rad) with |true - mid| <= rad, at working precision `bits`."""
        got = self._cache.get(bits)
        if got is None:
            got = self._fn(bits)
            self._cache[bits] = got
        return got

    def __float__(self):
        mid, _ = self.eval(max(64, self.precision_bits))
        return float(mid)

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def __repr__(self):
        mid, rad = self.eval(self.precision_bits)
        return f"HighPrec(~{mpmath.nstr(mid, 12)}, bits={self.precision_bits})"


def _dyadic_leaf(x: mpf, bits: int) -> HighPrec:
    x = +x  # normalize to mpf

    def fn(_bits, _x=x):
        return _x, mpf(0)

    return HighPrec(fn, bits)


def highprec(value, precision_bits: int | None = None) -> HighPrec:
    """Leaf HighPrec from a decimal string, int, float or mpf.

    The stored value is the dyadic obtained by rounding at
    ``precision_bits``; from then on it is treated as exact (radius 0).
    """
    bits = precision_bits or default_precision_bits()
    if isinstance(value, str):
        with mp.workprec(bits):
            x = mpf(value)
    elif isinstance(value, (int, float, mpf)):
        with mp.workprec(bits):
            x = mpf(value)
    else:
        raise InvalidSpec(f"cannot build HighPrec from {type(value).__name__}")
    if not mpmath.isfinite(x):
        raise InvalidSpec("HighPrec values must be finite")
    return _dyadic_leaf(x, bits)


def _int_leaf_fn(n: int):
    def fn(bits):
        if n == 0 or abs(n) < (1 << bits):
            with mp.workprec(max(bits, abs(n).bit_length() + 4)):
                return mpf(n), mpf(0)
        with mp.workprec(bits):
            x = mpf(n)
            return x, _ulp(x, bits)

    return fn


def as_highprec(s: Scalar | int | Fraction, precision_bits: int | None = None) -> HighPrec:
    """Render any scalar as a lazily re-evaluable HighPrec node."""
    bits = precision_bits or default_precision_bits()
    s = _coerce_strict(s)
    if isinstance(s, HighPrec):
        return s
    if isinstance(s, Rational):
        num, den = s.numerator, s.denominator

        def fn(b, num=num, den=den):
            with mp.workprec(b + 8):
                x = mpf(num) / mpf(den)
            if den & (den - 1) == 0 and abs(num) < (1 << b):
                return x, mpf(0)  # dyadic, exactly representable
            return x, _ulp(x, b)

        return HighPrec(fn, bits)
    if isinstance(s, QuadIrr):
        p, q, d, den = s.p, s.q, s.d, s.den

        def fn(b, p=p, q=q, d=d, den=den):
            with mp.workprec(b + 16):
                root = mpmath.sqrt(d)
                x = (p + q * root) / den
                scale = (abs(p) + abs(q) * root) / den + 1
            return x, scale * mpf(2) ** (-b - 8)

        return HighPrec(fn, bits)
    raise InvalidSpec(f"cannot render {type(s).__name__} as HighPrec")


def _hp_add(a: HighPrec, b: HighPrec) -> HighPrec:
    bits = max(a.precision_bits, b.precision_bits)

    def fn(req):
        am, ar = a.eval(req)
        bm, br = b.eval(req)
        if ar == 0 and br == 0:
            return mpf(mpf_add(am._mpf_, bm._mpf_, 0, "n")), mpf(0)  # exact
        with mp.workprec(req + 8):
            mid = am + bm
            rad = ar + br + _ulp(mid, req)
        return mid, rad

    return HighPrec(fn, bits)


def _hp_mul(a: HighPrec, b: HighPrec) -> HighPrec:
    bits = max(a.precision_bits, b.precision_bits)

    def fn(req):
        am, ar = a.eval(req)
        bm, br = b.eval(req)
        if (am == 0 and ar == 0) or (bm == 0 and br == 0):
            return mpf(0), mpf(0)
        if ar == 0 and br == 0:
            return mpf(mpf_mul(am._mpf_, bm._mpf_, 0, "n")), mpf(0)  # exact
        with mp.workprec(req + 8):
            mid = am * bm
            rad = abs(am) * br + abs(bm) * ar + ar * br + _ulp(mid, req)
        return mid, rad

    return HighPrec(fn, bits)


def _hp_neg(a: HighPrec) -> HighPrec:
    def fn(req):
        am, ar = a.eval(req)
        return mpf(mpf_neg(am._mpf_, 0, "n")), ar

    return HighPrec(fn, a.precision_bits)


# --------------------------------------------------------------------------
# Arithmetic dispatch
# --------------------------------------------------------------------------

def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, numbers.Integral):
        return Rational(int(x))
    if isinstance(x, Fraction):
        return Rational(x)
    return None  # floats deliberately rejected: wrap them via highprec()


def _coerce_strict(x) -> Scalar:
    s = _coerce(x)
    if s is None:
        raise TypeError(
            f"cannot use {type(x).__name__} as an exact scalar; "
            "wrap floats explicitly with highprec()"
        )
    return s


def _add(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, HighPrec) or isinstance(b, HighPrec):
        return _hp_add(as_highprec(a), as_highprec(b))
    if isinstance(a, Rational) and isinstance(b, Rational):
        return Rational(a.as_fraction() + b.as_fraction())
    if isinstance(a, Rational):
        a, b = b, a
    # a is QuadIrr
    if isinstance(b, Rational):
        rn, rd = b.numerator, b.denominator
        return quad(a.p * rd + rn * a.den, a.q * rd, a.d, a.den * rd)
    if a.d != b.d:
        raise IncompatibleField(f"sqrt({a.d}) + sqrt({b.d})")
    return quad(
        a.p * b.den + b.p * a.den, a.q * b.den + b.q * a.den, a.d, a.den * b.den
    )


def _mul(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, HighPrec) or isinstance(b, HighPrec):
        return _hp_mul(as_highprec(a), as_highprec(b))
    if isinstance(a, Rational) and isinstance(b, Rational):
        return Rational(a.as_fraction() * b.as_fraction())
    if isinstance(a, Rational):
        a, b = b, a
    if isinstance(b, Rational):
        rn, rd = b.numerator, b.denominator
        return quad(a.p * rn, a.q * rn, a.d, a.den * rd)
    if a.d != b.d:
        raise IncompatibleField(f"sqrt({a.d}) * sqrt({b.d})")
    return quad(
        a.p * b.p + a.q * b.q * a.d, a.p * b.q + a.q * b.p, a.d, a.den * b.den
    )


def _neg(a: Scalar) -> Scalar:
    if isinstance(a, Rational):
        return Rational(-a.as_fraction())
    if isinstance(a, QuadIrr):
        return QuadIrr(-a.p, -a.q, a.d, a.den)
    return _hp_neg(a)


# --------------------------------------------------------------------------
# Decisions: floor, comparison, fractional-part membership
# --------------------------------------------------------------------------

def _sign_p_plus_q_sqrt(A: int, B: int, d: int) -> int:
    """Sign of A + B*sqrt(d), decided by integer squaring."""
    if B == 0:
        return (A > 0) - (A < 0)
    if A == 0:
        return 1 if B > 0 else -1
    if A > 0 and B > 0:
        return 1
    if A < 0 and B < 0:
        return -1
    lhs, rhs = A * A, B * B * d
    if A > 0:  # B < 0
        return 1 if lhs > rhs else -1 if lhs < rhs else 0
    return 1 if rhs > lhs else -1 if rhs < lhs else 0


def floor_exact(s: Scalar) -> int:
    """Provably correct floor(s).

    Rational: integer division.  QuadIrr: integer square comparisons.
    HighPrec: interval refinement with doubling precision; raises
    UndecidableAtPrecision when the interval still straddles an integer
    at the cap (the value may actually be an integer).
    """
    if isinstance(s, Rational):
        return s.numerator // s.denominator
    if isinstance(s, QuadIrr):
        return (s.p + _floor_sqrt_multiple(s.q, s.d)) // s.den
    if isinstance(s, HighPrec):
        bits = max(16, s.precision_bits)
        while True:
            mid, rad = s.eval(bits)
            lo, hi = mid - rad, mid + rad
            flo = int(mpmath.floor(lo))
            if flo == int(mpmath.floor(hi)):
                return flo
            if bits >= MAX_PRECISION_BITS:
                raise UndecidableAtPrecision(
                    f"floor undecided at {bits} bits (value within "
                    f"{mpmath.nstr(rad, 5)} of an integer)"
                )
            bits *= 2
    raise TypeError(f"not a Scalar: {type(s).__name__}")


def compare(s1, s2) -> int:
    """-1, 0 or +1.  Exact for exact variants; HighPrec escalates, then errors."""
    s1, s2 = _coerce_strict(s1), _coerce_strict(s2)
    if isinstance(s1, HighPrec) or isinstance(s2, HighPrec):
        diff = _hp_add(as_highprec(s1), _hp_neg(as_highprec(s2)))
        bits = max(16, diff.precision_bits)
        while True:
            mid, rad = diff.eval(bits)
            if rad == 0:
                return (mid > 0) - (mid < 0)
            if mid - rad > 0:
                return 1
            if mid + rad < 0:
                return -1
            if bits >= MAX_PRECISION_BITS:
                raise UndecidableAtPrecision(
                    f"comparison undecided at {bits} bits"
                )
            bits *= 2
    if isinstance(s1, Rational) and isinstance(s2, Rational):
        a, b = s1.as_fraction(), s2.as_fraction()
        return (a > b) - (a < b)
    if isinstance(s1, Rational):
        return -_compare_quad_rational(s2, s1)
    if isinstance(s2, Rational):
        return _compare_quad_rational(s1, s2)
    if s1.d != s2.d:
        raise IncompatibleField(f"compare over sqrt({s1.d}) vs sqrt({s2.d})")
    # (p1 + q1 r)/den1 vs (p2 + q2 r)/den2  <=>  sign of cross difference
    A = s1.p * s2.den - s2.p * s1.den
    B = s1.q * s2.den - s2.q * s1.den
    return _sign_p_plus_q_sqrt(A, B, s1.d)


def _compare_quad_rational(a: QuadIrr, b: Rational) -> int:
    A = a.p * b.denominator - b.numerator * a.den
    B = a.q * b.denominator
    return _sign_p_plus_q_sqrt(A, B, a.d)


def frac_part(s: Scalar) -> Scalar:
    """{s} = s - floor(s); exact for exact variants."""
    return _coerce_strict(s) - floor_exact(_coerce_strict(s))


def frac_in(
    s: Scalar,
    lo: Scalar | int | Fraction,
    hi: Scalar | int | Fraction,
    lo_closed: bool = True,
    hi_closed: bool = False,
) -> bool:
    """Decide {s} in the interval [lo,hi] / [lo,hi) / (lo,hi] / (lo,hi)."""
    f = frac_part(s)
    c_lo = compare(f, lo)
    if not (c_lo > 0 or (lo_closed and c_lo == 0)):
        return False
    c_hi = compare(f, hi)
    return c_hi < 0 or (hi_closed and c_hi == 0)


# --------------------------------------------------------------------------
# Text syntax:  "3/5"  "sqrt(2)/2"  "(1+2*sqrt(5))/4"  "~0.7390851[@bits]"
# --------------------------------------------------------------------------

_RAT_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")
_SQRT_RE = re.compile(r"^([+-]?\d*)\*?sqrt\((\d+)\)(?:/(\d+))?$")
_COMBO_RE = re.compile(
    r"^\(([+-]?\d+)([+-]\d*)\*?sqrt\((\d+)\)\)(?:/(\d+))?$"
)
_HP_RE = re.compile(
    r"^~([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)(?:@(\d+))?$"
)


def _coeff(text: str) -> int:
    if text in ("", "+"):
        return 1
    if text == "-":
        return -1
    return int(text)


def parse_scalar(text: str) -> Scalar:
    t = text.replace(" ", "")
    m = _HP_RE.match(t)
    if m:
        bits = int(m.group(2)) if m.group(2) else None
        return highprec(m.group(1), bits)
    m = _RAT_RE.match(t)
    if m:
        return Rational(int(m.group(1)), int(m.group(2) or 1))
    m = _SQRT_RE.match(t)
    if m:
        return quad(0, _coeff(m.group(1)), int(m.group(2)), int(m.group(3) or 1))
    m = _COMBO_RE.match(t)
    if m:
        return quad(
            int(m.group(1)),
            _coeff(m.group(2)),
            int(m.group(3)),
            int(m.group(4) or 1),
        )
    raise InvalidSpec(f"cannot parse scalar {text!r}")


def _dyadic_decimal(num: int, exp: int) -> str:
    """Exact decimal expansion of num * 2^exp (always finite)."""
    if exp >= 0:
        return str(num << exp)
    k = -exp
    sign = "-" if num < 0 else ""
    scaled = abs(num) * 5**k  # /10^k
    ipart, fpart = divmod(scaled, 10**k)
    if fpart == 0:
        return f"{sign}{ipart}"
    digits = str(fpart).rjust(k, "0").rstrip("0")
    return f"{sign}{ipart}.{digits}"


def format_scalar(s: Scalar) -> str:
    """Canonical text; parse_scalar(format_scalar(s)) reproduces exact
    variants structurally and HighPrec leaves value-exactly."""
    if isinstance(s, Rational):
        if s.denominator == 1:
            return str(s.numerator)
        return f"{s.numerator}/{s.denominator}"
    if isinstance(s, QuadIrr):
        if s.p == 0:
            if s.q == 1:
                core = f"sqrt({s.d})"
            elif s.q == -1:
                core = f"-sqrt({s.d})"
            else:
                core = f"{s.q}*sqrt({s.d})"
        else:
            core = f"({s.p}{'+' if s.q > 0 else '-'}{abs(s.q)}*sqrt({s.d}))"
        return core if s.den == 1 else f"{core}/{s.den}"
    if isinstance(s, HighPrec):
        mid, _ = s.eval(s.precision_bits)
        sign, man, exp, _ = mid._mpf_
        if man == 0 and exp == 0:
            dec = "0"
        else:
            dec = _dyadic_decimal(-man if sign else man, exp)
        return f"~{dec}@{s.precision_bits}"
    raise TypeError(f"not a Scalar: {type(s).__name__}")
