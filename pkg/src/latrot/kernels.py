"""Vectorized evaluation of the linear forms behind every lattice scan.

Every census / solution counter reduces to floors and fractional-part
tests of L(x, y) = alpha*x + beta*y + gamma over integer windows, where
the coefficients are the (exact or high-precision) sine/cosine of one
angle.  Three kernel families:

* rational coefficients  -- L = (iA*x + iB*y + iG)/D: floor and
  fractional part are single int64 divisions/mods, exact.
* one quadratic field    -- L = (P + Q*sqrt(d))/D with integer P, Q:
  floor(L) = (P + floor(Q*sqrt(d))) // D, and floor(Q*sqrt(d)) is an
  integer square root, so everything stays exact in int64.  Fractional
  comparisons reduce to the sign of A + B*sqrt(d), decided by squaring.
* float prefilter        -- for high-precision or cross-field angles:
  evaluate in float64, flag any decision within a conservative slack of
  a boundary, and let the caller re-decide flagged points through the
  exact scalar layer.  The slack dominates the float64 error bound
  (~6*|L|*2^-53) by >100x, so unflagged decisions are provably correct.

int64 overflow is guarded at construction from the window bound; forms
whose intermediates could overflow fall back to per-point exact
evaluation (slow, correct).
"""

from __future__ import annotations

import math

import numpy as np

from .angle import AngleContext
from .errors import IncompatibleField
from .exactnum import (
    HighPrec,
    QuadIrr,
    Rational,
    Scalar,
    ZERO,
    as_highprec,
    compare,
    floor_exact,
    frac_part,
    rational,
)
from .rotation import RoundingMode, discrete_rotate

_INT64_SAFE = 1 << 62
_SQRT_SAFE = 1 << 52  # float-assisted isqrt is exact below this


def visqrt(x: np.ndarray) -> np.ndarray:
    """Elementwise floor(sqrt(x)) for nonnegative int64 x < 2**52."""
    s = np.sqrt(x.astype(np.float64)).astype(np.int64)
    s = np.where((s + 1) * (s + 1) <= x, s + 1, s)
    s = np.where(s * s > x, s - 1, s)
    return s


def vfloor_sqrt_multiple(q: np.ndarray, d: int) -> np.ndarray:
    """Elementwise floor(q * sqrt(d)); q*q*d is never a perfect square
    for q != 0 since d is squarefree."""
    r = visqrt(q * q * d)
    return np.where(q >= 0, r, -r - (q != 0))


def vsign_p_plus_q_sqrt(A: np.ndarray, B: np.ndarray, d: int) -> np.ndarray:
    """Elementwise sign of A + B*sqrt(d)."""
    out = np.zeros(A.shape, dtype=np.int8)
    pos = ((A >= 0) & (B > 0)) | ((A > 0) & (B >= 0))
    neg = ((A <= 0) & (B < 0)) | ((A < 0) & (B <= 0))
    out[pos] = 1
    out[neg] = -1
    mixed = (A > 0) & (B < 0)
    if mixed.any():
        diff = A[mixed] ** 2 - B[mixed] ** 2 * d
        out[mixed] = np.sign(diff).astype(np.int8)
    mixed = (A < 0) & (B > 0)
    if mixed.any():
        diff = B[mixed] ** 2 * d - A[mixed] ** 2
        out[mixed] = np.sign(diff).astype(np.int8)
    return out


def _parts(s: Scalar) -> tuple[int, int, int, int | None]:
    """s = (p + q*sqrt(d))/den -> (p, q, den, d); d None when rational."""
    if isinstance(s, Rational):
        return s.numerator, 0, s.denominator, None
    if isinstance(s, QuadIrr):
        return s.p, s.q, s.den, s.d
    raise TypeError(f"exact scalar expected, got {type(s).__name__}")




class LinearForm:
    """L(x, y) = alpha*x + beta*y + gamma over integer points.

    Vector methods return (values, uncertain) where `uncertain` is None
    for exact kernels, else a boolean mask of entries the caller must
    re-decide via the exact_* methods.
    """

    def __init__(self, alpha: Scalar, beta: Scalar, gamma: Scalar):
        self.alpha, self.beta, self.gamma = alpha, beta, gamma

    # exact single-point fallbacks (shared by every kernel family)

    def exact_value(self, x: int, y: int) -> Scalar:
        try:
            return self.alpha * x + self.beta * y + self.gamma
        except IncompatibleField:
            return (
                as_highprec(self.alpha) * x
                + as_highprec(self.beta) * y
                + as_highprec(self.gamma)
            )

    def exact_floor(self, x: int, y: int) -> int:
        return floor_exact(self.exact_value(x, y))

    def exact_frac_lt(self, x: int, y: int, t: Scalar, strict: bool = True) -> bool:
        c = compare(frac_part(self.exact_value(x, y)), t)
        return c < 0 if strict else c <= 0

    def exact_frac_zero(self, x: int, y: int) -> bool:
        return compare(frac_part(self.exact_value(x, y)), ZERO) == 0

    # slow exact vector path for overflow-prone coefficient sizes

    def _slow_floor(self, X, Y):
        flat = np.array(
            [self.exact_floor(int(x), int(y)) for x, y in zip(X.ravel(), Y.ravel())],
            dtype=np.int64,
        )
        return flat.reshape(X.shape), None

    def _slow_frac_lt(self, X, Y, t, strict):
        flat = np.array(
            [
                self.exact_frac_lt(int(x), int(y), t, strict)
                for x, y in zip(X.ravel(), Y.ravel())
            ],
            dtype=bool,
        )
        return flat.reshape(X.shape), None

    def _slow_frac_zero(self, X, Y):
        flat = np.array(
            [self.exact_frac_zero(int(x), int(y)) for x, y in zip(X.ravel(), Y.ravel())],
            dtype=bool,
        )
        return flat.reshape(X.shape), None


class QuadForm(LinearForm):
    """Single-field exact kernel; rational coefficients are the q=0 case."""

    def __init__(self, alpha, beta, gamma, d: int | None, max_abs: int):
        super().__init__(alpha, beta, gamma)
        pa, qa, da, _ = _parts(alpha)
        pb, qb, db, _ = _parts(beta)
        pg, qg, dg, _ = _parts(gamma)
        D = math.lcm(da, db, dg)
        self.pure_rational = d is None
        self.d = d or 2
        self.D = D
        self.pA, self.qA = pa * (D // da), qa * (D // da)
        self.pB, self.qB = pb * (D // db), qb * (D // db)
        self.pG, self.qG = pg * (D // dg), qg * (D // dg)
        self._maxP = (abs(self.pA) + abs(self.pB)) * max_abs + abs(self.pG)
        self._maxQ = (abs(self.qA) + abs(self.qB)) * max_abs + abs(self.qG)
        root = math.isqrt(self._maxQ * self._maxQ * self.d) + 1
        self._maxPf = D + root  # |P - floor*D| stays below D + |Q|*sqrt(d)
        self.vector_ok = (
            self._maxQ * self._maxQ * self.d < _SQRT_SAFE
            and self._maxP + root < _INT64_SAFE
        )

    def _numerators(self, X, Y):
        P = self.pA * X + self.pB * Y + self.pG
        Q = self.qA * X + self.qB * Y + self.qG
        return P, Q

    def floor(self, X, Y):
        if not self.vector_ok:
            return self._slow_floor(X, Y)
        P, Q = self._numerators(X, Y)
        return (P + vfloor_sqrt_multiple(Q, self.d)) // self.D, None

    def frac_lt(self, X, Y, t: Scalar, strict: bool = True):
        tp, tq, tden, td = _parts(t)
        if td is not None and not self.pure_rational and td != self.d:
            raise IncompatibleField(
                f"bound over sqrt({td}) against form over sqrt({self.d})"
            )
        d_eff = td if (td is not None and self.pure_rational) else self.d
        # sign tests square these; fall back if they could overflow
        maxA = abs(tp) * self.D + self._maxPf * tden
        maxB = abs(tq) * self.D + self._maxQ * tden
        if not self.vector_ok or maxA * maxA >= _INT64_SAFE or maxB * maxB * d_eff >= _INT64_SAFE:
            return self._slow_frac_lt(X, Y, t, strict)
        P, Q = self._numerators(X, Y)
        F = (P + vfloor_sqrt_multiple(Q, self.d)) // self.D
        Pf = P - F * self.D
        A = tp * self.D - Pf * tden
        B = tq * self.D - Q * tden
        sign = vsign_p_plus_q_sqrt(A, B, d_eff)  # sign of t - {L}
        return (sign > 0) if strict else (sign >= 0), None

    def frac_zero(self, X, Y):
        if not self.vector_ok:
            return self._slow_frac_zero(X, Y)
        P, Q = self._numerators(X, Y)
        F = (P + vfloor_sqrt_multiple(Q, self.d)) // self.D
        return (Q == 0) & (P - F * self.D == 0), None


class FloatForm(LinearForm):
    """float64 prefilter with conservative slack; callers re-decide the
    flagged points through exact_* (high-precision escalation)."""

    def __init__(self, alpha, beta, gamma, max_abs: int):
        super().__init__(alpha, beta, gamma)
        self.fa, self.fb, self.fg = float(alpha), float(beta), float(gamma)
        span = (abs(self.fa) + abs(self.fb)) * max_abs + abs(self.fg) + 1
        self.slack = max(1e-9, span * 1e-12)
        self.vector_ok = True

    def _value(self, X, Y):
        return self.fa * X + self.fb * Y + self.fg

    def floor(self, X, Y):
        L = self._value(X, Y)
        F = np.floor(L)
        f = L - F
        unc = (f < self.slack) | (f > 1 - self.slack)
        return F.astype(np.int64), unc

    def frac_lt(self, X, Y, t: Scalar, strict: bool = True):
        L = self._value(X, Y)
        f = L - np.floor(L)
        ft = float(t)
        unc = (f < self.slack) | (f > 1 - self.slack) | (np.abs(f - ft) < self.slack)
        mask = (f < ft) if strict else (f <= ft)
        return mask, unc

    def frac_zero(self, X, Y):
        L = self._value(X, Y)
        f = L - np.floor(L)
        unc = (f < self.slack) | (f > 1 - self.slack)
        return np.zeros(L.shape, dtype=bool), unc


def make_form(
    alpha: Scalar, beta: Scalar, gamma: Scalar = ZERO, *, max_abs: int
) -> LinearForm:
    """Pick the cheapest exact kernel for the coefficient types."""
    coeffs = (alpha, beta, gamma)
    if any(isinstance(c, HighPrec) for c in coeffs):
        return FloatForm(alpha, beta, gamma, max_abs)
    ds = {c.d for c in coeffs if isinstance(c, QuadIrr)}
    if len(ds) > 1:
        return FloatForm(alpha, beta, gamma, max_abs)  # cross-field
    return QuadForm(alpha, beta, gamma, ds.pop() if ds else None, max_abs)


def rotation_forms(ctx: AngleContext, *, max_abs: int) -> tuple[LinearForm, LinearForm]:
    """The two coordinate forms of the rotation itself."""
    return (
        make_form(ctx.cos, -ctx.sin, max_abs=max_abs),
        make_form(ctx.sin, ctx.cos, max_abs=max_abs),
    )


def inverse_rotation_forms(
    ctx: AngleContext, *, max_abs: int
) -> tuple[LinearForm, LinearForm]:
    return (
        make_form(ctx.cos, ctx.sin, max_abs=max_abs),
        make_form(-ctx.sin, ctx.cos, max_abs=max_abs),
    )


# --------------------------------------------------------------------------
# Scalar-speed step functions for orbit iteration
# --------------------------------------------------------------------------

def _floor_quad_scalar(P: int, Q: int, D: int, d: int) -> int:
    if Q == 0:
        return P // D
    r = math.isqrt(Q * Q * d)
    return (P + (r if Q > 0 else -r - 1)) // D


def make_step(ctx: AngleContext, mode: RoundingMode = RoundingMode.FLOOR):
    """A fast exact (x, y) -> (x', y') closure for one angle and mode.

    Exact integer arithmetic whenever sin/cos live in one quadratic
    field (this covers every pi-multiple, Pythagorean and same-field
    angle; no floating point is involved).  High-precision angles use a
    float64 fast path whose decisions are provably correct outside a
    slack band, with exact escalation inside it.
    """
    if not isinstance(mode, RoundingMode):
        raise TypeError(f"mode must be a RoundingMode, got {mode!r}")
    coeffs = (ctx.cos, ctx.sin)
    if not any(isinstance(c, HighPrec) for c in coeffs):
        ds = {c.d for c in coeffs if isinstance(c, QuadIrr)}
        if len(ds) <= 1:
            d = ds.pop() if ds else 2
            pc, qc, dc, _ = _parts(ctx.cos)
            ps, qs, dsn, _ = _parts(ctx.sin)
            D = math.lcm(dc, dsn)
            pc, qc = pc * (D // dc), qc * (D // dc)
            ps, qs = ps * (D // dsn), qs * (D // dsn)

            if mode is RoundingMode.FLOOR:

                def step(p):
                    x, y = p
                    return (
                        _floor_quad_scalar(pc * x - ps * y, qc * x - qs * y, D, d),
                        _floor_quad_scalar(ps * x + pc * y, qs * x + qc * y, D, d),
                    )

            elif mode is RoundingMode.ROUND:

                def step(p):
                    x, y = p
                    return (
                        _floor_quad_scalar(
                            2 * (pc * x - ps * y) + D, 2 * (qc * x - qs * y), 2 * D, d
                        ),
                        _floor_quad_scalar(
                            2 * (ps * x + pc * y) + D, 2 * (qs * x + qc * y), 2 * D, d
                        ),
                    )

            else:

                def trunc1(P, Q):
                    F = _floor_quad_scalar(P, Q, D, d)
                    if F >= 0 or (Q == 0 and P - F * D == 0):
                        return F
                    return F + 1

                def step(p):
                    x, y = p
                    return (
                        trunc1(pc * x - ps * y, qc * x - qs * y),
                        trunc1(ps * x + pc * y, qs * x + qc * y),
                    )

            return step

    # high-precision / cross-field: float fast path, exact inside the slack
    fc, fs = float(ctx.cos), float(ctx.sin)
    shift = 0.5 if mode is RoundingMode.ROUND else 0.0

    def step(p):
        x, y = p
        slack = max(1e-9, (abs(x) + abs(y) + 1) * 1e-12)
        ok = True
        out = []
        for L in (fc * x - fs * y + shift, fs * x + fc * y + shift):
            F = math.floor(L)
            f = L - F
            if f < slack or f > 1 - slack:
                ok = False
                break
            if mode is RoundingMode.TRUNC and F < 0:
                F += 1  # frac is provably nonzero here
            out.append(F)
        if ok:
            return out[0], out[1]
        return discrete_rotate(ctx, p, mode)

    return step
