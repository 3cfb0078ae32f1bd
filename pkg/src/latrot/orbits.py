"""Orbit iteration, cycle detection, and the period-8 family at 45 degrees.

Cycle detection uses a visited-map (giving preperiod and period in one
pass) with Brent's constant-memory algorithm as the fallback for runs
whose step budget exceeds the memory budget.  Window sweeps memoize
across starts: once a state's eventual period is known, every later
orbit through it stops immediately, which makes full-window sweeps
near-linear in the number of distinct states touched.

All 45-degree arithmetic is exact: floors of k/sqrt(2) and k*sqrt(2)
are integer square-root comparisons, never floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .angle import AngleContext, PiMultiple, resolve
from .errors import HypothesisViolated
from .exactnum import compare, floor_exact, frac_in, frac_part, quad, rational
from .kernels import make_step
from .rotation import LatticePoint, RoundingMode, discrete_rotate


class OrbitStatus(Enum):
    PERIODIC = "periodic"
    UNDETERMINED = "undetermined"
    ESCAPED = "escaped"


@dataclass(frozen=True)
class OrbitCaps:
    max_steps: int = 10**6
    max_radius: int | None = None  # default: 10^6 * |start|_inf + 10^3
    memory_states: int = 2 * 10**6  # beyond this, Brent's algorithm

    def radius_for(self, start: LatticePoint) -> int:
        if self.max_radius is not None:
            return self.max_radius
        return 10**6 * max(abs(start[0]), abs(start[1])) + 10**3


@dataclass
class OrbitRecord:
    start: LatticePoint
    preperiod: int
    period: int | None
    status: OrbitStatus
    max_norm: int
    steps_used: int


@dataclass
class SweepSummary:
    M: int
    histogram: dict[int, int]
    undetermined: int
    escaped: int
    absorbed_all: bool | None = None  # trunc mode: every orbit reached (0,0)?

    @property
    def total(self) -> int:
        return sum(self.histogram.values()) + self.undetermined + self.escaped


def _norm(p: LatticePoint) -> int:
    return max(abs(p[0]), abs(p[1]))


def detect_cycle(
    ctx: AngleContext,
    start: LatticePoint,
    mode: RoundingMode = RoundingMode.FLOOR,
    caps: OrbitCaps = OrbitCaps(),
) -> OrbitRecord:
    """First revisited state wins; caps turn non-termination into a
    reported status instead of a hang."""
    step = make_step(ctx, mode)
    radius = caps.radius_for(start)
    if caps.max_steps > caps.memory_states:
        return _detect_brent(start, step, caps, radius)
    seen = {start: 0}
    p = start
    maxn = _norm(start)
    steps = 0
    while steps < caps.max_steps:
        p = step(p)
        steps += 1
        maxn = max(maxn, _norm(p))
        if maxn > radius:
            return OrbitRecord(start, 0, None, OrbitStatus.ESCAPED, maxn, steps)
        if p in seen:
            pre = seen[p]
            return OrbitRecord(
                start, pre, steps - pre, OrbitStatus.PERIODIC, maxn, steps
            )
        seen[p] = steps
    return OrbitRecord(start, 0, None, OrbitStatus.UNDETERMINED, maxn, steps)


def _detect_brent(start, step, caps, radius) -> OrbitRecord:
    power = lam = 1
    tortoise = start
    hare = step(start)
    steps = 1
    maxn = max(_norm(start), _norm(hare))
    while tortoise != hare:
        if steps >= caps.max_steps:
            return OrbitRecord(start, 0, None, OrbitStatus.UNDETERMINED, maxn, steps)
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = step(hare)
        steps += 1
        lam += 1
        maxn = max(maxn, _norm(hare))
        if maxn > radius:
            return OrbitRecord(start, 0, None, OrbitStatus.ESCAPED, maxn, steps)
    tortoise = hare = start
    for _ in range(lam):
        hare = step(hare)
        steps += 1
    mu = 0
    while tortoise != hare:
        tortoise = step(tortoise)
        hare = step(hare)
        steps += 2
        mu += 1
    return OrbitRecord(start, mu, lam, OrbitStatus.PERIODIC, maxn, steps)


def orbit_path(
    ctx: AngleContext,
    start: LatticePoint,
    mode: RoundingMode = RoundingMode.FLOOR,
    n_steps: int = 16,
) -> list[LatticePoint]:
    """start and its first n_steps images (length n_steps + 1)."""
    step = make_step(ctx, mode)
    out = [start]
    p = start
    for _ in range(n_steps):
        p = step(p)
        out.append(p)
    return out


def orbit_sweep(
    ctx: AngleContext,
    M: int,
    mode: RoundingMode = RoundingMode.FLOOR,
    caps: OrbitCaps = OrbitCaps(),
) -> SweepSummary:
    """Cycle-detect every start in |x|,|y| <= M, memoizing across starts.

    One window-level escape radius (10^6*M + 10^3 unless capped
    explicitly) keeps the memoized facts start-independent.
    """
    step = make_step(ctx, mode)
    radius = caps.max_radius if caps.max_radius is not None else 10**6 * M + 10**3
    info: dict[LatticePoint, tuple[OrbitStatus, int | None, bool]] = {}
    histogram: dict[int, int] = {}
    undetermined = escaped = 0
    absorbed_all = True
    for y in range(-M, M + 1):
        for x in range(-M, M + 1):
            start = (x, y)
            known = info.get(start)
            if known is None:
                known = _explore(start, step, info, caps.max_steps, radius)
            status, period, absorbed = known
            if status is OrbitStatus.PERIODIC:
                histogram[period] = histogram.get(period, 0) + 1
                absorbed_all = absorbed_all and absorbed
            elif status is OrbitStatus.UNDETERMINED:
                undetermined += 1
                absorbed_all = False
            else:
                escaped += 1
                absorbed_all = False
    return SweepSummary(
        M,
        dict(sorted(histogram.items())),
        undetermined,
        escaped,
        absorbed_all if mode is RoundingMode.TRUNC else None,
    )


def _explore(start, step, info, max_steps, radius):
    path: list[LatticePoint] = []
    local: dict[LatticePoint, int] = {}
    p = start
    while True:
        known = info.get(p)
        if known is not None:
            for s in path:
                info[s] = known
            return known
        j = local.get(p)
        if j is not None:
            period = len(path) - j
            absorbed = period == 1 and p == (0, 0)
            known = (OrbitStatus.PERIODIC, period, absorbed)
            for s in path:
                info[s] = known
            return known
        if _norm(p) > radius:
            known = (OrbitStatus.ESCAPED, None, False)
            for s in path + [p]:
                info[s] = known
            return known
        if len(path) >= max_steps:
            return (OrbitStatus.UNDETERMINED, None, False)
        local[p] = len(path)
        path.append(p)
        p = step(p)


# --------------------------------------------------------------------------
# The period-8 family at 45 degrees
# --------------------------------------------------------------------------

_SQRT2 = quad(0, 1, 2)
_INV_SQRT2 = quad(0, 1, 2, 2)
_ONE_MINUS_INV = quad(2, -1, 2, 2)  # 1 - 1/sqrt(2)


def quarter_turn_context() -> AngleContext:
    return resolve(PiMultiple(1, 4))


def period8_candidates(a_max: int, closed_endpoints: bool = True) -> list[int]:
    """All a in [1, a_max] with w = floor(a/sqrt2) satisfying
    floor(sqrt2*w) = a-1 and {a/sqrt2} in [1-1/sqrt2, sqrt2-1].

    The right endpoint matters: the eight-step return chain branches on
    {a/sqrt2} against sqrt2-1 at its fifth step, and every a beyond that
    threshold demonstrably breaks the chain (a = 5 already does).  Pure
    integer square comparisons throughout; the left endpoint is never
    attained, the right one exactly at a = 2, which closed_endpoints
    keeps (the chain does close there).
    """
    out = []
    for a in range(1, a_max + 1):
        w = math.isqrt(a * a // 2)  # floor(a/sqrt2)
        if math.isqrt(2 * w * w) != a - 1:
            continue
        if (a + 1) ** 2 < 2 * (w + 1) ** 2:  # {a/sqrt2} >= 1 - 1/sqrt2
            continue
        # {a/sqrt2} <= sqrt2 - 1  <=>  a - 2 <= sqrt2*(w - 1)
        s, t = a - 2, w - 1
        if t >= 0:
            upper_ok = s <= 0 or s * s < 2 * t * t
            if not closed_endpoints and s == 0 and t == 0:
                upper_ok = False  # a = 2 sits exactly on the endpoint
        else:
            upper_ok = s < 0 and s * s > 2 * t * t
        if not upper_ok:
            continue
        out.append(a)
    return out


_SQRT2_MINUS_1 = quad(-1, 1, 2)


def brute_force_period8_filter(a_max: int) -> list[int]:
    """Independent route: the same conditions evaluated through the
    generic exact-scalar machinery, plus an actual 8-fold iteration of
    the scalar-level discretized map."""
    ctx = quarter_turn_context()
    out = []
    for a in range(1, a_max + 1):
        s = _INV_SQRT2 * a
        w = floor_exact(s)
        if floor_exact(_SQRT2 * w) != a - 1:
            continue
        if not frac_in(s, _ONE_MINUS_INV, _SQRT2_MINUS_1, True, True):
            continue
        p = (a, 0)
        for _ in range(8):
            p = discrete_rotate(ctx, p)
        if p == (a, 0):
            out.append(a)
    return out


@dataclass
class IdentityCheck:
    name: str
    value: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.value == self.expected


def verify_helper_identities(a: int) -> list[IdentityCheck]:
    """The floor identities behind the period-8 argument, with their
    case splits, all in exact sqrt(2) arithmetic.

    Requires floor(sqrt2 * floor(a/sqrt2)) = a - 1; raises
    HypothesisViolated otherwise.
    """
    s = _INV_SQRT2 * a
    w = floor_exact(s)
    if floor_exact(_SQRT2 * w) != a - 1:
        raise HypothesisViolated(f"floor(sqrt2*floor(a/sqrt2)) != {a - 1}")
    f = frac_part(s)
    fw = _SQRT2 * w - (a - 1)  # {sqrt2*w} under the hypothesis
    checks = [
        IdentityCheck(
            "floor((1-a)/sqrt2) == -w",
            floor_exact(_INV_SQRT2 * (1 - a)),
            -w,
        ),
        IdentityCheck(
            "floor((a-1)/sqrt2) == w-1 (w at a=1)",
            floor_exact(_INV_SQRT2 * (a - 1)),
            w if a == 1 else w - 1,
        ),
        IdentityCheck(
            "floor((a+1)/sqrt2) == w or w+1 by {a/sqrt2} vs 1-1/sqrt2",
            floor_exact(_INV_SQRT2 * (a + 1)),
            w if compare(f, _ONE_MINUS_INV) < 0 else w + 1,
        ),
        IdentityCheck(
            "floor(sqrt2 - a/sqrt2) == -w or -w+1 by {a/sqrt2} vs sqrt2-1",
            floor_exact(_SQRT2 - _INV_SQRT2 * a),
            -w if compare(f, _SQRT2 - rational(1)) > 0 else -w + 1,
        ),
        IdentityCheck(
            "floor(sqrt2*(w+1)) == a or a+1 by {sqrt2*w}+{sqrt2} vs 1",
            floor_exact(_SQRT2 * (w + 1)),
            a if compare(fw + _SQRT2 - rational(1), rational(1)) < 0 else a + 1,
        ),
        IdentityCheck(
            "floor(1/sqrt2 - sqrt2*w) == -a or -a+1 by {sqrt2*w} vs 1/sqrt2",
            floor_exact(_INV_SQRT2 - _SQRT2 * w),
            -a if compare(fw, _INV_SQRT2) > 0 else -a + 1,
        ),
    ]
    return checks


@dataclass
class Period8Report:
    a_max: int
    candidates: list[int]
    verified: int
    boundary: list[int]
    violators: list[tuple[int, list[LatticePoint]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violators


def verify_period8(
    a_max: int, strict_boundary: bool = False, open_endpoints: bool = False
) -> Period8Report:
    """Check r^8(a,0) = (a,0) for every candidate (minimal period may
    divide 8).

    a = 1 is the known boundary case: it satisfies the floor hypothesis
    and sits exactly on the endpoint of the wider interval
    [1-1/sqrt2, 1/sqrt2], yet (1,0) falls onto the fixed point (0,0)
    after one step.  It is reported separately; strict_boundary=True
    treats it as a candidate so its failure shows up as a violation.
    """
    ctx = quarter_turn_context()
    step = make_step(ctx)
    candidates = period8_candidates(a_max, closed_endpoints=not open_endpoints)
    check = list(candidates)
    boundary: list[int] = []
    if a_max >= 1:
        if strict_boundary:
            check = sorted(set(check) | {1})
        else:
            boundary.append(1)
    verified = 0
    violators: list[tuple[int, list[LatticePoint]]] = []
    for a in check:
        p = (a, 0)
        chain = [p]
        for _ in range(8):
            p = step(p)
            chain.append(p)
        if p == (a, 0):
            verified += 1
        else:
            violators.append((a, chain))
    return Period8Report(a_max, candidates, verified, boundary, violators)
