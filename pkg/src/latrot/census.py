"""Collision and hole censuses over symmetric windows, plus growth fits.

A *collision point* is a lattice point that is the image of two distinct
lattice points under the discretized rotation; a *hole* has no preimage
at all.  Both are counted over |x|,|y| <= M by two independent routes:

* characterization (floor mode only):
  - collisions: any colliding pair is a unit-distance neighbor pair, and
    the pair {p, p+e} collides iff the fractional parts of the two
    rotation forms at p land in a half-open box determined by the
    rotated step e.  Scanning the domain window and testing the four
    neighbor systems enumerates every collision image.
  - holes: (n, m) has no preimage iff some cell's four corner images are
    exactly the four orthogonal neighbors of (n, m), in a fixed order
    determined by the angle's quadrant (the rotated cell then covers
    T_(n,m) up to corner triangles that belong to neighbors).  Scanning
    cells for that pattern enumerates every hole.  Note the weaker test
    "no corner of the cell *containing* the inverse-rotated point maps
    onto (n, m)" is necessary but not sufficient; see hole_test_exact.
* brute force (any rounding mode): enumerate the discretized map over a
  domain window large enough to contain every preimage of the target
  window (the rotation is an isometry and quantization moves points by
  less than sqrt(2)), histogram the images, and read off multiplicities.

Scans run banded over rows: memory stays bounded, bands can be handed to
worker threads, and the merge (integer sums / set unions, applied in
band order) is independent of the thread count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .angle import AngleContext, angle_text
from .errors import CapExceeded, DegenerateCounts, UnsupportedMode
from .exactnum import HALF, ONE, ZERO, Scalar, compare, floor_exact, frac_part
from .exactnum import rational as rational_const
from .kernels import LinearForm, make_form, rotation_forms
from .rotation import (
    RoundingMode,
    _combine,
    cell_corners,
    discrete_rotate,
    quantize,
    rotate_inverse,
)

DEFAULT_ORACLE_CAP = 512
_BAND_TARGET = 1 << 20  # points per band


class CensusKind(Enum):
    COLLISIONS = "collisions"
    HOLES = "holes"


class Method(Enum):
    CHARACTERIZATION = "characterization"
    BRUTE_FORCE = "brute_force"


@dataclass
class CensusReport:
    angle: str
    mode: RoundingMode
    M: int
    kind: CensusKind
    count: int
    points: list[tuple[int, int]] | None
    method: Method
    elapsed_ms: float
    pair_count: int | None = None


@dataclass
class GrowthFit:
    Ms: list[int]
    counts: list[int]
    exponent: float
    r_squared: float


def _ceil_sqrt2(m: int) -> int:
    return 0 if m == 0 else math.isqrt(2 * m * m) + 1


def _bands(lo: int, hi: int, width: int):
    rows = max(1, _BAND_TARGET // max(1, width))
    b = lo
    while b <= hi:
        yield b, min(hi, b + rows - 1)
        b += rows


def _run_bands(lo, hi, width, worker, threads):
    spans = list(_bands(lo, hi, width))
    if threads <= 1 or len(spans) <= 1:
        return [worker(span) for span in spans]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, spans))


def _sorted_points(idx: np.ndarray, M: int) -> list[tuple[int, int]]:
    W = 2 * M + 1
    xs = idx // W - M
    ys = idx % W - M
    order = np.lexsort((xs, ys))  # lexicographic by (y, x)
    return [(int(x), int(y)) for x, y in zip(xs[order], ys[order])]


# --------------------------------------------------------------------------
# Neighbor boxes for the collision characterization
# --------------------------------------------------------------------------

_DIRS = ((0, 1), (1, 0), (0, -1), (-1, 0))


def _max_scalar(a: Scalar, b: Scalar) -> Scalar:
    return a if compare(a, b) >= 0 else b


def _min_scalar(a: Scalar, b: Scalar) -> Scalar:
    return a if compare(a, b) <= 0 else b


def _shift_box(c: Scalar) -> tuple[Scalar, Scalar]:
    """floor(L) == floor(L + c) for |c| <= 1 iff {L} in [lo, hi)."""
    return _max_scalar(ZERO, -c), _min_scalar(ONE, ONE - c)


def neighbor_boxes(ctx: AngleContext) -> list[tuple[tuple[int, int], tuple, tuple]]:
    """Per neighbor step e: the box [lo1,hi1) x [lo2,hi2) on the
    fractional parts of the two rotation forms that makes p and p+e
    share their floor image."""
    out = []
    for da, db in _DIRS:
        c1 = ctx.cos * da - ctx.sin * db
        c2 = ctx.sin * da + ctx.cos * db
        out.append(((da, db), _shift_box(c1), _shift_box(c2)))
    return out


def _coeff_sign(ctx: AngleContext, c: tuple[int, int, int]) -> int:
    """Sign of c0 + c1*sin + c2*cos.  The zero vector is decided
    symbolically, so exact ties (e.g. a fractional part equal to the
    bound 'sin' itself) never stall precision escalation."""
    if c == (0, 0, 0):
        return 0
    try:
        value = ctx.sin * c[1] + ctx.cos * c[2] + rational_const(c[0])
    except Exception:
        from .exactnum import as_highprec

        value = (
            as_highprec(ctx.sin) * c[1]
            + as_highprec(ctx.cos) * c[2]
            + rational_const(c[0])
        )
    return compare(value, ZERO)


def _coeff_sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _coeff_box_contains(ctx, f, c) -> bool:
    """{L} in [max(0, -c), min(1, 1-c)) with everything expressed as
    integer coefficients over (1, sin, cos)."""
    s = _coeff_sign(ctx, c)
    lo = (0, 0, 0) if s >= 0 else (-c[0], -c[1], -c[2])
    hi = (1 - c[0], -c[1], -c[2]) if s >= 0 else (1, 0, 0)
    return (
        _coeff_sign(ctx, _coeff_sub(f, lo)) >= 0
        and _coeff_sign(ctx, _coeff_sub(hi, f)) > 0
    )


def collision_site_exact(ctx: AngleContext, a: int, b: int):
    """Exact per-point evaluation: the floor image of (a, b) and the
    neighbor steps whose collision system fires there."""
    image = discrete_rotate(ctx, (a, b))
    f1 = (-image[0], -b, a)  # {L1} = -floor + a*cos - b*sin
    f2 = (-image[1], a, b)
    fired = []
    for da, db in _DIRS:
        c1 = (0, -db, da)  # L1 shift when stepping to the neighbor
        c2 = (0, da, db)
        if _coeff_box_contains(ctx, f1, c1) and _coeff_box_contains(ctx, f2, c2):
            fired.append((da, db))
    return image, fired


def hole_test_exact(ctx: AngleContext, n: int, m: int) -> bool:
    """Exact single-point hole test.

    Every preimage of (n, m) lies in the inverse-rotated unit square,
    whose points sit within sqrt(2) of the inverse-rotated corner; that
    confines candidates to the 4x4 lattice block around the containing
    cell.  (The four cell corners alone are not enough: for
    sin, cos = 5/13, 12/13 the point (1, 0) has containing cell (0, -1)
    with no corner mapping onto it, yet (2, 0) does.)
    """
    ax, bx = rotate_inverse(ctx, (n, m))
    a, b = floor_exact(ax), floor_exact(bx)
    return not any(
        discrete_rotate(ctx, (a + i, b + j)) == (n, m)
        for i in (-1, 0, 1, 2)
        for j in (-1, 0, 1, 2)
    )


# Corner-image offsets around a hole, per quadrant of the angle: the
# images of cell corners (0,0), (1,0), (0,1), (1,1) occupy the four
# horizontal/vertical neighbors of the hole in this fixed order.
_HOLE_PATTERNS = {
    1: ((0, -1), (1, 0), (-1, 0), (0, 1)),
    2: ((1, 0), (0, 1), (0, -1), (-1, 0)),
    3: ((0, 1), (-1, 0), (1, 0), (0, -1)),
    4: ((-1, 0), (0, -1), (0, 1), (1, 0)),
}


def _quadrant(ctx: AngleContext) -> int:
    s = compare(ctx.sin, ZERO)
    c = compare(ctx.cos, ZERO)
    if s > 0:
        return 1 if c > 0 else 2
    if c > 0:
        return 4
    return 3


def hole_pattern_exact(ctx: AngleContext, a: int, b: int) -> tuple[int, int] | None:
    """If the corner images of cell (a, b) surround a lattice point as
    its four orthogonal neighbors (quadrant order), return that point."""
    pattern = _HOLE_PATTERNS[_quadrant(ctx)]
    imgs = [quantize(c) for c in cell_corners(ctx, (a, b))]
    n = imgs[0][0] - pattern[0][0]
    m = imgs[0][1] - pattern[0][1]
    for (x, y), (dx, dy) in zip(imgs, pattern):
        if (x, y) != (n + dx, m + dy):
            return None
    return n, m


# --------------------------------------------------------------------------
# Characterization censuses
# --------------------------------------------------------------------------

def collision_census(
    ctx: AngleContext,
    M: int,
    mode: RoundingMode = RoundingMode.FLOOR,
    *,
    method: Method | None = None,
    keep_points: bool = False,
    count_pairs: bool = False,
    threads: int = 1,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> CensusReport:
    method = _pick_method(method, mode)
    if method is Method.BRUTE_FORCE:
        return brute_force_census(
            ctx, M, mode, CensusKind.COLLISIONS,
            cap=oracle_cap, keep_points=keep_points, threads=threads,
            count_pairs=count_pairs,
        )
    start = time.perf_counter()
    R = _ceil_sqrt2(M) + 2
    W = 2 * M + 1
    k1, k2 = rotation_forms(ctx, max_abs=R)
    boxes = neighbor_boxes(ctx)
    cols = np.arange(-R, R + 1, dtype=np.int64)

    def worker(span):
        blo, bhi = span
        rows = np.arange(blo, bhi + 1, dtype=np.int64)
        A, B = np.meshgrid(cols, rows)
        A, B = A.ravel(), B.ravel()
        F1, u1 = k1.floor(A, B)
        F2, u2 = k2.floor(A, B)
        unc = _or_masks(u1, u2)
        dir_masks = []
        for _, (lo1, hi1), (lo2, hi2) in boxes:
            m1a, ua = k1.frac_lt(A, B, lo1, strict=True)
            m1b, ub = k1.frac_lt(A, B, hi1, strict=True)
            m2a, uc = k2.frac_lt(A, B, lo2, strict=True)
            m2b, ud = k2.frac_lt(A, B, hi2, strict=True)
            for u in (ua, ub, uc, ud):
                unc = _or_masks(unc, u)
            dir_masks.append(~m1a & m1b & ~m2a & m2b)
        inwin = (np.abs(F1) <= M) & (np.abs(F2) <= M)
        hit_any = np.zeros(A.shape, dtype=bool)
        matches = 0
        for m in dir_masks:
            if unc is not None:
                m &= ~unc
            matches += int((m & inwin).sum())
            hit_any |= m
        hit = hit_any & inwin
        idx = (F1[hit] + M) * W + (F2[hit] + M)
        flagged = (
            np.stack([A[unc], B[unc]], axis=1) if unc is not None and unc.any() else None
        )
        return np.unique(idx), matches, flagged

    results = _run_bands(-R, R, 2 * R + 1, worker, threads)
    chunks = [r[0] for r in results]
    matches = sum(r[1] for r in results)
    for r in results:
        if r[2] is None:
            continue
        for a, b in r[2]:
            image, fired = collision_site_exact(ctx, int(a), int(b))
            if fired and abs(image[0]) <= M and abs(image[1]) <= M:
                chunks.append(
                    np.array([(image[0] + M) * W + (image[1] + M)], dtype=np.int64)
                )
                matches += len(fired)
    idx = np.unique(np.concatenate(chunks)) if chunks else np.array([], dtype=np.int64)
    elapsed = (time.perf_counter() - start) * 1000
    return CensusReport(
        angle=angle_text(ctx),
        mode=mode,
        M=M,
        kind=CensusKind.COLLISIONS,
        count=int(idx.size),
        points=_sorted_points(idx, M) if keep_points else None,
        method=Method.CHARACTERIZATION,
        elapsed_ms=elapsed,
        pair_count=(matches // 2) if count_pairs else None,
    )


def hole_census(
    ctx: AngleContext,
    M: int,
    mode: RoundingMode = RoundingMode.FLOOR,
    *,
    method: Method | None = None,
    keep_points: bool = False,
    threads: int = 1,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> CensusReport:
    method = _pick_method(method, mode)
    if method is Method.BRUTE_FORCE:
        return brute_force_census(
            ctx, M, mode, CensusKind.HOLES,
            cap=oracle_cap, keep_points=keep_points, threads=threads,
        )
    start = time.perf_counter()
    W = 2 * M + 1
    R = _ceil_sqrt2(M + 1) + 2
    pattern = _HOLE_PATTERNS[_quadrant(ctx)]
    corner_forms = []
    for ea, eb in ((0, 0), (1, 0), (0, 1), (1, 1)):
        g1 = _combine(ctx.cos, ea, -ctx.sin, eb)
        g2 = _combine(ctx.sin, ea, ctx.cos, eb)
        corner_forms.append(
            (
                make_form(ctx.cos, -ctx.sin, g1, max_abs=R),
                make_form(ctx.sin, ctx.cos, g2, max_abs=R),
            )
        )
    cols = np.arange(-R, R + 1, dtype=np.int64)

    def worker(span):
        blo, bhi = span
        rows = np.arange(blo, bhi + 1, dtype=np.int64)
        A, B = np.meshgrid(cols, rows)
        A, B = A.ravel(), B.ravel()
        unc = None
        imgs = []
        for k1e, k2e in corner_forms:
            X, u1 = k1e.floor(A, B)
            Y, u2 = k2e.floor(A, B)
            unc = _or_masks(unc, _or_masks(u1, u2))
            imgs.append((X, Y))
        N = imgs[0][0] - pattern[0][0]
        Mv = imgs[0][1] - pattern[0][1]
        match = np.ones(A.shape, dtype=bool)
        for (X, Y), (dx, dy) in zip(imgs[1:], pattern[1:]):
            match &= (X == N + dx) & (Y == Mv + dy)
        match &= (np.abs(N) <= M) & (np.abs(Mv) <= M)
        if unc is not None:
            match &= ~unc
        idx = (N[match] + M) * W + (Mv[match] + M)
        flagged = (
            np.stack([A[unc], B[unc]], axis=1) if unc is not None and unc.any() else None
        )
        return np.unique(idx), flagged

    results = _run_bands(-R, R, 2 * R + 1, worker, threads)
    chunks = [r[0] for r in results]
    for r in results:
        if r[1] is None:
            continue
        for a, b in r[1]:
            found = hole_pattern_exact(ctx, int(a), int(b))
            if found is not None and abs(found[0]) <= M and abs(found[1]) <= M:
                chunks.append(
                    np.array([(found[0] + M) * W + (found[1] + M)], dtype=np.int64)
                )
    idx = np.unique(np.concatenate(chunks)) if chunks else np.array([], dtype=np.int64)
    elapsed = (time.perf_counter() - start) * 1000
    return CensusReport(
        angle=angle_text(ctx),
        mode=mode,
        M=M,
        kind=CensusKind.HOLES,
        count=int(idx.size),
        points=_sorted_points(idx, M) if keep_points else None,
        method=Method.CHARACTERIZATION,
        elapsed_ms=elapsed,
    )


def _pick_method(method: Method | None, mode: RoundingMode) -> Method:
    if method is None:
        return Method.CHARACTERIZATION if mode is RoundingMode.FLOOR else Method.BRUTE_FORCE
    if method is Method.CHARACTERIZATION and mode is not RoundingMode.FLOOR:
        raise UnsupportedMode(
            f"characterization census covers floor rounding only, not {mode.value}"
        )
    return method


# --------------------------------------------------------------------------
# Brute-force oracle
# --------------------------------------------------------------------------

def _quantize_arrays(ctx, k1, k2, k1r, k2r, A, B, mode):
    """Images of (A, B) under the chosen rounding; returns (X, Y, unc)."""
    if mode is RoundingMode.ROUND:
        X, u1 = k1r.floor(A, B)
        Y, u2 = k2r.floor(A, B)
        unc = _or_masks(u1, u2)
        return X, Y, unc
    X, u1 = k1.floor(A, B)
    Y, u2 = k2.floor(A, B)
    unc = _or_masks(u1, u2)
    if mode is RoundingMode.TRUNC:
        z1, u3 = k1.frac_zero(A, B)
        z2, u4 = k2.frac_zero(A, B)
        unc = _or_masks(unc, _or_masks(u3, u4))
        X = X + ((X < 0) & ~z1)
        Y = Y + ((Y < 0) & ~z2)
    return X, Y, unc


def _or_masks(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a | b


def brute_force_census(
    ctx: AngleContext,
    M: int,
    mode: RoundingMode,
    kind: CensusKind,
    *,
    cap: int | None = DEFAULT_ORACLE_CAP,
    keep_points: bool = False,
    count_pairs: bool = False,
    threads: int = 1,
) -> CensusReport:
    """Independent oracle: enumerate the map, histogram the images."""
    if cap is not None and M > cap:
        raise CapExceeded(f"brute-force window M={M} exceeds the cap {cap}")
    start = time.perf_counter()
    counts = _image_histogram(ctx, M, mode, threads)
    W = 2 * M + 1
    if kind is CensusKind.COLLISIONS:
        mask = counts >= 2
        pair_count = int(sum(math.comb(int(c), 2) for c in counts[mask])) if count_pairs else None
    else:
        mask = counts == 0
        pair_count = None
    idx = np.nonzero(mask)[0]
    elapsed = (time.perf_counter() - start) * 1000
    return CensusReport(
        angle=angle_text(ctx),
        mode=mode,
        M=M,
        kind=kind,
        count=int(idx.size),
        points=_sorted_points(idx, M) if keep_points else None,
        method=Method.BRUTE_FORCE,
        elapsed_ms=elapsed,
        pair_count=pair_count,
    )


def _domain_radius(M: int) -> int:
    return _ceil_sqrt2(M + 2) + 2


def _brute_forms(ctx, R):
    k1, k2 = rotation_forms(ctx, max_abs=R)
    k1r = make_form(ctx.cos, -ctx.sin, HALF, max_abs=R)
    k2r = make_form(ctx.sin, ctx.cos, HALF, max_abs=R)
    return k1, k2, k1r, k2r


def _image_histogram(ctx, M, mode, threads) -> np.ndarray:
    R = _domain_radius(M)
    W = 2 * M + 1
    k1, k2, k1r, k2r = _brute_forms(ctx, R)
    cols = np.arange(-R, R + 1, dtype=np.int64)

    def worker(span):
        blo, bhi = span
        rows = np.arange(blo, bhi + 1, dtype=np.int64)
        A, B = np.meshgrid(cols, rows)
        A, B = A.ravel(), B.ravel()
        X, Y, unc = _quantize_arrays(ctx, k1, k2, k1r, k2r, A, B, mode)
        if unc is not None and unc.any():
            flagged = np.stack([A[unc], B[unc]], axis=1)
            keep = ~unc
            A, B, X, Y = A[keep], B[keep], X[keep], Y[keep]
        else:
            flagged = None
        inwin = (np.abs(X) <= M) & (np.abs(Y) <= M)
        idx = (X[inwin] + M) * W + (Y[inwin] + M)
        return idx, flagged

    counts = np.zeros(W * W, dtype=np.int64)
    for idx, flagged in _run_bands(-R, R, 2 * R + 1, worker, threads):
        counts += np.bincount(idx, minlength=W * W)
        if flagged is not None:
            for a, b in flagged:
                x, y = discrete_rotate(ctx, (int(a), int(b)), mode)
                if abs(x) <= M and abs(y) <= M:
                    counts[(x + M) * W + (y + M)] += 1
    return counts


def collision_preimages(
    ctx: AngleContext, M: int, mode: RoundingMode = RoundingMode.FLOOR, threads: int = 1
) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """Brute-force map image -> list of preimages, for images inside the
    window with multiplicity >= 2 (oracle-side diagnostics)."""
    counts = _image_histogram(ctx, M, mode, threads)
    W = 2 * M + 1
    hot = counts >= 2
    R = _domain_radius(M)
    k1, k2, k1r, k2r = _brute_forms(ctx, R)
    cols = np.arange(-R, R + 1, dtype=np.int64)
    out: dict[tuple[int, int], list[tuple[int, int]]] = {}

    for blo, bhi in _bands(-R, R, 2 * R + 1):
        rows = np.arange(blo, bhi + 1, dtype=np.int64)
        A, B = np.meshgrid(cols, rows)
        A, B = A.ravel(), B.ravel()
        X, Y, unc = _quantize_arrays(ctx, k1, k2, k1r, k2r, A, B, mode)
        if unc is not None and unc.any():
            for i in np.nonzero(unc)[0]:
                X[i], Y[i] = discrete_rotate(ctx, (int(A[i]), int(B[i])), mode)
        inwin = (np.abs(X) <= M) & (np.abs(Y) <= M)
        idx = (X + M) * W + (Y + M)
        sel = inwin & hot[np.clip(idx, 0, W * W - 1)]
        for a, b, x, y in zip(A[sel], B[sel], X[sel], Y[sel]):
            out.setdefault((int(x), int(y)), []).append((int(a), int(b)))
    return out


# --------------------------------------------------------------------------
# Growth fitting
# --------------------------------------------------------------------------

def growth_fit(
    ctx: AngleContext,
    Ms: list[int],
    mode: RoundingMode = RoundingMode.FLOOR,
    kind: CensusKind = CensusKind.COLLISIONS,
    *,
    method: Method | None = None,
    threads: int = 1,
    oracle_cap: int | None = None,
) -> GrowthFit:
    """Least-squares slope of log(count) against log(M).

    Explicitly requested windows configure the brute-force cap, so
    round/trunc fits work beyond the default oracle cap."""
    if len(Ms) < 3:
        raise ValueError("need at least three window sizes")
    if sorted(Ms) != list(Ms) or len(set(Ms)) != len(Ms):
        raise ValueError("window sizes must be strictly increasing")
    run = collision_census if kind is CensusKind.COLLISIONS else hole_census
    cap = oracle_cap if oracle_cap is not None else max(Ms)
    counts = [
        run(ctx, M, mode, method=method, threads=threads, oracle_cap=cap).count
        for M in Ms
    ]
    if any(c == 0 for c in counts):
        raise DegenerateCounts(f"zero counts in {dict(zip(Ms, counts))}")
    lx = np.log(np.asarray(Ms, dtype=float))
    ly = np.log(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - float((resid**2).sum()) / ss_tot
    return GrowthFit(list(Ms), counts, float(slope), r2)
