#!/usr/bin/env python3
"""Orbits: cycle detection, the 45-degree period-8 family, absorption.

Iterating the floor-discretized rotation appears to always cycle; at 45
degrees a whole arithmetic family of axis points returns in exactly 8
steps, and under truncation every orbit collapses into the origin.
"""

from latrot import (
    OrbitCaps,
    RoundingMode,
    context_from_text,
    detect_cycle,
    orbit_path,
    orbit_sweep,
    period8_candidates,
    verify_helper_identities,
    verify_period8,
)

quarter = context_from_text("pi/4")

print("== the 8-step return of (9, 0) at 45 degrees ==")
for i, p in enumerate(orbit_path(quarter, (9, 0), n_steps=8)):
    print(f"  step {i}: {p}")

print()
print("== the candidate family: floor conditions in exact sqrt(2) arithmetic ==")
cands = period8_candidates(60)
print("  candidates <= 60:", cands)
print("  floor identities at a=9:",
      "all hold" if all(c.ok for c in verify_helper_identities(9)) else "FAIL")
rep = verify_period8(100_000)
print(f"  a <= 100000: {len(rep.candidates)} candidates, {rep.verified} verified,"
      f" {len(rep.violators)} violators, boundary cases {rep.boundary}")
print("  (a=1 satisfies the floor hypothesis but lands on the fixed point (0,0))")

print()
print("== window sweeps ==")
s = orbit_sweep(quarter, 60)
print(f"  floor, M=60: period histogram {s.histogram},"
      f" undetermined={s.undetermined}, escaped={s.escaped}")
s = orbit_sweep(quarter, 60, RoundingMode.TRUNC, OrbitCaps(max_steps=10_000))
print(f"  trunc, M=60: every orbit absorbed at the origin: {s.absorbed_all}")
rn = context_from_text("rad:~1.0")
s = orbit_sweep(rn, 40, RoundingMode.TRUNC, OrbitCaps(max_steps=10_000))
print(f"  trunc at 1 radian, M=40: absorbed: {s.absorbed_all}")

print()
print("== a long mixed orbit, re-verified ==")
rec = detect_cycle(rn, (90, -17), caps=OrbitCaps(max_steps=10**6))
print(f"  1 radian, start (90,-17): status={rec.status.value}"
      f" preperiod={rec.preperiod} period={rec.period} max|.|={rec.max_norm}")
