#!/usr/bin/env python3
"""A tour of angle classes.

The discretized rotation's behavior is governed by the rational
relations among 1, sin, cos: cardinal multiples are bijective, rational
(Pythagorean) angles get exact residue machinery, single linear
relations split into exceptional (cos = +-sin + r) and ordinary ones,
and fully independent triples fall under plain equidistribution.
"""

from latrot import context_from_text
from latrot.angle import context_to_dict

TOUR = [
    "0",
    "pi/2",
    "pi/4",
    "pi/6",
    "pi/3",
    "pyth:3,4,5",
    "pyth:-5,12,13",
    "quad:sin=sqrt(2)/2,cos=sqrt(2)/2",
    "quad:sin=(-1+1*sqrt(7))/4,cos=(1+1*sqrt(7))/4",  # cos = sin + 1/2
    "quad:sin=sqrt(3)/3,cos=sqrt(6)/3",
    "rad:~1.0",
]

for text in TOUR:
    ctx = context_from_text(text)
    info = context_to_dict(ctx)
    cls = info["class"]
    detail = ", ".join(f"{k}={v}" for k, v in cls.items() if k != "type")
    print(f"{info['angle']:44s} sin={info['sin']:18s} cos={info['cos']:18s}")
    print(f"{'':44s} -> {cls['type']}" + (f" ({detail})" if detail else ""))
