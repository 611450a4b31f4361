"""Classify the worked examples and print their summaries."""

import cmath
import math

from berkdyn.berkovich import QuadraticMap
from berkdyn.classifier import classify, verify_residue_formula
from berkdyn.cli import summary_text
from berkdyn.puiseux import FLOAT

MAPS = [
    ("z + 1 + t/z", None),
    ("t^(1/2) - (1+t^2)/z + t/z^2", None),
    ("-t - (1+t^2)/z + t/z^2", None),
    ("t - (1+t^2)/z + t/z^2", None),
    ("t - (1+t^2)/z + t/z^2 + t^5", None),
    ("z^2 + t^-1", None),
    ("z^2", None),
]

e = cmath.exp(1j * math.pi * (math.sqrt(5) - 1))
MAPS.append((f"({e.real!r},{e.imag!r})*z*(z+1+t)/(z+1)", FLOAT))

for src, field in MAPS:
    phi = QuadraticMap.parse(src, field) if field else QuadraticMap.parse(src)
    rep = classify(phi)
    print(f"== {src}")
    print(summary_text(rep))
    for d in rep.rivera:
        ok, wit = verify_residue_formula(phi, d, rep.fixed_points)
        print(f"residue formula on {d.kind} domain: {ok} (N = {wit['N']})")
    print()
