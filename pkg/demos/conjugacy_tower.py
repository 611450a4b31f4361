"""Julia trees of z -> t - (1+t^2)/z + t/z^2 matched with lamination trees up to level 3."""

from berkdyn.berkovich import QuadraticMap
from berkdyn.classifier import classify
from berkdyn.juliatree import JuliaTower, conjugacy_search

phi = QuadraticMap.parse("t - (1+t^2)/z + t/z^2")
jt = JuliaTower(phi, classify(phi), 3)
for lv in range(4):
    print(f"A^({lv}): {jt[lv].counts()}, w = {jt[lv].w}")
rep = conjugacy_search(jt, 1, 3)
print(rep.summary())
for lv, checks in rep.checks.items():
    print(lv, checks)
