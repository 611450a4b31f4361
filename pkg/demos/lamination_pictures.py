"""Disk pictures and level trees of a few laminations, written to demos/out/."""

import os
from fractions import Fraction as F

from berkdyn.lamination import build_lamination, center_lamination
from berkdyn.lamtree import LevelTree

out = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out, exist_ok=True)

cases = {
    "center_1_3": center_lamination(1, 3, 3),
    "center_1_2": center_lamination(1, 2, 4),
    "join_1_3": build_lamination(1, 3, F(9, 56), "join", 3),
    "plus_2_5": build_lamination(2, 5, F(19, 62), "plus", 2),
}
for name, lam in cases.items():
    tree = LevelTree(lam)
    with open(os.path.join(out, name + ".svg"), "w") as fh:
        fh.write(tree.geo.svg())
    with open(os.path.join(out, name + ".dot"), "w") as fh:
        fh.write(tree.to_dot())
    g, y, e = tree.counts()
    print(f"{name}: {len(lam.nontrivial())} classes, tree with {g} Gamma, {y} Y, {e} edges")
print("written to", out)
