"""Marked grid of the active critical point and a synthetic divergent grid."""

from fractions import Fraction as F

from berkdyn.berkovich import QuadraticMap
from berkdyn.classifier import classify
from berkdyn.puzzle import Puzzle, marked_grid, puzzle_distance_table, tableau, yoccoz_test

phi = QuadraticMap.parse("t - (1+t^2)/z + t/z^2")
P = Puzzle(phi, classify(phi))
w = P.active_critical_point()
g = marked_grid(P, w, 12)
print(g.dump())
print(g.flags(), yoccoz_test(g, puzzle_distance_table(P, w, 12)))

FIB = {1, 2, 3, 5, 8, 13, 21}


def choose(n, forced):
    return (forced or F(0)) + F(n, 2) if n in FIB else forced


syn = tableau(24, choose)
res = yoccoz_test(syn, lambda n, m: 1)
print(res.verdict, res.certificate["generations"])
