"""Trees dual to geometric laminations and the maps between them.

A level-l tree has a Gamma-vertex for each connected component of the chord
system (inside chords from a lamination, outside chords from the center
lamination of the opposite limb, reflected) and a Y-vertex for each
complementary region.  Everything is decided on the circle: chords of one
sheet are disjoint, so components are unions of classes sharing points, and
regions are unions of support arcs not separated by any class.

Vertices are hashable tuples ("G", frozenset of angles) and
("Y", frozenset of arcs), so trees built from different angles can be
compared by payload.
"""

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .errors import NotLiftable
from .lamination import (HALF, _Union, angle, center_lamination, fmt, m2,
                         rotation_orbit, support)

G, Y = "G", "Y"


def kind(v):
    return v[0]


def _regions(points, classes):
    """Partition of arc indices into complementary regions of the hulls.

    Walking a region's boundary, the arc ending at x continues with the arc
    starting at the predecessor of x in its class.
    """
    n = len(points)
    index = {t: i for i, t in enumerate(points)}
    pred = {}
    for c in classes:
        for j, t in enumerate(c):
            pred[t] = c[j - 1]
    uf = _Union(range(n))
    for i in range(n):
        x = points[(i + 1) % n]
        uf.union(i, index[pred.get(x, x)])
    return uf


def _big_gap(c):
    """Indices (j, j+1) of the gap of c longer than 1/2, or None."""
    for j, t in enumerate(c):
        s = c[(j + 1) % len(c)]
        if angle(s - t) > HALF or len(c) == 1:
            return t, s
    return None


@dataclass
class GeoLamination:
    level: int
    inside: list     # classes of the lamination
    outside: list    # reflected classes of the opposite center lamination

    def svg(self, size=400):
        import math
        r = size * 0.3
        c = size / 2

        def xy(t, rad=r):
            a = 2 * math.pi * float(t)
            return c + rad * math.cos(a), c - rad * math.sin(a)

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
               f'<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="black"/>']
        for cls in self.inside:
            pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(xy, cls))
            out.append(f'<polygon points="{pts}" fill="#8ab" stroke="#246"/>')
        for cls in self.outside:
            for j, t in enumerate(cls):
                s = cls[(j + 1) % len(cls)]
                if len(cls) == 2 and j == 1:
                    break
                mid = t + angle(s - t) / 2
                (x0, y0), (x1, y1) = xy(t), xy(s)
                bulge = r * (1 + 0.8 * float(angle(s - t)))
                mx, my = xy(mid, bulge)
                out.append(f'<path d="M {x0:.2f} {y0:.2f} Q {mx:.2f} {my:.2f} {x1:.2f} {y1:.2f}" '
                           f'fill="none" stroke="#a42"/>')
        out.append("</svg>")
        return "\n".join(out)


def opposite_center(p, q, level):
    """Center lamination of the -p/q limb, reflected by t -> -t."""
    lam = center_lamination(q - p, q, level)
    return [tuple(sorted(angle(-t) for t in c)) for c in lam.nontrivial()]


class LevelTree:
    """The level-l tree of a lamination."""

    def __init__(self, lam, outside=None):
        self.lam = lam
        self.p, self.q, self.level = lam.p, lam.q, lam.level
        if outside is None:
            outside = opposite_center(self.p, self.q, self.level)
        self.geo = GeoLamination(self.level, lam.nontrivial(), outside)
        pts = self.points = list(lam.support)
        if sorted({t for c in outside for t in c}) != sorted({t for c in self.geo.inside for t in c}):
            # the reflected opposite center lamination lives on the same support
            raise ValueError("inside and outside families have different supports")
        n = len(pts)
        self.arcs = [(pts[i], pts[(i + 1) % n]) for i in range(n)]

        uf = _Union(pts)
        for c in self.geo.inside + outside:
            for t in c[1:]:
                uf.union(c[0], t)
        self.gamma_of = {}
        gammas = []
        for g in uf.groups():
            v = (G, frozenset(g))
            gammas.append(v)
            for t in g:
                self.gamma_of[t] = v

        ins, outs = _regions(pts, self.geo.inside), _regions(pts, outside)
        arcs_uf = _Union(range(n))
        for i in range(n):
            arcs_uf.union(i, ins.find(i))
            arcs_uf.union(i, outs.find(i))
        self.y_of = [None] * n
        ys = []
        for grp in arcs_uf.groups():
            v = (Y, frozenset(self.arcs[i] for i in grp))
            ys.append(v)
            for i in grp:
                self.y_of[i] = v

        g = nx.Graph()
        g.add_nodes_from(gammas, kind=G)
        g.add_nodes_from(ys, kind=Y)
        for i, (a, b) in enumerate(self.arcs):
            g.add_edge(self.gamma_of[a], self.y_of[i])
            g.add_edge(self.gamma_of[b], self.y_of[i])
        self.graph = g
        self.v0 = self._center_vertex(self.geo.inside)
        self.vinf = self._center_vertex(outside)
        self._payload = {v: v for v in g}

    def _center_vertex(self, classes):
        arcs = set(range(len(self.arcs)))
        for c in classes:
            gap = _big_gap(c)
            if gap is None:
                return self.gamma_of[c[0]]
            a, b = gap
            arcs = {i for i in arcs if angle(self.arcs[i][0] - a) < angle(b - a)}
        return self.y_of[min(arcs)]

    # -- queries

    @property
    def vertices(self):
        return list(self.graph.nodes)

    @property
    def edges(self):
        return list(self.graph.edges)

    def counts(self):
        gs = sum(1 for v in self.graph if v[0] == G)
        return gs, self.graph.number_of_nodes() - gs, self.graph.number_of_edges()

    def arc_index(self, t):
        """Index of the open arc containing t (t not a support point)."""
        i = bisect_right(self.points, t) - 1
        return i % len(self.points)

    def locate(self, t):
        t = angle(t)
        if t in self.gamma_of:
            return self.gamma_of[t]
        return self.y_of[self.arc_index(t)]

    def circle_part(self, v):
        if v[0] == G:
            return sorted(v[1])
        return sorted(v[1])

    def contains_angle(self, v, t):
        t = angle(t)
        if v[0] == G:
            return t in v[1]
        return any(0 < angle(t - a) < angle(b - a) or (a == b and t != a) for a, b in v[1])

    def is_tree(self):
        g = self.graph
        bip = all(g.nodes[a]["kind"] != g.nodes[b]["kind"] for a, b in g.edges)
        return bip and nx.is_tree(g)

    def path(self, a, b):
        return nx.shortest_path(self.graph, a, b)

    def label(self, v):
        if v[0] == G:
            return "G{" + ",".join(fmt(t) for t in sorted(v[1])) + "}"
        return "Y{" + ",".join(f"({fmt(a)},{fmt(b)})" for a, b in sorted(v[1])) + "}"

    def to_dot(self, name="T"):
        ids = {v: i for i, v in enumerate(sorted(self.graph, key=self.label))}
        out = [f"graph {name} {{"]
        for v, i in ids.items():
            style = "filled" if v[0] == G else "solid"
            fill = ', fillcolor="black", fontcolor="white"' if v[0] == G else ""
            out.append(f'  n{i} [label="{self.label(v)}", shape=circle, style={style}{fill}];')
        for a, b in sorted((min(ids[a], ids[b]), max(ids[a], ids[b])) for a, b in self.graph.edges):
            out.append(f"  n{a} -- n{b};")
        out.append("}")
        return "\n".join(out)


def build_tree(lam, outside=None):
    return LevelTree(lam, outside)


def _inner(a, b):
    """A point strictly inside the open arc (a, b)."""
    return angle(a + angle(b - a) / 2) if a != b else angle(a + HALF)


class Tower:
    """Trees of levels 0..L of one lamination with pi, iota and m2 tables."""

    def __init__(self, lams):
        self.lams = list(lams)
        self.trees = [LevelTree(lam) for lam in self.lams]
        self.L = len(self.trees) - 1
        self._cache = {}

    @classmethod
    def of(cls, lam):
        return cls([lam.restrict(k) for k in range(lam.level + 1)])

    def __getitem__(self, level):
        return self.trees[level]

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def project(self, level):
        """pi: tree(level) -> tree(level - 1)."""
        def make():
            hi, lo = self.trees[level], self.trees[level - 1]
            out = {}
            for v in hi.graph:
                if v[0] == G and next(iter(v[1])) in lo.gamma_of:
                    out[v] = lo.gamma_of[next(iter(v[1]))]
                elif v[0] == G:
                    out[v] = lo.locate(next(iter(v[1])))
                else:
                    a, b = next(iter(v[1]))
                    out[v] = lo.locate(_inner(a, b))
            return out
        return self._memo(("pi", level), make)

    def doubling(self, level):
        """m2: tree(level) -> tree(level - 1); at level 0 the self map of the star."""
        def make():
            src = self.trees[level]
            dst = self.trees[max(level - 1, 0)]
            out = {}
            for v in src.graph:
                if v[0] == G:
                    out[v] = dst.gamma_of[m2(next(iter(v[1])))]
                elif level == 0:
                    a, b = next(iter(v[1]))
                    i = dst.points.index(m2(a))
                    out[v] = dst.y_of[i]
                else:
                    a, b = next(iter(v[1]))
                    out[v] = dst.locate(m2(_inner(a, b)))
            return out
        return self._memo(("m2", level), make)

    def include(self, level):
        """iota: tree(level) -> tree(level + 1)."""
        def make():
            lo, hi = self.trees[level], self.trees[level + 1]
            pi = self.project(level + 1)
            out = {}
            for v in lo.graph:
                if v[0] == G:
                    out[v] = v
                    continue
                nbrs = set(lo.graph[v])
                cands = [u for u in hi.graph if u[0] == Y and pi[u] == v and nbrs <= set(hi.graph[u])]
                if len(cands) != 1:
                    raise ValueError(f"no unique inclusion for {lo.label(v)}: {len(cands)} candidates")
                out[v] = cands[0]
            return out
        return self._memo(("iota", level), make)

    def self_map(self, level):
        """iota o m2 on tree(level) (the rotation at level 0)."""
        def make():
            d = self.doubling(level)
            if level == 0:
                return dict(d)
            inc = self.include(level - 1)
            return {v: inc[d[v]] for v in d}
        return self._memo(("psi", level), make)

    def branched(self, level):
        """Branched structure of m2: tree(level + 1) -> tree(level)."""
        return self._memo(("br", level), lambda: branched_structure(self.trees[level + 1], self.trees[level],
                                                                   self.doubling(level + 1)))

    def threads(self, top=None):
        """Compatible sequences (v_0, ..., v_top) with pi(v_(k+1)) = v_k."""
        top = self.L if top is None else top
        seqs = [(v,) for v in self.trees[0].graph]
        for k in range(1, top + 1):
            pi = self.project(k)
            by = {}
            for v in self.trees[k].graph:
                by.setdefault(pi[v], []).append(v)
            seqs = [s + (v,) for s in seqs for v in by.get(s[-1], [])]
        return seqs


def inverse_limit_truncation(lam, L=None):
    """Tower of trees of levels 0..L for the lamination (restricted from lam)."""
    if L is not None:
        lam = lam.restrict(L) if L <= lam.level else None
        if lam is None:
            raise ValueError("lamination known only to a lower level")
    return Tower.of(lam)


def center_tower(p, q, L):
    return Tower.of(center_lamination(p, q, L))


@dataclass
class Branched:
    gamma: dict
    fixed: set
    critical: set       # J, as a vertex set of the upper tree
    values: list        # I, a path in the lower tree
    stated: list        # [m2(v(0)), m2(v(inf))] from the upper tree


def half_turn(tree):
    """The involution v -> -v (angles shifted by 1/2) on a tree of level >= 1."""
    out = {}
    for v in tree.graph:
        if v[0] == G:
            out[v] = tree.gamma_of[angle(next(iter(v[1])) + HALF)]
        else:
            a, b = next(iter(v[1]))
            out[v] = tree.locate(_inner(a, b) + HALF)
    return out


def branched_structure(upper, lower, doubling):
    """gamma, Fix(gamma), critical interval and critical value interval."""
    gamma = half_turn(upper)
    fixed = {v for v in upper.graph if gamma[v] == v}
    values = sorted({doubling[v] for v in fixed}, key=lower.label)
    stated = lower.path(doubling[upper.v0], doubling[upper.vinf])
    crit = {v for v in upper.graph if doubling[v] in set(stated)}
    return Branched(gamma, fixed, crit, values, stated)


def fiber_singletons(src_graph, f):
    """Vertices of the target hit exactly once by the map f (the critical values)."""
    count = {}
    for v in src_graph:
        count[f[v]] = count.get(f[v], 0) + 1
    return {w for w, c in count.items() if c == 1}


def is_isomorphism(h, A, T, kinds=False):
    if len(set(h.values())) != len(h) or set(h) != set(A.nodes) or set(h.values()) != set(T.nodes):
        return False
    if any(not T.has_edge(h[a], h[b]) for a, b in A.edges):
        return False
    if kinds:
        return all(A.nodes[a].get("kind") == T.nodes[h[a]].get("kind") for a in A)
    return True


def lift_isomorphisms(h, A2, A, phi, T2, T, m, IA, IT, limit=None):
    """All isomorphisms A2 -> T2 extending h and with m o h' = h o phi.

    A, T are vertex sets of subtrees of the graphs A2, T2; phi maps A2 into
    A and m maps T2 into T.  New vertices are matched edge by edge: the
    image of b next to a is the neighbour of h'(a) with the right image
    under m.  Off the fixed set of the involution that neighbour is unique;
    on it the two branches may be paired either way, and every pairing is
    returned.
    """
    A, T = set(A), set(T)
    if set(h) != A or set(h.values()) != T or len(set(h.values())) != len(h):
        raise NotLiftable("h is not a bijection between the subtrees")
    for a, b in A2.subgraph(A).edges:
        if not T2.has_edge(h[a], h[b]):
            raise NotLiftable("h does not preserve edges", witness=(a, b))
    for a in A:
        if phi[a] in h and h[phi[a]] != m[h[a]]:
            raise NotLiftable("h does not conjugate the restricted maps", witness=a)
    hIA = {h[a] for a in IA if a in h}
    if hIA != set(IT) or len(hIA) != len(set(IA)):
        bad = next(iter((hIA ^ set(IT)) or set(IA) - set(h)), None)
        raise NotLiftable("critical value intervals do not correspond", witness=bad)

    out = []

    def extend(hh, used):
        if limit is not None and len(out) >= limit:
            return
        frontier = [(a, b) for a in hh for b in A2[a] if b not in hh]
        if not frontier:
            if is_isomorphism(hh, A2, T2) and all(m[hh[a]] == h[phi[a]] for a in A2):
                out.append(dict(hh))
            return
        a, b = frontier[0]
        target = h[phi[b]]
        cands = [w for w in T2[hh[a]] if w not in used and m[w] == target]
        for w in cands:
            hh[b] = w
            used.add(w)
            extend(hh, used)
            del hh[b]
            used.discard(w)

    extend(dict(h), set(h.values()))
    if not out:
        raise NotLiftable("no extension matches the branched maps")
    return out


def lift_isomorphism(h, A2, A, phi, T2, T, m, IA, IT, prefer=None):
    """One lift; prefer(lifts) picks among the pairings (default: the first)."""
    lifts = lift_isomorphisms(h, A2, A, phi, T2, T, m, IA, IT)
    return prefer(lifts) if prefer else lifts[0]


def tower_lift(tower, L=None, prefer_identity=True):
    """Iterated lifts h_l: tree(l) -> tree(l) of the identity on level 0.

    The lamination tower is its own model: each step lifts h_l (placed on
    iota(tree(l)) inside tree(l+1)) through iota o m2.
    """
    L = tower.L - 1 if L is None else L
    h = {v: v for v in tower[0].graph}
    hs = [h]
    for lv in range(L):
        hs.append(_lift_step(tower, tower, hs[-1], lv, prefer_identity))
    return hs


def _lift_step(src, dst, h, lv, prefer_identity=False):
    inc_s, inc_d = src.include(lv), dst.include(lv)
    A2, T2 = src[lv + 1].graph, dst[lv + 1].graph
    hA = {inc_s[a]: inc_d[w] for a, w in h.items()}
    phi = {v: inc_s[w] for v, w in src.doubling(lv + 1).items()}
    m = {v: inc_d[w] for v, w in dst.doubling(lv + 1).items()}
    IA = {inc_s[w] for w in fiber_singletons(A2, src.doubling(lv + 1))}
    IT = {inc_d[w] for w in fiber_singletons(T2, dst.doubling(lv + 1))}
    lifts = lift_isomorphisms(hA, A2, set(hA), phi, T2, set(hA.values()), m, IA, IT)
    if prefer_identity:
        for g in lifts:
            if all(k == v for k, v in g.items()):
                return g
    return lifts[0]
