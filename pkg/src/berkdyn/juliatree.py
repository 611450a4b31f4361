"""Level trees in the Berkovich line and their conjugacy to lamination trees.

A^(0) is the skeleton of the fixed Rivera domain (the star joining the
fixed point to the repelling orbit) and A^(l+1) = phi^(-1)(A^(l)).  The
simplicial structure uses the vertices phi^(-l)(V_0), where V_0 holds the
fixed point, the orbit and, when a critical point escapes, the projected
orbit O_0 of that critical point.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .berkovich import INFTY, Point, hyperbolic_distance, join, map_point, on_segment, preimages
from .errors import AxiomViolation, DepthExceeded, NoConjugacy, NotLiftable, PrecisionExhausted
from .lamination import FLAVORS, angle, build_lamination, characteristic_interval, fmt, support
from .lamtree import G, Y, Tower, fiber_singletons, lift_isomorphisms

THETA0, ORBIT, ORBIT0, OTHER = "GO(theta0)", "GO(O)", "GO(O0)", "other"
KIND_OF_TAG = {THETA0: G, ORBIT: Y}


def _median(a, b, c):
    """Median of three type II points (the deepest pairwise join)."""
    js = [join(a, b), join(b, c), join(a, c)]
    return max(js, key=lambda p: p.alpha)


def retract_to_star(x, center, orbit):
    """Retraction of a rigid point onto the star joining center to the orbit."""
    best = center
    for xi in orbit:
        if x is INFTY:
            m = center if center.alpha <= xi.alpha else xi
        else:
            m = _median(Point(x, max(center.alpha, xi.alpha) + 64), center, xi)
        if hyperbolic_distance(m, center) > hyperbolic_distance(best, center):
            best = m
    return best


@dataclass
class BerkLevelTree:
    level: int
    graph: nx.Graph
    tags: dict                  # vertex -> THETA0 | ORBIT | ORBIT0
    phi: dict                   # vertex -> phi(vertex), in the level l-1 tree (self map at level 0)
    mult: dict                  # vertex -> local degree of phi
    w: Point = None             # [xi_0, w] = [omega', omega] meets A^(l) in this segment

    @property
    def vertices(self):
        return list(self.graph.nodes)

    def counts(self):
        c = {}
        for v in self.graph:
            c[self.tags[v]] = c.get(self.tags[v], 0) + 1
        return c

    def to_dot(self, name="A"):
        ids = {v: i for i, v in enumerate(sorted(self.graph, key=repr))}
        out = [f"graph {name} {{"]
        for v, i in ids.items():
            style = "filled" if self.tags[v] != ORBIT else "solid"
            out.append(f'  n{i} [label="{v.label()}", style={style}];')
        for a, b in sorted((min(ids[a], ids[b]), max(ids[a], ids[b])) for a, b in self.graph.edges):
            out.append(f"  n{a} -- n{b};")
        out.append("}")
        return "\n".join(out)


def _edges(vertices):
    """Edges of the convex hull of a vertex set closed under branching."""
    vs = list(vertices)
    d = {(a, b): hyperbolic_distance(a, b) for a in vs for b in vs}
    g = nx.Graph()
    g.add_nodes_from(vs)
    for i, a in enumerate(vs):
        for b in vs[i + 1:]:
            if not any(c is not a and c is not b and d[a, c] + d[c, b] == d[a, b] for c in vs):
                g.add_edge(a, b)
    return g


class JuliaTower:
    """The trees A^(0) .. A^(L) of a map with a repelling orbit on the boundary of U_0."""

    def __init__(self, phi, report, L, horizon=10):
        if report.case not in ("OneRepelling", "TwoRepelling"):
            raise ValueError(f"needs a repelling boundary orbit, got case {report.case}")
        self.phi, self.report, self.L = phi, report, L
        self.center = report.center
        self.orbit = list(report.orbit)
        self.q = report.period
        self.domain = report.rivera[0] if report.rivera else None
        self.crit = [c for c, _ in report.critical_points]
        self.escaping, self.orbit0 = self._escape(horizon)
        self.trees = []
        self._build()

    # -- O_0

    def _escape(self, horizon):
        """The critical point whose orbit enters U_0 and the projection O_0 of its orbit."""
        if self.domain is None:
            return None, []
        for c in self.crit:
            z = c
            for n in range(horizon):
                try:
                    inside = z is not INFTY and self.domain.contains(z)
                except PrecisionExhausted:
                    break
                if inside:
                    return c, self._project_orbit(z, horizon)
                z = self.phi(z)
        return None, []

    def _project_orbit(self, z, horizon):
        pts = []
        for _ in range(horizon):
            pts.append(retract_to_star(z, self.center, self.orbit))
            z = self.phi(z)
            if z is INFTY:
                break
        # the projections settle on a cycle of the star
        tail = pts[len(pts) // 2:]
        cyc = []
        for p in tail:
            if p not in cyc:
                cyc.append(p)
        if any(map_point(self.phi, p) not in cyc for p in cyc):
            raise DepthExceeded("projected critical orbit did not settle within the horizon")
        return cyc

    # -- trees

    def _build(self):
        phi = self.phi
        v0 = [self.center] + self.orbit + [p for p in self.orbit0 if p != self.center]
        tags = {self.center: THETA0}
        for p in self.orbit:
            tags[p] = ORBIT
        for p in self.orbit0:
            tags.setdefault(p, ORBIT0)
        image = {v: map_point(phi, v) for v in v0}
        for v in v0:
            if image[v] not in tags:
                raise AxiomViolation(f"level 0 vertex {v} does not map to a level 0 vertex")
        mult = {}
        verts = list(v0)
        layer = list(v0)
        for lv in range(self.L + 1):
            if lv > 0:
                new = []
                for x in layer:
                    for y, m in preimages(phi, x):
                        if y in tags:
                            mult[y] = m
                            continue
                        tags[y] = tags[x]
                        image[y] = x
                        mult[y] = m
                        new.append(y)
                verts = verts + new
                layer = new
            g = _edges(verts)
            if not nx.is_tree(g):
                raise AxiomViolation(f"level {lv} vertex set is not closed under branching")
            nx.set_node_attributes(g, {v: KIND_OF_TAG.get(tags[v], G) for v in g}, "kind")
            t = BerkLevelTree(lv, g, {v: tags[v] for v in g}, {v: image[v] for v in g}, {})
            t.w = self._critical_vertex(t)
            self.trees.append(t)
        for t in self.trees:
            t.mult = {v: mult.get(v, 1) for v in t.graph}

    def _critical_vertex(self, t):
        xi0 = self.orbit[0]
        a, b = self.crit
        on = [v for v in t.graph if on_segment(v, a, b)]
        if xi0 not in on:
            raise AxiomViolation("xi_0 is not on the segment joining the critical points")
        return max(on, key=lambda v: hyperbolic_distance(v, xi0))

    def __getitem__(self, lv):
        return self.trees[lv]

    def psi(self, lv):
        """phi as a self map of A^(l)."""
        return dict(self.trees[lv].phi)

    def critical_values(self, lv):
        """I_A^(l): vertices of A^(l) with a single preimage in A^(l+1)."""
        return fiber_singletons(self.trees[lv + 1].graph, self.trees[lv + 1].phi)

    def critical_value_vertex(self, lv):
        """v^(l) = phi(w^(l+1))."""
        return self.trees[lv + 1].phi[self.trees[lv + 1].w]

    def stated_interval(self, lv):
        """[xi_1, v^(l)] as a vertex path of A^(l)."""
        return nx.shortest_path(self.trees[lv].graph, self.orbit[1 % self.q], self.critical_value_vertex(lv))


# ---------------------------------------------------------------------------
# collapse and postcritical subtrees


@dataclass
class Collapsed:
    level: int
    graph: nx.Graph              # vertices are frozensets of A^(l) vertices
    cls: dict                    # A^(l) vertex -> class
    psi: dict                    # class -> class (self map)
    trivial: bool


def collapse(tower, lv, hull=None):
    """Quotient of A^(l) by the components of the pullbacks of hull(O_0)."""
    t = tower[lv] if not isinstance(tower, BerkLevelTree) else tower
    g = t.graph
    if hull is None:
        hull = _o0_hull(tower) if not isinstance(tower, BerkLevelTree) else set()
    first = _iterate_to_level0(tower, lv) if not isinstance(tower, BerkLevelTree) else None
    contracted = []
    for a, b in g.edges:
        fa = first[a] if first else a
        fb = first[b] if first else b
        if fa in hull and fb in hull:
            contracted.append((a, b))
    return quotient(g, contracted, t.phi, lv)


def quotient(g, contracted, phi, lv=0):
    comp = nx.Graph()
    comp.add_nodes_from(g)
    comp.add_edges_from(contracted)
    cls = {}
    for c in nx.connected_components(comp):
        fc = frozenset(c)
        for v in c:
            cls[v] = fc
    q = nx.Graph()
    q.add_nodes_from(set(cls.values()))
    for a, b in g.edges:
        if cls[a] != cls[b]:
            q.add_edge(cls[a], cls[b])
    psi = {}
    for v, c in cls.items():
        img = phi.get(v)
        if img is None or img not in cls:
            continue
        if c in psi and psi[c] != cls[img]:
            raise AxiomViolation("collapse does not commute with the map")
        psi[c] = cls[img]
    return Collapsed(lv, q, cls, psi, not contracted)


def _o0_hull(tower):
    pts = list(tower.orbit0)
    if len(pts) <= 1:
        return set(pts)
    g = tower[0].graph
    hull = set()
    for a in pts:
        for b in pts:
            hull.update(nx.shortest_path(g, a, b))
    return hull


def _iterate_to_level0(tower, lv):
    out = {}
    for v in tower[lv].graph:
        x = v
        for k in range(lv, 0, -1):
            x = tower[k].phi[x]
        out[v] = x
    return out


def postcritical_subtree(graph, psi, w, root):
    """{x : w not in [root, psi^k(x)[ for every k >= 0}."""
    keep = set()
    for x in graph:
        seen = set()
        y, ok = x, True
        while y not in seen:
            seen.add(y)
            path = nx.shortest_path(graph, root, y)
            if w in path[:-1]:
                ok = False
                break
            y = psi[y]
        if ok:
            keep.add(x)
    return keep


# ---------------------------------------------------------------------------
# conjugacy search


@dataclass
class Cell:
    lo: Fraction
    hi: Fraction
    flavor: str

    @property
    def theta(self):
        return self.lo if self.lo == self.hi else (self.lo + self.hi) / 2

    def __str__(self):
        if self.lo == self.hi:
            return f"{{{fmt(self.lo)}}}[{self.flavor}]"
        return f"]{fmt(self.lo)}, {fmt(self.hi)}["


def _split(cell, level, p, q):
    """Subcells on which the level-(l+1) lamination is constant."""
    if cell.lo == cell.hi:
        return [cell]
    cuts = [t for t in support(p, q, level) if cell.lo < t < cell.hi]
    ends = [cell.lo] + cuts + [cell.hi]
    out = []
    for a, b in zip(ends, ends[1:]):
        out.append(Cell(a, b, "plus"))
    for t in cuts:
        for fl in FLAVORS:
            out.append(Cell(t, t, fl))
    return out


@dataclass
class State:
    level: int
    cell: Cell
    h: dict
    tower: Tower
    parent: object = None


@dataclass
class ConjugacyReport:
    p: int
    q: int
    L: int
    intervals: list              # per level l, the theta cells on which h_l exists
    isomorphisms: list           # h_0 .. h_L (dicts vertex -> tree vertex)
    trees: list                  # lamination trees of the chosen cell, levels 0 .. L
    cell: Cell
    flavor: str
    checks: dict = field(default_factory=dict)

    def summary(self):
        lines = [f"conjugacy verified through level {self.L} (p/q = {self.p}/{self.q})"]
        for lv, cells in enumerate(self.intervals):
            lines.append(f"  V^({lv}): " + " ".join(str(c) for c in cells))
        lines.append(f"  flavor: {self.flavor}; chosen cell {self.cell}")
        return "\n".join(lines)


_TOWERS = {}


def _lam_tower(p, q, cell, level):
    lam = build_lamination(p, q, cell.theta, cell.flavor, level)
    key = (p, q, level, frozenset(lam.classes))
    if key not in _TOWERS:
        _TOWERS[key] = Tower.of(lam)
    return _TOWERS[key]


def base_isomorphism(jt, tree0):
    """h_0: theta_0 -> the Gamma-vertex, xi_j -> beta_j with beta_0 the vertex containing 0."""
    gam = next(v for v in tree0.graph if v[0] == G)
    h = {jt.center: gam}
    beta = tree0.v0
    rot = {}
    for v in tree0.graph:
        if v[0] == Y:
            a, _ = next(iter(v[1]))
            rot[v] = tree0.y_of[tree0.points.index((2 * a) % 1)]
    for xi in jt.orbit:
        h[xi] = beta
        beta = rot[beta]
    return h


def _admissible(cell, p, q):
    lo, hi = characteristic_interval(p, q)
    if cell.lo == cell.hi == lo:
        return cell.flavor == "minus"
    if cell.lo == cell.hi == hi:
        return cell.flavor == "plus"
    return True


def conjugacy_search(jt, p=1, L=None, max_states=4000):
    """Nested theta-cells and isomorphisms h_l: A^(l) -> T^(l)(theta) through level L."""
    q = jt.q
    L = jt.L if L is None else L
    if L > jt.L:
        raise ValueError("Julia tower is too short")
    lo, hi = characteristic_interval(p, q)
    start = [Cell(lo, hi, "plus"), Cell(lo, lo, "minus"), Cell(hi, hi, "plus")]
    states = []
    for c in start:
        tw = _lam_tower(p, q, c, 0)
        states.append(State(0, c, base_isomorphism(jt, tw[0]), tw))
    survivors = [states]
    for lv in range(L):
        nxt = []
        A2 = jt[lv + 1].graph
        phi = jt[lv + 1].phi
        IA = jt.critical_values(lv)
        for st in states:
            for cell in _split(st.cell, lv, p, q):
                if not _admissible(cell, p, q):
                    continue
                tw = _lam_tower(p, q, cell, lv + 1)
                if set(st.h.values()) != set(tw[lv].graph):
                    continue
                inc = tw.include(lv)
                T2 = tw[lv + 1].graph
                m = {v: inc[w] for v, w in tw.doubling(lv + 1).items()}
                IT = {inc[w] for w in fiber_singletons(T2, tw.doubling(lv + 1))}
                h = {a: inc[w] for a, w in st.h.items()}
                try:
                    lifts = lift_isomorphisms(h, A2, set(h), phi, T2, set(h.values()), m, IA, IT)
                except NotLiftable:
                    continue
                for g in lifts:
                    if all(T2.nodes[g[a]]["kind"] == KIND_OF_TAG.get(jt[lv + 1].tags[a], G) for a in g):
                        nxt.append(State(lv + 1, cell, g, tw, st))
                if len(nxt) > max_states:
                    raise NoConjugacy("state explosion", level=lv + 1)
        if not nxt:
            witness = states[0].cell if states else None
            raise NoConjugacy(f"no theta cell admits a lift to level {lv + 1}", level=lv + 1, witness=witness)
        states = nxt
        survivors.append(states)
    best = states[0]
    chain = []
    s = best
    while s is not None:
        chain.append(s)
        s = s.parent
    chain.reverse()
    intervals = []
    for lv, sts in enumerate(survivors):
        cells = []
        for s in sts:
            if all(str(c) != str(s.cell) for c in cells):
                cells.append(s.cell)
        intervals.append(sorted(cells, key=lambda c: (c.lo, c.hi, c.flavor)))
    finals = intervals[-1]
    if all(c.lo == c.hi and c.flavor == "join" for c in finals):
        flavor = "join"
    elif all(c.lo == c.hi for c in finals):
        flavor = finals[0].flavor
    else:
        flavor = "plus/minus limit"
    trees = [best.tower[k] for k in range(L + 1)]
    rep = ConjugacyReport(p, q, L, intervals, [s.h for s in chain], trees, best.cell, flavor)
    rep.checks = verify_conjugacy(jt, rep, best.tower)
    return rep


def verify_conjugacy(jt, rep, tw):
    """Bijectivity, extension, the square h o psi = iota o m2 o h and kinds, level by level."""
    out = {}
    for lv, h in enumerate(rep.isomorphisms):
        A, T = jt[lv].graph, tw[lv].graph
        iso = (len(set(h.values())) == len(h) == A.number_of_nodes() == T.number_of_nodes()
               and all(T.has_edge(h[a], h[b]) for a, b in A.edges))
        ext = lv == 0 or all(h[a] == tw.include(lv - 1)[w] for a, w in rep.isomorphisms[lv - 1].items())
        self_map = tw.self_map(lv)
        square = all(h[jt[lv].phi[a]] == self_map[h[a]] if jt[lv].phi[a] in h else False for a in A)
        kinds = all(T.nodes[h[a]]["kind"] == KIND_OF_TAG.get(jt[lv].tags[a], G) for a in A)
        out[lv] = {"isomorphism": iso, "extends": ext, "square": square, "kinds": kinds}
        if lv < rep.L:
            # the next cells sit in the closure of h_l(v^(l)) on the circle
            hv = h[jt.critical_value_vertex(lv)]
            out[lv]["critical value"] = all(_in_closure(tw[lv], hv, c) for c in rep.intervals[lv + 1])
    return out


def _in_closure(tree, v, cell):
    if v[0] == G:
        return cell.lo == cell.hi and cell.lo in v[1]
    for a, b in v[1]:
        span = angle(b - a)
        if angle(cell.lo - a) <= span and angle(cell.hi - a) <= span:
            return True
    return False
