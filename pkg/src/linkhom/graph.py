"""Planar trivalent graphs with wide edges, and their factorizations.

A MoyGraph has oriented 1-edges (arcs between marks), wide edges (each
bordered by two leaving marks x1, x2 and two entering marks x3, x4), free
markless loops, and an optional boundary with orientation signs.  The
factorization of a graph is the tensor product of

* one row (pi_{vu}, x_v - x_u) per arc u -> v,
* two rows ((u1, x1+x2-x3-x4), (u2, x1x2-x3x4)) with a q-shift of -1 per
  wide edge,
* one row ((n+1) x^n, 0) on a fresh mark per free loop, realizing the
  one-marked circle, whose cohomology sits in Z2-degree 1 with q-degrees
  1-n, 3-n, ..., n-1.

Repeated marks are allowed everywhere (they realize quotients by the
corresponding relations) because every defining polynomial is produced
generically and specialized by substitution.

The two resolutions of a crossing site share four marks in the roles
(x1, x2, x3, x4) = (leaving, leaving, entering, entering); the oriented
resolution is the arc pair 4 -> 1 and 3 -> 2, the singular one is the wide
edge.  chi0 and chi1 are the degree-1 maps between them, with matrices

    U0 = [[x4 - x2 + mu(x1+x2-x3-x4), 0], [a1, 1]],
    U1 = [[x4 + mu(x1-x4), mu(x2-x3) - x2], [-1, 1]],
    a1 = (mu-1) u2 + (u1 + x1 u2 - pi_23) / (x1 - x4),

    V0 = [[1, 0], [a2, a3]],
    V1 = [[1, x3 + lam(x2-x3)], [1, x1 + lam(x4-x1)]],
    a2 = lam u2 + (u1 + x1 u2 - pi_23) / (x4 - x1),
    a3 = lam(x3+x4-x1-x2) + x1 - x3,

written in the generator order (e_empty, e_12 | e_1, e_2).  At mu = 1,
lam = 0 the compositions are multiplication by x1 - x3 on the nose.
"""

from __future__ import annotations

from fractions import Fraction

from .mf import KoszulFactorization, Morphism
from .poly import (
    GX1,
    GX2,
    GX3,
    GX4,
    GX5,
    GX6,
    Polynomial,
    pi,
    sym3_power_sum,
    wide_edge_polys,
    wide_edge_polys_generic,
)


class InvalidGraph(ValueError):
    pass


class UnknownName(KeyError):
    pass


class MoyGraph:
    """Marks are integer ids; arcs are (from_mark, to_mark); wide edges are
    (out1, out2, in1, in2); free_loops counts markless circles."""

    __slots__ = ("arcs", "wide_edges", "free_loops", "boundary")

    def __init__(self, arcs=(), wide_edges=(), free_loops=0, boundary=None):
        self.arcs = tuple(tuple(a) for a in arcs)
        self.wide_edges = tuple(tuple(w) for w in wide_edges)
        self.free_loops = free_loops
        self.boundary = dict(boundary or {})

    def marks(self) -> set:
        out = set()
        for u, v in self.arcs:
            out.add(u)
            out.add(v)
        for w in self.wide_edges:
            out.update(w)
        return out

    def is_closed(self) -> bool:
        return not self.boundary

    def edge_count(self) -> int:
        """Oriented plus wide edges, counting each free loop once."""
        return len(self.arcs) + len(self.wide_edges) + self.free_loops

    def validate(self):
        """Each internal mark must have one arrival and one departure."""
        arrive: dict = {}
        depart: dict = {}
        for u, v in self.arcs:
            depart[u] = depart.get(u, 0) + 1
            arrive[v] = arrive.get(v, 0) + 1
        for o1, o2, i1, i2 in self.wide_edges:
            arrive[o1] = arrive.get(o1, 0) + 1
            arrive[o2] = arrive.get(o2, 0) + 1
            depart[i1] = depart.get(i1, 0) + 1
            depart[i2] = depart.get(i2, 0) + 1
        for m in self.marks():
            s = self.boundary.get(m, 0)
            want_in = 1 if s in (0, 1) else 0
            want_out = 1 if s in (0, -1) else 0
            if arrive.get(m, 0) != want_in or depart.get(m, 0) != want_out:
                raise InvalidGraph(
                    "mark %s has %d arrivals and %d departures (sign %s)"
                    % (m, arrive.get(m, 0), depart.get(m, 0), s or "none")
                )
        for m in self.boundary:
            if m not in self.marks():
                raise InvalidGraph("boundary mark %s unused" % m)

    def parity(self) -> int:
        """Circles mod 2 after replacing wide edges by the parallel arc pairs."""
        if not self.is_closed():
            raise InvalidGraph("parity is defined for closed graphs")
        succ = {}
        for u, v in self.arcs:
            succ[u] = v
        for o1, o2, i1, i2 in self.wide_edges:
            succ[i2] = o1
            succ[i1] = o2
        seen = set()
        circles = self.free_loops
        for start in sorted(succ):
            if start in seen:
                continue
            circles += 1
            m = start
            while m not in seen:
                seen.add(m)
                m = succ[m]
        return circles % 2

    def __repr__(self):
        return "MoyGraph(arcs=%r, wide=%r, loops=%d, boundary=%r)" % (
            self.arcs,
            self.wide_edges,
            self.free_loops,
            self.boundary,
        )


# -- row builders shared with the cube of resolutions -------------------------


def arc_row(frm: int, to: int, n: int):
    """The factorization row of an arc oriented frm -> to."""
    return (
        pi(to, frm, n),
        Polynomial.variable(to) - Polynomial.variable(frm),
        2 * n,
    )


def wide_rows(quad, n: int):
    u1, u2, b1, b2 = wide_edge_polys(n, quad)
    return [(u1, b1, 2 * n), (u2, b2, 2 * n - 2)]


def loop_row(mark: int, n: int):
    return (pi(mark, mark, n), Polynomial.zero(), 2 * n)


def build(graph: MoyGraph, n: int) -> KoszulFactorization:
    """The Koszul factorization of a graph over the ring of all its marks."""
    graph.validate()
    rows = []
    q_shift = 0
    for u, v in graph.arcs:
        rows.append(arc_row(u, v, n))
    for quad in graph.wide_edges:
        rows.extend(wide_rows(quad, n))
        q_shift -= 1
    marks = graph.marks()
    fresh = max(marks, default=0)
    variables = set(marks)
    for _ in range(graph.free_loops):
        fresh += 1
        rows.append(loop_row(fresh, n))
        variables.add(fresh)
    return KoszulFactorization(n, rows, q_shift, 0, variables)


def potential_of(graph: MoyGraph, n: int) -> Polynomial:
    w = Polynomial.zero()
    for m, s in graph.boundary.items():
        t = Polynomial.variable(m) ** (n + 1)
        w = w + (t if s > 0 else -t)
    return w


# -- the two resolutions of a crossing site and the chi maps ------------------


class LocalCrossingContext:
    """Four marks around one site: x1, x2 leave it, x3, x4 enter it."""

    __slots__ = ("marks",)

    def __init__(self, marks):
        self.marks = tuple(marks)

    def gamma0(self, n: int) -> KoszulFactorization:
        x1, x2, x3, x4 = self.marks
        return KoszulFactorization(
            n,
            [arc_row(x4, x1, n), arc_row(x3, x2, n)],
            variables={x1, x2, x3, x4},
        )

    def gamma1(self, n: int) -> KoszulFactorization:
        return KoszulFactorization(
            n, wide_rows(self.marks, n), q_shift=-1, variables=set(self.marks)
        )


_chi_cache: dict = {}


def _chi_generic(n: int, mu: int, lam: int):
    """chi entries over the generic marks; specialized by substitution."""
    key = (n, mu, lam)
    got = _chi_cache.get(key)
    if got is not None:
        return got
    x1, x2, x3, x4 = (Polynomial.variable(v) for v in (GX1, GX2, GX3, GX4))
    u1, u2, b1, b2 = wide_edge_polys_generic(n)
    pi23 = pi(GX2, GX3, n)
    core = (u1 + x1 * u2 - pi23).exact_divide(x1 - x4)
    one = Polynomial.one()
    a1 = u2.scale(mu - 1) + core
    chi0 = {
        0: ((0, x4 - x2 + b1.scale(mu)), (3, a1)),
        3: ((3, one),),
        1: ((1, x4 + (x1 - x4).scale(mu)), (2, -one)),
        2: ((1, (x2 - x3).scale(mu) - x2), (2, one)),
    }
    a2 = u2.scale(lam) - core
    a3 = (x3 + x4 - x1 - x2).scale(lam) + x1 - x3
    chi1 = {
        0: ((0, one), (3, a2)),
        3: ((3, a3),),
        1: ((1, one), (2, one)),
        2: ((1, x3 + (x2 - x3).scale(lam)), (2, x1 + (x4 - x1).scale(lam))),
    }
    _chi_cache[key] = (chi0, chi1)
    return _chi_cache[key]


def _specialize_entries(entries: dict, marks) -> dict:
    sub = {g: Polynomial.variable(m) for g, m in zip((GX1, GX2, GX3, GX4), marks)}
    out = {}
    for mask, pairs in entries.items():
        img = tuple((t, c.substitute(sub)) for t, c in pairs)
        out[mask] = tuple((t, c) for t, c in img if not c.is_zero())
    return out


def chi0(ctx: LocalCrossingContext, n: int, mu: int = 0) -> Morphism:
    """The degree-1 map from the oriented to the singular resolution."""
    ent = _specialize_entries(_chi_generic(n, mu, 0)[0], ctx.marks)
    return Morphism(ctx.gamma0(n), ctx.gamma1(n), 0, 1, ent)


def chi1(ctx: LocalCrossingContext, n: int, lam: int = 0) -> Morphism:
    """The degree-1 map from the singular to the oriented resolution."""
    ent = _specialize_entries(_chi_generic(n, 0, lam)[1], ctx.marks)
    return Morphism(ctx.gamma1(n), ctx.gamma0(n), 0, 1, ent)


def upsilon(n: int, marks) -> KoszulFactorization:
    """The three-row factorization with rows (v_k, alpha_k) and q-shift -3.

    Its potential is x1^{n+1}+x2^{n+1}+x3^{n+1}-x4^{n+1}-x5^{n+1}-x6^{n+1};
    at n = 2 the third a-entry is the unit 3 and the factorization is
    contractible.
    """
    if n < 2:
        raise ValueError("upsilon needs n >= 2")
    h = sym3_power_sum(n, GX1, GX2, GX3)
    S = [Polynomial.variable(v) for v in (GX1, GX2, GX3, GX4, GX5, GX6)]
    h1 = h
    h2 = h.substitute({GX1: S[3]})
    h3 = h2.substitute({GX2: S[4]})
    h4 = h3.substitute({GX3: S[5]})
    v1 = (h1 - h2).exact_divide(S[0] - S[3])
    v2 = (h2 - h3).exact_divide(S[1] - S[4])
    v3 = (h3 - h4).exact_divide(S[2] - S[5])
    x = [Polynomial.variable(m) for m in marks]
    sub = {
        GX1: x[0] + x[1] + x[2],
        GX2: x[0] * x[1] + x[0] * x[2] + x[1] * x[2],
        GX3: x[0] * x[1] * x[2],
        GX4: x[3] + x[4] + x[5],
        GX5: x[3] * x[4] + x[3] * x[5] + x[4] * x[5],
        GX6: x[3] * x[4] * x[5],
    }
    rows = []
    for k, v in enumerate((v1, v2, v3)):
        alpha = sub[(GX1, GX2, GX3)[k]] - sub[(GX4, GX5, GX6)[k]]
        rows.append((v.substitute(sub), alpha, 2 * n - 2 * k))
    return KoszulFactorization(n, rows, q_shift=-3, variables=set(marks))


# -- named graphs used throughout the tests -----------------------------------

_CLOSED_LIBRARY = (
    "circle",
    "two_circles",
    "theta_closed",
    "digon_closed",
    "ladder_closed",
    "triladder_closed",
    "square_closed",
)


def standard_graph(name: str) -> MoyGraph:
    if name == "circle":
        g = MoyGraph(arcs=[(1, 1)])
    elif name == "two_circles":
        g = MoyGraph(arcs=[(1, 1), (2, 2)])
    elif name == "arc":
        g = MoyGraph(arcs=[(1, 2)], boundary={1: -1, 2: 1})
    elif name == "wide_open":
        g = MoyGraph(wide_edges=[(1, 2, 3, 4)], boundary={1: 1, 2: 1, 3: -1, 4: -1})
    elif name == "digon_I":
        g = MoyGraph(wide_edges=[(5, 2, 3, 5)], boundary={2: 1, 3: -1})
    elif name == "two_arcs":
        g = MoyGraph(arcs=[(4, 1), (3, 2)], boundary={1: 1, 2: 1, 3: -1, 4: -1})
    elif name == "ladder_II":
        g = MoyGraph(
            wide_edges=[(1, 2, 5, 6), (5, 6, 3, 4)],
            boundary={1: 1, 2: 1, 3: -1, 4: -1},
        )
    elif name == "square_III":
        g = MoyGraph(
            wide_edges=[(1, 5, 6, 4), (3, 6, 5, 2)],
            boundary={1: 1, 2: -1, 3: 1, 4: -1},
        )
    elif name == "square_vertical":
        g = MoyGraph(arcs=[(4, 1), (2, 3)], boundary={1: 1, 2: -1, 3: 1, 4: -1})
    elif name == "square_across":
        g = MoyGraph(arcs=[(2, 1), (4, 3)], boundary={1: 1, 2: -1, 3: 1, 4: -1})
    elif name == "fourgr_1":
        g = MoyGraph(
            wide_edges=[(1, 7, 4, 5), (2, 3, 7, 6)],
            boundary={1: 1, 2: 1, 3: 1, 4: -1, 5: -1, 6: -1},
        )
    elif name == "fourgr_2":
        g = MoyGraph(
            wide_edges=[(3, 2, 6, 5)],
            arcs=[(4, 1)],
            boundary={1: 1, 2: 1, 3: 1, 4: -1, 5: -1, 6: -1},
        )
    elif name == "fourgr_3":
        g = MoyGraph(
            wide_edges=[(3, 7, 6, 5), (2, 1, 7, 4)],
            boundary={1: 1, 2: 1, 3: 1, 4: -1, 5: -1, 6: -1},
        )
    elif name == "fourgr_4":
        g = MoyGraph(
            wide_edges=[(1, 2, 4, 5)],
            arcs=[(6, 3)],
            boundary={1: 1, 2: 1, 3: 1, 4: -1, 5: -1, 6: -1},
        )
    elif name == "theta_closed":
        g = MoyGraph(wide_edges=[(1, 2, 3, 4)], arcs=[(1, 4), (2, 3)])
    elif name == "digon_closed":
        g = MoyGraph(wide_edges=[(5, 2, 3, 5)], arcs=[(2, 3)])
    elif name == "ladder_closed":
        g = MoyGraph(wide_edges=[(1, 2, 5, 6), (5, 6, 3, 4)], arcs=[(1, 3), (2, 4)])
    elif name == "triladder_closed":
        g = MoyGraph(wide_edges=[(1, 2, 3, 4), (3, 4, 5, 6), (5, 6, 1, 2)])
    elif name == "square_closed":
        g = MoyGraph(
            wide_edges=[(1, 5, 6, 4), (3, 6, 5, 2)], arcs=[(1, 4), (3, 2)]
        )
    else:
        raise UnknownName(name)
    g.validate()
    return g


def closed_library():
    """Names of the closed test graphs."""
    return _CLOSED_LIBRARY


def parse_graph_literal(text: str) -> MoyGraph:
    """Line-oriented graph format: `a FROM TO`, `w O1 O2 I1 I2`,
    `b MARK SIGN`, `loops N`; blank lines and # comments ignored."""
    arcs = []
    wides = []
    boundary = {}
    loops = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "a" and len(parts) == 3:
                arcs.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "w" and len(parts) == 5:
                wides.append(tuple(int(p) for p in parts[1:]))
            elif parts[0] == "b" and len(parts) == 3:
                boundary[int(parts[1])] = int(parts[2])
            elif parts[0] == "loops" and len(parts) == 2:
                loops = int(parts[1])
            else:
                raise ValueError
        except ValueError:
            raise InvalidGraph("bad graph literal on line %d: %r" % (lineno, raw))
    g = MoyGraph(arcs, wides, loops, boundary)
    g.validate()
    return g
