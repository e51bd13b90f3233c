"""Link diagrams, the cube of resolutions, and the bigraded homology tables.

A diagram is a list of crossings; each crossing knows its sign and its four
incident edges by role (under-in, under-out, over-in, over-out).  Every edge
carries one mark by default (its own id); extra marks are allowed and change
nothing.  The four local marks of a crossing, in the wide-edge roles
(x1, x2, x3, x4) = (over-out, under-out, over-in, under-in), feed both
resolutions: the oriented one is the arc pair 4 -> 1, 3 -> 2, the singular
one is the wide edge.

A positive crossing contributes the two-term complex of its resolutions in
cohomological degrees (0, 1) with q-shifts (1-n, -n) and edge map chi0; a
negative one contributes degrees (-1, 0) with shifts (n, n-1) and chi1.
Cube edges carry the sign (-1)^{number of earlier axes already flipped}.

Each resolution's factorization is reduced by excluding rows with linear
entries (mf.reduce_greedy); its cohomology is computed in the small model.
A cube edge map is evaluated on a class by lifting the representative to
the unreduced complex (exactly, via the reduction's contraction), applying
the local chi matrix there, and pushing down the target's reduction, so no
linear algebra ever happens outside the reduced models.

Cohomology of every resolution is concentrated in one Z2-degree, the number
of Seifert circles mod 2; the reported parity is normalized by the crossing
count so that it equals the number of link components mod 2 and is a
Reidemeister invariant.
"""

from __future__ import annotations

from fractions import Fraction

from .graph import LocalCrossingContext, MoyGraph, _chi_generic, _specialize_entries, arc_row, loop_row, wide_rows
from .homology import GdimPoly, _Analyzer, degree_window
from .linalg import Echelon, kernel_vectors
from .mf import KoszulFactorization, Reduction, reduce_greedy
from .poly import Polynomial

GXMARKS = (-1, -2, -3, -4)


class InvalidDiagram(ValueError):
    pass


class Crossing:
    """sign +1/-1; edges by role: a = under-in, c = under-out,
    oin = over-in, oout = over-out."""

    __slots__ = ("sign", "a", "c", "oin", "oout")

    def __init__(self, sign, a, c, oin, oout):
        self.sign = sign
        self.a = a
        self.c = c
        self.oin = oin
        self.oout = oout

    def role_edges(self):
        """(x1, x2, x3, x4) = (over-out, under-out, over-in, under-in)."""
        return (self.oout, self.c, self.oin, self.a)

    def __repr__(self):
        return "Crossing(%+d, under %s->%s, over %s->%s)" % (
            self.sign,
            self.a,
            self.c,
            self.oin,
            self.oout,
        )


class LinkDiagram:
    def __init__(self, crossings, free_loops=0, edge_marks=None):
        self.crossings = list(crossings)
        self.free_loops = free_loops
        edges = set()
        for x in self.crossings:
            edges.update((x.a, x.c, x.oin, x.oout))
        self.edges = sorted(edges)
        # one mark per edge by default; extra marks may be appended
        self.edge_marks = {e: [e] for e in self.edges}
        if edge_marks:
            for e, ms in edge_marks.items():
                self.edge_marks[e] = list(ms)
        self._check()

    def _check(self):
        consumed: dict = {}
        produced: dict = {}
        for x in self.crossings:
            for e in (x.a, x.oin):
                consumed[e] = consumed.get(e, 0) + 1
            for e in (x.c, x.oout):
                produced[e] = produced.get(e, 0) + 1
        for e in self.edges:
            if consumed.get(e, 0) != 1 or produced.get(e, 0) != 1:
                raise InvalidDiagram("edge %s is not consumed and produced exactly once" % e)

    def n_crossings(self) -> int:
        return len(self.crossings)

    def components(self) -> list:
        """Cycles of edges; each cycle is one link component."""
        nxt = {}
        for x in self.crossings:
            nxt[x.a] = x.c
            nxt[x.oin] = x.oout
        seen = set()
        out = []
        for e in self.edges:
            if e in seen:
                continue
            cyc = []
            cur = e
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                cur = nxt[cur]
            out.append(cyc)
        return out

    def n_components(self) -> int:
        return len(self.components()) + self.free_loops

    def writhe(self) -> int:
        return sum(x.sign for x in self.crossings)

    def mirror(self) -> "LinkDiagram":
        flipped = [Crossing(-x.sign, x.oin, x.oout, x.a, x.c) for x in self.crossings]
        return LinkDiagram(flipped, self.free_loops)

    def with_extra_mark(self, edge: int) -> "LinkDiagram":
        marks = {e: list(ms) for e, ms in self.edge_marks.items()}
        fresh = max(max(ms) for ms in marks.values()) + 1 if marks else 1
        marks[edge] = marks[edge] + [fresh]
        return LinkDiagram(self.crossings, self.free_loops, marks)

    # surgery used by the skein oracle ------------------------------------

    def switch(self, k: int) -> "LinkDiagram":
        x = self.crossings[k]
        new = Crossing(-x.sign, x.oin, x.oout, x.a, x.c)
        return LinkDiagram(self.crossings[:k] + [new] + self.crossings[k + 1 :], self.free_loops)

    def smooth(self, k: int) -> "LinkDiagram":
        """Oriented smoothing: join under-in -> over-out, over-in -> under-out."""
        x = self.crossings[k]
        parent = {}

        def find(e):
            while parent.get(e, e) != e:
                parent[e] = parent.get(parent[e], parent[e])
                e = parent[e]
            return e

        def union(e, f):
            re, rf = find(e), find(f)
            if re != rf:
                parent[max(re, rf)] = min(re, rf)

        union(x.a, x.oout)
        union(x.oin, x.c)
        rest = [c for i, c in enumerate(self.crossings) if i != k]
        new = [Crossing(c.sign, find(c.a), find(c.c), find(c.oin), find(c.oout)) for c in rest]
        used = set()
        for c in new:
            used.update((c.a, c.c, c.oin, c.oout))
        vanished = {find(e) for e in (x.a, x.c, x.oin, x.oout)} - used
        return LinkDiagram(new, self.free_loops + len(vanished))


def unknot_diagram() -> LinkDiagram:
    return LinkDiagram([], free_loops=1)


# -- the cube of resolutions ---------------------------------------------------


class ResolutionCube:
    """States, their graphs and factorizations, degrees, shifts, edge maps."""

    def __init__(self, diagram: LinkDiagram, n: int):
        self.diagram = diagram
        self.n = n
        c = diagram.n_crossings()
        self.states = list(range(1 << c))
        self.graphs = {eps: self.state_graph(eps) for eps in self.states}

    def _site_marks(self, x: Crossing):
        """Local marks in roles (x1, x2, x3, x4): first mark of outgoing
        edges, last mark of incoming edges."""
        marks = self.diagram.edge_marks
        oout, c, oin, a = x.role_edges()
        return (marks[oout][0], marks[c][0], marks[oin][-1], marks[a][-1])

    def state_graph(self, eps: int) -> MoyGraph:
        arcs = []
        wides = []
        for k, x in enumerate(self.diagram.crossings):
            x1, x2, x3, x4 = self._site_marks(x)
            if eps >> k & 1:
                wides.append((x1, x2, x3, x4))
            else:
                arcs.append((x4, x1))
                arcs.append((x3, x2))
        for ms in self.diagram.edge_marks.values():
            for u, v in zip(ms, ms[1:]):
                arcs.append((u, v))
        return MoyGraph(arcs, wides, self.diagram.free_loops)

    def state_factorization(self, eps: int) -> KoszulFactorization:
        """Rows in site order (two per crossing), then extra-mark arcs,
        then free loops; this layout is what the edge maps rely on."""
        n = self.n
        rows = []
        q_shift = 0
        variables = set()
        for k, x in enumerate(self.diagram.crossings):
            x1, x2, x3, x4 = self._site_marks(x)
            variables.update((x1, x2, x3, x4))
            if eps >> k & 1:
                rows.extend(wide_rows((x1, x2, x3, x4), n))
                q_shift -= 1
            else:
                rows.append(arc_row(x4, x1, n))
                rows.append(arc_row(x3, x2, n))
        for ms in self.diagram.edge_marks.values():
            variables.update(ms)
            for u, v in zip(ms, ms[1:]):
                rows.append(arc_row(u, v, n))
        fresh = max(variables, default=0)
        for _ in range(self.diagram.free_loops):
            fresh += 1
            rows.append(loop_row(fresh, n))
            variables.add(fresh)
        return KoszulFactorization(n, rows, q_shift, 0, variables)

    def i_degree(self, eps: int) -> int:
        i = 0
        for k, x in enumerate(self.diagram.crossings):
            if eps >> k & 1:
                i += 1 if x.sign > 0 else -1
        return i

    def q_shift(self, eps: int) -> int:
        n = self.n
        s = 0
        for k, x in enumerate(self.diagram.crossings):
            on = eps >> k & 1
            if x.sign > 0:
                s += -n if on else 1 - n
            else:
                s += n if on else n - 1
        return s

    def edges(self):
        """(source_state, target_state, site, sign) for every cube edge.

        For a positive crossing the map goes 0 -> 1 (chi0), for a negative
        one 1 -> 0 (chi1); either way the cohomological degree rises by 1.
        """
        out = []
        for eps in self.states:
            for k, x in enumerate(self.diagram.crossings):
                on = eps >> k & 1
                if x.sign > 0 and not on:
                    src, tgt = eps, eps | (1 << k)
                elif x.sign < 0 and on:
                    src, tgt = eps, eps & ~(1 << k)
                else:
                    continue
                sign = 1
                for kk in range(k):
                    xx = self.diagram.crossings[kk]
                    t = (eps >> kk & 1) if xx.sign > 0 else 1 - (eps >> kk & 1)
                    if t:
                        sign = -sign
                out.append((eps, tgt, k, sign))
        return out


class HomologyTable:
    """dims[(i, j)] -> dimension, with the Z2-parity and the level n."""

    def __init__(self, n: int, parity: int, dims: dict):
        self.n = n
        self.parity = parity % 2
        self.dims = {k: v for k, v in dims.items() if v}

    def __eq__(self, other):
        return (
            isinstance(other, HomologyTable)
            and self.n == other.n
            and self.parity == other.parity
            and self.dims == other.dims
        )

    def items(self):
        return sorted(self.dims.items())

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __repr__(self):
        cells = ", ".join("(%d,%d):%d" % (i, j, d) for (i, j), d in self.items())
        return "HomologyTable(n=%d, parity=%d, {%s})" % (self.n, self.parity, cells)


def euler(table: HomologyTable):
    """Sum of (-1)^i q^j dim as a LaurentPoly."""
    from .oracle import LaurentPoly

    out: dict = {}
    for (i, j), d in table.dims.items():
        out[j] = out.get(j, 0) + (d if i % 2 == 0 else -d)
    return LaurentPoly(out)


def poincare(table: HomologyTable) -> dict:
    """{(i, j): dim}; the t = -1 specialization is euler()."""
    return dict(table.dims)


class _StateData:
    __slots__ = ("K", "red", "analyzer", "classes", "p")

    def __init__(self, K, red, analyzer, classes, p):
        self.K = K
        self.red = red
        self.analyzer = analyzer
        self.classes = classes  # {(z2, j): [coordinate-space reps as model vectors]}
        self.p = p


def _state_data(cube: ResolutionCube, eps: int) -> _StateData:
    K = cube.state_factorization(eps)
    red = reduce_greedy(K)
    M = red.model
    graph = cube.graphs[eps]
    window = degree_window(M, edge_count=graph.edge_count())
    an = _Analyzer(M)
    p = graph.parity()
    classes = {}
    j_min, j_max = window
    for j in range(j_min, j_max + 1):
        for z2 in (0, 1):
            coords, _ = an.piece(z2, j)
            if not coords:
                continue
            reps, _, _ = an.solve_piece(z2, j)
            if reps:
                if z2 != p:
                    raise ArithmeticError(
                        "cohomology off the expected parity at state %d" % eps
                    )
                classes[(z2, j)] = [an.coords_vector(r, z2, j) for r in reps]
    return _StateData(K, red, an, classes, p)


def _chi_site_entries(cube: ResolutionCube, site: int, positive: bool):
    """Mask-level action at one site, specialized to its marks."""
    x = cube.diagram.crossings[site]
    marks = cube._site_marks(x)
    chi0_ent, chi1_ent = _chi_generic(cube.n, 0, 0)
    ent = chi0_ent if positive else chi1_ent
    return _specialize_entries(ent, marks)


def _apply_site_map(vec: dict, entries: dict, site: int) -> dict:
    """Apply a local chi to a full-state vector; the two site rows sit at
    bit positions 2*site and 2*site + 1, and the map is Z2-even, so no
    signs appear on the other tensor factors."""
    lo = 2 * site
    out: dict = {}
    for mask, p in vec.items():
        local = (mask >> lo) & 3
        rest = mask & ~(3 << lo)
        for tloc, c in entries.get(local, ()):
            term = c * p
            if term.is_zero():
                continue
            t = rest | (tloc << lo)
            cur = out.get(t)
            out[t] = term if cur is None else cur + term
    return {m: p for m, p in out.items() if not p.is_zero()}


def _edge_matrices(cube, src_data: _StateData, tgt_data: _StateData, site: int, positive: bool):
    """Per (z2, j): the matrix of the induced edge map in the state bases."""
    entries = _chi_site_entries(cube, site, positive)
    out = {}
    for (z2, j), reps in sorted(src_data.classes.items()):
        cols = []
        tkey = (z2, j + 1)
        for rep in reps:
            up = src_data.red.lift(rep)
            mapped = _apply_site_map(up, entries, site)
            down = tgt_data.red.push(mapped)
            if tgt_data.red.model.apply_d(down):
                raise ArithmeticError("edge image is not a cocycle")
            cols.append(tgt_data.analyzer.express(down, *tkey))
        tdim = len(tgt_data.classes.get(tkey, []))
        out[(z2, j)] = [[cols[c][r] for c in range(len(cols))] for r in range(tdim)]
    return out


def _complex_dims_and_maps(cube: ResolutionCube, state_data: dict):
    """Assemble the bigraded total complex over Q.

    Returns (slots, diff) where slots[(i, j)] lists (state, z2j-key, index)
    and diff[(i, j)] is a sparse matrix into slot (i+1, j)."""
    slots: dict = {}
    pos_of: dict = {}
    for eps, data in state_data.items():
        i = cube.i_degree(eps)
        qs = cube.q_shift(eps)
        for (z2, j), reps in sorted(data.classes.items()):
            key = (i, j + qs)
            lst = slots.setdefault(key, [])
            for r in range(len(reps)):
                pos_of[(eps, z2, j, r)] = (key, len(lst))
                lst.append((eps, (z2, j), r))
    diff: dict = {}
    for src, tgt, site, sign in cube.edges():
        positive = cube.diagram.crossings[site].sign > 0
        mats = _edge_matrices(cube, state_data[src], state_data[tgt], site, positive)
        i = cube.i_degree(src)
        qs = cube.q_shift(src)
        for (z2, j), matrix in mats.items():
            if not matrix or not matrix[0]:
                continue
            key = (i, j + qs)
            block = diff.setdefault(key, {})
            for r, row in enumerate(matrix):
                (_, rpos) = pos_of[(tgt, z2, j + 1, r)]
                for c, val in enumerate(row):
                    if val:
                        (_, cpos) = pos_of[(src, z2, j, c)]
                        block[(rpos, cpos)] = block.get((rpos, cpos), 0) + sign * val
    return slots, diff


def _homology_of_complex(slots: dict, diff: dict) -> dict:
    """dims[(i, j)] of the cohomology of the assembled complex."""
    ranks: dict = {}
    for key, block in diff.items():
        i, j = key
        cols: dict = {}
        for (r, c), v in block.items():
            if v:
                cols.setdefault(c, {})[r] = Fraction(v)
        ech = Echelon()
        rank = 0
        for c in sorted(cols):
            if ech.add(cols[c], c) is None:
                rank += 1
        ranks[key] = rank
    dims = {}
    for (i, j), lst in slots.items():
        d = len(lst) - ranks.get((i, j), 0) - ranks.get((i - 1, j), 0)
        if d < 0:
            raise ArithmeticError("negative homology dimension; d^2 != 0?")
        if d:
            dims[(i, j)] = d
    return dims


def _check_d_squared(slots: dict, diff: dict):
    for (i, j), block in diff.items():
        nxt = diff.get((i + 1, j))
        if not nxt:
            continue
        prod: dict = {}
        for (r2, c2), v2 in nxt.items():
            for (r1, c1), v1 in block.items():
                if c2 == r1:
                    prod[(r2, c1)] = prod.get((r2, c1), 0) + v2 * v1
        if any(v for v in prod.values()):
            raise ArithmeticError("cube differential does not square to zero")


def kr_homology(diagram: LinkDiagram, n: int) -> HomologyTable:
    """The bigraded homology table of a link diagram at level n."""
    cube = ResolutionCube(diagram, n)
    state_data = {eps: _state_data(cube, eps) for eps in cube.states}
    parities = {d.p for d in state_data.values() if d.classes}
    if len(parities) > 1:
        raise ArithmeticError("states disagree on the Z2-parity")
    slots, diff = _complex_dims_and_maps(cube, state_data)
    _check_d_squared(slots, diff)
    dims = _homology_of_complex(slots, diff)
    parity = diagram.n_components() % 2
    if parities and (parities.pop() + diagram.n_crossings()) % 2 != parity:
        raise ArithmeticError("state parity does not normalize to the component count")
    return HomologyTable(n, parity, dims)


def reduced_kr_homology(diagram: LinkDiagram, n: int, component: int = 0) -> HomologyTable:
    """Homology after killing the action of one component's mark.

    Per state the basis is replaced by a basis of the quotient by the image
    of multiplication by the chosen mark; the induced differentials descend
    because multiplication by a mark commutes with everything.  A global
    q-shift of n-1 places the reduced unknot in degree 0.
    """
    comps = diagram.components()
    if diagram.n_crossings() == 0:
        if diagram.free_loops < 1:
            raise InvalidDiagram("no component to reduce")
        return HomologyTable(n, diagram.n_components() % 2, {(0, 0): 1})
    if not 0 <= component < len(comps):
        raise InvalidDiagram("no such component")
    mark = min(diagram.edge_marks[comps[component][0]])
    cube = ResolutionCube(diagram, n)
    state_data = {eps: _state_data(cube, eps) for eps in cube.states}
    quotients = {eps: _quotient_classes(d, mark) for eps, d in state_data.items()}
    slots, diff = _reduced_complex(cube, state_data, quotients)
    _check_d_squared(slots, diff)
    dims = _homology_of_complex(slots, diff)
    shifted = {(i, j + n - 1): d for (i, j), d in dims.items()}
    return HomologyTable(n, diagram.n_components() % 2, shifted)


def _quotient_classes(data: _StateData, mark: int):
    """Per (z2, j): (kept-class indices, reducer) presenting H/(x*H).

    The reducer rewrites any class vector (in basis coordinates) into the
    kept representatives modulo the image of multiplication by the mark."""
    psi = data.red.substitution()
    image = psi.get(mark, Polynomial.variable(mark))
    out = {}
    for (z2, j), reps in sorted(data.classes.items()):
        ech = Echelon()
        src = data.classes.get((z2, j - 2), [])
        for idx, rep in enumerate(src):
            vec = {m: image * p for m, p in rep.items()}
            coords = data.analyzer.express(vec, z2, j)
            col = {i: v for i, v in enumerate(coords) if v}
            ech.add(col, ("im", idx))
        kept = []
        for r in range(len(reps)):
            if ech.add({r: Fraction(1)}, ("h", r)) is None:
                kept.append(r)
        out[(z2, j)] = (kept, ech)
    return out


def _reduced_complex(cube, state_data, quotients):
    slots: dict = {}
    pos_of: dict = {}
    for eps, data in state_data.items():
        i = cube.i_degree(eps)
        qs = cube.q_shift(eps)
        for (z2, j), (kept, _) in sorted(quotients[eps].items()):
            key = (i, j + qs)
            lst = slots.setdefault(key, [])
            for r in kept:
                pos_of[(eps, z2, j, r)] = (key, len(lst))
                lst.append((eps, (z2, j), r))
    diff: dict = {}
    for src, tgt, site, sign in cube.edges():
        positive = cube.diagram.crossings[site].sign > 0
        mats = _edge_matrices(cube, state_data[src], state_data[tgt], site, positive)
        i = cube.i_degree(src)
        qs = cube.q_shift(src)
        for (z2, j), matrix in mats.items():
            tkey = (z2, j + 1)
            tq = quotients[tgt].get(tkey)
            sq = quotients[src].get((z2, j))
            if tq is None or sq is None or not matrix:
                continue
            kept_t, ech_t = tq
            kept_s, _ = sq
            key = (i, j + qs)
            block = diff.setdefault(key, {})
            for c in kept_s:
                col = {r: matrix[r][c] for r in range(len(matrix)) if matrix[r][c]}
                combo, res = ech_t.reduce(col)
                if res:
                    raise ArithmeticError("quotient reduction left a residual")
                (_, cpos) = pos_of[(src, z2, j, c)]
                for g, v in combo.items():
                    if g[0] != "h":
                        continue
                    (_, rpos) = pos_of[(tgt, z2, j + 1, g[1])]
                    if v:
                        block[(rpos, cpos)] = block.get((rpos, cpos), 0) + sign * v
    return slots, diff
