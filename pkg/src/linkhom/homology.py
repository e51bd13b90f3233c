"""Cohomology of 2-periodic complexes of graded modules, with explicit bases.

A factorization with zero potential is a 2-periodic complex; each piece of
fixed (Z2-degree, internal degree) is a finite-dimensional Q-vector space
spanned by generator x monomial pairs, and the differential raises the
internal degree by n+1.  Cohomology is computed piecewise by exact rational
elimination; the representatives and the spans needed to reduce modulo
coboundaries are kept, so morphisms can be evaluated on classes later.

The degree window is a correctness contract: all cohomology lies inside it.
The lower end is the smallest generator degree.  For the upper end we use
that multiplication by any row entry is null-homotopic, so cohomology is a
quotient of C/IC with I the ideal of all row entries; the graded dimension
of R/I (computed degreewise until it vanishes) plus the largest generator
degree bounds the top.  When the originating graph's edge count is known,
n * edges is intersected in as well.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import Echelon, kernel_vectors
from .mf import KoszulFactorization, Morphism
from .poly import Polynomial, graded_monomials

Vec = dict  # mask -> Polynomial


class PotentialNonzero(ValueError):
    pass


class AmbientMismatch(ValueError):
    pass


class ImageNotCocycle(ArithmeticError):
    pass


class UnknownVariable(KeyError):
    pass


class GdimPoly:
    """Laurent polynomial in q and s with s^2 = 1; dict (s_exp, q_exp) -> int."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @staticmethod
    def term(z2: int, j: int, c: int = 1) -> "GdimPoly":
        return GdimPoly({(z2 % 2, j): c})

    @staticmethod
    def one() -> "GdimPoly":
        return GdimPoly({(0, 0): 1})

    def __add__(self, other: "GdimPoly") -> "GdimPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return GdimPoly(out)

    def __mul__(self, other: "GdimPoly") -> "GdimPoly":
        out: dict = {}
        for (s1, j1), c1 in self.terms.items():
            for (s2, j2), c2 in other.terms.items():
                k = ((s1 + s2) % 2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return GdimPoly(out)

    def scale(self, c: int) -> "GdimPoly":
        return GdimPoly({k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, GdimPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def total(self) -> int:
        """Dimension: the q = s = 1 specialization."""
        return sum(self.terms.values())

    def q_support(self):
        return sorted({j for _, j in self.terms})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (s, j), c in sorted(self.terms.items()):
            t = []
            if c != 1:
                t.append(str(c))
            if s:
                t.append("s")
            if j:
                t.append("q^%d" % j)
            parts.append("*".join(t) or "1")
        return " + ".join(parts)


def q_int(n: int) -> GdimPoly:
    """The quantum integer [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}."""
    return GdimPoly({(0, j): 1 for j in range(1 - n, n, 2)})


class _Analyzer:
    """Piecewise linear algebra for one potential-zero factorization."""

    def __init__(self, K: KoszulFactorization):
        self.K = K
        self._pieces: dict = {}
        self._solved: dict = {}

    def piece(self, z2: int, j: int):
        """Coordinates (mask, monomial) of the graded piece, with index map."""
        key = (z2 % 2, j)
        got = self._pieces.get(key)
        if got is not None:
            return got
        K = self.K
        coords = []
        for mask in range(1 << len(K.rows)):
            if K.gen_z2(mask) != key[0]:
                continue
            d = j - K.gen_degree(mask)
            if d < 0 or d % 2:
                continue
            for mono in graded_monomials(K.variables, d):
                coords.append((mask, mono))
        index = {c: i for i, c in enumerate(coords)}
        self._pieces[key] = (coords, index)
        return self._pieces[key]

    def vector_coords(self, vec: Vec, z2: int, j: int) -> dict:
        """Sparse coordinates of a homogeneous vector in the piece basis."""
        _, index = self.piece(z2, j)
        out = {}
        for mask, p in vec.items():
            for mono, c in p.terms.items():
                idx = index.get((mask, mono))
                if idx is None:
                    raise ValueError("vector does not lie in piece (%d, %d)" % (z2, j))
                out[idx] = c
        return out

    def coords_vector(self, coords: dict, z2: int, j: int) -> Vec:
        basis, _ = self.piece(z2, j)
        out: Vec = {}
        for idx, c in coords.items():
            mask, mono = basis[idx]
            p = out.get(mask, Polynomial.zero())
            out[mask] = p + Polynomial({mono: c})
        return out

    def _d_column(self, mask, mono, z2, j):
        img = self.K.apply_d({mask: Polynomial({mono: Fraction(1)})})
        return self.vector_coords(img, z2 + 1, j + self.K.n + 1)

    def solve_piece(self, z2: int, j: int):
        """Cohomology data at (z2, j): (representatives, echelon, n_image).

        The echelon holds the image of the incoming differential first and
        the chosen representatives after, so reducing any cocycle against it
        expresses the class in the representative basis.
        """
        key = (z2 % 2, j)
        got = self._solved.get(key)
        if got is not None:
            return got
        K = self.K
        npl = K.n + 1
        coords, _ = self.piece(*key)
        cols = []
        for i, (mask, mono) in enumerate(coords):
            cols.append((i, self._d_column(mask, mono, key[0], j)))
        kernels = kernel_vectors(cols)
        ech = Echelon()
        n_image = 0
        # image of the incoming differential
        src_coords, _ = self.piece(key[0] + 1, j - npl)
        for i, (mask, mono) in enumerate(src_coords):
            col = self._d_column(mask, mono, key[0] + 1, j - npl)
            if ech.add(col, ("im", i)) is None:
                n_image += 1
        reps = []
        for kv in kernels:
            if ech.add(kv, ("h", len(reps))) is None:
                reps.append(kv)
        self._solved[key] = (reps, ech, n_image)
        return self._solved[key]

    def express(self, vec: Vec, z2: int, j: int):
        """Coordinates of a cocycle's class in the representative basis."""
        reps, ech, _ = self.solve_piece(z2, j)
        if self.K.apply_d(vec):
            raise ImageNotCocycle("vector is not a cocycle")
        combo, res = ech.reduce(self.vector_coords(vec, z2, j))
        if res:
            raise ImageNotCocycle("cocycle not in computed span; window too small?")
        out = [Fraction(0)] * len(reps)
        for g, c in combo.items():
            if g[0] == "h":
                out[g[1]] = c
        return out


class GradedBasis:
    """Explicit cocycle bases of H(K), indexed by (Z2-degree, q-degree)."""

    def __init__(self, ambient: KoszulFactorization, analyzer: "_Analyzer", window):
        self.ambient = ambient
        self._an = analyzer
        self.window = window
        self.classes: dict = {}

    def dims(self) -> dict:
        return {k: len(v) for k, v in self.classes.items() if v}

    def gdim(self) -> GdimPoly:
        return GdimPoly({k: len(v) for k, v in self.classes.items() if v})

    def representatives(self, z2: int, j: int):
        return self.classes.get((z2 % 2, j), [])

    def express(self, vec: Vec, z2: int, j: int):
        """Class of a cocycle in this basis; computes the slot on demand."""
        key = (z2 % 2, j)
        if key not in self.classes:
            reps, _, _ = self._an.solve_piece(*key)
            self.classes[key] = [self._an.coords_vector(r, *key) for r in reps]
        return self._an.express(vec, *key)


def degree_window(K: KoszulFactorization, edge_count=None):
    """(j_min, j_max) containing all cohomology of a potential-zero K."""
    if not K.potential().is_zero():
        raise PotentialNonzero("degree_window needs zero potential")
    nmask = 1 << len(K.rows)
    degs = [K.gen_degree(m) for m in range(nmask)]
    j_min, g_max = min(degs), max(degs)
    gens = [p for a, b, _ in K.rows for p in (a, b) if not p.is_zero()]
    variables = sorted(K.variables)
    if not variables:
        return (j_min, g_max)
    top = _socle_bound(gens, variables, K.n)
    j_max = g_max + top
    if edge_count is not None:
        j_max = min(j_max, K.n * edge_count)
    return (j_min, max(j_min, j_max))


def _socle_bound(gens, variables, n) -> int:
    """Top degree of R/(gens), found degreewise; raises if it fails to vanish."""
    cap = 2 * n * (len(variables) + 1) + 2 * sum(g.homogeneous_degree() for g in gens) + 4
    d = 0
    top = -2
    while d <= cap:
        monos = graded_monomials(variables, d)
        index = {m: i for i, m in enumerate(monos)}
        ech = Echelon()
        rank = 0
        for g in gens:
            gd = g.homogeneous_degree()
            if gd > d:
                continue
            for m in graded_monomials(variables, d - gd):
                prod = Polynomial({m: Fraction(1)}) * g
                col = {index[mm]: c for mm, c in prod.terms.items()}
                if ech.add(col, rank) is None:
                    rank += 1
        if rank == len(monos):
            return top + 2
        top = d
        d += 2
    raise ArithmeticError("quotient ring never became trivial; graph not closed?")


def cohomology(K: KoszulFactorization, window=None, edge_count=None):
    """(GradedBasis, GdimPoly) of a potential-zero factorization.

    Large factorizations should be reduced (see mf.reduce_greedy) before
    calling this; the computation is per graded piece inside the window.
    """
    if not K.potential().is_zero():
        raise PotentialNonzero("cohomology needs zero potential")
    if window is None:
        window = degree_window(K, edge_count)
    an = _Analyzer(K)
    basis = GradedBasis(K, an, window)
    j_min, j_max = window
    for j in range(j_min, j_max + 1):
        for z2 in (0, 1):
            coords, _ = an.piece(z2, j)
            if not coords:
                continue
            reps, _, _ = an.solve_piece(z2, j)
            if reps:
                basis.classes[(z2, j)] = [an.coords_vector(r, z2, j) for r in reps]
    return basis, basis.gdim()


def induced_map(phi: Morphism, h_src: GradedBasis, h_tgt: GradedBasis) -> dict:
    """Matrices of the map induced on cohomology, indexed by (z2, j).

    Entry [(z2, j)] is a rows-by-columns rational matrix sending the source
    basis at (z2, j) to the target basis at (z2 + deg phi, j + q-degree).
    """
    if h_src.ambient is not phi.source:
        raise AmbientMismatch("source basis does not live on the morphism's source")
    if h_tgt.ambient is not phi.target:
        raise AmbientMismatch("target basis does not live on the morphism's target")
    out = {}
    for (z2, j), reps in sorted(h_src.classes.items()):
        if not reps:
            continue
        tz2, tj = (z2 + phi.z2_degree) % 2, j + phi.q_degree
        cols = []
        for rep in reps:
            img = phi.apply(rep)
            cols.append(h_tgt.express(img, tz2, tj))
        tdim = len(h_tgt.classes.get((tz2, tj), []))
        matrix = [[cols[c][r] for c in range(len(cols))] for r in range(tdim)]
        out[(z2, j)] = matrix
    return out


def mult_endomorphism(K: KoszulFactorization, var: int) -> Morphism:
    """The multiplication-by-x_var endomorphism (Z2-degree 0, q-degree 2)."""
    if var not in K.variables:
        raise UnknownVariable(var)
    return Morphism.multiplication(K, Polynomial.variable(var))
