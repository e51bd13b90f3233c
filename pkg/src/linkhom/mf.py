"""Graded Koszul factorizations and their reductions.

A factorization is a list of rows (a_k, b_k) of homogeneous polynomials
with deg a_k + deg b_k = 2(n+1), together with a q-shift and a Z2-shift.
The underlying module has one free generator e_J per subset J of rows;
e_J has internal degree  q_shift + sum_{k in J} (n+1 - deg a_k)  and
Z2-degree |J| + z2_shift.  The differential acts by

    d(e_J) = sum_{k not in J} s(k,J) a_k e_{J+k}
           + sum_{k in J}     s(k,J) b_k e_{J-k},

with s(k, J) = (-1)^{#{j in J : j > k}}, and satisfies d^2 = potential.
Subsets are bitmasks; vectors are dicts mask -> Polynomial.

Two operations remove a row while preserving cohomology:

* exclusion through a b-entry that is linear in some variable (quotient by
  the relation b = 0, substituting the variable away), and
* exclusion through a linear a-entry, which is the same after swapping the
  row; the swap costs a Z2-shift and a q-shift of n+1 - deg(a).

A Reduction records a sequence of such steps.  It can push vectors down to
the reduced model (a chain map) and lift cocycles back up: the lift of v is
sigma(v) - h(d sigma(v)) where sigma reinserts generators untouched and h
divides by the removed entry; this is exact, not approximate, and is what
lets induced maps be computed without ever solving in the big ambient ring.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Polynomial, graded_monomials

P0 = Polynomial.zero()


class LevelMismatch(ValueError):
    pass


class DegreeViolation(ValueError):
    pass


class NotExcludable(ValueError):
    pass


def _sgn(k: int, mask: int) -> int:
    """(-1)^{number of rows in mask above k}."""
    return -1 if bin(mask >> (k + 1)).count("1") % 2 else 1


def _drop_bit(mask: int, r: int) -> int:
    return (mask & ((1 << r) - 1)) | ((mask >> (r + 1)) << r)


def _insert_bit(mask: int, r: int, value: int) -> int:
    low = mask & ((1 << r) - 1)
    return low | (value << r) | ((mask >> r) << (r + 1))


class KoszulFactorization:
    __slots__ = ("n", "rows", "q_shift", "z2_shift", "variables")

    def __init__(self, n, rows, q_shift=0, z2_shift=0, variables=None):
        self.n = n
        rows = tuple(rows)
        for a, b, adeg in rows:
            for p, d in ((a, adeg), (b, 2 * (n + 1) - adeg)):
                if not p.is_zero() and (not p.is_homogeneous() or p.homogeneous_degree() != d):
                    raise DegreeViolation("row entry %r is not homogeneous of degree %d" % (p, d))
        self.rows = rows
        self.q_shift = q_shift
        self.z2_shift = z2_shift % 2
        if variables is None:
            variables = set()
            for a, b, _ in rows:
                variables |= a.variables() | b.variables()
        self.variables = frozenset(variables)

    # -- structure ---------------------------------------------------------

    def nrows(self) -> int:
        return len(self.rows)

    def gen_degree(self, mask: int) -> int:
        d = self.q_shift
        for k in range(len(self.rows)):
            if mask >> k & 1:
                d += self.n + 1 - self.rows[k][2]
        return d

    def gen_z2(self, mask: int) -> int:
        return (bin(mask).count("1") + self.z2_shift) % 2

    def potential(self) -> Polynomial:
        w = P0
        for a, b, _ in self.rows:
            w = w + a * b
        return w

    def __repr__(self):
        return "KoszulFactorization(n=%d, %d rows, vars=%s, q=%d, z2=%d)" % (
            self.n,
            len(self.rows),
            sorted(self.variables),
            self.q_shift,
            self.z2_shift,
        )

    # -- differential --------------------------------------------------------

    def apply_d(self, vec: dict) -> dict:
        out: dict = {}
        for mask, p in vec.items():
            if p.is_zero():
                continue
            for k, (a, b, _) in enumerate(self.rows):
                coeff = b if mask >> k & 1 else a
                if coeff.is_zero():
                    continue
                t = mask ^ (1 << k)
                term = coeff * p
                if _sgn(k, mask) < 0:
                    term = -term
                cur = out.get(t)
                out[t] = term if cur is None else cur + term
        return {m: p for m, p in out.items() if not p.is_zero()}

    def d_matrix_check(self) -> bool:
        """d^2 == potential * Id on every generator (small factorizations)."""
        w = self.potential()
        for mask in range(1 << len(self.rows)):
            dd = self.apply_d(self.apply_d({mask: Polynomial.one()}))
            expect = {} if w.is_zero() else {mask: w}
            if dd != expect:
                return False
        return True

    # -- constructions ---------------------------------------------------------

    def tensor(self, other: "KoszulFactorization") -> "KoszulFactorization":
        if self.n != other.n:
            raise LevelMismatch("levels %d and %d" % (self.n, other.n))
        return KoszulFactorization(
            self.n,
            self.rows + other.rows,
            self.q_shift + other.q_shift,
            self.z2_shift + other.z2_shift,
            self.variables | other.variables,
        )

    def shift(self, dq: int, dz2: int = 0) -> "KoszulFactorization":
        return KoszulFactorization(
            self.n, self.rows, self.q_shift + dq, self.z2_shift + dz2, self.variables
        )

    def fiber(self, kill) -> "KoszulFactorization":
        """Set the listed variables to zero in every row entry."""
        sub = {v: P0 for v in kill}
        rows = [(a.substitute(sub), b.substitute(sub), adeg) for a, b, adeg in self.rows]
        return KoszulFactorization(
            self.n, rows, self.q_shift, self.z2_shift, self.variables - set(kill)
        )

    def row_transform(self, i: int, j: int, lam: Polynomial) -> "KoszulFactorization":
        """a_i += lam * a_j and b_j -= lam * b_i; potential is unchanged."""
        if i == j:
            raise DegreeViolation("row_transform needs distinct rows")
        want = self.rows[i][2] - self.rows[j][2]
        if not lam.is_zero() and (not lam.is_homogeneous() or lam.homogeneous_degree() != want):
            raise DegreeViolation("lambda must be homogeneous of degree %d" % want)
        rows = list(self.rows)
        ai, bi, di = rows[i]
        aj, bj, dj = rows[j]
        rows[i] = (ai + lam * aj, bi, di)
        rows[j] = (aj, bj - lam * bi, dj)
        return KoszulFactorization(self.n, rows, self.q_shift, self.z2_shift, self.variables)

    def swap_row(self, r: int) -> "KoszulFactorization":
        """Exchange a_r and b_r; costs <1> and {n+1-deg a_r}."""
        rows = list(self.rows)
        a, b, adeg = rows[r]
        rows[r] = (b, a, 2 * (self.n + 1) - adeg)
        return KoszulFactorization(
            self.n,
            rows,
            self.q_shift + (self.n + 1 - adeg),
            self.z2_shift + 1,
            self.variables,
        )

    def _pivot(self, entry: Polynomial, var=None):
        """(var, lam, psi_image) for a linear entry lam*var + c, or None."""
        form = entry.linear_form()
        if not form:
            return None
        if var is None:
            var = max(form)
        lam = form.get(var)
        if not lam:
            return None
        rest = Polynomial({m: c for m, c in entry.terms.items() if m != ((var, 1),)})
        return var, lam, rest.scale(Fraction(-1) / lam)

    def exclude_variable(self, i: int, var=None, side: str = "b"):
        """Remove row i using its linear b-entry (or a-entry) and substitute.

        Returns (reduced factorization, psi) where psi maps the eliminated
        variable to its image; cohomology and its grading are preserved.
        """
        a, b, adeg = self.rows[i]
        entry = b if side == "b" else a
        piv = self._pivot(entry, var)
        if piv is None:
            raise NotExcludable("row %d has no linear %s-entry pivot" % (i, side))
        v, _, img = piv
        psi = {v: img}
        rows = [
            (p.substitute(psi), q.substitute(psi), d)
            for k, (p, q, d) in enumerate(self.rows)
            if k != i
        ]
        dq, dz2 = (0, 0) if side == "b" else (self.n + 1 - adeg, 1)
        out = KoszulFactorization(
            self.n, rows, self.q_shift + dq, self.z2_shift + dz2, self.variables - {v}
        )
        return out, psi


class _Step:
    __slots__ = ("kind", "row", "var", "psi", "before", "divisor")

    def __init__(self, kind, row, var, psi, before, divisor):
        self.kind = kind        # 'b' or 'a'
        self.row = row          # row index in `before`
        self.var = var
        self.psi = psi          # {var: Polynomial}
        self.before = before    # model before this step
        self.divisor = divisor  # the linear entry used, for the lift's division


class Reduction:
    """A composable sequence of row exclusions with push and lift maps."""

    def __init__(self, source: KoszulFactorization):
        self.source = source
        self.steps: list = []
        self.model = source

    def exclude(self, row: int, side: str, var=None) -> bool:
        """Try one exclusion on the current model; True on success."""
        K = self.model
        a, b, adeg = K.rows[row]
        entry = b if side == "b" else a
        piv = K._pivot(entry, var)
        if piv is None:
            return False
        reduced, psi = K.exclude_variable(row, piv[0], side)
        self.steps.append(_Step(side, row, piv[0], psi, K, entry))
        self.model = reduced
        return True

    def substitution(self) -> dict:
        """Composite psi on the source variables (identity entries omitted)."""
        out: dict = {}
        for step in self.steps:
            for v in list(out):
                out[v] = out[v].substitute(step.psi)
            out.update(step.psi)
        return out

    # -- push: source -> model (a chain map) --------------------------------

    def push(self, vec: dict) -> dict:
        for step in self.steps:
            vec = self._push_step(step, vec)
        return vec

    @staticmethod
    def _push_step(step: _Step, vec: dict) -> dict:
        r = step.row
        out: dict = {}
        for mask, p in vec.items():
            has = mask >> r & 1
            if step.kind == "b":
                if has:
                    continue
                t, q = _drop_bit(mask, r), p.substitute(step.psi)
            else:
                if not has:
                    continue
                q = p.substitute(step.psi)
                if bin(mask & ((1 << r) - 1)).count("1") % 2:
                    q = -q
                t = _drop_bit(mask, r)
            if q.is_zero():
                continue
            cur = out.get(t)
            out[t] = q if cur is None else cur + q
        return {m: p for m, p in out.items() if not p.is_zero()}

    # -- lift: cocycles of the model -> cocycles of the source ----------------

    def lift(self, vec: dict, check: bool = True) -> dict:
        for step in reversed(self.steps):
            vec = self._lift_step(step, vec)
        if check:
            if self.source.apply_d(vec):
                raise ArithmeticError("lift failed to produce a cocycle")
        return vec

    @staticmethod
    def _lift_step(step: _Step, vec: dict) -> dict:
        r = step.row
        if step.kind == "b":
            u = {_insert_bit(m, r, 0): p for m, p in vec.items()}
        else:
            u = {}
            for m, p in vec.items():
                if bin(m & ((1 << r) - 1)).count("1") % 2:
                    p = -p
                u[_insert_bit(m, r, 1)] = p
        resid = step.before.apply_d(u)
        if not resid:
            return u
        corr: dict = {}
        for mask, p in resid.items():
            has = mask >> r & 1
            if (step.kind == "b") == bool(has):
                continue
            q = p.exact_divide(step.divisor)
            if _sgn(r, mask) < 0:
                q = -q
            t = mask ^ (1 << r)
            cur = corr.get(t)
            corr[t] = q if cur is None else cur + q
        out = dict(u)
        for m, q in corr.items():
            cur = out.get(m, P0) - q
            if cur.is_zero():
                out.pop(m, None)
            else:
                out[m] = cur
        return {m: p for m, p in out.items() if not p.is_zero()}


def reduce_greedy(K: KoszulFactorization, allow_a_side: bool = True) -> Reduction:
    """Exclude rows greedily, in row order, until nothing is eliminable.

    The b-side is preferred; the a-side (with its shifts) is used when the
    a-entry is the linear one, which happens for the second wide-edge row
    at n = 2 and for arc rows at n = 1.
    """
    red = Reduction(K)
    progress = True
    while progress:
        progress = False
        for r in range(len(red.model.rows)):
            if red.exclude(r, "b"):
                progress = True
                break
            if allow_a_side and red.exclude(r, "a"):
                progress = True
                break
    return red


class Morphism:
    """A map of factorizations given on generators.

    entries[mask] is a list of (target_mask, coefficient) pairs; the map has
    a Z2-degree (0 or 1) and an internal q-degree.  A chain map satisfies
    d_target o F = (-1)^{z2_degree} F o d_source.
    """

    __slots__ = ("source", "target", "z2_degree", "q_degree", "entries")

    def __init__(self, source, target, z2_degree, q_degree, entries):
        self.source = source
        self.target = target
        self.z2_degree = z2_degree % 2
        self.q_degree = q_degree
        self.entries = entries

    @staticmethod
    def identity(K: KoszulFactorization) -> "Morphism":
        ent = {m: ((m, Polynomial.one()),) for m in range(1 << len(K.rows))}
        return Morphism(K, K, 0, 0, ent)

    @staticmethod
    def multiplication(K: KoszulFactorization, p: Polynomial) -> "Morphism":
        deg = 0 if p.is_zero() else p.homogeneous_degree()
        ent = {m: ((m, p),) for m in range(1 << len(K.rows))}
        return Morphism(K, K, 0, deg, ent)

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for mask, p in vec.items():
            for t, c in self.entries.get(mask, ()):
                term = c * p
                if term.is_zero():
                    continue
                cur = out.get(t)
                out[t] = term if cur is None else cur + term
        return {m: p for m, p in out.items() if not p.is_zero()}

    def is_chain_map(self) -> bool:
        sign = -1 if self.z2_degree else 1
        for mask in range(1 << len(self.source.rows)):
            e = {mask: Polynomial.one()}
            lhs = self.target.apply_d(self.apply(e))
            rhs = self.apply(self.source.apply_d(e))
            if sign < 0:
                rhs = {m: -p for m, p in rhs.items()}
            if lhs != rhs:
                return False
        return True

    def compose(self, inner: "Morphism") -> "Morphism":
        """self o inner."""
        ent = {}
        for mask in range(1 << len(inner.source.rows)):
            img = self.apply(inner.apply({mask: Polynomial.one()}))
            if img:
                ent[mask] = tuple(sorted(img.items(), key=lambda t: t[0]))
        return Morphism(
            inner.source,
            self.target,
            self.z2_degree + inner.z2_degree,
            self.q_degree + inner.q_degree,
            ent,
        )

    def __add__(self, other: "Morphism") -> "Morphism":
        ent = {}
        for mask in set(self.entries) | set(other.entries):
            img: dict = {}
            for t, c in self.entries.get(mask, ()) + other.entries.get(mask, ()):
                cur = img.get(t)
                img[t] = c if cur is None else cur + c
            img = {t: c for t, c in img.items() if not c.is_zero()}
            if img:
                ent[mask] = tuple(sorted(img.items(), key=lambda t: t[0]))
        return Morphism(self.source, self.target, self.z2_degree, self.q_degree, ent)

    def substituted(self, psi: dict, source=None, target=None) -> "Morphism":
        ent = {}
        for mask, pairs in self.entries.items():
            img = tuple((t, c.substitute(psi)) for t, c in pairs)
            img = tuple((t, c) for t, c in img if not c.is_zero())
            if img:
                ent[mask] = img
        return Morphism(source or self.source, target or self.target, self.z2_degree, self.q_degree, ent)


def homotopy_perturbation(phi: Morphism, h_entries: dict) -> Morphism:
    """phi + d o h + h o d, for h given on generators with phi's shape.

    h must have Z2-degree opposite to phi and q-degree q(phi) - (n+1); the
    result is chain-homotopic to phi and induces the same map on cohomology.
    """
    h = Morphism(phi.source, phi.target, phi.z2_degree + 1, phi.q_degree - (phi.source.n + 1), h_entries)
    ent: dict = {}
    for mask in range(1 << len(phi.source.rows)):
        e = {mask: Polynomial.one()}
        img: dict = {}
        for part in (
            phi.apply(e),
            phi.target.apply_d(h.apply(e)),
            h.apply(phi.source.apply_d(e)),
        ):
            for t, c in part.items():
                cur = img.get(t)
                img[t] = c if cur is None else cur + c
        img = {t: c for t, c in img.items() if not c.is_zero()}
        if img:
            ent[mask] = tuple(sorted(img.items(), key=lambda t: t[0]))
    return Morphism(phi.source, phi.target, phi.z2_degree, phi.q_degree, ent)
