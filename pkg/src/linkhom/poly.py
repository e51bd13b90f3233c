"""Sparse multivariate polynomials over Q, with every variable in degree 2.

Variables are opaque integer ids (marks of a diagram).  A monomial is a
sorted tuple of (variable, exponent) pairs; a polynomial maps monomials to
nonzero rational coefficients.  The grading gives each variable degree 2,
so a monomial with exponent sum k has degree 2k.

Besides arithmetic, this module provides the closed-form polynomial
families used by the factorization layer:

* ``pi(i, j, n)``      -- the quotient (x_i^{n+1} - x_j^{n+1})/(x_i - x_j),
* ``g_poly(n, ...)``   -- the two-variable polynomial with
  g(x+y, xy) = x^{n+1} + y^{n+1},
* ``wide_edge_polys``  -- the pair (u1, u2) splitting the wide-edge
  potential along (x1+x2-x3-x4, x1x2-x3x4),
* ``sym3_power_sum``   -- x^{n+1}+y^{n+1}+z^{n+1} in elementary symmetric
  coordinates, used by the three-row factorization of labelled-3 edges.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

Mono = tuple  # tuple[(var, exp), ...], sorted by var, exps > 0

_ONE_MONO: Mono = ()


class NotDivisible(ArithmeticError):
    """Raised by exact_divide when the divisor does not divide exactly."""


class InhomogeneousBinding(ValueError):
    """Raised by substitute when a binding is not homogeneous of degree 2."""


def _mono_mul(m1: Mono, m2: Mono) -> Mono:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_deg(m: Mono) -> int:
    return 2 * sum(e for _, e in m)


class Polynomial:
    """Immutable-by-convention sparse polynomial with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {} if terms is None else terms

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial()

    @staticmethod
    def constant(c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial({_ONE_MONO: c}) if c else Polynomial()

    @staticmethod
    def variable(v: int) -> "Polynomial":
        return Polynomial({((v, 1),): Fraction(1)})

    @staticmethod
    def one() -> "Polynomial":
        return Polynomial.constant(1)

    # -- predicates and views -------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == _ONE_MONO for m in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get(_ONE_MONO, Fraction(0))

    def variables(self) -> set:
        out = set()
        for m in self.terms:
            for v, _ in m:
                out.add(v)
        return out

    def degree(self) -> int:
        """Maximal degree of a term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(_mono_deg(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {_mono_deg(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self) -> int:
        """Degree of a nonzero homogeneous polynomial."""
        degs = {_mono_deg(m) for m in self.terms}
        if len(degs) != 1:
            raise ValueError("polynomial is zero or not homogeneous: %r" % self)
        return degs.pop()

    def linear_form(self) -> dict | None:
        """As a degree-2 form sum(c_v * x_v), or None if not of that shape."""
        coeffs = {}
        for m, c in self.terms.items():
            if len(m) != 1 or m[0][1] != 1:
                return None
            coeffs[m[0][0]] = c
        return coeffs

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if not self.terms or not other.terms:
            return Polynomial()
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                if s is None:
                    out[m] = c
                else:
                    s = s + c
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return Polynomial(out)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial()
        return Polynomial({m: c * v for m, v in self.terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- substitution and division ----------------------------------------

    def substitute(self, bindings: dict, check: bool = False) -> "Polynomial":
        """Apply the ring homomorphism sending each bound variable to its image.

        Unbound variables map to themselves.  When ``check`` is set, every
        image must be zero or homogeneous of degree 2 (a sum of variables is
        the typical case); otherwise InhomogeneousBinding is raised.
        """
        if check:
            for img in bindings.values():
                if not img.is_zero() and (
                    not img.is_homogeneous() or img.homogeneous_degree() != 2
                ):
                    raise InhomogeneousBinding(repr(img))
        if not bindings:
            return self
        out = Polynomial()
        cache: dict = {}
        for m, c in self.terms.items():
            term = Polynomial.constant(c)
            for v, e in m:
                img = bindings.get(v)
                if img is None:
                    term = term * Polynomial({((v, e),): Fraction(1)})
                else:
                    key = (v, e)
                    p = cache.get(key)
                    if p is None:
                        p = img**e
                        cache[key] = p
                    term = term * p
            out = out + term
        return out

    def _lead(self, varlist: list) -> tuple:
        """Leading (mono, coeff) under graded lex with smaller var id major."""
        best = None
        best_key = None
        for m, c in self.terms.items():
            exps = dict(m)
            key = (sum(exps.values()), tuple(exps.get(v, 0) for v in varlist))
            if best_key is None or key > best_key:
                best_key = key
                best = (m, c)
        return best

    def exact_divide(self, q: "Polynomial") -> "Polynomial":
        """Return r with self == q * r, or raise NotDivisible."""
        if q.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Polynomial()
        varlist = sorted(self.variables() | q.variables())
        qm, qc = q._lead(varlist)
        qexp = dict(qm)
        rem = self
        quot = Polynomial()
        while not rem.is_zero():
            rm, rc = rem._lead(varlist)
            rexp = dict(rm)
            texp = {}
            for v, e in qexp.items():
                d = rexp.get(v, 0) - e
                if d < 0:
                    raise NotDivisible("%r not divisible by %r" % (self, q))
                if d:
                    texp[v] = d
            for v, e in rexp.items():
                if v not in qexp and e:
                    texp[v] = e
            t = Polynomial({tuple(sorted(texp.items())): rc / qc})
            quot = quot + t
            rem = rem - t * q
        return quot

    # -- display -----------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            factors = []
            if c != 1 or not m:
                factors.append(str(c))
            for v, e in m:
                factors.append("x%s" % v if e == 1 else "x%s^%s" % (v, e))
            parts.append("*".join(factors))
        return " + ".join(parts)


P0 = Polynomial.zero()
P1 = Polynomial.one()


def graded_monomials(variables, degree: int) -> list:
    """All monomials of the given (even, >= 0) degree, graded-lex ordered.

    The order is deterministic: the smallest variable id takes the largest
    exponent first, so for ({x, y}, 4) the list is [x^2, xy, y^2].
    """
    if degree < 0 or degree % 2:
        raise ValueError("degree must be even and non-negative")
    varlist = sorted(variables)
    out = []

    def rec(idx, remaining, acc):
        if idx == len(varlist):
            if remaining == 0:
                out.append(tuple(acc))
            return
        if idx == len(varlist) - 1:
            if remaining:
                acc.append((varlist[idx], remaining))
                out.append(tuple(acc))
                acc.pop()
            else:
                out.append(tuple(acc))
            return
        for e in range(remaining, -1, -1):
            if e:
                acc.append((varlist[idx], e))
                rec(idx + 1, remaining - e, acc)
                acc.pop()
            else:
                rec(idx + 1, remaining, acc)

    total = degree // 2
    if not varlist:
        return [()] if total == 0 else []
    rec(0, total, [])
    return out


def pi(i: int, j: int, n: int) -> Polynomial:
    """sum_{k=0}^{n} x_i^k x_j^{n-k}; equals (n+1) x^n when i == j."""
    if i == j:
        return Polynomial({((i, n),): Fraction(n + 1)}) if n else Polynomial.constant(n + 1)
    terms = {}
    for k in range(n + 1):
        mono = []
        if k:
            mono.append((i, k))
        if n - k:
            mono.append((j, n - k))
        terms[tuple(sorted(mono))] = Fraction(1)
    return Polynomial(terms)


def g_poly(n: int, s1: int, s2: int) -> Polynomial:
    """The polynomial g with g(x+y, xy) = x^{n+1} + y^{n+1}, in vars s1, s2."""
    out = Polynomial({((s1, n + 1),): Fraction(1)})
    i = 1
    while 2 * i <= n + 1:
        c = Fraction((-1) ** i * (n + 1), i) * comb(n - i, i - 1)
        mono = [(s2, i)]
        if n + 1 - 2 * i:
            mono.append((s1, n + 1 - 2 * i))
        out = out + Polynomial({tuple(sorted(mono)): c})
        i += 1
    return out


# Generic variable ids, reserved for template computations that are
# specialized to actual marks by substitution (this is what makes repeated
# marks safe: no division ever happens after specialization).
GX1, GX2, GX3, GX4, GX5, GX6 = -1, -2, -3, -4, -5, -6

_wide_cache: dict = {}


def wide_edge_polys_generic(n: int) -> tuple:
    """(u1, u2, b1, b2) in the generic marks GX1..GX4."""
    got = _wide_cache.get(n)
    if got is not None:
        return got
    x1, x2, x3, x4 = (Polynomial.variable(v) for v in (GX1, GX2, GX3, GX4))
    g = g_poly(n, GX5, GX6)
    g12 = g.substitute({GX5: x1 + x2, GX6: x1 * x2})
    g34_12 = g.substitute({GX5: x3 + x4, GX6: x1 * x2})
    g34 = g.substitute({GX5: x3 + x4, GX6: x3 * x4})
    b1 = x1 + x2 - x3 - x4
    b2 = x1 * x2 - x3 * x4
    u1 = (g12 - g34_12).exact_divide(b1)
    u2 = (g34_12 - g34).exact_divide(b2)
    _wide_cache[n] = (u1, u2, b1, b2)
    return _wide_cache[n]


def wide_edge_polys(n: int, marks) -> tuple:
    """(u1, u2, b1, b2) at the four marks (x1, x2, x3, x4) of a wide edge.

    Marks may repeat; the difference quotients are formed generically and
    specialized afterwards, so no division by zero can occur.
    """
    m1, m2, m3, m4 = marks
    u1, u2, b1, b2 = wide_edge_polys_generic(n)
    sub = {
        GX1: Polynomial.variable(m1),
        GX2: Polynomial.variable(m2),
        GX3: Polynomial.variable(m3),
        GX4: Polynomial.variable(m4),
    }
    return tuple(p.substitute(sub) for p in (u1, u2, b1, b2))


def sym3_power_sum(n: int, s1: int, s2: int, s3: int) -> Polynomial:
    """x^{n+1} + y^{n+1} + z^{n+1} in elementary symmetric coordinates.

    Newton's identity: p_k = s1 p_{k-1} - s2 p_{k-2} + s3 p_{k-3}.
    """
    e1, e2, e3 = (Polynomial.variable(v) for v in (s1, s2, s3))
    p = [Polynomial.constant(3), e1, e1 * e1 - e2.scale(2)]
    for k in range(3, n + 2):
        p.append(e1 * p[k - 1] - e2 * p[k - 2] + e3 * p[k - 3])
    return p[n + 1]
