"""Incremental exact Gaussian elimination over Q, on sparse vectors.

Vectors are dicts mapping coordinate index to a nonzero Fraction.  One
structure covers every use in the package: kernels (a dependent column
yields a null vector), image spans, basis completion modulo a span, and
expressing a vector in a chosen basis.
"""

from __future__ import annotations

from fractions import Fraction


def vec_add(u: dict, v: dict, c=1) -> dict:
    """u + c*v as a new sparse vector."""
    out = dict(u)
    for k, x in v.items():
        s = out.get(k, 0) + c * x
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(v: dict, c) -> dict:
    return {k: c * x for k, x in v.items()} if c else {}


def _pick_pivot(vec: dict):
    """Deterministic pivot: prefer unit entries, then simple fractions."""
    best = None
    best_key = None
    for coord, c in vec.items():
        unit = 0 if c == 1 or c == -1 else 1
        key = (unit, abs(c.numerator) + abs(c.denominator) if isinstance(c, Fraction) else abs(c), coord)
        if best_key is None or key < best_key:
            best_key = key
            best = coord
    return best


class Echelon:
    """A growing echelonized span with combination tracking.

    Each stored vector remembers how it was produced from the generators
    added so far, so `reduce` can express membership exactly.
    """

    def __init__(self):
        self.pivots = {}  # coord -> index into self.rows
        self.rows = []    # list of (vector, combo) with vector[pivot] == 1

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict):
        """Return (combo, residual) with vec == sum(combo[g] * gen_g) + residual.

        The residual has no entries at existing pivot coordinates.
        """
        combo: dict = {}
        res = dict(vec)
        while True:
            hit = None
            for coord in res:
                idx = self.pivots.get(coord)
                if idx is not None:
                    hit = (coord, idx)
                    break
            if hit is None:
                return combo, res
            coord, idx = hit
            row, row_combo = self.rows[idx]
            c = res[coord]
            res = vec_add(res, row, -c)
            for g, x in row_combo.items():
                s = combo.get(g, 0) + c * x
                if s:
                    combo[g] = s
                else:
                    combo.pop(g, None)

    def add(self, vec: dict, key):
        """Insert a generator.  Returns None if it enlarged the span, else the
        combination of earlier generators equal to it."""
        combo, res = self.reduce(vec)
        if not res:
            return combo
        piv = _pick_pivot(res)
        c = res[piv]
        inv = Fraction(1, 1) / c
        row = vec_scale(res, inv)
        row_combo = {key: inv}
        for g, x in combo.items():
            row_combo[g] = -inv * x
        self.pivots[piv] = len(self.rows)
        self.rows.append((row, row_combo))
        return None


def kernel_vectors(columns) -> list:
    """Null-space combinations of an ordered list of (key, column) pairs.

    Returns sparse vectors over the keys: each dependent column yields the
    relation expressing it through earlier ones.
    """
    ech = Echelon()
    out = []
    for key, col in columns:
        dep = ech.add(col, key)
        if dep is not None:
            k = {key: Fraction(1)}
            for g, x in dep.items():
                k[g] = -x
            out.append(k)
    return out
