"""Exact sl(n) link homology from planar diagrams, over the rationals.

The pipeline: a link diagram is resolved into a cube of planar trivalent
graphs; each graph carries a Koszul factorization whose cohomology is a
finite bigraded vector space; the edge maps of the cube induce a complex
of these spaces whose cohomology is the doubly graded link invariant.
An independent polynomial oracle (graph skein calculus and the one-variable
HOMFLY specialization) is used for verification.
"""

from .poly import Polynomial, NotDivisible, InhomogeneousBinding
from .mf import KoszulFactorization, Morphism
from .homology import GdimPoly, cohomology, degree_window
from .graph import MoyGraph, build, standard_graph
from .link import kr_homology, reduced_kr_homology, euler, poincare
from .oracle import LaurentPoly, quantum_int, homfly_specialized, moy_eval, state_sum

__all__ = [
    "Polynomial",
    "NotDivisible",
    "InhomogeneousBinding",
    "KoszulFactorization",
    "Morphism",
    "GdimPoly",
    "cohomology",
    "degree_window",
    "MoyGraph",
    "build",
    "standard_graph",
    "kr_homology",
    "reduced_kr_homology",
    "euler",
    "poincare",
    "LaurentPoly",
    "quantum_int",
    "homfly_specialized",
    "moy_eval",
    "state_sum",
]

__version__ = "0.1.0"
