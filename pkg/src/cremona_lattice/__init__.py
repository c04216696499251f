"""Exact lattice computations for rational 4-manifolds: Cremona moves,
exceptional systems, the iota embedding, (-4)-classes and ball packings."""

from .cremona import (
    CremonaMove,
    Equivalence,
    EquivalenceResult,
    apply_move,
    equivalent,
    is_reduced,
    reduce,
    replay,
)
from .enumeration import (
    ExceptionalSystem,
    Mode,
    census,
    enumerate_exceptional,
    enumerate_exceptional_bounded,
    enumerate_systems,
    normalize_system,
)
from .errors import LatticeError
from .lattice import (
    Basis,
    HomologyClass,
    KMResult,
    Z2Class,
    adjunction_genus,
    canonical_class,
    km_obstruction,
    pair,
    z2_pair,
    z2_reduce,
)
from .notation import format_class, parse_class
from .packing import PackingProblem, Verdict, blowup_class, is_symplectic_class, packing_feasible, rp2_complement_packing
from .surgery import CutProfile, Lagrangian, classify_minus4, cut_betti, iota, iota_inverse, tau_pushoff

__all__ = [name for name in dir() if not name.startswith("_")]
