"""Lattice side of cutting along a Lagrangian and of rational blow-down.

Conventions for the embedding ``iota``: a class of ``MBasis(k)`` is
``aH - t_1 U_1 - t_2 U_2 - t_3 U_3 - sum b_i E_i`` and its image lives in
``CP2Blowup(k + 1)``, whose exceptional generators are read as
``E_0', E_1', ..., E_k'``.  In 1-based storage ``E_j'`` sits at position
``j + 1``.  The image of ``iota`` is the orthogonal complement of
``Z = E_3' - E_0' - E_1' - E_2'`` (see :func:`iota_z_class`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from . import cremona
from .cremona import CremonaMove, Equivalence, MoveSequence
from .enumeration import (
    MAX_FINITE_RANK,
    ExceptionalSystem,
    Mode,
    enumerate_exceptional,
    enumerate_systems,
    scan_classes,
    s_class,
)
from .errors import LatticeError, NotInImage, NotMinus4Sphere, ParityViolation, UnsupportedBasis
from .lattice import (
    CP2_BLOWUP,
    MBASIS,
    SXS,
    Basis,
    HomologyClass,
    canonical_class,
    pair,
    z2_pair,
)

# -- Betti bookkeeping --------------------------------------------------------------


class Lagrangian(enum.Enum):
    SPHERE = "Sphere"
    RP2 = "RP2"


@dataclass(frozen=True)
class CutProfile:
    lagrangian: Lagrangian
    ambient_b2plus: int
    ambient_b2minus: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "lagrangian", Lagrangian(self.lagrangian))
        for v in (self.ambient_b2plus, self.ambient_b2minus):
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise LatticeError(f"Betti numbers must be nonnegative integers, got {v!r}")


def cut_betti(p: CutProfile) -> tuple[int, int]:
    """``(b2+, b2-)`` after cutting; an ``RP^2`` adds one negative class."""
    extra = 1 if p.lagrangian is Lagrangian.RP2 else 0
    return p.ambient_b2plus, p.ambient_b2minus + extra


# -- iota ----------------------------------------------------------------------------


def iota_z_class(k: int) -> HomologyClass:
    """``E_3' - E_0' - E_1' - E_2'`` on ``CP2Blowup(k + 1)``; its complement is the image of ``iota``."""
    if k < 3:
        raise LatticeError("iota needs k >= 3")
    return HomologyClass(Basis.cp2(k + 1), (0, 1, 1, 1, -1) + (0,) * (k - 3))


def iota(alpha: HomologyClass) -> HomologyClass:
    if alpha.basis.kind != MBASIS:
        raise UnsupportedBasis(f"iota takes MBasis classes, got {alpha.basis}")
    if not alpha.is_integral:
        raise LatticeError("iota is defined on integral classes")
    a, t1, t2, t3, *rest = alpha.coeffs
    if (t1 + t2 + t3) % 2:
        raise ParityViolation(f"t_1 + t_2 + t_3 = {t1 + t2 + t3} is odd for {alpha}")
    b = (
        (-t1 + t2 + t3) // 2,
        (t1 - t2 + t3) // 2,
        (t1 + t2 - t3) // 2,
        (t1 + t2 + t3) // 2,
    )
    return HomologyClass(Basis.cp2(alpha.basis.k + 1), (a, *b, *rest))


def iota_inverse(c: HomologyClass) -> HomologyClass:
    basis = c.basis
    if basis.kind != CP2_BLOWUP or basis.k < 4:
        raise UnsupportedBasis(f"iota_inverse takes CP2Blowup(k+1) with k >= 3, got {basis}")
    if not c.is_integral:
        raise LatticeError("iota_inverse is defined on integral classes")
    a, b0, b1, b2, b3, *rest = c.coeffs
    if b3 != b0 + b1 + b2:
        raise NotInImage(f"{c} pairs to {b3 - b0 - b1 - b2} with {iota_z_class(basis.k - 1)}")
    return HomologyClass(Basis.mbasis(basis.k - 1), (a, b3 - b0, b3 - b1, b3 - b2, *rest))


# -- (-4)-classes ---------------------------------------------------------------------


class Minus4Kind(enum.Enum):
    SXS_CLASS = "SxSClass"
    CREMONA_CANONICAL = "CremonaCanonical"
    NOT_WITHIN_BOUND = "NotWithinBound"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Minus4Result:
    kind: Minus4Kind
    certificate: Optional[MoveSequence] = None
    target: Optional[HomologyClass] = None


def _check_minus4(Z: HomologyClass) -> None:
    if not Z.is_integral:
        raise NotMinus4Sphere(f"{Z} is not integral")
    if Z.basis.kind == MBASIS:
        raise UnsupportedBasis("classify (-4)-classes on CP2Blowup or SxS")
    K = canonical_class(Z.basis)
    if pair(Z, Z) != -4 or pair(K, Z) != 2:
        raise NotMinus4Sphere(
            f"{Z} has Z.Z = {pair(Z, Z)} and K0.Z = {pair(K, Z)}; a sphere needs -4 and 2"
        )


def sxs_minus4_classes() -> tuple:
    """Solve ``2xy = -4``, ``-2(x + y) = 2`` over the integers."""
    basis = Basis.sxs()
    out = []
    # x + y = -1 forces y = -1 - x, and x divides -2, so |x| <= 2
    for x in range(-2, 3):
        y = -1 - x
        if x * y == -2:
            out.append(HomologyClass(basis, (x, y)))
    return tuple(sorted(out))


def classify_minus4(Z: HomologyClass, bound: int) -> Minus4Result:
    """Match ``Z`` against ``A - 2B`` / ``B - 2A`` or search a certificate to ``-H + 2E_1 - E_2``."""
    _check_minus4(Z)
    if Z.basis.kind == SXS:
        if Z in sxs_minus4_classes():
            return Minus4Result(Minus4Kind.SXS_CLASS, None, Z)
        return Minus4Result(Minus4Kind.NOT_WITHIN_BOUND)
    k = Z.basis.k
    if k < 2:
        return Minus4Result(Minus4Kind.NOT_WITHIN_BOUND)
    target = s_class(k - 1)
    bound = max(bound, max(map(abs, Z.coeffs + target.coeffs)) + 1)
    res = cremona.equivalent(Z, target, bound)
    if res.status is Equivalence.EQUIVALENT:
        return Minus4Result(Minus4Kind.CREMONA_CANONICAL, res.certificate, target)
    if res.status is Equivalence.NOT_EQUIVALENT_WITHIN_BOUND:
        return Minus4Result(Minus4Kind.NOT_WITHIN_BOUND, None, target)
    return Minus4Result(Minus4Kind.INCONCLUSIVE, None, target)


def minus4_classes(k: int) -> tuple:
    """Every class of ``CP2Blowup(k)`` with ``Z.Z = -4`` and ``K_0.Z = 2`` (``k <= 8``)."""
    if k > MAX_FINITE_RANK:
        raise LatticeError("the (-4) scan is finite only for k <= 8")
    res = scan_classes(k, -4, 2)
    return res.classes


class Cone(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    UNDECIDED = "undecided"


def _exact_solve(cols: list[tuple], target: tuple) -> Optional[list[Fraction]]:
    """Exact solution of ``sum x_j cols_j = target`` with free variables set to zero, or None."""
    n, m = len(target), len(cols)
    M = [[Fraction(cols[j][i]) for j in range(m)] + [Fraction(target[i])] for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(n):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][m] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        x[c] = M[i][m] / M[i][c]
    return x


def in_exceptional_cone(v: HomologyClass) -> Cone:
    """Is ``v`` a nonnegative combination of exceptional classes?

    A floating-point LP proposes either a witness or a separating class;
    the answer is reported only after it is confirmed in exact arithmetic.
    """
    basis = v.basis
    gens = [c.coeffs for c in enumerate_exceptional(basis.k)]
    if not gens:
        return Cone.INSIDE if not any(v.coeffs) else Cone.OUTSIDE
    A = np.array(gens, dtype=float).T
    target = np.array(v.coeffs, dtype=float)
    lp = linprog(np.zeros(len(gens)), A_eq=A, b_eq=target, bounds=(0, None), method="highs")
    if lp.status == 0:
        support = [j for j, x in enumerate(lp.x) if x > 1e-9]
        x = _exact_solve([gens[j] for j in support], v.coeffs)
        if x is not None and all(q >= 0 for q in x):
            return Cone.INSIDE
        return Cone.UNDECIDED
    # separating y (in coefficient space): y.g >= 0 for all generators, y.v <= -1
    n = basis.rank
    sep = linprog(
        np.zeros(n),
        A_ub=np.vstack([-A.T, target[None, :]]),
        b_ub=np.concatenate([np.zeros(len(gens)), [-1.0]]),
        bounds=(None, None),
        method="highs",
    )
    if sep.status != 0:
        return Cone.UNDECIDED
    for den in (1, 2, 3, 4, 6, 8, 12, 24, 120, 720, 5040):
        y = [Fraction(round(float(c) * den), den) for c in sep.x]
        if all(sum(a * b for a, b in zip(y, g)) >= 0 for g in gens) and sum(
            a * b for a, b in zip(y, v.coeffs)
        ) < 0:
            return Cone.OUTSIDE
    y = [Fraction(c).limit_denominator(10**6) for c in sep.x]
    if all(sum(a * b for a, b in zip(y, g)) >= 0 for g in gens) and sum(
        a * b for a, b in zip(y, v.coeffs)
    ) < 0:
        return Cone.OUTSIDE
    return Cone.UNDECIDED


def admits_pushoff_system(Z: HomologyClass) -> bool:
    """Does some set of ``k - 1`` pairwise orthogonal exceptional classes avoid ``Z``?"""
    k = Z.basis.k
    if k == 0:
        return False
    return bool(enumerate_systems(k, Z, Mode.Z_ORTHOGONAL, k - 1))


def sphere_admissible(Z: HomologyClass) -> bool:
    """Numerical sphere conditions plus the two necessary conditions used to filter a scan.

    ``Z`` must satisfy ``Z.Z = -4``, ``K_0.Z = 2``, admit a push-off system
    of ``k - 1`` exceptional classes, and ``-Z`` must lie outside the cone
    spanned by exceptional classes.  A symplectic sphere has positive area
    while every exceptional class is represented, so ``-Z`` in that cone
    would give ``Z`` nonpositive area.
    """
    try:
        _check_minus4(Z)
    except NotMinus4Sphere:
        return False
    if Z.basis.kind != CP2_BLOWUP:
        return Z in sxs_minus4_classes()
    if not admits_pushoff_system(Z):
        return False
    return in_exceptional_cone(-Z) is Cone.OUTSIDE


# -- tau -----------------------------------------------------------------------------


def transport_to_iota_z(z: HomologyClass, bound: int = 20) -> MoveSequence:
    """Moves carrying a (-4)-class ``z`` on ``CP2Blowup(k + 1)`` to :func:`iota_z_class`."""
    target = iota_z_class(z.basis.k - 1)
    if z == target:
        return ()
    swap = CremonaMove.swap(1, 4)
    if cremona.apply_move(z, swap) == target:
        return (swap,)
    res = cremona.equivalent(z, target, max(bound, max(map(abs, z.coeffs)) + 1))
    if res.status is not Equivalence.EQUIVALENT:
        raise NotInImage(f"no move sequence carries {z} to {target}")
    return res.certificate


def tau_pushoff(sys: ExceptionalSystem, z: Optional[HomologyClass] = None) -> ExceptionalSystem:
    """Pull a system orthogonal to ``z`` back to ``MBasis(k)`` through ``iota``.

    With ``z`` omitted the system must already be orthogonal to
    :func:`iota_z_class`; otherwise it is first moved along a certified
    Cremona sequence carrying ``z`` to that class.
    """
    basis = sys.basis
    if basis.kind != CP2_BLOWUP or basis.k < 4:
        raise UnsupportedBasis(f"tau_pushoff needs CP2Blowup(k+1) with k >= 3, got {basis}")
    moves: MoveSequence = () if z is None else transport_to_iota_z(z)
    Zi = iota_z_class(basis.k - 1)
    out = []
    for c in sys.classes:
        moved = cremona.replay(c, moves)
        if pair(moved, Zi) != 0:
            raise NotInImage(f"{c} is not orthogonal to the (-4)-class")
        out.append(iota_inverse(moved))
    result = ExceptionalSystem(Basis.mbasis(basis.k - 1), tuple(out), sys.size)
    L = HomologyClass(result.basis, (0, 1, 1, 1) + (0,) * (basis.k - 4))
    for c in result.classes:
        if z2_pair(c, L) != 0:
            raise AssertionError(f"{c} pairs nontrivially with U1+U2+U3 mod 2")
    return result


def mbasis_as_blowup(c: HomologyClass) -> HomologyClass:
    """Read ``U_i`` as ``E_i``: the diagonal forms and canonical classes agree."""
    if c.basis.kind != MBASIS:
        raise UnsupportedBasis(f"expected an MBasis class, got {c.basis}")
    return HomologyClass(Basis.cp2(c.basis.k), c.coeffs)


def to_line_side(sys: ExceptionalSystem) -> ExceptionalSystem:
    """Send an ``MBasis`` system orthogonal mod 2 to ``U_1 + U_2 + U_3`` to one orthogonal mod 2 to ``H``.

    After :func:`mbasis_as_blowup`, the reflection along ``H - E_1 - E_2 - E_3``
    maps ``E_1 + E_2 + E_3`` to ``3H - 2(E_1 + E_2 + E_3)``, which is ``H`` mod 2.
    """
    top = CremonaMove.reflect(1, 2, 3)
    return ExceptionalSystem(
        Basis.cp2(sys.basis.k),
        tuple(cremona.apply_move(mbasis_as_blowup(c), top) for c in sys.classes),
        sys.size,
    )


def pushoff_correspondence(k: int, systems_z: Sequence[ExceptionalSystem], z: HomologyClass) -> dict:
    """``tau`` followed by :func:`to_line_side` on every system in ``systems_z``."""
    return {s: to_line_side(tau_pushoff(s, z)) for s in systems_z}
