"""Ball packings through blow-up classes.

Packing balls of sizes ``lambda_i`` corresponds to the class
``[omega] - sum lambda_i E_i`` on the blow-up.  Whether such a class carries
a symplectic form is tested on its reduced Cremona representative.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import cremona
from .cremona import MoveSequence
from .errors import LatticeError, NonTerminating, UnsupportedBasis
from .lattice import CP2_BLOWUP, Basis, HomologyClass, Number, _coerce, sxs_form_class


class Ambient(enum.Enum):
    CP2 = "cp2"
    SXS = "sxs"
    CP2_MINUS_RP2 = "cp2-minus-rp2"


@dataclass(frozen=True)
class PackingProblem:
    """``areas`` is ``(line_area,)`` for ``CP2`` and ``CP2_MINUS_RP2``, ``(alpha, beta)`` for ``SXS``.

    On ``SxS`` the factor ``A`` has area ``alpha`` and ``B`` has area ``beta``.
    """

    ambient: Ambient
    areas: tuple
    sizes: tuple = field(default=())

    def __post_init__(self) -> None:
        ambient = Ambient(self.ambient)
        areas = tuple(_coerce(x) for x in self.areas)
        sizes = tuple(_coerce(x) for x in self.sizes)
        want = 2 if ambient is Ambient.SXS else 1
        if len(areas) != want:
            raise LatticeError(f"{ambient.value} takes {want} area parameter(s), got {len(areas)}")
        if any(x <= 0 for x in areas):
            raise LatticeError("areas must be positive")
        if any(x <= 0 for x in sizes):
            raise LatticeError("ball sizes must be positive")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "areas", areas)
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def cp2(cls, area: Number, sizes: Sequence[Number] = ()) -> "PackingProblem":
        return cls(Ambient.CP2, (area,), tuple(sizes))

    @classmethod
    def sxs(cls, alpha: Number, beta: Number, sizes: Sequence[Number] = ()) -> "PackingProblem":
        return cls(Ambient.SXS, (alpha, beta), tuple(sizes))

    @classmethod
    def cp2_minus_rp2(cls, area: Number, sizes: Sequence[Number] = ()) -> "PackingProblem":
        return cls(Ambient.CP2_MINUS_RP2, (area,), tuple(sizes))

    def as_sxs(self) -> "PackingProblem":
        """``CP^2`` minus ``RP^2`` with line area ``L`` packs like ``SxS(L, L/2)``."""
        if self.ambient is not Ambient.CP2_MINUS_RP2:
            return self
        L = self.areas[0]
        return PackingProblem.sxs(L, Fraction(L) / 2, self.sizes)


def blowup_class(p: PackingProblem) -> HomologyClass:
    """The class of the blown-up form.

    ``CP2``: ``(area | lambda_1, ..., lambda_n)``.  ``SxS``: the first ball
    turns ``S^2 x S^2`` into ``CP2Blowup(2)`` and the rest append further
    ``E`` entries.  With no balls on ``SxS`` the class ``beta A + alpha B``
    is returned on ``SxS`` itself.
    """
    p = p.as_sxs()
    if p.ambient is Ambient.CP2:
        return HomologyClass(Basis.cp2(len(p.sizes)), (p.areas[0], *p.sizes))
    alpha, beta = p.areas
    if not p.sizes:
        return HomologyClass(Basis.sxs(), (beta, alpha))
    first = sxs_form_class(alpha, beta, p.sizes[0])
    rest = p.sizes[1:]
    return HomologyClass(Basis.cp2(2 + len(rest)), (*first.coeffs, *rest))


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SymplecticTest:
    verdict: Verdict
    certificate: MoveSequence = ()
    reduced: Optional[HomologyClass] = None
    reason: str = ""


def _scale(v: HomologyClass) -> tuple[int, HomologyClass]:
    den = math.lcm(*(Fraction(x).denominator for x in v.coeffs))
    return den, HomologyClass(v.basis, tuple(int(x * den) for x in v.coeffs))


def is_symplectic_class(v: HomologyClass) -> SymplecticTest:
    """Class-level test on ``CP2Blowup(k)``: positive volume, then the reduced form.

    The reduced vector ``(a | b_1 >= ... >= b_k)`` must have ``a > 0`` and
    every ``b_i > 0``.  A zero entry, or ``a = b_1 + b_2`` when ``k = 2``,
    leaves the form degenerate on an exceptional class and is reported as
    inconclusive.  ``reduced`` is given at the scale of the input.
    """
    if v.basis.kind == "SxS":
        x, y = v.coeffs
        ok = x > 0 and y > 0
        return SymplecticTest(Verdict.YES if ok else Verdict.NO, (), v, "" if ok else "nonpositive area")
    if v.basis.kind != CP2_BLOWUP:
        raise UnsupportedBasis(f"is_symplectic_class works on CP2Blowup, got {v.basis}")
    den, w = _scale(v)
    a, b = w.coeffs[0], w.coeffs[1:]
    if a * a <= sum(x * x for x in b):
        return SymplecticTest(Verdict.NO, (), None, "nonpositive volume")
    try:
        red, cert = cremona.reduce(w)
    except NonTerminating:
        return SymplecticTest(Verdict.INCONCLUSIVE, (), None, "reduction did not terminate")
    back = HomologyClass(v.basis, tuple(Fraction(x, den) for x in red.coeffs))
    a, b = red.coeffs[0], red.coeffs[1:]

    def result(verdict: Verdict, reason: str = "") -> SymplecticTest:
        return SymplecticTest(verdict, cert, back, reason)

    if a <= 0:
        return result(Verdict.NO, "nonpositive line area after reduction")
    if b and b[-1] < 0:
        return result(Verdict.NO, "negative area on an exceptional class")
    if len(b) == 2 and a < b[0] + b[1]:
        return result(Verdict.NO, "negative area on H - E_1 - E_2")
    if b and b[-1] == 0:
        return result(Verdict.INCONCLUSIVE, "zero area on an exceptional class")
    if len(b) == 2 and a == b[0] + b[1]:
        return result(Verdict.INCONCLUSIVE, "zero area on H - E_1 - E_2")
    return result(Verdict.YES)


def packing_feasible(p: PackingProblem) -> SymplecticTest:
    """Class-level feasibility: a ``YES`` certifies the cohomological criterion only."""
    return is_symplectic_class(blowup_class(p))


def rp2_complement_packing(sizes: Sequence[Number]) -> SymplecticTest:
    """Balls in ``CP^2`` minus ``RP^2`` (line area 1), via ``SxS(1, 1/2)``."""
    return packing_feasible(PackingProblem.cp2_minus_rp2(1, sizes))
