"""Exact arithmetic in the second-homology lattices of rational 4-manifolds.

Three lattices are supported:

* ``CP2Blowup(k)``: basis ``H, E_1, ..., E_k`` with ``H.H = 1``,
  ``E_i.E_j = -delta_ij``.  A class is stored as ``(a | b_1, ..., b_k)``
  meaning ``aH - sum b_i E_i``, so ``E_j`` itself has ``b_j = -1``.
* ``SxS``: factor classes ``A, B`` with ``A.A = B.B = 0``, ``A.B = 1``.
  Stored as ``(x, y)`` meaning ``xA + yB``.
* ``MBasis(k)``: the associated basis ``H, U_1, U_2, U_3, E_4, ..., E_k``
  of the manifold carrying a Lagrangian RP^2, diagonal like ``CP2Blowup``.
  Stored as ``(a | t_1, t_2, t_3, b_4, ..., b_k)`` meaning
  ``aH - sum t_i U_i - sum b_i E_i``.

Coefficients are Python ints.  ``fractions.Fraction`` entries are accepted
for symplectic-form vectors only; floats are rejected everywhere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import BasisMismatch, IndexOutOfRange, LatticeError, UnsupportedBasis

Number = Union[int, Fraction]

CP2_BLOWUP = "CP2Blowup"
SXS = "SxS"
MBASIS = "MBasis"
_KINDS = (CP2_BLOWUP, SXS, MBASIS)


@dataclass(frozen=True, order=True)
class Basis:
    kind: str
    k: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise LatticeError(f"unknown basis kind {self.kind!r}")
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 0:
            raise LatticeError(f"basis size must be a nonnegative integer, got {self.k!r}")
        if self.kind == SXS and self.k != 0:
            raise LatticeError("SxS takes no size parameter")
        if self.kind == MBASIS and self.k < 3:
            raise LatticeError("MBasis needs k >= 3 (three U generators)")

    @classmethod
    def cp2(cls, k: int) -> "Basis":
        return cls(CP2_BLOWUP, k)

    @classmethod
    def sxs(cls) -> "Basis":
        return cls(SXS, 0)

    @classmethod
    def mbasis(cls, k: int) -> "Basis":
        return cls(MBASIS, k)

    @property
    def rank(self) -> int:
        return 2 if self.kind == SXS else self.k + 1

    @property
    def is_diagonal(self) -> bool:
        return self.kind != SXS

    def labels(self) -> tuple[str, ...]:
        if self.kind == SXS:
            return ("A", "B")
        if self.kind == MBASIS:
            return ("H", "U1", "U2", "U3") + tuple(f"E{i}" for i in range(4, self.k + 1))
        return ("H",) + tuple(f"E{i}" for i in range(1, self.k + 1))

    def __str__(self) -> str:
        return self.kind if self.kind == SXS else f"{self.kind}({self.k})"


def _coerce(x: object) -> Number:
    if isinstance(x, bool):
        raise LatticeError("booleans are not coefficients")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        q = Fraction(x.numerator, x.denominator)
        return q.numerator if q.denominator == 1 else q
    raise LatticeError(f"coefficients must be exact integers or rationals, got {type(x).__name__}")


@dataclass(frozen=True, order=True)
class HomologyClass:
    basis: Basis
    coeffs: tuple

    def __post_init__(self) -> None:
        coeffs = tuple(_coerce(c) for c in self.coeffs)
        if len(coeffs) != self.basis.rank:
            raise LatticeError(
                f"{self.basis} has rank {self.basis.rank}, got {len(coeffs)} coefficients"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> Number:
        """Coefficient ``a`` of ``H`` (or ``x`` of ``A`` on ``SxS``)."""
        return self.coeffs[0]

    @property
    def tail(self) -> tuple:
        return self.coeffs[1:]

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def _check(self, other: "HomologyClass") -> None:
        if not isinstance(other, HomologyClass):
            raise TypeError(f"expected HomologyClass, got {type(other).__name__}")
        if other.basis != self.basis:
            raise BasisMismatch(f"{self.basis} vs {other.basis}")

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        self._check(other)
        return HomologyClass(self.basis, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        self._check(other)
        return HomologyClass(self.basis, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(self.basis, tuple(-x for x in self.coeffs))

    def __rmul__(self, scalar: Number) -> "HomologyClass":
        if isinstance(scalar, HomologyClass):
            return NotImplemented
        s = _coerce(scalar)
        return HomologyClass(self.basis, tuple(s * x for x in self.coeffs))

    __mul__ = __rmul__

    def __str__(self) -> str:
        from .notation import format_class

        return format_class(self)


# -- constructors ------------------------------------------------------------


def zero(basis: Basis) -> HomologyClass:
    return HomologyClass(basis, (0,) * basis.rank)


def line(basis: Basis) -> HomologyClass:
    """The class ``H`` (``A`` on ``SxS``)."""
    return HomologyClass(basis, (1,) + (0,) * (basis.rank - 1))


def generator(basis: Basis, position: int) -> HomologyClass:
    """The basis element at ``position`` (0 is ``H``), as a class.

    On diagonal bases this returns the exceptional generator itself,
    i.e. coefficient ``-1`` in the ``(a | b)`` storage.
    """
    if not 0 <= position < basis.rank:
        raise IndexOutOfRange(f"position {position} outside {basis}")
    coeffs = [0] * basis.rank
    coeffs[position] = 1 if position == 0 or not basis.is_diagonal else -1
    return HomologyClass(basis, tuple(coeffs))


def exceptional(i: int, basis: Basis) -> HomologyClass:
    """``E_i`` on ``CP2Blowup(k)`` (``1 <= i <= k``) or ``MBasis(k)`` (``4 <= i <= k``)."""
    if basis.kind == CP2_BLOWUP and 1 <= i <= basis.k:
        return generator(basis, i)
    if basis.kind == MBASIS and 4 <= i <= basis.k:
        return generator(basis, i)
    raise IndexOutOfRange(f"E{i} is not a generator of {basis}")


def cp2_class(a: Number, *b: Number) -> HomologyClass:
    """``(a | b_1, ..., b_k)`` on ``CP2Blowup(len(b))``."""
    return HomologyClass(Basis.cp2(len(b)), (a,) + tuple(b))


def embed(c: HomologyClass, k: int) -> HomologyClass:
    """View a ``CP2Blowup`` class in a larger ``CP2Blowup(k)`` (zero padding)."""
    if c.basis.kind != CP2_BLOWUP:
        raise UnsupportedBasis("embed works on CP2Blowup classes")
    if k < c.basis.k:
        if any(c.coeffs[k + 1 :]):
            raise IndexOutOfRange(f"{c} does not live in CP2Blowup({k})")
        return HomologyClass(Basis.cp2(k), c.coeffs[: k + 1])
    return HomologyClass(Basis.cp2(k), c.coeffs + (0,) * (k - c.basis.k))


# -- the form ----------------------------------------------------------------


def pair_coeffs(basis: Basis, x: Sequence[Number], y: Sequence[Number]) -> Number:
    if basis.kind == SXS:
        return x[0] * y[1] + x[1] * y[0]
    return x[0] * y[0] - sum(p * q for p, q in zip(x[1:], y[1:]))


def pair(A: HomologyClass, B: HomologyClass) -> Number:
    """Intersection number ``A.B``."""
    A._check(B)
    return pair_coeffs(A.basis, A.coeffs, B.coeffs)


def square(A: HomologyClass) -> Number:
    return pair(A, A)


def canonical_class(basis: Basis) -> HomologyClass:
    """``K_0 = -3H + E_1 + ... + E_k``; ``-2A - 2B`` on ``SxS``."""
    if basis.kind == CP2_BLOWUP:
        return HomologyClass(basis, (-3,) + (-1,) * basis.k)
    if basis.kind == SXS:
        return HomologyClass(basis, (-2, -2))
    raise UnsupportedBasis("no canonical class is fixed on MBasis")


def diagonal_canonical(basis: Basis) -> HomologyClass:
    """``-3H + sum`` of all exceptional generators, on any diagonal basis.

    On ``MBasis`` this is ``-3H + U_1 + U_2 + U_3 + E_4 + ... + E_k``, the
    canonical class for which the associated basis consists of a line and
    exceptional classes.  Used only to validate exceptional systems there.
    """
    if not basis.is_diagonal:
        raise UnsupportedBasis("diagonal_canonical needs a diagonal basis")
    return HomologyClass(basis, (-3,) + (-1,) * basis.k)


def adjunction_genus(C: HomologyClass) -> int:
    """``1 + (C.C + K_0.C) / 2``."""
    if not C.is_integral:
        raise LatticeError("adjunction genus needs an integral class")
    K = canonical_class(C.basis)
    total = pair(C, C) + pair(K, C)
    assert total % 2 == 0, "K_0 is characteristic"
    return 1 + total // 2


def is_exceptional(C: HomologyClass) -> bool:
    """Numerically exceptional: ``C.C = -1`` and ``K.C = -1``."""
    K = canonical_class(C.basis) if C.basis.kind != MBASIS else diagonal_canonical(C.basis)
    return pair(C, C) == -1 and pair(K, C) == -1


# -- mod 2 -------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Z2Class:
    basis: Basis
    bits: tuple

    def __post_init__(self) -> None:
        bits = tuple(int(b) % 2 for b in self.bits)
        if len(bits) != self.basis.rank:
            raise LatticeError(f"{self.basis} has rank {self.basis.rank}, got {len(bits)} bits")
        object.__setattr__(self, "bits", bits)

    def __str__(self) -> str:
        terms = [lab for lab, bit in zip(self.basis.labels(), self.bits) if bit]
        return "+".join(terms) if terms else "0"


def z2_reduce(A: HomologyClass) -> Z2Class:
    if not A.is_integral:
        raise LatticeError("only integral classes reduce mod 2")
    return Z2Class(A.basis, tuple(c % 2 for c in A.coeffs))


def z2_pair(x: Union[Z2Class, HomologyClass], y: Union[Z2Class, HomologyClass]) -> int:
    if isinstance(x, HomologyClass):
        x = z2_reduce(x)
    if isinstance(y, HomologyClass):
        y = z2_reduce(y)
    if x.basis != y.basis:
        raise BasisMismatch(f"{x.basis} vs {y.basis}")
    if x.basis.kind == SXS:
        return pair_coeffs(x.basis, x.bits, y.bits) % 2
    # signs vanish mod 2: the diagonal form is the dot product
    return sum(p * q for p, q in zip(x.bits, y.bits)) % 2


def all_z2_classes(basis: Basis) -> Iterable[Z2Class]:
    """Every class of ``H_2(-; Z_2)``, in lexicographic bit order."""
    for n in range(2 ** basis.rank):
        yield Z2Class(basis, tuple((n >> (basis.rank - 1 - i)) & 1 for i in range(basis.rank)))


# -- characteristic classes and Kervaire--Milnor ------------------------------


class KMResult(enum.Enum):
    SPHERE_EXCLUDED = "SphereExcluded"
    NO_OBSTRUCTION = "NoObstruction"
    NOT_CHARACTERISTIC = "NotCharacteristic"


def signature(basis: Basis) -> int:
    if basis.kind == SXS:
        return 0
    return 1 - basis.k


def is_characteristic(A: HomologyClass) -> bool:
    """On a diagonal unimodular form: every coefficient odd."""
    if A.basis.kind != CP2_BLOWUP:
        raise UnsupportedBasis("is_characteristic is defined on CP2Blowup")
    return A.is_integral and all(c % 2 == 1 for c in A.coeffs)


def km_obstruction(A: HomologyClass) -> KMResult:
    """Sphere exclusion for characteristic classes: ``A.A = sigma (mod 16)``."""
    if not is_characteristic(A):
        return KMResult.NOT_CHARACTERISTIC
    if (square(A) - signature(A.basis)) % 16:
        return KMResult.SPHERE_EXCLUDED
    return KMResult.NO_OBSTRUCTION


# -- S^2 x S^2 blown up once == CP^2 # 2 ---------------------------------------


def sxs_blowup_to_cp2(x: Number, y: Number, e: Number) -> HomologyClass:
    """Send ``xA + yB + e E`` to ``CP2Blowup(2)``.

    ``A -> H - E_2``, ``B -> H - E_1``, ``E -> H - E_1 - E_2``; in
    ``(a | b)`` storage the image is ``(x + y + e | y + e, x + e)``.
    """
    x, y, e = _coerce(x), _coerce(y), _coerce(e)
    return HomologyClass(Basis.cp2(2), (x + y + e, y + e, x + e))


def sxs_form_class(area_a: Number, area_b: Number, ball: Number) -> HomologyClass:
    """Poincare dual of the form on ``S^2 x S^2`` blown up once, in ``CP2Blowup(2)``.

    The form has ``omega(A) = area_a``, ``omega(B) = area_b`` and
    ``omega(E) = ball``; its dual is ``area_b A + area_a B - ball E``.
    """
    return sxs_blowup_to_cp2(area_b, area_a, -_coerce(ball))
