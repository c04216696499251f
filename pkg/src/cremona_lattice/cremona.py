"""Cremona moves, reduction to reduced vectors, and equivalence testing.

A move is a reflection ``A -> A + (A.L) L`` along a root ``L`` of square
``-2``: either ``H - E_i - E_j - E_k`` (``reflect``) or ``E_i - E_j``
(``swap``, which transposes ``b_i`` and ``b_j``).  Moves are involutions,
so a certificate is inverted by reversing it.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import IndexOutOfRange, LatticeError, NonTerminating, UnsupportedBasis
from .lattice import CP2_BLOWUP, Basis, HomologyClass, Number, canonical_class, pair

REFLECT = "reflect"
SWAP = "swap"


@dataclass(frozen=True, order=True)
class CremonaMove:
    kind: str
    indices: tuple

    def __post_init__(self) -> None:
        idx = tuple(sorted(self.indices))
        want = 3 if self.kind == REFLECT else 2 if self.kind == SWAP else None
        if want is None:
            raise LatticeError(f"unknown move kind {self.kind!r}")
        if len(idx) != want or len(set(idx)) != want:
            raise LatticeError(f"{self.kind} needs {want} distinct indices, got {self.indices!r}")
        if any(isinstance(i, bool) or not isinstance(i, int) or i < 1 for i in idx):
            raise IndexOutOfRange(f"move indices must be integers >= 1, got {self.indices!r}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def reflect(cls, i: int, j: int, k: int) -> "CremonaMove":
        return cls(REFLECT, (i, j, k))

    @classmethod
    def swap(cls, i: int, j: int) -> "CremonaMove":
        return cls(SWAP, (i, j))

    def root(self, basis: Basis) -> HomologyClass:
        _check_fits(self, basis)
        coeffs = [0] * basis.rank
        if self.kind == REFLECT:
            coeffs[0] = 1
            for i in self.indices:
                coeffs[i] = 1
        else:
            i, j = self.indices
            coeffs[i], coeffs[j] = -1, 1
        return HomologyClass(basis, tuple(coeffs))

    def to_json(self) -> dict:
        if self.kind == REFLECT:
            return {"type": REFLECT, "ijk": list(self.indices)}
        return {"type": SWAP, "ij": list(self.indices)}

    @classmethod
    def from_json(cls, obj: dict) -> "CremonaMove":
        if not isinstance(obj, dict):
            raise LatticeError(f"bad move {obj!r}")
        if obj.get("type") == REFLECT and isinstance(obj.get("ijk"), list):
            return cls(REFLECT, tuple(obj["ijk"]))
        if obj.get("type") == SWAP and isinstance(obj.get("ij"), list):
            return cls(SWAP, tuple(obj["ij"]))
        raise LatticeError(f"bad move {obj!r}")

    def __str__(self) -> str:
        tag = "R" if self.kind == REFLECT else "S"
        return f"{tag}{''.join(map(str, self.indices)) if max(self.indices) < 10 else self.indices}"


MoveSequence = tuple  # tuple[CremonaMove, ...]


def certificate_to_json(seq: Iterable[CremonaMove]) -> list:
    return [m.to_json() for m in seq]


def certificate_from_json(obj: object) -> MoveSequence:
    if not isinstance(obj, list):
        raise LatticeError("a certificate is a JSON array of moves")
    return tuple(CremonaMove.from_json(m) for m in obj)


def _check_fits(m: CremonaMove, basis: Basis) -> None:
    if basis.kind != CP2_BLOWUP:
        raise UnsupportedBasis(f"Cremona moves act on CP2Blowup, not {basis}")
    if m.indices[-1] > basis.k:
        raise IndexOutOfRange(f"{m} does not fit {basis}")


def generators(k: int) -> tuple[CremonaMove, ...]:
    """All moves on ``CP2Blowup(k)``, in canonical order (reflections first)."""
    idx = range(1, k + 1)
    return tuple(CremonaMove(REFLECT, t) for t in itertools.combinations(idx, 3)) + tuple(
        CremonaMove(SWAP, p) for p in itertools.combinations(idx, 2)
    )


def act(coeffs: tuple, m: CremonaMove) -> tuple:
    """Apply ``m`` to a raw ``(a, b_1, ..., b_k)`` tuple (no checks)."""
    if m.kind == REFLECT:
        i, j, k = m.indices
        d = coeffs[0] - coeffs[i] - coeffs[j] - coeffs[k]
        if d == 0:
            return coeffs
        out = list(coeffs)
        out[0] += d
        out[i] += d
        out[j] += d
        out[k] += d
        return tuple(out)
    i, j = m.indices
    if coeffs[i] == coeffs[j]:
        return coeffs
    out = list(coeffs)
    out[i], out[j] = out[j], out[i]
    return tuple(out)


def apply_move(A: HomologyClass, m: CremonaMove) -> HomologyClass:
    _check_fits(m, A.basis)
    return HomologyClass(A.basis, act(A.coeffs, m))


def replay(A: HomologyClass, seq: Iterable[CremonaMove]) -> HomologyClass:
    for m in seq:
        A = apply_move(A, m)
    return A


def inverse(seq: Sequence[CremonaMove]) -> MoveSequence:
    return tuple(reversed(seq))


def reflect(A: HomologyClass, root: HomologyClass) -> HomologyClass:
    """Reflection along an arbitrary root of square ``-2``."""
    if pair(root, root) != -2:
        raise LatticeError(f"{root} is not a (-2)-root")
    return A + pair(A, root) * root


# -- reduction -----------------------------------------------------------------


def is_reduced(A: HomologyClass) -> bool:
    """``b_1 >= ... >= b_k >= 0`` and ``a >= b_1 + b_2 + b_3``."""
    if A.basis.kind != CP2_BLOWUP:
        raise UnsupportedBasis("is_reduced is defined on CP2Blowup")
    b = A.tail
    if any(x < y for x, y in zip(b, b[1:])) or (b and b[-1] < 0):
        return False
    return A.degree >= sum(b[:3])


def _sort_moves(b: Sequence[Number]) -> list[CremonaMove]:
    """Transpositions realizing the stable descending sort of ``b`` (1-based)."""
    order = sorted(range(len(b)), key=lambda i: -b[i])  # stable
    if order == list(range(len(b))):
        return []
    # target[p] = source index whose value lands at position p
    cur = list(range(len(b)))
    where = list(range(len(b)))  # where[src] = current position
    moves = []
    for p, src in enumerate(order):
        q = where[src]
        if q != p:
            moves.append(CremonaMove(SWAP, (p + 1, q + 1)))
            other = cur[p]
            cur[p], cur[q] = src, other
            where[src], where[other] = p, q
    return moves


def reduction_cap(A: HomologyClass) -> int:
    return 10 * sum(abs(x) for x in A.coeffs) + 100


def reduce(A: HomologyClass) -> tuple[HomologyClass, MoveSequence]:
    """Sort ``b`` descending, reflect along ``H - E_1 - E_2 - E_3`` while ``a < b_1 + b_2 + b_3``.

    Returns the final vector and the certificate.  The loop stops when the
    vector is sorted with ``a >= b_1 + b_2 + b_3``; the sign condition of a
    reduced vector is left to :func:`is_reduced`.  With fewer than three
    exceptional generators no reflection exists and the loop stops after
    sorting.
    """
    if A.basis.kind != CP2_BLOWUP:
        raise UnsupportedBasis("reduce works on CP2Blowup")
    cap = reduction_cap(A)
    coeffs = A.coeffs
    cert: list[CremonaMove] = []
    top = CremonaMove(REFLECT, (1, 2, 3))
    reflections = 0
    while True:
        swaps = _sort_moves(coeffs[1:])
        for m in swaps:
            coeffs = act(coeffs, m)
        cert.extend(swaps)
        if A.basis.k < 3 or coeffs[0] >= coeffs[1] + coeffs[2] + coeffs[3]:
            break
        reflections += 1
        if reflections > cap:
            raise NonTerminating(f"reduction of {A} exceeded {cap} reflections")
        coeffs = act(coeffs, top)
        cert.append(top)
    return HomologyClass(A.basis, coeffs), tuple(cert)


# -- equivalence -----------------------------------------------------------------


class Equivalence(enum.Enum):
    EQUIVALENT = "Equivalent"
    NOT_EQUIVALENT_WITHIN_BOUND = "NotEquivalentWithinBound"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class EquivalenceResult:
    status: Equivalence
    certificate: Optional[MoveSequence] = None
    explored: int = 0

    def __bool__(self) -> bool:
        return self.status is Equivalence.EQUIVALENT


DEFAULT_MAX_STATES = 2_000_000


class _Side:
    """One half of the bidirectional search: BFS layers from a start state."""

    def __init__(self, start: tuple):
        self.layers = [{start}]
        self.seen = {start: 0}
        self.pruned = False
        self.exhausted = False

    def expand(self, moves: Sequence[CremonaMove], bound: int) -> set:
        depth = len(self.layers)
        new: set = set()
        for s in self.layers[-1]:
            for m in moves:
                t = act(s, m)
                if t in self.seen:
                    continue
                if max(map(abs, t)) > bound:
                    self.pruned = True
                    continue
                self.seen[t] = depth
                new.add(t)
        self.layers.append(new)
        if not new:
            self.exhausted = True
        return new


def equivalent(
    A: HomologyClass,
    B: HomologyClass,
    bound: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> EquivalenceResult:
    """Bidirectional BFS for a move sequence carrying ``A`` to ``B``.

    States with a coefficient of absolute value above ``bound`` are pruned.
    The certificate returned is the lexicographically least among the
    shortest ones, so results do not depend on search order.
    """
    A._check(B)
    if A.basis.kind != CP2_BLOWUP:
        raise UnsupportedBasis("equivalence search runs on CP2Blowup")
    if not (A.is_integral and B.is_integral):
        raise LatticeError("equivalence search needs integral classes")
    if bound <= max(map(abs, A.coeffs + B.coeffs)):
        raise LatticeError("bound must exceed every coefficient of both classes")
    if A == B:
        return EquivalenceResult(Equivalence.EQUIVALENT, (), 1)
    # square and K-pairing are move invariants
    K = canonical_class(A.basis)
    if pair(A, A) != pair(B, B) or pair(K, A) != pair(K, B):
        return EquivalenceResult(Equivalence.NOT_EQUIVALENT_WITHIN_BOUND, None, 0)

    moves = generators(A.basis.k)
    fwd, bwd = _Side(A.coeffs), _Side(B.coeffs)
    while True:
        explored = len(fwd.seen) + len(bwd.seen)
        if explored > max_states:
            return EquivalenceResult(Equivalence.INCONCLUSIVE, None, explored)
        live = [s for s in (fwd, bwd) if not s.exhausted]
        side = min(live, key=lambda s: len(s.layers[-1]))
        other = bwd if side is fwd else fwd
        new = side.expand(moves, bound)
        # no earlier layers intersected, so any hit lies on the other side's frontier
        meet = {s for s in new if s in other.seen}
        if meet:
            cert = _least_path(fwd, bwd, meet, moves)
            return EquivalenceResult(Equivalence.EQUIVALENT, cert, len(fwd.seen) + len(bwd.seen))
        if side.exhausted and not side.pruned:
            # a complete finite orbit that misses the other class
            return EquivalenceResult(
                Equivalence.NOT_EQUIVALENT_WITHIN_BOUND, None, len(fwd.seen) + len(bwd.seen)
            )
        if fwd.exhausted and bwd.exhausted:
            return EquivalenceResult(Equivalence.INCONCLUSIVE, None, len(fwd.seen) + len(bwd.seen))


def _least_path(fwd: _Side, bwd: _Side, meet: set, moves: Sequence[CremonaMove]) -> MoveSequence:
    """Lexicographically least shortest move sequence from fwd's start to bwd's start."""
    da = fwd.seen[next(iter(meet))]
    db = bwd.seen[next(iter(meet))]
    meet = {s for s in meet if fwd.seen[s] == da and bwd.seen[s] == db}

    def on_path(side: _Side, top: int, tops: set) -> list[set]:
        # useful[d] = states at depth d of this side lying on a shortest path
        useful = [set() for _ in range(top + 1)]
        useful[top] = set(tops)
        for d in range(top - 1, -1, -1):
            nxt = useful[d + 1]
            useful[d] = {s for s in side.layers[d] if any(act(s, m) in nxt for m in moves)}
        return useful

    ua = on_path(fwd, da, meet)
    ub = on_path(bwd, db, meet)
    # targets for step i (0-based): state after i+1 moves
    targets = ua[1:] + [ub[d] for d in range(db - 1, -1, -1)]
    state = next(iter(ua[0]))
    cert = []
    for want in targets:
        for m in moves:
            t = act(state, m)
            if t in want:
                cert.append(m)
                state = t
                break
        else:  # pragma: no cover - guarded by construction of the layers
            raise AssertionError("broken shortest-path layers")
    return tuple(cert)
