"""Exceptional classes and orthogonal systems of exceptional classes.

Exceptional classes of ``CP2Blowup(k)`` are found two ways that must agree:
the orbit of ``E_1`` under the Cremona moves, and a Diophantine scan of
``a^2 - sum b_i^2 = -1``, ``3a - sum b_i = 1`` over a box whose degree range
is derived from the constraints (see :func:`degree_range`).
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from . import cremona
from .errors import InvalidSystem, LatticeError, NotNormalizable, UnsupportedBasis, UnsupportedRank
from .lattice import (
    CP2_BLOWUP,
    MBASIS,
    Basis,
    HomologyClass,
    Z2Class,
    canonical_class,
    cp2_class,
    diagonal_canonical,
    exceptional,
    line,
    pair,
    z2_pair,
    z2_reduce,
)

MAX_FINITE_RANK = 8


class Mode(enum.Enum):
    Z2_ORTHOGONAL = "Z2Orthogonal"
    Z_ORTHOGONAL = "ZOrthogonal"


def worker_count() -> int:
    """Internal parallelism cap from ``LATTICE_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("LATTICE_THREADS", "1")))
    except ValueError:
        return 1


# -- Diophantine scan ----------------------------------------------------------------


def _solve(G: list[list[Fraction]], r: list[Fraction]) -> list[Fraction]:
    n = len(G)
    M = [row[:] + [r[i]] for i, row in enumerate(G)]
    for col in range(n):
        piv = next(i for i in range(col, n) if M[i][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col] / M[col][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def _independent_rows(rows: list[tuple], rhs: list[tuple]) -> tuple[list[tuple], list[tuple]]:
    kept, kept_rhs, basis = [], [], []
    for row, r in zip(rows, rhs):
        v = [Fraction(x) for x in row]
        for b in basis:
            p = next(i for i, x in enumerate(b) if x != 0)
            if v[p] != 0:
                f = v[p] / b[p]
                v = [x - f * y for x, y in zip(v, b)]
        if any(v):
            basis.append(v)
            kept.append(row)
            kept_rhs.append(r)
    return kept, kept_rhs


def degree_range(
    n: int, square: int, k_pair: int, orthogonal_to: Sequence[HomologyClass] = ()
) -> Optional[tuple[int, int]]:
    """Integer interval containing the degree ``a`` of every solution, or None if unbounded.

    The linear conditions ``sum b = 3a + k_pair`` and ``w_b . b = w_0 a`` pin
    ``b`` to an affine subspace; its closest point to the origin gives
    ``|b|^2 >= alpha a^2 + 2 beta a + gamma``.  Combined with
    ``|b|^2 = a^2 - square`` this bounds ``a`` whenever ``alpha > 1``.
    """
    rows = [(1,) * n]
    rhs = [(3, k_pair)]  # r(a) = p a + q
    for w in orthogonal_to:
        rows.append(tuple(w.coeffs[1:]))
        rhs.append((w.coeffs[0], 0))
    if n == 0:
        # only C = aH: a^2 = square
        return (-math.isqrt(square), math.isqrt(square)) if square >= 0 else (1, 0)
    rows, rhs = _independent_rows(rows, rhs)
    G = [[Fraction(sum(x * y for x, y in zip(r1, r2))) for r2 in rows] for r1 in rows]
    p = [Fraction(x) for x, _ in rhs]
    q = [Fraction(y) for _, y in rhs]
    Gp, Gq = _solve(G, p), _solve(G, q)
    alpha = sum(x * y for x, y in zip(p, Gp))
    beta = sum(x * y for x, y in zip(p, Gq))
    gamma = sum(x * y for x, y in zip(q, Gq))
    if alpha <= 1:
        return None
    # (alpha - 1) a^2 + 2 beta a + gamma + square <= 0
    return _exact_roots(alpha - 1, 2 * beta, gamma + square)


def _exact_roots(A: Fraction, B: Fraction, C: Fraction) -> Optional[tuple[int, int]]:
    """Integer interval where ``A x^2 + B x + C <= 0``, for ``A > 0``."""

    def f(x: int) -> Fraction:
        return A * x * x + B * x + C

    disc = B * B - 4 * A * C
    if disc < 0:
        return (1, 0)
    mid = -B / (2 * A)
    half = math.sqrt(float(disc)) / (2 * float(A))
    lo, hi = math.floor(float(mid) - half) - 2, math.ceil(float(mid) + half) + 2
    while f(lo) <= 0:
        lo -= 1
    while f(hi) <= 0:
        hi += 1
    lo += 1
    hi -= 1
    while lo <= hi and f(lo) > 0:
        lo += 1
    while hi >= lo and f(hi) > 0:
        hi -= 1
    return lo, hi


def _scan_degree(n: int, a: int, total: int, norm: int, linear: list[tuple[tuple, int, int]]):
    """All ``b`` in ``Z^n`` with ``sum b = total``, ``sum b^2 = norm`` and the linear checks.

    ``linear`` holds ``(weights, target, last)``: ``weights . b == target``,
    checked once position ``last`` is assigned.
    """
    if norm < 0:
        return
    checks_at: dict[int, list[tuple[tuple, int]]] = {}
    for weights, target, last in linear:
        checks_at.setdefault(last, []).append((weights, target))
    b = [0] * n

    def rec(i: int, s: int, q: int):
        rem = n - i
        if rem == 0:
            if s == 0 and q == 0:
                yield tuple(b)
            return
        if s * s > rem * q:  # Cauchy--Schwarz
            return
        r = math.isqrt(q)
        for v in range(-r, r + 1):
            b[i] = v
            ok = True
            for weights, target in checks_at.get(i, ()):
                if sum(w * x for w, x in zip(weights, b[: i + 1])) != target:
                    ok = False
                    break
            if ok:
                yield from rec(i + 1, s - v, q - v * v)
        b[i] = 0

    yield from rec(0, total, norm)


@dataclass(frozen=True)
class ScanResult:
    classes: tuple
    complete: bool
    degrees: tuple  # (lo, hi) scanned


def scan_classes(
    n: int,
    square: int,
    k_pair: int,
    orthogonal_to: Sequence[HomologyClass] = (),
    degree_cap: Optional[int] = None,
) -> ScanResult:
    """Classes ``C`` of ``CP2Blowup(n)`` with ``C.C = square``, ``K_0.C = k_pair``, orthogonal to the given classes.

    Complete whenever :func:`degree_range` bounds the degree; otherwise a
    ``degree_cap`` is required and the result is flagged incomplete.
    """
    basis = Basis.cp2(n)
    for w in orthogonal_to:
        if w.basis != basis:
            raise UnsupportedBasis(f"constraint {w} is not on {basis}")
    rng = degree_range(n, square, k_pair, orthogonal_to)
    complete = rng is not None
    if rng is None:
        if degree_cap is None:
            raise UnsupportedRank(f"no finite degree bound on CP2Blowup({n}); pass a degree cap")
        rng = (-degree_cap, degree_cap)
    elif degree_cap is not None and (rng[0] < -degree_cap or rng[1] > degree_cap):
        complete = False
        rng = (max(rng[0], -degree_cap), min(rng[1], degree_cap))
    found = []
    for a in range(rng[0], rng[1] + 1):
        checks = []
        feasible = True
        for w in orthogonal_to:
            weights, target = tuple(w.coeffs[1:]), w.coeffs[0] * a
            support = [i for i, x in enumerate(weights) if x]
            if support:
                checks.append((weights, target, support[-1]))
            elif target:
                feasible = False  # w is a multiple of H and a != 0
        if not feasible:
            continue
        for b in _scan_degree(n, a, 3 * a + k_pair, a * a - square, checks):
            found.append(HomologyClass(basis, (a,) + b))
    return ScanResult(tuple(sorted(found)), complete, rng)


# -- exceptional classes ---------------------------------------------------------------


def exceptional_scan(k: int) -> tuple:
    res = scan_classes(k, -1, -1)
    assert res.complete
    return res.classes


def exceptional_orbit(k: int) -> tuple:
    """Orbit of ``E_1`` under the Cremona moves.

    Below rank 3 there are no reflections, so the orbit is taken in
    ``CP2Blowup(3)`` and the classes supported on the first ``k``
    generators are kept (the smaller lattice embeds with orthogonal
    complement spanned by the extra ``E_j``).
    """
    if k == 0:
        return ()
    m = max(k, 3)
    moves = cremona.generators(m)
    start = exceptional(1, Basis.cp2(m)).coeffs
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for mv in moves:
            t = cremona.act(s, mv)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    basis = Basis.cp2(k)
    keep = [s[: k + 1] for s in seen if not any(s[k + 1 :])]
    return tuple(sorted(HomologyClass(basis, s) for s in keep))


@lru_cache(maxsize=None)
def enumerate_exceptional(k: int) -> tuple:
    """Every exceptional class of ``CP2Blowup(k)``, ``k <= 8``, lexicographically sorted."""
    if k < 0:
        raise LatticeError("k must be nonnegative")
    if k > MAX_FINITE_RANK:
        raise UnsupportedRank(
            f"CP2Blowup({k}) has infinitely many exceptional classes; use enumerate_exceptional_bounded"
        )
    orbit, scan = exceptional_orbit(k), exceptional_scan(k)
    if orbit != scan:
        raise AssertionError(f"orbit and scan disagree at k={k}: {len(orbit)} vs {len(scan)}")
    return orbit


def enumerate_exceptional_bounded(k: int, max_degree: int) -> ScanResult:
    """Exceptional classes of degree at most ``max_degree`` in absolute value.

    ``complete`` is true only when the derived degree range fits inside the cap.
    """
    return scan_classes(k, -1, -1, degree_cap=max_degree)


# -- systems -----------------------------------------------------------------------------


def _k0(basis: Basis) -> HomologyClass:
    return diagonal_canonical(basis) if basis.kind == MBASIS else canonical_class(basis)


def _class_key(c: HomologyClass) -> tuple:
    return c.coeffs


@dataclass(frozen=True, order=True)
class ExceptionalSystem:
    """Pairwise orthogonal exceptional classes, canonically sorted."""

    basis: Basis
    classes: tuple
    size: int = -1

    def __post_init__(self) -> None:
        classes = tuple(sorted(self.classes, key=_class_key))
        size = len(classes) if self.size == -1 else self.size
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "size", size)
        if len(classes) != size:
            raise InvalidSystem(f"declared size {size}, got {len(classes)} classes")
        if len(set(classes)) != size:
            raise InvalidSystem("repeated class in system")
        K = _k0(self.basis)
        for c in classes:
            if c.basis != self.basis:
                raise InvalidSystem(f"{c} is not on {self.basis}")
            if pair(c, c) != -1 or pair(K, c) != -1:
                raise InvalidSystem(f"{c} is not exceptional")
        for x, y in itertools.combinations(classes, 2):
            if pair(x, y) != 0:
                raise InvalidSystem(f"{x} and {y} are not orthogonal")

    def __iter__(self):
        return iter(self.classes)

    def __len__(self) -> int:
        return self.size

    def map(self, f) -> "ExceptionalSystem":
        out = [f(c) for c in self.classes]
        return ExceptionalSystem(out[0].basis if out else self.basis, tuple(out), self.size)


def _orthogonal(c: HomologyClass, constraint: Union[HomologyClass, Z2Class], mode: Mode) -> bool:
    if mode is Mode.Z2_ORTHOGONAL:
        return z2_pair(c, constraint) == 0
    return pair(c, constraint) == 0


def candidate_classes(k: int, constraint: Union[HomologyClass, Z2Class], mode: Mode) -> tuple:
    """Exceptional classes of ``CP2Blowup(k)`` orthogonal to the constraint in the given mode."""
    basis = Basis.cp2(k)
    if constraint.basis != basis:
        raise UnsupportedBasis(f"constraint lives on {constraint.basis}, ambient is {basis}")
    if mode is Mode.Z2_ORTHOGONAL:
        return tuple(c for c in enumerate_exceptional(k) if z2_pair(c, constraint) == 0)
    if not isinstance(constraint, HomologyClass):
        raise LatticeError("integral orthogonality needs an integral constraint")
    res = scan_classes(k, -1, -1, orthogonal_to=(constraint,))
    if not res.complete:  # pragma: no cover - scan_classes raises instead
        raise UnsupportedRank(f"no finite bound for classes orthogonal to {constraint}")
    return res.classes


def _backtrack(masks: list[int], size: int, first: Optional[int] = None) -> list[tuple[int, ...]]:
    n = len(masks)
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def rec(cands: int) -> None:
        if len(chosen) == size:
            out.append(tuple(chosen))
            return
        need = size - len(chosen)
        while cands and bin(cands).count("1") >= need:
            i = (cands & -cands).bit_length() - 1
            cands &= cands - 1
            chosen.append(i)
            rec(cands & masks[i])
            chosen.pop()

    if size == 0:
        return [()]
    if first is None:
        rec((1 << n) - 1)
    else:
        chosen.append(first)
        rec(masks[first] & ~((1 << (first + 1)) - 1))
        chosen.pop()
    return out


def _backtrack_branch(args: tuple) -> list[tuple[int, ...]]:
    masks, size, first = args
    return _backtrack(masks, size, first)


def enumerate_systems(
    k: int,
    constraint: Union[HomologyClass, Z2Class],
    mode: Union[Mode, str],
    system_size: int,
    workers: Optional[int] = None,
) -> tuple:
    """All sets of ``system_size`` pairwise orthogonal exceptional classes of
    ``CP2Blowup(k)`` orthogonal to ``constraint`` (mod 2 or over the integers).
    """
    mode = Mode(mode)
    if not 0 <= system_size <= k:
        raise LatticeError(f"system size {system_size} outside 0..{k}")
    cands = candidate_classes(k, constraint, mode)
    n = len(cands)
    masks = [0] * n
    for i, j in itertools.combinations(range(n), 2):
        if pair(cands[i], cands[j]) == 0:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
    # only later indices are candidates after picking i
    masks = [m & ~((1 << (i + 1)) - 1) for i, m in enumerate(masks)]
    workers = worker_count() if workers is None else workers
    if workers > 1 and system_size > 0 and n > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_backtrack_branch, [(masks, system_size, i) for i in range(n)])
            picks = [p for part in parts for p in part]
    else:
        picks = _backtrack(masks, system_size)
    basis = Basis.cp2(k)
    systems = [ExceptionalSystem(basis, tuple(cands[i] for i in p), system_size) for p in picks]
    return tuple(sorted(systems, key=lambda s: tuple(c.coeffs for c in s.classes)))


# -- normalization ----------------------------------------------------------------------


def complementary_line(sys: ExceptionalSystem) -> HomologyClass:
    """The class ``h`` with ``K_0 = -3h + sum F_i`` for a full system ``{F_i}``."""
    K = canonical_class(sys.basis)
    total = HomologyClass(sys.basis, (0,) * sys.basis.rank)
    for c in sys.classes:
        total = total + c
    diff = total - K
    if any(x % 3 for x in diff.coeffs):
        raise NotNormalizable(f"{sys.classes} has no integral complementary line class")
    return HomologyClass(sys.basis, tuple(x // 3 for x in diff.coeffs))


def normalize_system(sys: ExceptionalSystem) -> tuple:
    """Moves carrying a full system on ``CP2Blowup(k)`` onto ``{E_1, ..., E_k}``.

    The system determines a line class ``h`` with ``K_0 = -3h + sum F_i``;
    reducing ``h`` to ``H`` forces the ``F_i`` onto the classes orthogonal
    to ``H``, which are the ``E_j``.  If that walk does not land on ``H``
    the tuple orbit is searched breadth first.
    """
    basis = sys.basis
    if basis.kind != CP2_BLOWUP:
        raise UnsupportedBasis("normalize_system works on CP2Blowup")
    k = basis.k
    if sys.size != k:
        raise NotNormalizable(f"need {k} classes on {basis}, got {sys.size}")
    if k > MAX_FINITE_RANK:
        raise NotNormalizable("orbits are infinite beyond rank 8")
    target = frozenset(exceptional(i, basis) for i in range(1, k + 1))
    if frozenset(sys.classes) == target:
        return ()
    h = complementary_line(sys)
    if k >= 3 and h.degree > 0:
        try:
            reduced, cert = cremona.reduce(h)
        except LatticeError:
            cert = None
        if cert is not None and reduced == line(basis):
            if frozenset(cremona.replay(c, cert) for c in sys.classes) == target:
                return cert
    return _orbit_search(sys, target)


def _orbit_search(sys: ExceptionalSystem, target: frozenset) -> tuple:
    k = sys.basis.k
    moves = cremona.generators(max(k, 3)) if k >= 3 else cremona.generators(k)
    start = frozenset(c.coeffs for c in sys.classes)
    goal = frozenset(c.coeffs for c in target)
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if s == goal:
            path = []
            while parent[s] is not None:
                prev, mv = parent[s]
                path.append(mv)
                s = prev
            return tuple(reversed(path))
        for mv in moves:
            t = frozenset(cremona.act(c, mv) for c in s)
            if t not in parent:
                parent[t] = (s, mv)
                queue.append(t)
    raise NotNormalizable(f"no move sequence sends {sys.classes} to the standard system")


# -- the two constraint families and the tabulated systems ---------------------------


def h_constraint(k: int) -> Z2Class:
    """``H`` mod 2 on ``CP2Blowup(k)``."""
    return z2_reduce(line(Basis.cp2(k)))


def s_class(k: int) -> HomologyClass:
    """``S = -H + 2E_1 - E_2`` on ``CP2Blowup(k + 1)``."""
    return cp2_class(-1, -2, 1, *([0] * (k - 1)))


def s_prime_class(k: int) -> HomologyClass:
    """``S' = E_1 - E_2 - E_3 - E_4`` on ``CP2Blowup(k + 1)`` (``k >= 3``)."""
    if k < 3:
        raise LatticeError("S' needs at least four exceptional generators")
    return cp2_class(0, -1, 1, 1, 1, *([0] * (k - 3)))


def s_constraint(k: int) -> HomologyClass:
    """``S`` for ``k <= 3`` and ``S'`` from ``k = 4`` on, in ``CP2Blowup(k + 1)``."""
    return s_class(k) if k <= 3 else s_prime_class(k)


def _root(basis: Basis, a: int, minus: Iterable[int] = (), plus: Iterable[int] = (), double: Iterable[int] = ()):
    b = [0] * basis.k
    for i in minus:
        b[i - 1] += 1
    for i in plus:
        b[i - 1] -= 1
    for i in double:
        b[i - 1] += 2
    return HomologyClass(basis, (a, *b))


def _reflected(base: ExceptionalSystem, root: HomologyClass) -> ExceptionalSystem:
    return base.map(lambda c: cremona.reflect(c, root))


def tabulated_systems(k: int, side: str) -> tuple:
    """The explicitly described systems for ``1 <= k <= 8``.

    ``side="h"``: systems on ``CP2Blowup(k)`` orthogonal mod 2 to ``H``.
    ``side="s"``: systems on ``CP2Blowup(k + 1)`` orthogonal to
    :func:`s_constraint`.  Each family is a base system plus its images
    under reflections along listed roots.
    """
    if not 1 <= k <= MAX_FINITE_RANK:
        raise LatticeError("tabulated systems exist for 1 <= k <= 8")
    if side == "h":
        B = Basis.cp2(k)
        base = ExceptionalSystem(B, tuple(exceptional(i, B) for i in range(1, k + 1)))
        roots: list[HomologyClass] = []
        if k == 6:
            roots = [_root(B, 2, minus=range(1, 7))]
        elif k == 7:
            roots = [_root(B, 2, minus=range(1, 8), plus=[i]) for i in range(1, 8)]
        elif k == 8:
            roots = [
                _root(B, 2, minus=range(1, 9), plus=[i, j])
                for i, j in itertools.combinations(range(1, 9), 2)
            ]
    elif side == "s":
        B = Basis.cp2(k + 1)
        if k <= 3:
            classes = [cp2_class(1, 1, 1, *([0] * (k - 1)))] + [
                exceptional(i, B) for i in range(3, k + 2)
            ]
            return (ExceptionalSystem(B, tuple(classes)),)
        base = ExceptionalSystem(
            B,
            tuple(_root(B, 1, minus=[1, i]) for i in range(2, 5))
            + tuple(exceptional(j, B) for j in range(5, k + 2)),
        )
        roots = []
        if k == 6:
            roots = [_root(B, 1, minus=[5, 6, 7])]
        elif k == 7:
            roots = [_root(B, 1, minus=[5, 6, 7, 8], plus=[j]) for j in range(5, 9)]
            roots += [_root(B, 2, minus=[1, j, 5, 6, 7, 8]) for j in range(2, 5)]
        elif k == 8:
            roots = [
                _root(B, 1, minus=range(5, 10), plus=[i, j])
                for i, j in itertools.combinations(range(5, 10), 2)
            ]
            roots += [
                _root(B, 2, minus=[1, j, *range(5, 10)], plus=[p])
                for j in range(2, 5)
                for p in range(5, 10)
            ]
            roots += [
                _root(B, 3, double=[1], minus=[2, 3, 4, *range(5, 10)], plus=[q]) for q in range(2, 5)
            ]
    else:
        raise LatticeError(f"side must be 'h' or 's', got {side!r}")
    systems = [base] + [_reflected(base, r) for r in roots]
    return tuple(sorted(systems, key=lambda s: tuple(c.coeffs for c in s.classes)))


# -- census ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusRow:
    k: int
    z2_systems: tuple
    z_systems: tuple
    z_constraint: HomologyClass

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.z2_systems), len(self.z_systems)


def census_row(k: int) -> CensusRow:
    z2 = enumerate_systems(k, h_constraint(k), Mode.Z2_ORTHOGONAL, k)
    S = s_constraint(k)
    z = enumerate_systems(k + 1, S, Mode.Z_ORTHOGONAL, k)
    return CensusRow(k, z2, z, S)


def census(ks: Iterable[int] = range(1, MAX_FINITE_RANK + 1)) -> tuple:
    return tuple(census_row(k) for k in ks)
