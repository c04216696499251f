"""Property checks shared by the unit suites and the acceptance run.

Each check returns ``(instances, failures)`` so callers can report both.
"""

from __future__ import annotations

import itertools
import random

from cremona_lattice import cremona
from cremona_lattice.lattice import Basis, HomologyClass, canonical_class, pair, square
from cremona_lattice.surgery import iota

RANDOM_INSTANCES = 10_000
SEED = 20240611


def random_class(rng: random.Random, k: int, spread: int = 20) -> HomologyClass:
    return HomologyClass(Basis.cp2(k), tuple(rng.randint(-spread, spread) for _ in range(k + 1)))


def random_move(rng: random.Random, k: int) -> cremona.CremonaMove:
    return rng.choice(cremona.generators(k))


def random_positive_class(rng: random.Random) -> HomologyClass:
    while True:
        k = rng.randint(3, 9)
        a = rng.randint(1, 40)
        c = HomologyClass(Basis.cp2(k), (a, *(rng.randint(-a, a) for _ in range(k))))
        if square(c) > 0:
            return c


def random_parity_class(rng: random.Random, k: int, spread: int = 15) -> HomologyClass:
    coeffs = [rng.randint(-spread, spread) for _ in range(k + 1)]
    if sum(coeffs[1:4]) % 2:
        coeffs[1] += 1
    return HomologyClass(Basis.mbasis(k), tuple(coeffs))


def small_box(k: int, r: int = 2):
    basis = Basis.cp2(k)
    for coeffs in itertools.product(range(-r, r + 1), repeat=k + 1):
        yield HomologyClass(basis, coeffs)


def parity_box(k: int, r: int = 2):
    basis = Basis.mbasis(k)
    for coeffs in itertools.product(range(-r, r + 1), repeat=k + 1):
        if sum(coeffs[1:4]) % 2 == 0:
            yield HomologyClass(basis, coeffs)


# -- the six properties ------------------------------------------------------------------


def check_involutive(n: int = RANDOM_INSTANCES) -> tuple[int, int]:
    rng = random.Random(SEED)
    bad = count = 0
    for _ in range(n):
        k = rng.randint(2, 10)
        c, m = random_class(rng, k), random_move(rng, k)
        count += 1
        bad += cremona.apply_move(cremona.apply_move(c, m), m) != c
    for c in small_box(3):
        for m in cremona.generators(3):
            count += 1
            bad += cremona.apply_move(cremona.apply_move(c, m), m) != c
    return count, bad


def check_pairing(n: int = RANDOM_INSTANCES) -> tuple[int, int]:
    rng = random.Random(SEED + 1)
    bad = count = 0
    for _ in range(n):
        k = rng.randint(2, 10)
        a, b, m = random_class(rng, k), random_class(rng, k), random_move(rng, k)
        count += 1
        bad += pair(cremona.apply_move(a, m), cremona.apply_move(b, m)) != pair(a, b)
    box = list(small_box(3, 1))
    for m in cremona.generators(3):
        for a, b in itertools.product(box, repeat=2):
            count += 1
            bad += pair(cremona.apply_move(a, m), cremona.apply_move(b, m)) != pair(a, b)
    return count, bad


def check_k0_fixed(n: int = RANDOM_INSTANCES) -> tuple[int, int]:
    rng = random.Random(SEED + 2)
    bad = count = 0
    for k in range(0, 13):
        K = canonical_class(Basis.cp2(k))
        for m in cremona.generators(k):
            count += 1
            bad += cremona.apply_move(K, m) != K
    for _ in range(n):
        k = rng.randint(3, 12)
        K = canonical_class(Basis.cp2(k))
        seq = [random_move(rng, k) for _ in range(rng.randint(1, 8))]
        count += 1
        bad += cremona.replay(K, seq) != K
    return count, bad


def check_reduce_idempotent(n: int = RANDOM_INSTANCES) -> tuple[int, int]:
    rng = random.Random(SEED + 3)
    bad = count = 0
    instances = [random_positive_class(rng) for _ in range(n)]
    instances += [c for c in small_box(3) if square(c) > 0 and c.degree > 0]
    for c in instances:
        red, _ = cremona.reduce(c)
        again, cert = cremona.reduce(red)
        count += 1
        bad += again != red or cert != ()
    return count, bad


def check_certificate_replay(n: int = RANDOM_INSTANCES) -> tuple[int, int]:
    rng = random.Random(SEED + 4)
    bad = count = 0
    instances = [random_positive_class(rng) for _ in range(n)]
    instances += [c for c in small_box(3) if square(c) > 0 and c.degree > 0]
    for c in instances:
        red, cert = cremona.reduce(c)
        count += 1
        bad += cremona.replay(c, cert) != red or cremona.replay(red, cremona.inverse(cert)) != c
    return count, bad


def check_iota_pairing(n: int = RANDOM_INSTANCES) -> tuple[int, int]:
    rng = random.Random(SEED + 5)
    bad = count = 0
    for _ in range(n):
        k = rng.randint(3, 10)
        a, b = random_parity_class(rng, k), random_parity_class(rng, k)
        count += 1
        bad += pair(iota(a), iota(b)) != pair(a, b)
    box = list(parity_box(3, 1))
    for a, b in itertools.product(box, repeat=2):
        count += 1
        bad += pair(iota(a), iota(b)) != pair(a, b)
    return count, bad


PROPERTIES = {
    "move involutivity": check_involutive,
    "pairing preservation": check_pairing,
    "K0 fixedness": check_k0_fixed,
    "reduce idempotence": check_reduce_idempotent,
    "certificate replay": check_certificate_replay,
    "iota pairing preservation": check_iota_pairing,
}
