"""Acceptance criteria, one test per criterion.

Every test records a ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary of a pytest run and by ``python tests/test_acceptance.py``.
Tolerances are exact throughout.
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _props import PROPERTIES  # noqa: E402

from cremona_lattice import cremona  # noqa: E402
from cremona_lattice.enumeration import (  # noqa: E402
    Mode,
    census,
    enumerate_systems,
    exceptional_orbit,
    exceptional_scan,
    tabulated_systems,
)
from cremona_lattice.lattice import (  # noqa: E402
    Basis,
    HomologyClass,
    KMResult,
    all_z2_classes,
    cp2_class,
    km_obstruction,
    signature,
    square,
    z2_reduce,
    line,
)
from cremona_lattice.notation import parse_class  # noqa: E402
from cremona_lattice.packing import PackingProblem, Verdict, blowup_class, rp2_complement_packing  # noqa: E402
from cremona_lattice.surgery import (  # noqa: E402
    Minus4Kind,
    classify_minus4,
    iota,
    iota_inverse,
    minus4_classes,
    sphere_admissible,
    sxs_minus4_classes,
    tau_pushoff,
    to_line_side,
)

RESULTS: dict[str, str] = {}

EXPECTED_SYSTEM_COUNTS = (1, 1, 1, 1, 1, 2, 8, 29)
EXPECTED_EXCEPTIONAL_COUNTS = (1, 3, 6, 10, 16, 27, 56, 240)


def record(key: str, ok: bool, detail: str) -> None:
    RESULTS[key] = f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail}"
    print(RESULTS[key])
    assert ok, RESULTS[key]


@pytest.fixture(scope="module")
def census_rows():
    start = time.perf_counter()
    rows = census()
    return rows, time.perf_counter() - start


def test_criterion_01_census_counts(census_rows):
    rows, elapsed = census_rows
    z2 = tuple(r.counts[0] for r in rows)
    z = tuple(r.counts[1] for r in rows)
    ok = z2 == EXPECTED_SYSTEM_COUNTS and z == EXPECTED_SYSTEM_COUNTS and elapsed < 60
    record("1", ok, f"Z2 counts {z2}, Z counts {z}, expected {EXPECTED_SYSTEM_COUNTS}, {elapsed:.2f}s")


@pytest.mark.parametrize("k", [7, 8])
def test_criterion_02_tabulated_systems(census_rows, k):
    rows, _ = census_rows
    row = rows[k - 1]
    parts = []
    ok = True
    for side, enumerated in (("h", row.z2_systems), ("s", row.z_systems)):
        listed = set(tabulated_systems(k, side))
        same = listed == set(enumerated)
        ok &= same
        parts.append(f"{side}: listed {len(listed)} vs enumerated {len(enumerated)} equal={same}")
    record(f"2 (k={k})", ok, "; ".join(parts))


def test_criterion_03_orbit_vs_scan():
    counts, agree = [], True
    for k in range(1, 9):
        orbit, scan = exceptional_orbit(k), exceptional_scan(k)
        agree &= orbit == scan
        counts.append(len(orbit))
    ok = agree and tuple(counts) == EXPECTED_EXCEPTIONAL_COUNTS
    record("3", ok, f"orbit == scan for k=1..8: {agree}; counts {tuple(counts)}")


def test_criterion_04_reduction_golden():
    c = parse_class("(7|4,1,2,2,2,2,2,2,2)")
    red, cert = cremona.reduce(c)
    reflections = sum(m.kind == cremona.REFLECT for m in cert)
    ok = (
        red == parse_class("(4|2,1,1,1,1,1,1,1,1)")
        and reflections == 3
        and cremona.replay(c, cert) == red
        and cremona.is_reduced(red)
    )
    record("4", ok, f"reduced to {red} with {reflections} reflections, {len(cert)} moves, replay ok")


def test_criterion_05_iota_golden():
    alpha = parse_class("3H-2U1-E4-...-E9")
    image = iota(alpha)
    expected = parse_class("3H'+E0'-E1'-...-E9'")
    km = km_obstruction(image)
    excess = square(image) - signature(image.basis)
    ok = image == expected and iota_inverse(image) == alpha and km is KMResult.SPHERE_EXCLUDED and excess == 8
    record("5", ok, f"iota -> {image}, round trip {iota_inverse(image) == alpha}, {km.value}, xi^2 - sigma = {excess}")


def test_criterion_06_minus4_classification():
    box = [
        HomologyClass(Basis.sxs(), (x, y))
        for x in range(-50, 51)
        for y in range(-50, 51)
        if 2 * x * y == -4 and -2 * (x + y) == 2
    ]
    sxs_ok = set(box) == set(sxs_minus4_classes()) == {
        parse_class("A-2B"),
        parse_class("B-2A"),
    }
    z = parse_class("E1-E2-E3-E4")
    res = classify_minus4(z, 10)
    cert_ok = (
        res.kind is Minus4Kind.CREMONA_CANONICAL
        and len(res.certificate) > 0
        and cremona.replay(z, res.certificate) == parse_class("-H+2E1-E2", Basis.cp2(4))
    )
    checked, canonical = 0, 0
    for k in range(2, 7):
        for cls in minus4_classes(k):
            if not sphere_admissible(cls):
                continue
            checked += 1
            r = classify_minus4(cls, 12)
            if r.kind is Minus4Kind.CREMONA_CANONICAL and cremona.replay(cls, r.certificate) == r.target:
                canonical += 1
    ok = sxs_ok and cert_ok and checked > 0 and checked == canonical
    record(
        "6",
        ok,
        f"SxS {{A-2B, B-2A}}: {sxs_ok}; E1-E2-E3-E4 certificate {res.certificate and [str(m) for m in res.certificate]}; "
        f"{canonical}/{checked} admissible classes at k<=6 CremonaCanonical",
    )


def test_criterion_07_tau_bijection(census_rows):
    rows, _ = census_rows
    parts, ok = [], True
    for row in rows:
        if row.k < 3:
            same = row.counts[0] == row.counts[1]
            parts.append(f"k={row.k} counts {row.counts[0]}={row.counts[1]}")
            ok &= same
            continue
        image = [to_line_side(tau_pushoff(s, row.z_constraint)) for s in row.z_systems]
        injective = len(set(image)) == len(image)
        surjective = set(image) == set(row.z2_systems)
        ok &= injective and surjective and len(row.z_systems) == len(row.z2_systems)
        parts.append(f"k={row.k} {len(image)}->{len(row.z2_systems)} bij={injective and surjective}")
    record("7", ok, "; ".join(parts))


def test_criterion_08_unique_rp2_class():
    parts, ok = [], True
    for k in (1, 2):
        B = Basis.cp2(k)
        admitting = [z for z in all_z2_classes(B) if any(z.bits) and enumerate_systems(k, z, Mode.Z2_ORTHOGONAL, k)]
        good = admitting == [z2_reduce(line(B))]
        ok &= good
        parts.append(f"k={k}: {[str(z) for z in admitting]}")
    record("8", ok, "nonzero Z2 classes with a full system: " + "; ".join(parts))


def test_criterion_09_packing_golden():
    from fractions import Fraction

    sizes = [Fraction(1, 3)] * 8
    res = rp2_complement_packing(sizes)
    v = blowup_class(PackingProblem.cp2_minus_rp2(1, sizes))
    scaled = HomologyClass(v.basis, tuple(6 * x for x in v.coeffs))
    ok = res.verdict is Verdict.YES and scaled == cp2_class(7, 4, 1, *([2] * 7))
    record("9", ok, f"verdict {res.verdict.value}, blow-up vector x6 = {scaled}")


def test_criterion_10_property_suites():
    parts, ok = [], True
    for name, check in PROPERTIES.items():
        count, bad = check()
        ok &= bad == 0 and count >= 10_000
        parts.append(f"{name} {bad}/{count}")
    record("10", ok, "failures/instances: " + ", ".join(parts))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
