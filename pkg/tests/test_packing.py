from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona_lattice import cremona
from cremona_lattice.errors import LatticeError
from cremona_lattice.lattice import HomologyClass, cp2_class
from cremona_lattice.notation import parse_class
from cremona_lattice.packing import (
    PackingProblem,
    Verdict,
    blowup_class,
    is_symplectic_class,
    packing_feasible,
    rp2_complement_packing,
)


def test_blowup_class_examples():
    assert blowup_class(PackingProblem.sxs(1, F(1, 2), [F(1, 3)])) == cp2_class(F(7, 6), F(2, 3), F(1, 6))
    assert blowup_class(PackingProblem.cp2(1)) == cp2_class(1)
    v = blowup_class(PackingProblem.sxs(1, F(1, 2), [F(1, 3)] * 8))
    assert HomologyClass(v.basis, tuple(6 * x for x in v.coeffs)) == parse_class("(7|4,1,2,2,2,2,2,2,2)")
    assert blowup_class(PackingProblem.sxs(2, 3)) == parse_class("3A+2B")


def test_problem_validation():
    with pytest.raises(LatticeError):
        PackingProblem.cp2(1, [0])
    with pytest.raises(LatticeError):
        PackingProblem.cp2(0, [])
    with pytest.raises(LatticeError):
        PackingProblem.sxs(1, F(-1, 2))
    with pytest.raises(LatticeError):
        PackingProblem.cp2(1, [0.5])


@pytest.mark.parametrize(
    "text, verdict",
    [
        ("(7|4,1,2,2,2,2,2,2,2)", Verdict.YES),
        ("(1|1,1,1,1)", Verdict.NO),
        ("(3|1,1,1)", Verdict.YES),
        ("(3|1,1,1,0)", Verdict.INCONCLUSIVE),
        ("(2|1,1)", Verdict.INCONCLUSIVE),
        ("(5|3,3)", Verdict.NO),
        ("(3|1,-1)", Verdict.NO),
        ("(1|)", Verdict.YES),
        ("(-1|)", Verdict.NO),
    ],
)
def test_is_symplectic_class(text, verdict):
    assert is_symplectic_class(parse_class(text)).verdict is verdict


def test_yes_certificate_replays_to_reduced_vector():
    v = parse_class("(7|4,1,2,2,2,2,2,2,2)")
    res = is_symplectic_class(v)
    assert cremona.replay(v, res.certificate) == res.reduced == parse_class("(4|2,1,1,1,1,1,1,1,1)")
    assert cremona.is_reduced(res.reduced)


def test_packing_examples():
    assert packing_feasible(PackingProblem.sxs(1, F(1, 2), [F(1, 3)] * 8)).verdict is Verdict.YES
    assert packing_feasible(PackingProblem.cp2(1, [2])).verdict is Verdict.NO
    assert packing_feasible(PackingProblem.cp2(1, [F(1, 3)] * 3)).verdict is Verdict.YES
    assert rp2_complement_packing([F(1, 3)] * 8).verdict is Verdict.YES
    assert rp2_complement_packing([]).verdict is Verdict.YES
    assert rp2_complement_packing([1]).verdict is Verdict.NO


def test_known_cp2_packing_thresholds():
    # two equal balls fit iff 2 lambda < 1; five iff 5 lambda < 2
    assert packing_feasible(PackingProblem.cp2(1, [F(49, 100)] * 2)).verdict is Verdict.YES
    assert packing_feasible(PackingProblem.cp2(1, [F(51, 100)] * 2)).verdict is Verdict.NO
    assert packing_feasible(PackingProblem.cp2(1, [F(39, 100)] * 5)).verdict is Verdict.YES
    assert packing_feasible(PackingProblem.cp2(1, [F(41, 100)] * 5)).verdict is Verdict.NO


sizes = st.lists(st.fractions(min_value=F(1, 30), max_value=1, max_denominator=30), min_size=1, max_size=8)


@settings(max_examples=300, deadline=None)
@given(sizes, st.integers(0, 7), st.fractions(min_value=F(1, 20), max_value=1, max_denominator=20))
def test_enlarging_a_ball_never_turns_no_into_yes(lams, idx, extra):
    idx %= len(lams)
    base = packing_feasible(PackingProblem.cp2(1, lams)).verdict
    bigger = list(lams)
    bigger[idx] += extra
    grown = packing_feasible(PackingProblem.cp2(1, bigger)).verdict
    if base is Verdict.NO:
        assert grown is not Verdict.YES


@settings(max_examples=300, deadline=None)
@given(sizes, st.fractions(min_value=F(1, 10), max_value=10, max_denominator=12))
def test_scale_invariance(lams, scale):
    v = blowup_class(PackingProblem.cp2(1, lams))
    w = HomologyClass(v.basis, tuple(scale * x for x in v.coeffs))
    assert is_symplectic_class(v).verdict is is_symplectic_class(w).verdict


@settings(max_examples=300, deadline=None)
@given(sizes)
def test_yes_certificates_replay(lams):
    v = blowup_class(PackingProblem.cp2(1, lams))
    res = is_symplectic_class(v)
    if res.verdict is Verdict.YES:
        red = cremona.replay(v, res.certificate)
        assert red == res.reduced and cremona.is_reduced(red)
        assert red.degree > 0 and all(b > 0 for b in red.tail)
