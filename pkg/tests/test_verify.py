from fractions import Fraction

import pytest
from hypothesis import given, settings

from veronese_blocks import verify
from veronese_blocks.confblocks import cb_vector_omega1
from veronese_blocks.core import FCurve, PreconditionError
from veronese_blocks.veronese import WeightData, jensen_closed_form, standard_weights
from veronese_blocks.verify import (
    FalsificationError,
    check_contraction,
    check_determinant_lemma,
    check_increasing,
    check_kequalsell,
    check_part_symmetry,
    check_poscomb,
    check_same_face,
    check_wall_independence,
    iter_fcurves,
    level_shadow_holds,
    poscomb_decompose,
    proportionality_ratio,
    solve_lower_triangular,
)

from strategies import allowable_weights, fcurves


def test_solve_lower_triangular():
    M = [[Fraction(2), 0, 0], [Fraction(1), Fraction(3), 0], [Fraction(0), Fraction(1), Fraction(1, 2)]]
    x = solve_lower_triangular(M, [Fraction(4), Fraction(5), Fraction(2)])
    assert x == [2, 1, 2]
    with pytest.raises(ZeroDivisionError):
        solve_lower_triangular([[Fraction(0)]], [Fraction(1)])


@pytest.mark.parametrize(
    "ell, g, expected",
    [(1, 3, {1: 2, 3: 0}), (2, 4, {2: 12, 4: 0}), (3, 7, {3: 220, 5: 48, 7: 8})],
)
def test_poscomb_regressions(ell, g, expected):
    res = poscomb_decompose(ell, g)
    assert res.coefficients == expected
    assert not any(res.residual.values)


def test_poscomb_reconstructs():
    for g in range(1, 9):
        for ell in range(1, g + 1):
            res = poscomb_decompose(ell, g)
            cb = cb_vector_omega1(ell, g)
            for j in range(1, g + 1):
                recon = sum(c * jensen_closed_form(lv, g, j) for lv, c in res.coefficients.items())
                assert recon == cb[j - 1]
            assert check_poscomb(ell, g)


def test_poscomb_falsification(monkeypatch):
    monkeypatch.setattr(verify, "cb_vector_omega1", lambda ell, g: [0, -1, 0, 5][:g])
    with pytest.raises(FalsificationError):
        poscomb_decompose(2, 4)
    report = check_poscomb(2, 4)
    assert not report and "negative" in report.witness


def test_poscomb_off_parity_falsification(monkeypatch):
    monkeypatch.setattr(verify, "cb_vector_omega1", lambda ell, g: [1, 1, 1])
    with pytest.raises(FalsificationError, match="off parity"):
        poscomb_decompose(1, 3)


def test_poscomb_range():
    with pytest.raises(PreconditionError):
        poscomb_decompose(4, 3)


@pytest.mark.parametrize("ell, g", [(1, 5), (4, 4), (2, 6), (3, 10)])
def test_increasing(ell, g):
    report = check_increasing(ell, g)
    assert report, report.witness


def test_increasing_detects_decrease(monkeypatch):
    monkeypatch.setattr(verify, "cb_vector_omega1", lambda ell, g: [3, 0, 1, 0, 1])
    report = check_increasing(1, 5)
    assert not report and report.witness["i"] == 1


@pytest.mark.parametrize("ell, imax", [(3, 12), (1, 10), (5, 16)])
def test_determinant_lemma(ell, imax):
    report = check_determinant_lemma(ell, imax)
    # at level 1 no same-parity pair j1 < j2 exists, so the check is vacuous
    assert report and (report.outputs["checked"] > 0) == (ell > 1)


def test_determinant_lemma_range():
    with pytest.raises(PreconditionError):
        check_determinant_lemma(0, 5)


def test_proportionality_ratio():
    F = Fraction
    assert proportionality_ratio([F(2), F(0), F(4)], [F(1), F(0), F(2)]) == 2
    assert proportionality_ratio([F(2), F(1)], [F(1), F(0)]) is None
    assert proportionality_ratio([F(2), F(3)], [F(1), F(1)]) is None
    assert proportionality_ratio([F(0)], [F(0)]) == 0


@pytest.mark.parametrize("g", range(2, 9))
def test_low_levels_proportional(g):
    assert check_same_face(1, g).outputs["ratio"] == "2"
    if g >= 3:
        assert check_same_face(2, g).outputs["ratio"] == str(3 * 2 ** (g - 2))


def test_same_face_examples():
    r = check_same_face(2, 3)
    assert r and r.outputs["ratio"] == "6"
    r = check_same_face(3, 5)
    assert r and not r.outputs["proportional"]
    assert r.outputs["cb_zero_set"] == r.outputs["veronese_zero_set"] == [1, 2, 4]
    assert check_same_face(1, 2)


def test_same_face_range():
    with pytest.raises(PreconditionError):
        check_same_face(3, 3)


def test_same_face_detects_zero_mismatch(monkeypatch):
    monkeypatch.setattr(verify, "cb_vector_omega1", lambda ell, g: [1, 1, 1])
    report = check_same_face(1, 3)
    assert not report and report.witness["cb_zero"] == []


def test_kequalsell():
    for n in range(6, 17, 2):
        for ell in range(1, 6):
            report = check_kequalsell(ell, n)
            assert report, report.witness
    with pytest.raises(PreconditionError):
        check_kequalsell(2, 7)


def test_level_shadow_holds():
    assert all(level_shadow_holds(ell, t) for ell in range(1, 6) for t in range(15))


def test_iter_fcurves_counts():
    # ordered compositions of n into 4 parts, and ordered set partitions (surjections)
    assert sum(1 for _ in iter_fcurves(6, True)) == 10
    assert sum(1 for _ in iter_fcurves(5, False)) == 240


@pytest.mark.parametrize("ell, g", [(1, 3), (2, 5), (3, 6)])
def test_wall_independence_standard(ell, g):
    report = check_wall_independence(standard_weights(ell, g))
    assert report and report.outputs["curves_on_walls"] > 0


def test_wall_independence_counts():
    out = check_wall_independence(standard_weights(2, 8)).outputs
    assert (out["examined"], out["curves_on_walls"], out["variants_checked"]) == (680, 624, 2016)


def test_wall_independence_nonsymmetric_small_n():
    F = Fraction
    w = WeightData(2, F(0), (F(1, 2), F(1, 2), F(1, 2), F(1, 2), F(1, 2), F(1, 2)))
    assert check_wall_independence(w)
    w = WeightData(2, F(1, 3), (F(1, 3), F(1, 3), F(2, 3), F(2, 3), F(1, 3), F(1, 6), F(1, 6)))
    report = check_wall_independence(w)
    assert report and report.outputs["examined"] > 1000


@settings(max_examples=25, deadline=None)
@given(allowable_weights(n_min=5, n_max=6))
def test_wall_independence_random(w):
    assert check_wall_independence(w, nmax_curves=400)


def test_wall_independence_vacuous():
    # no integer phi anywhere: nothing to bump
    F = Fraction
    w = WeightData(2, F(1, 7), (F(23, 35),) * 4 + (F(8, 35),))
    report = check_wall_independence(w)
    assert report and report.outputs["curves_on_walls"] == 0


def test_wall_independence_detects_dependence(monkeypatch):
    real = verify.intersect
    monkeypatch.setattr(verify, "intersect", lambda F, w, degrees=None: real(F, w) + (degrees is not None))
    report = check_wall_independence(standard_weights(1, 3))
    assert not report and "bumped" in report.witness


def test_wall_independence_needs_degree_two():
    with pytest.raises(PreconditionError):
        check_wall_independence(standard_weights(3, 3))


@pytest.mark.parametrize("ell, k, n", [(7, 2, 10), (5, 2, 8), (9, 4, 8), (8, 3, 12)])
def test_contraction(ell, k, n):
    report = check_contraction(ell, k, n)
    assert report and not report.outputs["excluded"], report.witness


def test_contraction_exclusion_reports_fact():
    report = check_contraction(4, 3, 8)
    assert report.outputs["excluded"]
    assert report.outputs["recorded_facts"] == {"2,2,2,2": "D(sl2, 4, 3w1^8) . F(2,2,2,2) = 0"}


def test_contraction_exclusion_without_fact():
    report = check_contraction(5, 1, 8)
    assert report.outputs["excluded"] and report.outputs["recorded_facts"] == {}


@settings(max_examples=30, deadline=None)
@given(fcurves(7))
def test_part_symmetry_report(F):
    w = WeightData(2, Fraction(0), (Fraction(3, 7),) * 7)
    report = check_part_symmetry(F, w)
    assert report and len(report.outputs["values"]) == 1
