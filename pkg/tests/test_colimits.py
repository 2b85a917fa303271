import math

import pytest

from kummer.colimits import (
    CaseOneEvidence,
    CaseTwoEvidence,
    ColimitElement,
    colimit_height,
    colimit_order,
    counterexample_tower,
    direct_limit_split,
    divisible_tower,
    level_sections,
    limit_no_section_certificate,
    limit_purity_witness,
    section_compatibility_solvable,
    stabilizing_tower,
)
from kummer.errors import EvidenceError, InputError, UnsupportedError
from kummer.groups import FgAbGroup, element_order
from kummer.matrices import IntMatrix
from kummer.towers import validate_tower

from kummer.fixtures import (
    divisible_case_one_evidence,
    doomed_bounded_evidence,
    doomed_divisible_evidence,
)
from oracles import verify_section_on_all


def test_counterexample_levels_have_the_stated_shape():
    for p in (2, 3):
        t = counterexample_tower(p)
        for k in (1, 2, 3):
            seq = t.sequence(k)
            assert seq.A.invariant_factors == tuple(
                p ** i for i in range(1, k))
            assert seq.B.invariant_factors == tuple(
                p ** i for i in range(1, k + 1))
            assert seq.C.invariant_factors == (p ** k,)
        report = validate_tower(t.prefix(4))
        assert report, report.violations


def test_counterexample_squares_commute_exactly():
    for p in (2, 3):
        t = counterexample_tower(p)
        for k in range(1, 4):
            lo, hi = t.sequence(k), t.sequence(k + 1)
            lm = t.step(k)
            assert (hi.f @ lm.alpha).same_map(lm.beta @ lo.f)
            assert (hi.g @ lm.beta).same_map(lm.gamma @ lo.g)


def test_every_finite_level_splits():
    t = counterexample_tower(2)
    for n in range(1, 5):
        s = level_sections(t, n)
        assert s is not None
        assert verify_section_on_all(t.sequence(n), s)


def test_element_pushing_and_canonical_descent():
    t = counterexample_tower(2)
    e = t.element(1, "C", [1])
    up = e.push(4)
    assert up.level == 4
    assert up.canonical().level == 1
    assert up == e
    assert e != t.element(1, "C", [0])
    with pytest.raises(InputError):
        up.push(2)
    with pytest.raises(InputError):
        ColimitElement(t, 1, "D", t.sequence(1).C.generator(0))


def test_colimit_order_is_level_independent():
    t = counterexample_tower(3)
    e = t.element(1, "C", [1])
    assert colimit_order(e) == 3
    assert colimit_order(e.push(3)) == 3


def test_heights_in_b_match_closed_form_and_probe():
    t = counterexample_tower(2)
    probe = colimit_height(t.element(1, "B", [1]), 3)
    assert (probe.height, probe.saturated, probe.exact) == (0, False, True)
    probe = colimit_height(t.element(2, "B", [0, 2]), 3)
    assert probe.height == 1 and not probe.saturated
    t3 = counterexample_tower(3)
    probe = colimit_height(t3.element(3, "B", [0, 0, 9]), 4)
    assert probe.height == 2
    zero = colimit_height(t.element(2, "B", [0, 0]), 3)
    assert zero.saturated


def test_heights_in_c_are_unbounded():
    t = counterexample_tower(2)
    for depth in (1, 3, 5):
        probe = colimit_height(t.element(1, "C", [1]), depth)
        assert probe.height == depth and probe.saturated


def test_closed_form_agrees_with_generic_probe_exhaustively():
    t = counterexample_tower(2)
    for level in (1, 2, 3):
        grp = t.sequence(level).B
        for x in grp.elements():
            e = ColimitElement(t, level, "B", x)
            closed = colimit_height(e, 3)
            generic = colimit_height(e.push(level + 1), 3)
            if closed.saturated:
                assert generic.saturated
            else:
                assert generic.height == closed.height


def test_compatibility_congruences():
    ce = counterexample_tower(2)
    for n in range(1, 5):
        assert not section_compatibility_solvable(ce, n)
    st = stabilizing_tower(2)
    assert section_compatibility_solvable(st, 2)
    assert section_compatibility_solvable(st, 3)


def test_no_section_certificate_is_valid():
    for p, depth in ((2, 4), (3, 3)):
        cert = limit_no_section_certificate(counterexample_tower(p), depth)
        assert cert.valid
        assert cert.p == p
        assert cert.divisibility_verified
        assert all(bad == 0 for _, bad in cert.heights_cross_checked)
        assert all(not ok for _, ok in cert.compatibility)
        assert len(cert.inference) >= 3
    with pytest.raises(UnsupportedError):
        limit_no_section_certificate(stabilizing_tower(2), 2)
    with pytest.raises(InputError):
        limit_no_section_certificate(counterexample_tower(2), 0)


def test_limit_purity_witnesses_up_to_p_cubed():
    for p in (2, 3):
        t = counterexample_tower(p)
        for k in (0, 1, 2, 3):
            for u in (1, p + 1):
                c = t.element(k or 1, "C", [u if k else 0])
                b = limit_purity_witness(t, c)
                assert colimit_order(b) == colimit_order(c)
                assert t.element(b.level, "C",
                                 t.sequence(b.level).g(b.value).coords) == \
                    c.push(b.level)


def test_purity_witness_rejects_non_c_elements():
    t = counterexample_tower(2)
    with pytest.raises(InputError):
        limit_purity_witness(t, t.element(1, "B", [0]))


def test_case_two_split_and_premature_claim():
    t = stabilizing_tower(2)
    res = direct_limit_split(t, CaseTwoEvidence(level=2))
    assert res.case == 2
    assert verify_section_on_all(t.sequence(res.level), res.section)
    with pytest.raises(EvidenceError) as err:
        direct_limit_split(t, CaseTwoEvidence(level=1))
    assert err.value.check == "stabilization"


def test_case_one_split_on_the_divisible_family():
    for p in (2, 3):
        t = divisible_tower(p)
        ev = divisible_case_one_evidence(t, 3)
        res = direct_limit_split(t, ev)
        assert res.case == 1
        assert res.divisible_section is not None
        seq = t.sequence(res.level)
        assert verify_section_on_all(seq, res.section)
        assert any("divisible" in note for note in res.notes)


def test_counterexample_defeats_both_splitting_routes():
    t = counterexample_tower(2)
    with pytest.raises(EvidenceError) as err:
        direct_limit_split(t, CaseTwoEvidence(level=3))
    assert err.value.check == "stabilization"
    with pytest.raises(EvidenceError) as err:
        direct_limit_split(t, doomed_divisible_evidence(t, 3))
    assert err.value.check == "V4"
    assert "finite height" in str(err.value)
    with pytest.raises(EvidenceError) as err:
        direct_limit_split(t, doomed_bounded_evidence(t, 3))
    assert err.value.check == "V3"


def test_case_one_shape_checks_reject_malformed_evidence():
    t = divisible_tower(2)
    good = divisible_case_one_evidence(t, 2)
    with pytest.raises(EvidenceError) as err:
        direct_limit_split(t, CaseOneEvidence(
            level=2, divisible_rank=good.divisible_rank,
            precision=good.precision, m_group=FgAbGroup.free(1),
            pi_divisible=good.pi_divisible, pi_bounded=good.pi_bounded))
    assert err.value.check == "V1"
    with pytest.raises(EvidenceError) as err:
        direct_limit_split(t, divisible_case_one_evidence(t, 3, precision=2))
    assert err.value.check == "V5"


def test_prefix_is_cached_and_consistent():
    t = counterexample_tower(2)
    assert t.sequence(2) is t.sequence(2)
    pre = t.prefix(3)
    assert pre.n == 3
    assert pre.seqs[1] is t.sequence(2)
