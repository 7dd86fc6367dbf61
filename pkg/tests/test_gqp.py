import math
from fractions import Fraction

import pytest

from wreathfpp.charpoly import BRACKET, EXACT_ONE, EXACT_RATIONAL, EXACT_ZERO
from wreathfpp.constructions import affine_group
from wreathfpp.errors import (
    DegreeTooSmallError,
    NotNormalError,
    NotSubgroupError,
    TrivialSubgroupError,
)
from wreathfpp.gqp import (
    NOT_TFG,
    TFG,
    UNKNOWN,
    classify_cosets,
    fpp_gqp,
    gqp_report,
    hausdorff_dimension,
    level_transitive,
    martingale,
    tfg_status,
    validate_gqp,
)
from wreathfpp.permgroup import alternating_group, format_perm, generate, parse_perm_list, symmetric_group
from wreathfpp.treeoracle import enumerate_count_gqp, recurrence_p

KLEIN = "(1,2)(3,4),(1,3)(2,4)"
S4 = "(1,2),(1,2,3,4)"


def affine(d):
    return validate_gqp(d, *affine_group(d))


class TestValidate:
    def test_affine3(self):
        spec = validate_gqp(3, "(1,2,3)", "(1,2,3),(2,3)")
        assert spec.index == 2 and len(spec.P) == 6

    def test_not_normal(self):
        with pytest.raises(NotNormalError):
            validate_gqp(4, "(1,2)", S4)

    def test_q_equals_p(self):
        assert validate_gqp(3, "(1,2),(1,2,3)", "(1,2),(1,2,3)").index == 1

    def test_trivial(self):
        with pytest.raises(TrivialSubgroupError):
            validate_gqp(3, "()", "(1,2,3)")

    def test_not_subgroup(self):
        with pytest.raises(NotSubgroupError):
            validate_gqp(4, "(1,2)", "(3,4)")

    def test_degree(self):
        with pytest.raises(DegreeTooSmallError, match="d = 2"):
            validate_gqp(2, "(1,2)", "(1,2)")

    def test_identity_coset_first(self):
        spec = validate_gqp(4, KLEIN, S4)
        assert spec.cosets[0].representative.is_identity()
        assert spec.index == 6


class TestFpp:
    def test_affine3_half(self):
        v = fpp_gqp(affine(3))
        assert v.is_exact and v.value == Fraction(1, 2)

    def test_sym3(self):
        assert fpp_gqp(validate_gqp(3, "(1,2),(1,2,3)", "(1,2),(1,2,3)")).kind == EXACT_ZERO

    def test_transposition_group(self):
        assert fpp_gqp(validate_gqp(3, "(1,2)", "(1,2)")).kind == EXACT_ONE

    def test_bracket_summand(self):
        # Q = <(1,2)(3,4)> in P = <(1,2),(3,4)>: cosets Q and (1,2)Q = {(1,2),(3,4)}
        spec = validate_gqp(4, "(1,2)(3,4)", "(1,2),(3,4)")
        v = fpp_gqp(spec)
        assert v.kind == BRACKET
        recs = classify_cosets(spec)
        lo = sum(r.fpp.lo for r in recs) / 2
        hi = sum(r.fpp.hi for r in recs) / 2
        assert v.lo <= hi and lo <= v.hi
        assert v.hi - v.lo <= Fraction(1, 2 ** 60)

    def test_decomposition_matches_oracle(self):
        spec = validate_gqp(4, "(1,2)(3,4)", "(1,2),(3,4)")
        n = 2
        res = enumerate_count_gqp(spec.Q, spec.P, n)
        mean = sum(recurrence_p(A.elements, n)[-1] for A in spec.cosets) / spec.index
        assert res.proportion == mean

    def test_affine_oracle(self):
        spec = affine(3)
        res = enumerate_count_gqp(spec.Q, spec.P, 2)
        assert res.proportion == (Fraction(19, 81) + 1) / 2


class TestPredicates:
    @pytest.mark.parametrize("d,Q,P,expected", [
        (3, "(1,2,3)", "(1,2,3),(2,3)", True),
        (4, "(1,2)(3,4)", "(1,2)(3,4),(1,2)", False),
        (4, KLEIN, S4, True),
    ])
    def test_transitivity_and_martingale(self, d, Q, P, expected):
        spec = validate_gqp(d, Q, P)
        assert level_transitive(spec) is expected
        assert martingale(spec) is expected

    def test_hausdorff(self):
        h = hausdorff_dimension(affine(3))
        assert (h.q_order, h.sym_order) == (3, 6)
        assert h.approx == pytest.approx(math.log(3) / math.log(6))
        full = hausdorff_dimension(validate_gqp(4, S4, S4))
        assert full.approx == 1.0
        c2 = hausdorff_dimension(validate_gqp(4, KLEIN, S4))
        assert (c2.q_order, c2.sym_order) == (4, 24)
        assert c2.approx == pytest.approx(0.4362, abs=1e-4)

    def test_hausdorff_below_one(self):
        assert 0 < hausdorff_dimension(validate_gqp(4, KLEIN, S4)).approx < 1

    def test_tfg(self):
        st = tfg_status(affine(3))
        assert (st.status, st.reason) == (NOT_TFG, "commutator")
        A5 = ",".join(format_perm(g) for g in alternating_group(5).gens())
        assert tfg_status(validate_gqp(5, A5, A5)).status == TFG

    def test_tfg_global_fixed_point(self):
        # A5 on points 1..5 inside Sym(6): perfect but fixes 6
        A5 = ",".join(format_perm(g) for g in alternating_group(5).gens())
        st = tfg_status(validate_gqp(6, A5, A5))
        assert (st.status, st.reason) == (NOT_TFG, "global_fixed_point")

    def test_tfg_unknown(self):
        gens = "(1,2,3),(3,4,5),(6,7,8),(8,9,10)"
        spec = validate_gqp(10, gens, gens)
        assert len(spec.Q) == 3600
        assert tfg_status(spec).status == UNKNOWN


class TestCosets:
    def test_affine3_unifix(self):
        recs = classify_cosets(affine(3))
        assert recs[0].fpp.kind == EXACT_ZERO
        assert recs[1].unifix and recs[1].fpp.kind == EXACT_ONE

    def test_affine4(self):
        recs = classify_cosets(affine(4))
        other = recs[1]
        assert not other.unifix and other.fpp.kind == EXACT_ZERO
        assert other.avg_fixed_exact == 1

    def test_transitive_q_invariants(self):
        for d in (3, 4, 5, 7):
            for r in classify_cosets(affine(d)):
                assert r.avg_fixed_exact == 1
                assert r.fpp.kind in (EXACT_ZERO, EXACT_ONE)

    def test_report_record(self):
        rec = gqp_report(affine(5)).to_record()
        assert rec["index"] == len(rec["coset_records"]) == 4
        assert rec["fpp"]["value"] == "3/4"
        assert rec["fpp"]["kind"] == EXACT_RATIONAL
        assert rec["tfg"]["status"] == NOT_TFG
