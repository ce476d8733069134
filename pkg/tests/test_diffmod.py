import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import brute_dwork, rand_concrete_dwork, rand_dwork_datum, padic_val_oracle
from padic_radii.diffmod import (
    CyclicOperator,
    Piece,
    RadiiProfile,
    RadiusMultiset,
    antecedent_exists,
    antecedent_inverse,
    antecedent_transform,
    check_subharmonicity,
    check_variation,
    descendant_multiset,
    descendant_sum_check,
    direct_sum_profile,
    dwork_operator,
    dwork_profile,
    is_separated,
    padic_val,
    profile_from_csv,
    profile_to_csv,
    radii_profile,
    robba_condition,
    tame_pullback_datum,
    tame_transform,
    translate_concrete,
)
from padic_radii.newton import ValuedPoly
from padic_radii.plfun import Interval, PLFun, pl_max
from padic_radii.scalars import LogValue

F = Fraction


def exact(p, *fs):
    return RadiiProfile.from_exact(p, list(fs))


def knots(f):
    return [(x, y) for x, y in f.knots]


# radii_profile -----------------------------------------------------------------


def test_radii_dwork_example_visible_part():
    dom = Interval.open(0, 3)
    prof = radii_profile(dwork_operator(3, ValuedPoly({1: -2})), dom)
    first = prof.entries[0][0]
    assert first.exact and first.domain == Interval.open(0, F(3, 4))
    assert knots(first.lower) == [(0, 2), (F(3, 4), F(5, 4))]
    # past the visibility threshold the entry is only bracketed
    rest = prof.entries[0][1]
    assert not rest.exact and rest.domain.lo_closed
    f = dwork_profile(3, ValuedPoly({1: -2}), dom)
    for x in (F(3, 4), 1, 2, F(5, 2)):
        lo, hi = prof.envelope_at(0, x)
        assert lo <= f.value(x) <= hi


def test_radii_rank_two_example():
    op = CyclicOperator(2, (ValuedPoly({0: -2}), ValuedPoly({}), ValuedPoly({0: 0})))
    prof = radii_profile(op, Interval(0, 3, False, True))
    for k in range(2):
        first, second = prof.entries[k]
        assert first.exact and knots(first.lower) == [(0, 2), (1, 2)]
        assert not second.exact and second.domain == Interval.closed(1, 3)
        assert knots(second.upper) == [(1, 2), (3, 4)]


def test_radii_invisible_operator():
    op = CyclicOperator(3, (ValuedPoly({0: 10}), ValuedPoly({0: 0})))
    prof = radii_profile(op, Interval.open(0, 1))
    (pc,) = prof.entries[0]
    assert not pc.exact
    assert knots(pc.lower) == [(0, 0), (1, 1)]
    assert knots(pc.upper) == [(0, F(1, 2)), (1, F(3, 2))]


def test_zero_leading_coefficient_rejected():
    with pytest.raises(ValueError):
        CyclicOperator(3, (ValuedPoly({0: 0}), ValuedPoly({})))


def test_radii_exact_pieces_agree_with_dwork_random():
    rng = random.Random(11)
    for _ in range(80):
        p = rng.choice([2, 3, 5])
        r = rand_dwork_datum(rng, p)
        dom = Interval(0, 3, False, True)
        prof = radii_profile(dwork_operator(p, r), dom)
        f = dwork_profile(p, r, dom)
        for pc in prof.entries[0]:
            if pc.exact:
                assert pc.lower == f.restrict(pc.domain)
            else:
                for x, _ in pc.lower.knots + pc.upper.knots:
                    assert pc.lower.value(x) <= f.value(x) <= pc.upper.value(x)


def test_profile_entries_ordered():
    rng = random.Random(5)
    for _ in range(40):
        p = rng.choice([2, 3])
        n = rng.randint(1, 3)
        coeffs = [ValuedPoly({e: rng.randint(-4, 4) for e in rng.sample(range(0, 3), rng.randint(1, 2))}) for _ in range(n)]
        coeffs.append(ValuedPoly({0: 0}))
        prof = radii_profile(CyclicOperator(p, tuple(coeffs)), Interval.open(0, 2))
        for k in range(1, 21):
            x = F(2 * k, 21)
            envs = [prof.envelope_at(i, x) for i in range(n)]
            for (lo0, hi0), (lo1, hi1) in zip(envs, envs[1:]):
                assert hi0 >= hi1 and lo0 >= lo1 or lo0 >= hi1
            for lo, _ in envs:
                assert lo >= x


def test_profile_csv_round_trip():
    prof = radii_profile(dwork_operator(3, ValuedPoly({1: -2, 0: 1})), Interval(0, 3, False, True))
    assert profile_from_csv(profile_to_csv(prof)) == prof


# dwork_profile ---------------------------------------------------------------


def test_dwork_examples():
    d = Interval.open(0, 3)
    assert knots(dwork_profile(3, ValuedPoly({1: -2}), d)) == [(0, 2), (1, 1), (3, 3)]
    assert knots(dwork_profile(3, ValuedPoly({0: -1}), d)) == [(0, 1), (1, 1), (3, 3)]
    assert dwork_profile(3, ValuedPoly({0: 5}), Interval.open(0, 1)) == PLFun.identity(Interval.open(0, 1))


def test_dwork_hypothesis_enforced():
    with pytest.raises(ValueError):
        dwork_profile(3, ValuedPoly({2: 0}), Interval.open(0, 1))


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10**6))
def test_dwork_against_pointwise_formula(p, seed):
    rng = random.Random(seed)
    r = rand_dwork_datum(rng, p)
    f = dwork_profile(p, r, Interval.closed(0, 3))
    for k in range(25):
        x = F(3 * k, 24)
        assert f.value(x) == brute_dwork(r, LogValue(x))


# tame ------------------------------------------------------------------------


def test_tame_examples():
    d = Interval.open(0, 3)
    f = dwork_profile(3, ValuedPoly({1: -2}), d)
    g = tame_transform(exact(3, f), 2).exact(0)
    assert g.domain == Interval.open(0, F(3, 2))
    for u in (F(1, 5), F(1, 2), 1, F(7, 5)):
        assert g.value(u) == max(u, 2 - 3 * u)
    assert tame_transform(exact(3, PLFun.identity(d)), 2).exact(0) == PLFun.identity(Interval.open(0, F(3, 2)))
    h = tame_transform(exact(2, dwork_profile(2, ValuedPoly({0: -1}), d)), 3).exact(0)
    for u in (F(1, 10), F(1, 3), F(1, 2), 1):
        assert h.value(u) == max(u, 1 - 2 * u)
    with pytest.raises(ValueError):
        tame_transform(exact(3, f), 3)


def test_tame_pullback_datum_matches_transform():
    rng = random.Random(3)
    for _ in range(50):
        p = rng.choice([2, 3, 5])
        m = rng.choice([k for k in (2, 3, 5, 7) if k % p])
        r = rand_dwork_datum(rng, p)
        dom = Interval(0, 3, False, True)
        want = tame_transform(exact(p, dwork_profile(p, r, dom)), m).exact(0)
        got = dwork_profile(p, tame_pullback_datum(r, m), dom.scaled(F(1, m)))
        assert got == want


# antecedents -------------------------------------------------------------------


def test_antecedent_examples():
    f = dwork_profile(2, ValuedPoly({0: -1}), Interval.open(0, F(1, 5)))
    assert antecedent_exists(exact(2, f))
    g = PLFun.affine(Interval.open(0, F(1, 2)), -1, 2)
    assert not antecedent_exists(exact(2, g))
    ident = PLFun.identity(Interval.open(0, 1))
    assert antecedent_transform(exact(3, ident)).exact(0) == PLFun.identity(Interval.open(0, 3))
    with pytest.raises(ValueError):
        antecedent_transform(exact(2, g))


def test_antecedent_round_trip():
    f = PLFun.from_knots([(0, F(1, 2)), (F(1, 2), F(1, 2)), (1, 1)], lo_closed=False)
    prof = exact(3, f)
    assert antecedent_exists(prof)
    assert antecedent_inverse(antecedent_transform(prof)) == prof


def test_antecedent_scaling_formula():
    f = PLFun.from_knots([(0, F(1, 8)), (1, F(9, 8))])
    g = antecedent_transform(exact(5, f)).exact(0)
    for t in (0, 1, F(5, 2), 5):
        assert g.value(t) == 5 * f.value(F(t) / 5)


# descendants -------------------------------------------------------------------


def test_descendant_examples():
    assert descendant_multiset(RadiusMultiset(F(1, 10), (F(3, 10),)), 2).values == (2, F(3, 5))
    assert descendant_multiset(RadiusMultiset(F(1, 10), (F(3, 2),)), 2).values == (F(5, 2), F(5, 2))
    assert descendant_multiset(RadiusMultiset(F(1, 10), (1,)), 2).values == (2, 2)
    with pytest.raises(ValueError):
        descendant_multiset(RadiusMultiset(1, (2,)), 2)


def test_descendant_sum_examples():
    ms = RadiusMultiset(F(1, 10), (F(3, 10),))
    out = descendant_multiset(ms, 2)
    chk = descendant_sum_check(ms, out, 1, 2)
    assert chk.ok and chk.lhs == F(13, 5)
    ms3 = RadiusMultiset(F(1, 8), (F(1, 4),))
    out3 = descendant_multiset(ms3, 3)
    assert out3.values == (F(3, 2), F(3, 2), F(3, 4))
    assert descendant_sum_check(ms3, out3, 1, 3).lhs == 3 + F(3, 4)
    ms2 = RadiusMultiset(F(1, 10), (F(3, 10), F(1, 5)))
    out2 = descendant_multiset(ms2, 2)
    brute_lhs = sum(sorted(out2.values, reverse=True)[: 2 + 2])
    assert descendant_sum_check(ms2, out2, 2, 2).lhs == brute_lhs == 4 + 2 * (F(3, 10) + F(1, 5))


def test_descendant_precondition_reported():
    ms = RadiusMultiset(F(1, 10), (F(3, 2),))
    chk = descendant_sum_check(ms, descendant_multiset(ms, 2), 1, 2)
    assert chk.ok is None and "not below" in chk.reason


# direct sums and checks ----------------------------------------------------------


def test_direct_sum_examples():
    d = Interval.open(0, 3)
    ident = PLFun.identity(d)
    two = direct_sum_profile([exact(3, ident), exact(3, ident)])
    assert two.rank == 2 and two.exact(0) == ident and two.exact(1) == ident
    f1 = pl_max(ident, PLFun.constant(d, 1))
    s = direct_sum_profile([exact(3, f1), exact(3, ident)])
    assert s.exact(0) == f1 and s.exact(1) == ident
    g = pl_max(ident, PLFun.affine(d, -1, 2))
    s2 = direct_sum_profile([exact(3, g), exact(3, f1)])
    assert s2.exact(0) == g and s2.exact(1) == f1
    for x in (F(1, 2), 1, F(3, 2)):
        assert s2.exact(0).value(x) >= s2.exact(1).value(x)


def test_direct_sum_flags_widened_envelopes():
    d = Interval.open(0, 2)
    a = RadiiProfile(3, d, ((Piece("bounded", PLFun.identity(d), PLFun.identity(d).add_affine(0, F(1, 2))),),))
    # an exact entry inside the other's envelope: neither order is known
    b = exact(3, PLFun.affine(d, 1, F(1, 4)))
    s = direct_sum_profile([a, b])
    assert s.widened
    top = s.entries[0][0]
    assert top.lower == PLFun.affine(d, 1, F(1, 4)) and top.upper == PLFun.affine(d, 1, F(1, 2))
    c = exact(3, PLFun.affine(d, 1, F(1, 2)))
    assert not direct_sum_profile([a, c]).widened


def test_variation_examples():
    d = Interval.open(0, 3)
    f = pl_max(PLFun.identity(d), PLFun.constant(d, 1))
    rep = check_variation(exact(3, f), True)
    assert rep.passed
    bad = exact(3, PLFun.affine(d, F(1, 2), 2))
    assert check_variation(bad, False).slopes is False
    g = pl_max(PLFun.identity(d), PLFun.affine(d, -1, 2))
    rep2 = check_variation(exact(3, g, PLFun.identity(d)), True)
    assert rep2.convexity and rep2.passed


def test_variation_detects_nonconvex_sum():
    d = Interval.open(0, 2)
    f = PLFun.from_knots([(0, 1), (1, 2), (2, 2)], lo_closed=False, hi_closed=False)
    assert check_variation(exact(2, f), False).convexity is False


def test_robba_examples():
    d = Interval.open(0, 2)
    assert robba_condition(exact(3, PLFun.identity(d))) is True
    assert robba_condition(exact(3, pl_max(PLFun.identity(d), PLFun.constant(d, 1)))) is False
    invisible = radii_profile(CyclicOperator(3, (ValuedPoly({0: 10}), ValuedPoly({0: 0}))), Interval.open(0, 1))
    assert robba_condition(invisible) is None


def test_separation_predicate():
    d = Interval.open(0, 1)
    top = PLFun.constant(d, 3)
    assert is_separated(exact(3, top, PLFun.identity(d)), 1) is True
    assert is_separated(exact(3, PLFun.identity(d), PLFun.identity(d)), 1) is False


# subharmonicity ----------------------------------------------------------------


def test_subharmonicity_examples():
    rep = check_subharmonicity(3, {1: F(1)}, [0])
    assert rep.left == [-1] and rep.right == [[1]] and rep.holds
    rep2 = check_subharmonicity(3, {1: F(1)}, [0, 1])
    assert rep2.holds and len(rep2.right) == 2
    robba = check_subharmonicity(3, {0: F(9)}, [0, 1, 2])
    assert robba.left == [1] and all(r == [1] for r in robba.right) and robba.holds


def test_subharmonicity_rejects_repeated_residues():
    with pytest.raises(ValueError):
        check_subharmonicity(3, {1: F(1)}, [0, 3])


def test_translate_and_valuation_helpers():
    assert translate_concrete({2: F(1)}, 3) == {2: 1, 1: 6, 0: 9}
    for q in (F(9, 4), F(5, 27), F(-12)):
        assert padic_val(q, 3) == padic_val_oracle(q, 3)


def test_subharmonicity_random_instances_hold():
    rng = random.Random(2)
    for _ in range(20):
        p = rng.choice([2, 3, 5])
        r = rand_concrete_dwork(rng, p)
        zs = rng.sample(range(p), rng.randint(1, min(3, p)))
        assert check_subharmonicity(p, r, zs).holds is True
