import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from helpers import as_mul, as_pow, rand_asparam, rand_hahn
from padic_radii.diffmod import RadiiProfile, tame_transform
from padic_radii.dwork import (
    ASParameter,
    as_combine,
    as_is_trivial,
    as_prepare,
    as_pullback_tame,
    as_translate,
    b1_along_path,
    b1_profile,
)
from padic_radii.plfun import Interval, PLFun, pl_is_convex
from padic_radii.scalars import HahnElement, LogValue

F = Fraction


def t(p, e, c=1):
    return HahnElement.of(p, [(e, c)])


def test_prepare_examples():
    u = ASParameter(3, {3: t(3, 0), 9: t(3, 0)})
    prepared, dropped = as_prepare(u)
    assert prepared == ASParameter(3, {1: t(3, 0, 2)}) and dropped.is_zero()
    c = HahnElement.of(5, [(1, 2), (F(1, 3), 1)])
    assert as_prepare(ASParameter(5, {5: c**5, 1: -c}))[0].is_zero()
    u2 = ASParameter(3, {2: t(3, 0)})
    assert as_prepare(u2)[0] == u2


def test_prepare_laurent_folding():
    u = ASParameter(2, {-4: t(2, 4)})
    assert as_prepare(u)[0] == ASParameter(2, {-1: t(2, 1)})


def test_prepare_drops_constant():
    u = ASParameter(3, {0: t(3, F(1, 2)), 1: t(3, -1)})
    prepared, dropped = as_prepare(u)
    assert dropped == t(3, F(1, 2)) and prepared.exponents() == [1]


def test_translate_examples():
    x = ASParameter(3, {1: t(3, 0)})
    assert as_translate(x, t(3, 1)) == ASParameter(3, {1: t(3, 0), 0: t(3, 1)})
    u = ASParameter(3, {2: t(3, -2)})
    assert as_translate(u, t(3, 1)) == ASParameter(3, {2: t(3, -2), 1: t(3, -1, 2), 0: t(3, 0)})
    assert as_translate(ASParameter.zero(3), t(3, 1)).is_zero()
    with pytest.raises(ValueError):
        as_translate(ASParameter(3, {-1: t(3, 0)}), t(3, 1))


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10**6))
def test_translate_matches_repeated_multiplication(p, seed):
    rng = random.Random(seed)
    u = rand_asparam(rng, p, 0, 5)
    h = rand_hahn(rng, p, 2, 0, 2)
    lin = ASParameter(p, {1: t(p, 0), 0: h})
    want = ASParameter.zero(p)
    for i, c in u.coeffs:
        want = want + as_mul(ASParameter(p, {0: c}), as_pow(lin, i))
    assert as_translate(u, h) == want


def test_b1_examples():
    d = Interval.closed(0, 3)
    assert b1_profile(ASParameter(3, {1: t(3, -1)}), d) == PLFun.from_knots([(0, 1), (1, 1), (3, 3)])
    assert b1_profile(ASParameter(3, {1: t(3, -1), 2: t(3, 1)}), d) == PLFun.from_knots([(0, 1), (1, 1), (3, 3)])
    assert b1_profile(ASParameter(3, {-1: t(3, -2)}), d) == PLFun.affine(d, 2, 2)
    with pytest.raises(ValueError):
        b1_profile(ASParameter(3, {3: t(3, 0)}), d)


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10**6))
def test_b1_shape(p, seed):
    rng = random.Random(seed)
    u, _ = as_prepare(rand_asparam(rng, p))
    f = b1_profile(u, Interval.closed(0, 4))
    assert pl_is_convex(f)
    assert all(s.is_rational and s.a.denominator == 1 for s in f.slope_list())
    for k in range(17):
        s = F(k, 4)
        want = max([LogValue(s)] + [-c.val() + (1 - i) * s for i, c in u.coeffs])
        assert f.value(s) == want >= s


def test_triviality_examples():
    J = Interval.closed(0, 1)
    assert as_is_trivial(ASParameter(3, {1: t(3, 1)}), J)
    assert not as_is_trivial(ASParameter(3, {1: t(3, -1)}), J)
    assert as_is_trivial(ASParameter.zero(3), J)


def test_combine_and_pullback():
    u = ASParameter(3, {1: t(3, -1), 2: t(3, 0)})
    assert as_combine(u, -u).is_zero()
    assert as_combine(ASParameter(3, {1: t(3, 0)}), ASParameter(3, {2: t(3, 0)})).exponents() == [1, 2]
    w = as_pullback_tame(ASParameter(3, {1: t(3, -1)}), 2)
    assert w == ASParameter(3, {2: t(3, -1)})
    d = Interval.closed(0, 2)
    lhs = b1_profile(w, Interval.closed(0, 1))
    rhs = tame_transform(RadiiProfile.from_exact(3, [b1_profile(ASParameter(3, {1: t(3, -1)}), d)]), 2).exact(0)
    assert lhs == rhs
    with pytest.raises(ValueError):
        as_pullback_tame(w, 3)


def test_path_examples():
    W = Interval.closed(0, 4)
    assert b1_along_path(ASParameter(3, {1: t(3, 0)}), t(3, 1), W).b1 == PLFun.identity(W)
    assert b1_along_path(ASParameter(3, {1: t(3, -1)}), HahnElement.zero(3), W).b1 == PLFun.from_knots(
        [(0, 1), (1, 1), (4, 4)]
    )
    pp = b1_along_path(ASParameter(3, {2: t(3, -2)}), t(3, 1), W)
    assert pp.b1 == PLFun.from_knots([(0, 2), (1, 1), (4, 4)])
    assert pp.terminal_slope == 1


def test_path_rejects_laurent_parameter():
    with pytest.raises(ValueError):
        b1_along_path(ASParameter(3, {-1: t(3, 0)}), t(3, 1), Interval.closed(0, 1))


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10**6))
def test_translation_invariance_below_contact(p, seed):
    rng = random.Random(seed)
    u, _ = as_prepare(rand_asparam(rng, p, 1, 5))
    h = rand_hahn(rng, p, 2, 1, 3)
    assume(h)
    moved, _ = as_prepare(as_translate(u, h))
    dom = Interval.closed(0, h.val())
    assert b1_profile(moved, dom) == b1_profile(u, dom)


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10**6))
def test_path_profiles_convex_terminal_slope_one(p, seed):
    rng = random.Random(seed)
    u = rand_asparam(rng, p, 0, 5)
    z = rand_hahn(rng, p, 2, 0, 3)
    pp = b1_along_path(u, z, Interval.closed(0, 12))
    assert pl_is_convex(pp.b1)
    assert pp.terminal_slope == 1
