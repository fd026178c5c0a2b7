"""Residue groups, Teichmuller lifts, Hecke characters, value rings and
reductions."""

import itertools
from fractions import Fraction

import pytest

from cmdihedral.charmod import (
    ValueRing,
    build_hecke_char,
    build_reductions,
    evaluate,
    predict_conductor_at_v,
    residue_group,
    teichmuller_lift,
)
from cmdihedral.ffield import finite_field
from cmdihedral.qfield import (
    IdealRep,
    QuadInt,
    ideal_multiply,
    ideal_pow,
    ideals_coprime,
    ideals_of_norm,
    principal_ideal,
    unit_ideal,
)

P23 = IdealRep(-23, 23, 23)
P71 = IdealRep(-71, 71, 71)


# -- residue groups -----------------------------------------------------------

def test_residue_group_trivial():
    rg = residue_group(-23, unit_ideal(-23))
    assert rg.orders == ()
    assert rg.order == 1
    assert rg.dlog(QuadInt(-23, 5, 3)) == ()


def test_residue_group_frozen_examples():
    rg = residue_group(-23, P23)
    assert rg.orders == (22,)
    assert rg.gens == (QuadInt(-23, 5, 0),)
    rg71 = residue_group(-71, P71)
    assert rg71.orders == (70,)


def test_residue_group_unit_count_formula():
    # |(O/f)^x| = N(f) prod (1 - 1/N(p)) over primes p | f
    cases = [
        (-23, P23, 22),
        (-23, IdealRep(-23, 2, 1), 1),
        (-23, IdealRep(-23, 4, 3), 2),  # p2^2: 4 * (1 - 1/2)
        (-23, IdealRep(-23, 1, 1, 5), 24),  # inert (5): 25 * (1 - 1/25)
        (-23, IdealRep(-23, 3, 1), 2),
    ]
    for D, f, expected in cases:
        rg = residue_group(D, f)
        assert rg.order == expected, (D, f)


def test_residue_group_generators_generate():
    p3sq = ideal_pow(IdealRep(-23, 3, 1), 2)
    for D, f in [(-23, P23), (-23, p3sq), (-71, P71)]:
        rg = residue_group(D, f)
        seen = set()
        exps = [range(n) for n in rg.orders]
        for vec in itertools.product(*exps):
            acc = QuadInt(D, 1, 0)
            for g, e in zip(rg.gens, vec):
                for _ in range(e):
                    acc = acc * g
            seen.add(rg.reduce(acc))
        assert len(seen) == rg.order


def test_residue_group_rejects_large_modulus():
    with pytest.raises(ValueError):
        residue_group(-23, IdealRep(-23, 1, 1, 1009))  # norm 1009^2 > 10^6


# -- Teichmuller lifts ---------------------------------------------------------

def test_teichmuller_frozen_examples():
    F23 = finite_field(23, 1)
    assert teichmuller_lift(F23.one()).m == 1
    t = teichmuller_lift(F23.scalar(22))
    assert (t.m, t.e) == (2, 1)
    t2 = teichmuller_lift(F23.scalar(2))
    assert t2.m == 11  # 2 has order 11 in F_23
    assert t2.reduce_into(F23) == F23.scalar(2)


def test_teichmuller_rejects_zero():
    F23 = finite_field(23, 1)
    with pytest.raises(ValueError):
        teichmuller_lift(F23.zero())


@pytest.mark.parametrize("ell,r", [(23, 1), (7, 2)])
def test_teichmuller_injective_homomorphism(ell, r):
    F = finite_field(ell, r)
    nonzero = [x for x in F.elements() if not x.is_zero()]
    lifts = {x: teichmuller_lift(x) for x in nonzero}
    assert len(set(lifts.values())) == len(nonzero)  # injective
    for x, y in itertools.product(nonzero, nonzero):
        assert lifts[x] * lifts[y] == teichmuller_lift(x * y)
    for x in nonzero:
        assert lifts[x].reduce_into(F) == x  # round trip


# -- conductor case rules -------------------------------------------------------

def oracle_conductor_rule(ord_alpha, ell, k, f, local_match):
    # independent restatement of the three-case table
    if ord_alpha >= 2:
        return ord_alpha
    if ord_alpha == 1:
        return 0 if local_match else 1
    return 0 if (ell**f - 1) % 1 == 0 and (k - 1) % (ell**f - 1) == 0 else 1


def test_predict_conductor_frozen_examples():
    assert predict_conductor_at_v(2, 23, 12, 1, True) == 2
    assert predict_conductor_at_v(2, 23, 12, 1, False) == 2
    assert predict_conductor_at_v(0, 23, 12, 1, True) == 1  # 22 does not divide 11
    assert predict_conductor_at_v(0, 5, 5, 1, True) == 0  # 4 divides 4


def test_predict_conductor_full_sweep():
    from cmdihedral.arith import primes_upto

    for ell in primes_upto(97):
        if ell < 5:
            continue
        for k in range(2, ell):
            for f in (1, 2):
                for ord_alpha in (0, 1, 2, 3):
                    for lm in (True, False):
                        assert predict_conductor_at_v(
                            ord_alpha, ell, k, f, lm
                        ) == oracle_conductor_rule(ord_alpha, ell, k, f, lm)


def test_predict_conductor_validations():
    with pytest.raises(ValueError):
        predict_conductor_at_v(0, 3, 2, 1, True)
    with pytest.raises(ValueError):
        predict_conductor_at_v(0, 23, 1, 1, True)
    with pytest.raises(ValueError):
        predict_conductor_at_v(0, 23, 12, 3, True)


# -- character construction ------------------------------------------------------

def test_build_hecke_char_unit_consistency():
    chi = build_hecke_char(-23, 12, P23, [11])
    assert chi.w == 2
    with pytest.raises(ValueError, match="unit inconsistency"):
        build_hecke_char(-23, 12, P23, [2])  # even finite part
    chi71 = build_hecke_char(-71, 2, P71, [35])
    assert chi71.w == 2
    with pytest.raises(ValueError, match="unit inconsistency"):
        build_hecke_char(-71, 2, P71, [0])


def test_build_hecke_char_odd_order22_succeeds():
    chi = build_hecke_char(-23, 12, P23, [1])
    assert chi.w == 22


def test_build_hecke_char_conductor_exactness():
    with pytest.raises(ValueError, match="conductor not exact"):
        build_hecke_char(-23, 13, P23, [0])  # trivial finite part, k odd so units pass
    # (O/p2)^x is trivial, so no character has exact conductor p23 * p2
    f = ideal_multiply(P23, IdealRep(-23, 2, 1))
    rg = residue_group(-23, f)
    for fp in itertools.product(*[range(n) for n in rg.orders]):
        with pytest.raises(ValueError):
            build_hecke_char(-23, 12, f, list(fp))


def test_build_hecke_char_small_unit_groups():
    # D = -4: units of order 4 force 4 | k - 1 for the trivial character
    chi = build_hecke_char(-4, 5, unit_ideal(-4), [])
    assert evaluate(chi, principal_ideal(QuadInt(-4, 3, 0))) == chi.ring.from_fraction(81)
    with pytest.raises(ValueError):
        build_hecke_char(-4, 4, unit_ideal(-4), [])
    # D = -3: units of order 6
    chi3 = build_hecke_char(-3, 7, unit_ideal(-3), [])
    assert evaluate(chi3, principal_ideal(QuadInt(-3, 2, 0))) == chi3.ring.from_fraction(64)
    with pytest.raises(ValueError):
        build_hecke_char(-3, 4, unit_ideal(-3), [])


# -- evaluation -----------------------------------------------------------------

def test_evaluate_unit_ideal_and_rational(delta_char):
    chi = delta_char
    R = chi.ring
    assert evaluate(chi, unit_ideal(-23)) == R.one()
    # delta_H(m O_K) = eps_f(m) m^(k-1)
    for m in (2, 3, 5, 7, 9):
        got = evaluate(chi, principal_ideal(QuadInt(-23, m, 0)))
        expected = chi.finite_value(QuadInt(-23, m, 0)) * R.from_fraction(m) ** 11
        assert got == expected


def test_evaluate_requires_coprimality(delta_char):
    with pytest.raises(ValueError, match="coprime"):
        evaluate(delta_char, P23)


def test_evaluate_multiplicative(delta_char):
    chi = delta_char
    pool = [
        a
        for n in range(1, 31)
        for a in ideals_of_norm(-23, n)
        if ideals_coprime(a, chi.cond)
    ]
    for a, b in itertools.product(pool, pool):
        lhs = evaluate(chi, ideal_multiply(a, b))
        rhs = evaluate(chi, a) * evaluate(chi, b)
        assert lhs == rhs


def test_evaluate_deterministic_across_rebuilds():
    c1 = build_hecke_char(-23, 12, P23, [11], avoid_primes=(23,))
    c2 = build_hecke_char(-23, 12, P23, [11], avoid_primes=(23,))
    for n in (2, 3, 4, 6, 8, 13):
        for a in ideals_of_norm(-23, n):
            assert evaluate(c1, a).d == evaluate(c2, a).d


# -- reductions -------------------------------------------------------------------

def test_build_reductions_delta_maps(delta_char):
    maps = build_reductions(delta_char.ring, 23)
    assert len(maps) == 3
    # omega reduces to the double root of its minimal polynomial mod 23
    assert all(m.x_img.code() == 12 for m in maps)
    # t-images are the three cube roots of cbar; exactly one lies in F_23
    in_prime_field = [m for m in maps if m.t_imgs[0].code() < 23]
    assert len(in_prime_field) == 1


def test_delta_sum_of_conjugate_reductions_is_22(delta_char):
    # the CM form's coefficient field is cubic, generated by a root a of
    # X^3 - 6X - 3; c_2 = -21a^2 - 4a + 84 and c_3 = 53a^2 + 251a - 212 reduce
    # mod the ramified prime (a - 5) above 23 to:
    assert (-21 * 25 - 4 * 5 + 84) % 23 == 22
    assert (53 * 25 + 251 * 5 - 212) % 23 == 22
    maps = build_reductions(delta_char.ring, 23)
    p2a, p2b = ideals_of_norm(-23, 2)
    p3a, p3b = ideals_of_norm(-23, 3)
    v2 = [m.reduce(evaluate(delta_char, p2a)) + m.reduce(evaluate(delta_char, p2b)) for m in maps]
    v3 = [m.reduce(evaluate(delta_char, p3a) + evaluate(delta_char, p3b)) for m in maps]
    F = maps[0].field
    assert any(a == F.scalar(22) and b == F.scalar(22) for a, b in zip(v2, v3))


def test_build_reductions_order22_ring():
    chi = build_hecke_char(-23, 12, P23, [1])
    maps = build_reductions(chi.ring, 23)
    zetas = {m.z_img.code() for m in maps}
    assert len(zetas) == 10  # primitive 22nd roots mod 23
    assert all(m.z_img.field.element_order(m.z_img) == 22 for m in maps)


def test_build_reductions_cube_root_ring():
    # adjusted semantics: all three cube roots are enumerated in F_{23^2},
    # exactly one of them prime-field valued
    R = ValueRing(-23, 1, (3,), ({(0, 0): Fraction(2)},))
    maps = build_reductions(R, 23)
    assert len(maps) == 3
    in_prime = [m for m in maps if m.t_imgs[0].code() < 23]
    assert len(in_prime) == 1
    t = in_prime[0].t_imgs[0]
    assert (t * t * t).code() == 2


def test_build_reductions_rejects_bad_ell(delta_char):
    chi22 = build_hecke_char(-23, 12, P23, [1])  # w = 22
    with pytest.raises(ValueError):
        build_reductions(chi22.ring, 11)  # 11 divides w
    with pytest.raises(ValueError):
        build_reductions(delta_char.ring, 4)


def test_reduce_is_ring_homomorphism(delta_char):
    chi = delta_char
    maps = build_reductions(chi.ring, 23)
    m = maps[0]
    R = chi.ring
    one = R.one()
    assert m.reduce(one) == m.field.one()
    xs = [evaluate(chi, a) for a in ideals_of_norm(-23, 6)]
    for x, y in itertools.product(xs, xs):
        assert m.reduce(x * y) == m.reduce(x) * m.reduce(y)
        assert m.reduce(x + y) == m.reduce(x) + m.reduce(y)


def test_reduce_evaluate_multiplicative_into_units(delta_char):
    chi = delta_char
    maps = build_reductions(chi.ring, 23)
    m = maps[1]
    pool = [
        a
        for n in range(1, 21)
        for a in ideals_of_norm(-23, n)
        if ideals_coprime(a, chi.cond)
    ]
    for a, b in itertools.product(pool[:10], pool[:10]):
        prod = m.reduce(evaluate(chi, ideal_multiply(a, b)))
        assert prod == m.reduce(evaluate(chi, a)) * m.reduce(evaluate(chi, b))
        assert not prod.is_zero()


def test_value_ring_normal_forms():
    R = ValueRing(-23, 2, (), ())
    x = R.gen_x()
    # x^2 = x - 6 for D = -23
    assert x * x == x - R.from_fraction(6)
    z = R.zeta_pow(1)
    assert z == R.from_fraction(-1)
    assert R.from_quadint(QuadInt(-23, 1, 1)) == R.one() + x
    # power arithmetic stays in normal form with degree < 2
    y = (x + R.one()) ** 11
    assert all(k[0] < 2 for k in y.d)
