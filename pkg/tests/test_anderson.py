import pytest

from drinfeld import DrinfeldModel, Place, Poly, RationalFunction, places_up_to
from drinfeld.anderson import (euler_factor_via_dual, frobenius_power_matrix,
                               motive_matrix, _descend)
from drinfeld.lseries import local_factor

from conftest import random_model, seeded


def kt(ctx, *coeffs):
    return tuple(Poly(ctx, c) if isinstance(c, list) else c for c in coeffs)


def test_dual_matrix_carlitz(F3):
    c = DrinfeldModel.carlitz(F3)
    pl = Place(Poly(F3, [1, 0, 1]))
    mat = motive_matrix(c, pl, "dual")
    assert mat.which == "dual"
    assert mat.num == (((Poly.one(F3),),),)
    assert mat.den == (Poly(F3, [0, 2]), Poly.one(F3))


def test_direct_matrix_carlitz(F3):
    c = DrinfeldModel.carlitz(F3)
    pl = Place(Poly(F3, [1, 0, 1]))
    mat = motive_matrix(c, pl, "direct")
    assert mat.num == (((Poly(F3, [0, 2]), Poly.one(F3)),),)
    assert mat.den == (Poly.one(F3),)


def test_direct_matrix_divides_by_top_coefficient(F3):
    m = DrinfeldModel(F3, [Poly(F3, [2]), Poly(F3, [0, 1])])
    pl = Place(Poly(F3, [1, 1]))
    mat = motive_matrix(m, pl, "direct")
    assert mat.num[0] == ((), (Poly.one(F3),))
    assert mat.num[1][0] == (Poly(F3, [2]), Poly(F3, [2]))
    assert mat.num[1][1] == (Poly(F3, [2]),)


def test_direct_matrix_rank_drop_raises(F3):
    m = DrinfeldModel(F3, [Poly(F3, [0, 0, 0, 1])])
    with pytest.raises(ValueError):
        motive_matrix(m, Place(Poly.gen(F3)), "direct")


def test_unknown_form_rejected(F3):
    with pytest.raises(ValueError):
        motive_matrix(DrinfeldModel.carlitz(F3), Place(Poly.gen(F3)), "both")


def test_dual_matrix_rank2_first_column(F3):
    g1 = Poly(F3, [1, 1])
    g2 = Poly(F3, [2, 0, 1])
    m = DrinfeldModel(F3, [g1, g2])
    pl = Place(Poly(F3, [1, 0, 1]))
    mat = motive_matrix(m, pl, "dual")
    p = pl.poly
    assert mat.num[0][0] == (g1 % p,)
    assert mat.num[1][0] == (g2 % p,)
    assert mat.num[0][1] == mat.den
    assert mat.num[1][1] == ()


def test_frobenius_power_degree_one_is_identity(F3):
    c = DrinfeldModel.carlitz(F3)
    mat = motive_matrix(c, Place(Poly.gen(F3)), "dual")
    pw = frobenius_power_matrix(mat, 1)
    assert pw.num == mat.num and pw.den == mat.den


def test_frobenius_power_requires_place_degree(F3):
    mat = motive_matrix(DrinfeldModel.carlitz(F3), Place(Poly.gen(F3)), "dual")
    with pytest.raises(ValueError):
        frobenius_power_matrix(mat, 2)


def test_frobenius_power_carlitz_denominator_is_place(F3):
    c = DrinfeldModel.carlitz(F3)
    for pl in places_up_to(F3, 3):
        pw = frobenius_power_matrix(motive_matrix(c, pl, "dual"), pl.degree)
        assert pw.num == (((Poly.one(F3),),),)
        assert _descend(pw.den, pl.poly) == pl.poly


def test_euler_factor_carlitz_closed_form(F3):
    c = DrinfeldModel.carlitz(F3)
    for pl in places_up_to(F3, 3):
        lf = euler_factor_via_dual(c, pl)
        assert lf[0] == RationalFunction.one(F3)
        assert lf.tpoly.degree == pl.degree
        assert lf[pl.degree] == RationalFunction(Poly(F3, [2]), pl.poly)
        assert lf.tpoly == local_factor(c, pl).tpoly


def test_euler_factor_rank_drop_is_one(F3):
    m = DrinfeldModel(F3, [Poly(F3, [0, 0, 0, 1])])
    pl = Place(Poly.gen(F3))
    lf = euler_factor_via_dual(m, pl)
    assert lf.tpoly.degree == 0
    assert lf[0] == RationalFunction.one(F3)
    assert lf.tpoly == local_factor(m, pl).tpoly


def test_euler_factor_partial_rank_drop_block(F3):
    m = DrinfeldModel(F3, [Poly.one(F3), Poly.gen(F3)])
    pl = Place(Poly.gen(F3))
    lf = euler_factor_via_dual(m, pl)
    assert lf.tpoly.degree == 1
    assert lf[1] == RationalFunction(Poly(F3, [2]), Poly.gen(F3))
    assert lf.tpoly == local_factor(m, pl).tpoly


def test_euler_factor_only_multiples_of_degree(F3):
    rng = seeded(410)
    for _ in range(10):
        m = random_model(rng, F3, max_rank=3, coeff_deg=3)
        for pl in places_up_to(F3, 2):
            lf = euler_factor_via_dual(m, pl)
            for j in range(lf.tpoly.degree + 1):
                if j % pl.degree:
                    assert lf[j].is_zero()


def test_euler_factor_matches_fitting_route_random(F2, F3):
    rng = seeded(411)
    for ctx in (F2, F3):
        pls = places_up_to(ctx, 3)
        for _ in range(25):
            m = random_model(rng, ctx, max_rank=3, coeff_deg=4)
            for pl in rng.sample(pls, 3):
                a = euler_factor_via_dual(m, pl)
                b = local_factor(m, pl)
                assert a.tpoly == b.tpoly, (m, pl)


def test_euler_factor_matches_fitting_route_q4(F4):
    rng = seeded(412)
    for _ in range(8):
        m = random_model(rng, F4, max_rank=2, coeff_deg=3)
        for pl in places_up_to(F4, 2):
            assert euler_factor_via_dual(m, pl).tpoly == local_factor(m, pl).tpoly
