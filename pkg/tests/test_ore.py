import pytest

from drinfeld import (DrinfeldModel, OrePoly, Poly, is_torsion_point,
                      parse_model, parse_poly, smallest_h_place)

from conftest import random_model, random_poly, seeded


def random_ore(rng, ctx, tau_deg, coeff_deg):
    coeffs = [random_poly(rng, ctx, coeff_deg) for _ in range(tau_deg)]
    coeffs.append(random_poly(rng, ctx, coeff_deg, nonzero=True))
    return OrePoly(ctx, coeffs)


def test_twist_relation(F3):
    # tau * c = c^q * tau
    g = parse_poly("t^2+2*t", F3)
    lhs = OrePoly.tau(F3) * OrePoly.const(g)
    assert lhs.coeffs == (Poly.zero(F3), g.pow_q())


def test_carlitz_t_squared(F2):
    C = DrinfeldModel.carlitz(F2)
    f = C.phi(parse_poly("t^2", F2))
    assert f.coeffs == (parse_poly("t^2", F2), parse_poly("t^2+t", F2),
                        Poly.one(F2))


def test_ore_associative_and_composition(F3):
    rng = seeded(13)
    for _ in range(40):
        a = random_ore(rng, F3, 2, 2)
        b = random_ore(rng, F3, 2, 2)
        c = random_ore(rng, F3, 1, 2)
        assert (a * b) * c == a * (b * c)
        x = random_poly(rng, F3, 2)
        assert (a * b).eval(x) == a.eval(b.eval(x))


def test_ore_eval_additive(F3):
    rng = seeded(17)
    for _ in range(30):
        f = random_ore(rng, F3, 3, 2)
        x = random_poly(rng, F3, 3)
        y = random_poly(rng, F3, 3)
        assert f.eval(x + y) == f.eval(x) + f.eval(y)
        lam = rng.randrange(3)
        assert f.eval(x.scale(lam)) == f.eval(x).scale(lam)


def test_eval_mod_agrees(F3):
    rng = seeded(19)
    m = parse_poly("t^3 + 2*t + 1", F3)
    for _ in range(20):
        f = random_ore(rng, F3, 3, 2)
        x = random_poly(rng, F3, 3)
        assert f.eval_mod(x, m) == f.eval(x) % m


def test_phi_is_ring_homomorphism(F3):
    rng = seeded(23)
    for _ in range(15):
        model = random_model(rng, F3, 2, coeff_deg=3)
        a = random_poly(rng, F3, 2)
        b = random_poly(rng, F3, 2)
        assert model.phi(a * b) == model.phi(a) * model.phi(b)
        assert model.phi(a + b) == model.phi(a) + model.phi(b)


def test_phi_eval_matches_phi(F3):
    rng = seeded(29)
    for _ in range(20):
        model = random_model(rng, F3, 2, coeff_deg=3)
        a = random_poly(rng, F3, 3)
        x = random_poly(rng, F3, 2)
        assert model.phi_eval(a, x) == model.phi(a).eval(x)
        m = parse_poly("t^2+1", F3)
        assert model.phi_eval_mod(a, x, m) == model.phi_eval(a, x) % m


def test_phi_eval_operator_identities(F3):
    rng = seeded(31)
    for _ in range(20):
        model = random_model(rng, F3, 3, coeff_deg=2)
        a = random_poly(rng, F3, 2)
        b = random_poly(rng, F3, 2)
        x = random_poly(rng, F3, 2)
        assert model.phi_eval(a * b, x) == model.phi_eval(a, model.phi_eval(b, x))
        assert (model.phi_eval(a + b, x)
                == model.phi_eval(a, x) + model.phi_eval(b, x))
        lam = rng.randrange(1, 3)
        assert model.phi_eval(a, x.scale(lam)) == model.phi_eval(a, x).scale(lam)


def test_smallness(F3):
    assert DrinfeldModel.carlitz(F3).is_very_small()
    m = parse_model("t + t^3*tau", F3)
    assert m.is_small() and not m.is_very_small()
    m2 = parse_model("t + t^4*tau", F3)
    assert not m2.is_small()
    m3 = parse_model("t + tau + t^9*tau^2", F3)
    assert m3.is_small() and not m3.is_very_small()
    m4 = parse_model("t + tau + t^8*tau^2", F3)
    assert m4.is_very_small()


def test_twist_identity(F3):
    rng = seeded(37)
    for _ in range(15):
        model = random_model(rng, F3, 2, coeff_deg=2)
        h = random_poly(rng, F3, 2, nonzero=True)
        twisted = model.twist_by(h)
        a = random_poly(rng, F3, 2)
        x = random_poly(rng, F3, 2)
        # h * psi_a(x) = phi_a(h x)
        assert h * twisted.phi_eval(a, x) == model.phi_eval(a, h * x)


def test_smallest_h_place(F2, F3):
    assert smallest_h_place(F3).poly == Poly.gen(F3)
    assert smallest_h_place(F2).poly == parse_poly("t^2+t+1", F2)


def test_torsion_carlitz_q2(F2):
    C = DrinfeldModel.carlitz(F2)
    flag, ann = is_torsion_point(C, Poly.one(F2))
    assert flag and ann == parse_poly("t^2+t", F2)
    assert is_torsion_point(C, Poly.zero(F2)) == (True, Poly.one(F2))
    # t and t+1 are themselves torsion: C_t(t) = 2t^2 = 0
    assert is_torsion_point(C, Poly.gen(F2)) == (True, Poly.gen(F2))
    flag, ann = is_torsion_point(C, parse_poly("t^2", F2))
    assert not flag and ann is None


def test_torsion_carlitz_q3_nontorsion(F3):
    C = DrinfeldModel.carlitz(F3)
    for x in ("1", "2", "t", "t+1"):
        flag, ann = is_torsion_point(C, parse_poly(x, F3))
        assert not flag and ann is None


def test_torsion_rank1_families(F3):
    # g_1 = c - t makes 1 a torsion point with annihilator t - c
    for c in range(3):
        model = DrinfeldModel(F3, (Poly(F3, (c, 2)),))
        flag, ann = is_torsion_point(model, Poly.one(F3))
        assert flag
        assert ann == Poly(F3, ((-c) % 3, 1))
        # scaling by F_q* keeps the annihilator
        flag2, ann2 = is_torsion_point(model, Poly.const(F3, 2))
        assert flag2 and ann2 == ann


def test_torsion_exactness(F3):
    # phi_a(x) = 0 mod p is not enough: 1 is not torsion for carlitz
    C = DrinfeldModel.carlitz(F3)
    a0 = parse_poly("t+2", F3)
    assert C.phi_eval_mod(a0, Poly.one(F3), Poly.gen(F3)).is_zero()
    assert not C.phi_eval(a0, Poly.one(F3)).is_zero()
