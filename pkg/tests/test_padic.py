import pytest

from drinfeld import Place, Poly, RationalFunction, parse_poly
from drinfeld.padic import PadicApprox, PrecisionError, pow_mod

from conftest import seeded


@pytest.fixture
def pl3(F3):
    return Place(parse_poly("t^2+1", F3))


def test_from_poly_strips_valuation(F3, pl3):
    p = pl3.poly
    f = p * p * parse_poly("t+1", F3)
    x = PadicApprox.from_poly(f, pl3, 6)
    assert x.valuation() == 2
    assert x.abs_prec == 6
    assert x.lift_mod(6) == f % p**6


def test_from_poly_apparent_zero(F3, pl3):
    p = pl3.poly
    x = PadicApprox.from_poly(p**6, pl3, 4)
    assert x.is_apparent_zero and not x.is_exact_zero
    with pytest.raises(PrecisionError):
        x.valuation()


def test_exact_zero_semantics(F3, pl3):
    z = PadicApprox.exact_zero(pl3)
    assert z.is_exact_zero and not z.is_apparent_zero
    assert z.valuation() == float("inf")
    y = PadicApprox.from_poly(Poly.one(F3), pl3, 5)
    assert (z + y).eq_mod(y, 5)
    assert (z * y).is_exact_zero
    assert z.value_at_least(10**6)


def test_from_rational_valuation(F3, pl3):
    p = pl3.poly
    r = RationalFunction(parse_poly("t+1", F3), p)
    x = PadicApprox.from_rational(r, pl3, 4)
    assert x.valuation() == -1
    y = x.mul_poly(p)
    assert y.valuation() == 0
    assert y.lift_mod(4) == parse_poly("t+1", F3)


def test_inverse_and_mul(F3, pl3):
    p = pl3.poly
    x = PadicApprox.from_poly(parse_poly("t^3+t+2", F3) * p, pl3, 7)
    inv = x.inverse()
    one = x * inv
    assert one.valuation() == 0
    assert one.eq_mod(PadicApprox.from_poly(Poly.one(F3), pl3, 5), 5)


def test_add_cancellation_tracks_precision(F3, pl3):
    x = PadicApprox.from_poly(Poly.one(F3), pl3, 5)
    d = x - x
    assert d.is_apparent_zero
    assert d.value_at_least(5)


def test_pow_q_is_frobenius(F3, pl3):
    f = parse_poly("t^3+2*t+1", F3)
    x = PadicApprox.from_poly(f, pl3, 5)
    y = x.pow_q()
    assert y.lift_mod(5) == pow_mod(f, 3, pl3.poly**5)


def test_shift_moves_valuation(F3, pl3):
    x = PadicApprox.from_poly(pl3.poly, pl3, 6)
    assert x.shift(-1).valuation() == 0
    assert x.shift(2).valuation() == 3


def test_eq_mod_respects_precision(F3, pl3):
    p = pl3.poly
    x = PadicApprox.from_poly(Poly.one(F3), pl3, 6)
    y = PadicApprox.from_poly(Poly.one(F3) + p**4, pl3, 6)
    assert x.eq_mod(y, 4)
    assert not x.eq_mod(y, 5)


def test_eq_mod_needs_enough_precision(F3, pl3):
    x = PadicApprox.from_poly(Poly.one(F3), pl3, 3)
    y = PadicApprox.from_poly(Poly.one(F3), pl3, 3)
    with pytest.raises(PrecisionError):
        x.eq_mod(y, 5)


def test_pow_mod_matches_naive(F3):
    rng = seeded(7)
    m = parse_poly("t^2+1", F3) ** 3
    for _ in range(20):
        co = [rng.randrange(3) for _ in range(rng.randrange(1, 7))]
        f = Poly(F3, co)
        e = rng.randrange(1, 30)
        naive = Poly.one(F3)
        for _ in range(e):
            naive = (naive * f) % m
        assert pow_mod(f, e, m) == naive


def test_arithmetic_against_exact_rationals(F3, pl3):
    rng = seeded(11)
    p = pl3.poly
    for _ in range(15):
        fa = Poly(F3, [rng.randrange(3) for _ in range(4)] + [1])
        fb = Poly(F3, [rng.randrange(3) for _ in range(3)] + [1])
        ra = RationalFunction(fa, p)
        rb = RationalFunction(fb, Poly.one(F3))
        xa = PadicApprox.from_rational(ra, pl3, 5)
        xb = PadicApprox.from_rational(rb, pl3, 5)
        s = xa + xb
        prod = xa * xb
        s_exact = PadicApprox.from_rational(ra + rb, pl3, 5)
        p_exact = PadicApprox.from_rational(ra * rb, pl3, 4)
        assert s.eq_mod(s_exact, 4)
        assert prod.eq_mod(p_exact, 3)
