import random

import pytest

from drinfeld import DrinfeldModel, Poly, fq_context


@pytest.fixture
def F2():
    return fq_context(2)


@pytest.fixture
def F3():
    return fq_context(3)


@pytest.fixture
def F4():
    return fq_context(2, 2)


@pytest.fixture
def F5():
    return fq_context(5)


def random_poly(rng, ctx, max_deg, nonzero=False, monic=False):
    d = rng.randrange(max_deg + 1)
    coeffs = [rng.randrange(ctx.q) for _ in range(d)]
    coeffs.append(1 if monic else rng.randrange(1, ctx.q))
    f = Poly(ctx, coeffs)
    if nonzero and f.is_zero():
        return Poly.one(ctx)
    return f


def random_model(rng, ctx, max_rank, coeff_deg=None):
    r = rng.randrange(1, max_rank + 1)
    g = []
    for i in range(1, r + 1):
        bound = coeff_deg if coeff_deg is not None else ctx.q ** i
        if i == r:
            g.append(random_poly(rng, ctx, bound, nonzero=True))
        else:
            d = rng.randrange(bound + 1)
            g.append(Poly(ctx, [rng.randrange(ctx.q) for _ in range(d + 1)]))
    return DrinfeldModel(ctx, g)


def seeded(seed):
    return random.Random(seed)
