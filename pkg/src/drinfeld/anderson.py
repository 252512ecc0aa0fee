"""Motive-side determinant route to local L-factors.

A model of rank r gives a free rank-r module over F_p[t] (t stays
transcendental, the place enters through the residue classes in the
coefficients) on which the q-power Frobenius acts semilinearly through an
explicit r x r matrix. Composing d = deg p twists of that matrix linearizes
the Frobenius, and the characteristic polynomial of the resulting matrix is
the local factor. None of this touches Fitting ideals, so it serves as an
independent oracle for local_factor.

Residue-field elements are polynomials reduced mod the place; polynomials
over the residue field in the transcendental t are plain coefficient tuples.
"""

from dataclasses import dataclass
from itertools import combinations

from .lseries import LocalFactor
from .padic import pow_mod
from .poly import Place, Poly, RationalFunction, inverse_mod
from .tpoly import TPoly

__all__ = ["MotiveMatrix", "motive_matrix", "frobenius_power_matrix",
           "euler_factor_via_dual"]


# ---------------------------------------------------------------------------
# arithmetic in k[t], k = F_q[t]/p, elements of k reduced mod p

def _kt(coeffs, p):
    out = [c % p for c in coeffs]
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def _kt_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _kt(out, p)


def _kt_neg(a):
    return tuple(-c for c in a)


def _kt_mul(a, b, p):
    if not a or not b:
        return ()
    zero = Poly.zero(p.ctx)
    out = [zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca.is_zero():
            continue
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return _kt(out, p)


def _kt_frob(a, p):
    return tuple(pow_mod(c, p.ctx.q, p) for c in a)


def _descend(a, p):
    """Map a k[t] element with F_q-rational coefficients back to F_q[t]."""
    ctx = p.ctx
    vals = []
    for c in a:
        if c.degree > 0:
            raise ArithmeticError(
                "coefficient %r does not descend to the base field" % (c,))
        vals.append(c[0])
    return Poly(ctx, vals)


# ---------------------------------------------------------------------------
# matrices over k[t]

def _mat_mul(a, b, p):
    n = len(a)
    return tuple(
        tuple(
            _kt_add_many([_kt_mul(a[i][k], b[k][j], p) for k in range(n)], p)
            for j in range(n))
        for i in range(n))


def _kt_add_many(terms, p):
    acc = ()
    for term in terms:
        acc = _kt_add(acc, term, p)
    return acc


def _mat_frob(a, p):
    return tuple(tuple(_kt_frob(e, p) for e in row) for row in a)


def _kt_det(m, p):
    n = len(m)
    if n == 1:
        return m[0][0]
    acc = ()
    for j in range(n):
        if not m[0][j]:
            continue
        minor = tuple(row[:j] + row[j + 1:] for row in m[1:])
        term = _kt_mul(m[0][j], _kt_det(minor, p), p)
        if j % 2:
            term = _kt_neg(term)
        acc = _kt_add(acc, term, p)
    return acc


# ---------------------------------------------------------------------------
# motive matrices

@dataclass(frozen=True)
class MotiveMatrix:
    """Matrix of a Frobenius-semilinear map on the motive side of a model.

    Row i holds the image of basis vector i; the true matrix is num / den
    with num over k[t] and den a product of twists of t - theta, theta the
    residue class of t. which is "direct" (basis tau^i, divides by the top
    coefficient) or "dual" (dual basis, integral numerators).
    """

    place: Place
    which: str
    num: tuple
    den: tuple


def motive_matrix(model, place, which):
    """The tau-action matrix on the motive of the model at the place.

    The dual form sends basis vector i to vector i+1 plus (g_{i+1}/(t-theta))
    times vector 0, and exists for every model. The direct form needs the top
    coefficient to stay nonzero mod the place since it divides by it.
    """
    ctx = model.ctx
    p = place.poly
    r = model.rank
    theta = Poly.gen(ctx) % p
    tmt = _kt([-theta, Poly.one(ctx)], p)
    gbar = [g % p for g in model.g]
    zero = ()
    if which == "dual":
        num = []
        for i in range(r):
            row = [zero] * r
            row[0] = _kt([gbar[i]], p)
            if i + 1 < r:
                row[i + 1] = tmt
            num.append(tuple(row))
        return MotiveMatrix(place, "dual", tuple(num), tmt)
    if which == "direct":
        if gbar[r - 1].is_zero():
            raise ValueError(
                "top coefficient vanishes at the place; use the dual matrix")
        ginv = inverse_mod(gbar[r - 1], p)
        num = []
        for i in range(r - 1):
            row = [zero] * r
            row[i + 1] = _kt([Poly.one(ctx)], p)
            num.append(tuple(row))
        last = [_kt_mul(_kt([ginv], p), tmt, p)]
        for j in range(1, r):
            last.append(_kt([-(ginv * gbar[j - 1])], p))
        num.append(tuple(last))
        return MotiveMatrix(place, "direct", tuple(num),
                            _kt([Poly.one(ctx)], p))
    raise ValueError("which must be 'direct' or 'dual'")


def frobenius_power_matrix(mat, d):
    """Matrix of the d-fold semilinear power. Rows hold basis images, so the
    twists pile up on the left: sigma^{d-1}(B) ... sigma(B) B, with the
    matching product of twisted denominators. Linear once d = deg p."""
    if d != mat.place.degree:
        raise ValueError("power must equal the degree of the place")
    p = mat.place.poly
    num, den = mat.num, mat.den
    tnum, tden = mat.num, mat.den
    for _ in range(1, d):
        tnum = _mat_frob(tnum, p)
        tden = _kt_frob(tden, p)
        num = _mat_mul(tnum, num, p)
        den = _kt_mul(den, tden, p)
    return MotiveMatrix(mat.place, mat.which, num, den)


def euler_factor_via_dual(model, place):
    """Local factor as det(1 - T^d F), F the linearized d-fold Frobenius on
    the dual motive; must agree with local_factor at every place."""
    ctx = model.ctx
    p = place.poly
    d = place.degree
    r = model.rank
    fro = frobenius_power_matrix(motive_matrix(model, place, "dual"), d)
    if _descend(fro.den, p) != p:
        raise ArithmeticError("denominator product is not the place")
    coeffs = [RationalFunction.zero(ctx)] * (r * d + 1)
    coeffs[0] = RationalFunction.one(ctx)
    for j in range(1, r + 1):
        minors = []
        for rows in combinations(range(r), j):
            sub = tuple(tuple(fro.num[a][b] for b in rows) for a in rows)
            minors.append(_kt_det(sub, p))
        ej = _descend(_kt_add_many(minors, p), p)
        if not ej.is_zero():
            if j % 2:
                ej = -ej
            coeffs[j * d] = RationalFunction(ej, p ** j)
    return LocalFactor(TPoly(coeffs, RationalFunction.zero(ctx)), place)
