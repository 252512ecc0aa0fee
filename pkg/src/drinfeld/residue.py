"""Residue rings A/(m), module structure matrices and fitting ideals.

A/(m) is a d-dimensional F_q-vector space on 1, t, ..., t^(d-1).  A Drinfeld
model phi makes it an A-module through y -> phi_t(y); its fitting ideal is
the characteristic polynomial of that action, and the T-twisted variant
tracks tau-powers with a T^i bookkeeping variable, giving a polynomial in
A[T] whose normalization by p is the local L-factor.

Characteristic polynomials use the division-free Samuelson-Berkowitz scheme
over an arbitrary commutative coefficient ring (plain Poly constants for the
untwisted case, TPoly coefficients for the twisted one).
"""

import functools

from .poly import Poly, frobenius_mod
from .tpoly import TPoly


def berkowitz_vector(rows, zero, one):
    """Coefficients [1, c_1, ..., c_n] of det(x*I - M) in descending powers
    of x, for a square matrix over any commutative ring."""
    n = len(rows)
    if n == 0:
        return [one]
    v = [one, -rows[n - 1][n - 1]]
    for i in range(n - 2, -1, -1):
        m = n - i
        a = rows[i][i]
        R = [rows[i][j] for j in range(i + 1, n)]
        C = [rows[j][i] for j in range(i + 1, n)]
        B = [[rows[j][k] for k in range(i + 1, n)] for j in range(i + 1, n)]
        col = [one, -a]
        w = C
        for s in range(m - 1):
            acc = zero
            for rj, wj in zip(R, w):
                acc = acc + rj * wj
            col.append(-acc)
            if s < m - 2:
                w = [_dot(row, w, zero) for row in B]
        out = [zero] * (m + 1)
        for j, vj in enumerate(v):
            for k in range(j, min(j + len(col), m + 1)):
                out[k] = out[k] + col[k - j] * vj
        v = out
    return v


def _dot(row, w, zero):
    acc = zero
    for r, x in zip(row, w):
        acc = acc + r * x
    return acc


def _basis_images(model, m, twisted):
    """Images of t^j under y -> phi_t(y) in A/(m), split by tau-power if
    twisted.  Returns list over j of (list over tau-power i of coeff lists)."""
    ctx = model.ctx
    d = m.degree
    t = Poly.gen(ctx)
    gred = model.reduced_g(m)
    out = []
    for j in range(d):
        tj = Poly(ctx, (0,) * j + (1,), trim=False) % m
        layers = [(t * tj) % m]
        x = tj
        for gi in gred:
            x = frobenius_mod(x, m)
            layers.append((gi * x) % m)
        if not twisted:
            total = layers[0]
            for extra in layers[1:]:
                total = total + extra
            out.append([total])
        else:
            out.append(layers)
    return out


def t_action_matrix(model, m):
    """d x d matrix (encoded ints, M[i][j] = coeff of t^i in phi_t(t^j))."""
    d = m.degree
    images = _basis_images(model, m, twisted=False)
    return [[images[j][0][i] for j in range(d)] for i in range(d)]


def fitting_ideal(model, m):
    """Monic generator of the fitting ideal of A/(m) as a phi-module:
    the characteristic polynomial of the t-action."""
    ctx = model.ctx
    d = m.degree
    if d < 1:
        raise ValueError("modulus must be nonconstant")
    M = t_action_matrix(model, m)
    zero, one = Poly.zero(ctx), Poly.one(ctx)
    rows = [[Poly.const(ctx, M[i][j]) for j in range(d)] for i in range(d)]
    v = berkowitz_vector(rows, zero, one)
    # det(xI - M) = sum v[k] x^(d-k); each v[k] is a constant
    coeffs = [0] * (d + 1)
    for k, c in enumerate(v):
        coeffs[d - k] = c[0]
    return Poly(ctx, coeffs)


def twisted_fitting(model, m):
    """The twisted module determinant in A[T]: tau-powers of the t-action
    are tagged with T^i before taking det(t*I - M).  T-degree <= rank*deg(m),
    and the value at T = 1 is fitting_ideal(model, m)."""
    ctx = model.ctx
    d = m.degree
    pzero = Poly.zero(ctx)
    tzero = TPoly((), pzero, trim=False)
    tone = TPoly((Poly.one(ctx),), pzero, trim=False)
    images = _basis_images(model, m, twisted=True)
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            layers = images[j]
            row.append(TPoly([Poly.const(ctx, layer[i]) for layer in layers], pzero))
        rows.append(row)
    v = berkowitz_vector(rows, tzero, tone)
    # assemble sum_k v[k] t^(d-k) as an element of A[T]
    tdeg = max((w.degree for w in v if w), default=0)
    out = []
    for i in range(int(tdeg) + 1):
        coeffs = [0] * (d + 1)
        for k, w in enumerate(v):
            coeffs[d - k] = w[i][0]
        out.append(Poly(ctx, coeffs))
    return TPoly(out, pzero)


def annihilator_mod(model, x, m):
    """Monic generator of {a : phi_a(x) = 0 in A/(m)} by incremental
    elimination on the Krylov vectors phi_{t^j}(x)."""
    ctx = model.ctx
    d = m.degree
    add, mul, neg, inv = ctx.add, ctx.mul, ctx.neg, ctx.inv
    basis = {}  # pivot position -> (vector, combination over earlier j's)
    cur = x % m
    comb = (1,)
    for j in range(d + 2):
        w = list(cur.coeffs) + [0] * (d - len(cur.coeffs))
        c = list(comb)
        for pos in range(d - 1, -1, -1):
            if w[pos] and pos in basis:
                bvec, bcomb = basis[pos]
                nf = neg[mul[w[pos]][inv[bvec[pos]]]]
                for i in range(pos + 1):
                    if bvec[i]:
                        w[i] = add[w[i]][mul[nf][bvec[i]]]
                for i, bc in enumerate(bcomb):
                    if bc:
                        c[i] = add[c[i]][mul[nf][bc]]
        if not any(w):
            scale = inv[c[j]]
            return Poly(ctx, [mul[scale][ci] for ci in c[:j]] + [1])
        basis[max(i for i in range(d) if w[i])] = (w, c)
        cur = model.phi_t_eval_mod(cur, m)
        comb = (0,) * (j + 1) + (1,)
    raise RuntimeError("no annihilator found below degree %d" % (d + 2,))


class ResidueFieldContext:
    """F_q[t]/(p) for irreducible p, exposing the same table interface as
    FqContext so Poly works over it.  Elements are ints: base-q digit
    vectors in the basis 1, tbar, ..., tbar^(d-1).  Coefficients here are
    not fixed by x -> x^q, so Poly.pow_q falls back to generic powering."""

    TABLE_LIMIT = 4096

    def __init__(self, base, modulus):
        d = modulus.degree
        size = base.q ** d
        if size > self.TABLE_LIMIT:
            raise ValueError("residue field of size %d exceeds table limit" % size)
        self.base = base
        self.modulus = modulus
        self.d = d
        self.q = size
        self.p = base.p
        self.k = 0  # sentinel: not a plain prime field
        self.frobenius_fixed = False
        self._build()

    def _build(self):
        base, m, d, size = self.base, self.modulus, self.d, self.q
        polys = [self.decode(a) for a in range(size)]
        enc = {f.coeffs: i for i, f in enumerate(polys)}

        def code(f):
            return enc[f.coeffs]

        self.add = tuple(tuple(code(polys[a] + polys[b]) for b in range(size))
                         for a in range(size))
        self.mul = tuple(tuple(code((polys[a] * polys[b]) % m) for b in range(size))
                         for a in range(size))
        self.neg = tuple(code(-polys[a]) for a in range(size))
        self.sub = tuple(tuple(self.add[a][self.neg[b]] for b in range(size))
                         for a in range(size))
        inv = [0] * size
        for a in range(1, size):
            row = self.mul[a]
            for b in range(1, size):
                if row[b] == 1:
                    inv[a] = b
                    break
        self.inv = tuple(inv)
        self.frob = tuple(code(frobenius_mod(polys[a], m)) for a in range(size))
        self.theta = code(Poly.gen(base) % m)

    def decode(self, a):
        digs = []
        for _ in range(self.d):
            digs.append(a % self.base.q)
            a //= self.base.q
        return Poly(self.base, digs)

    def encode(self, f):
        f = f % self.modulus
        a = 0
        for c in reversed(tuple(f[i] for i in range(self.d))):
            a = a * self.base.q + c
        return a

    def from_int(self, n):
        return n % self.p

    def elem_str(self, a):
        from .parsing import poly_str
        return "[%s]" % poly_str(self.decode(a))

    def elements(self):
        return range(self.q)


@functools.lru_cache(maxsize=None)
def residue_field(base, modulus):
    return ResidueFieldContext(base, modulus)
