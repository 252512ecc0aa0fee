"""Univariate polynomials and rational functions over a field context.

A Poly stores a context plus a coefficient tuple with no trailing zeros, so
equal polynomials are equal tuples.  deg(0) is float('-inf').  The same class
works over F_q (fields.FqContext) and over residue fields (residue.py);
pow_q's coefficient-spreading shortcut is only taken when the coefficient
field is fixed by x -> x^q.
"""

import functools
import math

import numpy as np

NEG_INF = float("-inf")

_NUMPY_MUL_CUTOFF = 96


class Poly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs, trim=True):
        if trim:
            coeffs = tuple(coeffs)
            n = len(coeffs)
            while n and not coeffs[n - 1]:
                n -= 1
            coeffs = coeffs[:n]
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx):
        return Poly(ctx, (), trim=False)

    @staticmethod
    def one(ctx):
        return Poly(ctx, (1,), trim=False)

    @staticmethod
    def const(ctx, c):
        return Poly(ctx, (c,) if c else ())

    @staticmethod
    def gen(ctx):
        """The variable itself (t)."""
        return Poly(ctx, (0, 1), trim=False)

    @staticmethod
    def from_int_coeffs(ctx, ints):
        return Poly(ctx, tuple(ctx.from_int(n) for n in ints))

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.coeffs == (1,)

    def is_constant(self):
        return len(self.coeffs) <= 1

    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.ctx is other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self):
        from .parsing import poly_str
        return poly_str(self)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        add = ctx.add
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add[out[i]][c]
        return Poly(ctx, out)

    def __neg__(self):
        neg = self.ctx.neg
        return Poly(self.ctx, tuple(neg[c] for c in self.coeffs), trim=False)

    def __sub__(self, other):
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        sub = ctx.sub
        if len(a) >= len(b):
            out = list(a)
            for i, c in enumerate(b):
                out[i] = sub[out[i]][c]
        else:
            out = [ctx.neg[c] for c in b]
            for i, c in enumerate(a):
                out[i] = ctx.add[c][out[i]]
        return Poly(ctx, out)

    def __mul__(self, other):
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(ctx, (), trim=False)
        if len(a) == 1:
            return other.scale(a[0])
        if len(b) == 1:
            return self.scale(b[0])
        if ctx.k == 1 and len(a) + len(b) > _NUMPY_MUL_CUTOFF:
            c = np.convolve(np.asarray(a, dtype=np.int64),
                            np.asarray(b, dtype=np.int64)) % ctx.p
            return Poly(ctx, tuple(int(x) for x in c))
        mul, add = ctx.mul, ctx.add
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                row = mul[ai]
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = add[out[i + j]][row[bj]]
        return Poly(ctx, out)

    def scale(self, c):
        if not c:
            return Poly(self.ctx, (), trim=False)
        if c == 1:
            return self
        row = self.ctx.mul[c]
        return Poly(self.ctx, tuple(row[x] for x in self.coeffs), trim=False)

    def shift(self, k):
        """Multiply by t^k."""
        if not self.coeffs or k == 0:
            return self
        return Poly(self.ctx, (0,) * k + self.coeffs, trim=False)

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.one(self.ctx)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def pow_q(self, n=1):
        """Raise to the q^n-th power.

        Over F_q the coefficients are Frobenius-fixed, so the power just
        spreads coefficient j to position j*q^n.
        """
        ctx = self.ctx
        if n == 0 or not self.coeffs:
            return self
        if not getattr(ctx, "frobenius_fixed", False):
            return self ** (ctx.q ** n)
        step = ctx.q ** n
        out = [0] * ((len(self.coeffs) - 1) * step + 1)
        for j, c in enumerate(self.coeffs):
            out[j * step] = c
        return Poly(ctx, out, trim=False)

    def map_coeffs(self, f):
        return Poly(self.ctx, tuple(f(c) for c in self.coeffs))

    def __divmod__(self, other):
        ctx = self.ctx
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(a) - 1 < db:
            return Poly.zero(ctx), self
        inv_lead = ctx.inv[b[-1]]
        mul, sub = ctx.mul, ctx.sub
        quo = [0] * (len(a) - db)
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i]
            if c:
                qc = mul[c][inv_lead]
                quo[i - db] = qc
                row = mul[qc]
                for j in range(db + 1):
                    if b[j]:
                        a[i - db + j] = sub[a[i - db + j]][row[b[j]]]
        return Poly(ctx, quo), Poly(ctx, a[:db])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def monic(self):
        if not self.coeffs:
            return self
        return self.scale(self.ctx.inv[self.coeffs[-1]])

    def eval(self, x):
        """Value at a field element (Horner)."""
        ctx = self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.add[ctx.mul[acc][x]][c]
        return acc

    def derivative(self):
        ctx = self.ctx
        out = []
        for j in range(1, len(self.coeffs)):
            c = 0
            for _ in range(j % ctx.p):
                c = ctx.add[c][self.coeffs[j]]
            out.append(c)
        return Poly(ctx, out)

    def compose_mod(self, g, m):
        """self(g) mod m by Horner."""
        acc = Poly.zero(self.ctx)
        for c in reversed(self.coeffs):
            acc = (acc * g + Poly.const(self.ctx, c)) % m
        return acc


def poly_gcd(a, b):
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_xgcd(a, b):
    """Returns (g, u, v) with g = u*a + v*b, g monic (or zero)."""
    ctx = a.ctx
    r0, r1 = a, b
    s0, s1 = Poly.one(ctx), Poly.zero(ctx)
    t0, t1 = Poly.zero(ctx), Poly.one(ctx)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = ctx.inv[r0.lc()]
    return r0.scale(c), s0.scale(c), t0.scale(c)


def inverse_mod(a, m):
    g, u, _ = poly_xgcd(a % m, m)
    if not g.is_one():
        raise ZeroDivisionError("element is not invertible mod %r" % (m,))
    return u % m


def valuation(f, g):
    """Exact order of g in f; inf for f = 0."""
    if f.is_zero():
        return math.inf
    if g.is_constant():
        raise ValueError("valuation needs a nonconstant modulus")
    v = 0
    while True:
        q, r = divmod(f, g)
        if not r.is_zero():
            return v
        f = q
        v += 1


def frobenius_mod(x, m, n=1):
    """x^(q^n) mod m using coefficient spreading plus reduction."""
    for _ in range(n):
        x = x.pow_q() % m
    return x


def is_irreducible(f):
    """Rabin's test."""
    d = f.degree
    if d is NEG_INF or d < 1:
        return False
    if d == 1:
        return True
    t = Poly.gen(f.ctx)
    # t^(q^i) mod f for i = 1..d
    chain = [t % f]
    x = t % f
    for _ in range(d):
        x = frobenius_mod(x, f)
        chain.append(x)
    if chain[d] != t % f:
        return False
    dd = d
    primes = []
    e = 2
    while e * e <= dd:
        if dd % e == 0:
            primes.append(e)
            while dd % e == 0:
                dd //= e
        e += 1
    if dd > 1:
        primes.append(dd)
    for ell in primes:
        g = poly_gcd(chain[d // ell] - t, f)
        if not g.is_one():
            return False
    return True


def monic_polys(ctx, degree):
    """All monic polynomials of the given degree, ordered lexicographically
    with the constant coefficient most significant."""
    q = ctx.q
    for n in range(q ** degree):
        coeffs = [0] * degree + [1]
        m = n
        for j in range(degree - 1, -1, -1):
            coeffs[j] = m % q
            m //= q
        yield Poly(ctx, coeffs, trim=False)


class Place:
    """A finite place: monic irreducible p in F_q[t].

    satisfies_h is the hypothesis flag used throughout: it fails only for
    q = 2 at the two degree one places.
    """

    __slots__ = ("poly", "degree", "satisfies_h")

    def __init__(self, poly):
        self.poly = poly
        self.degree = len(poly.coeffs) - 1
        self.satisfies_h = not (poly.ctx.q == 2 and self.degree == 1)

    def __eq__(self, other):
        return isinstance(other, Place) and self.poly == other.poly

    def __hash__(self):
        return hash(("place", self.poly))

    def __repr__(self):
        return "Place(%s)" % (self.poly,)


@functools.lru_cache(maxsize=None)
def _places_cached(ctx, degree):
    return tuple(Place(f) for f in monic_polys(ctx, degree) if is_irreducible(f))


def places(ctx, degree):
    """All places of exact degree, in the monic_polys order."""
    return list(_places_cached(ctx, degree))


def places_up_to(ctx, max_degree, h_only=False):
    out = []
    for d in range(1, max_degree + 1):
        for pl in _places_cached(ctx, d):
            if h_only and not pl.satisfies_h:
                continue
            out.append(pl)
    return out


def irreducible_count(q, d):
    """Number of monic irreducibles of degree d (Gauss's formula)."""
    def mobius(n):
        out = 1
        e = 2
        while e * e <= n:
            if n % e == 0:
                n //= e
                if n % e == 0:
                    return 0
                out = -out
            e += 1
        if n > 1:
            out = -out
        return out

    total = 0
    e = 1
    while e <= d:
        if d % e == 0:
            total += mobius(e) * q ** (d // e)
        e += 1
    return total // d


class RationalFunction:
    """Reduced fraction of Polys with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        ctx = num.ctx
        if den is None:
            den = Poly.one(ctx)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce and not num.is_zero():
            g = poly_gcd(num, den)
            if not g.is_one():
                num = num // g
                den = den // g
        if num.is_zero():
            den = Poly.one(ctx)
        elif den.lc() != 1:
            c = ctx.inv[den.lc()]
            num = num.scale(c)
            den = den.scale(c)
        self.num = num
        self.den = den

    @staticmethod
    def zero(ctx):
        return RationalFunction(Poly.zero(ctx), reduce=False)

    @staticmethod
    def one(ctx):
        return RationalFunction(Poly.one(ctx), reduce=False)

    @staticmethod
    def of(poly):
        return RationalFunction(poly, reduce=False)

    @property
    def ctx(self):
        return self.num.ctx

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_poly(self):
        return self.den.is_one()

    def to_poly(self):
        if not self.den.is_one():
            raise ValueError("not a polynomial: %r" % (self,))
        return self.num

    def __add__(self, other):
        if isinstance(other, Poly):
            other = RationalFunction.of(other)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __sub__(self, other):
        if isinstance(other, Poly):
            other = RationalFunction.of(other)
        return RationalFunction(self.num * other.den - other.num * self.den,
                                self.den * other.den)

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __mul__(self, other):
        if isinstance(other, Poly):
            other = RationalFunction.of(other)
        # cross-reduce to keep intermediate degrees down
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1 = self.num // g1 if not g1.is_one() else self.num
        d2 = other.den // g1 if not g1.is_one() else other.den
        n2 = other.num // g2 if not g2.is_one() else other.num
        d1 = self.den // g2 if not g2.is_one() else self.den
        return RationalFunction(n1 * n2, d1 * d2, reduce=False)

    def __truediv__(self, other):
        if isinstance(other, Poly):
            other = RationalFunction.of(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return self * RationalFunction(other.den, other.num)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = RationalFunction.one(self.ctx)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def pow_q(self, n=1):
        return RationalFunction(self.num.pow_q(n), self.den.pow_q(n), reduce=False)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.den.is_one() and self.num == other
        return (isinstance(other, RationalFunction)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def valuation_at(self, p):
        if self.is_zero():
            return math.inf
        return valuation(self.num, p) - valuation(self.den, p)

    def reduce_mod(self, m):
        """Image in F_q[t]/(m); denominator must be invertible mod m."""
        return (self.num * inverse_mod(self.den, m)) % m

    def __repr__(self):
        from .parsing import poly_str
        if self.den.is_one():
            return poly_str(self.num)
        return "(%s)/(%s)" % (poly_str(self.num), poly_str(self.den))
