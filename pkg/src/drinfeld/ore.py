"""Twisted polynomial ring F_q[t]{tau} and Drinfeld modules of rank r.

tau acts on F_q[t] as the q-power Frobenius, so tau*c = c^q*tau.  An OrePoly
is a tuple of Poly coefficients indexed by tau-power.  A DrinfeldModel is
determined by phi_t = t + g_1 tau + ... + g_r tau^r with g_r nonzero.
"""

from .poly import Poly, frobenius_mod


class OrePoly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs, trim=True):
        coeffs = tuple(coeffs)
        if trim:
            n = len(coeffs)
            while n and coeffs[n - 1].is_zero():
                n -= 1
            coeffs = coeffs[:n]
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("OrePoly is immutable")

    @staticmethod
    def zero(ctx):
        return OrePoly(ctx, (), trim=False)

    @staticmethod
    def one(ctx):
        return OrePoly(ctx, (Poly.one(ctx),), trim=False)

    @staticmethod
    def const(poly):
        return OrePoly(poly.ctx, (poly,))

    @staticmethod
    def tau(ctx, n=1):
        return OrePoly(ctx, (Poly.zero(ctx),) * n + (Poly.one(ctx),), trim=False)

    @property
    def tau_degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Poly.zero(self.ctx)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, OrePoly) and self.ctx is other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return OrePoly(self.ctx, out)

    def __neg__(self):
        return OrePoly(self.ctx, tuple(-c for c in self.coeffs), trim=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        # tau^i * c = c^(q^i) * tau^i
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return OrePoly.zero(self.ctx)
        out = [Poly.zero(self.ctx) for _ in range(len(a) + len(b) - 1)]
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            for j, bj in enumerate(b):
                if bj.is_zero():
                    continue
                out[i + j] = out[i + j] + ai * bj.pow_q(i)
        return OrePoly(self.ctx, out)

    def scale(self, poly):
        return OrePoly(self.ctx, tuple(poly * c for c in self.coeffs))

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power in a twisted polynomial ring")
        out = OrePoly.one(self.ctx)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def eval(self, x):
        """Additive evaluation: sum f_i * x^(q^i)."""
        out = Poly.zero(self.ctx)
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                out = out + c * x.pow_q(i)
        return out

    def eval_mod(self, x, m):
        out = Poly.zero(self.ctx)
        xi = x % m
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                out = (out + c * xi) % m
            if i + 1 < len(self.coeffs):
                xi = frobenius_mod(xi, m)
        return out

    def __repr__(self):
        from .parsing import ore_str
        return ore_str(self)


class DrinfeldModel:
    """Rank r module phi over F_q[t], stored by its tau-coefficients g_1..g_r."""

    __slots__ = ("ctx", "g", "phi_t", "_tpow", "_gred")

    def __init__(self, ctx, g):
        g = tuple(g)
        if not g or g[-1].is_zero():
            raise ValueError("rank r >= 1 needs a nonzero leading coefficient")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "phi_t",
                           OrePoly(ctx, (Poly.gen(ctx),) + g, trim=False))
        object.__setattr__(self, "_tpow", {})
        object.__setattr__(self, "_gred", {})

    def __setattr__(self, name, value):
        raise AttributeError("DrinfeldModel is immutable")

    @staticmethod
    def carlitz(ctx):
        return DrinfeldModel(ctx, (Poly.one(ctx),))

    @property
    def rank(self):
        return len(self.g)

    def is_carlitz(self):
        return len(self.g) == 1 and self.g[0].is_one()

    def __eq__(self, other):
        return (isinstance(other, DrinfeldModel) and self.ctx is other.ctx
                and self.g == other.g)

    def __hash__(self):
        return hash((id(self.ctx), self.g))

    def __repr__(self):
        from .parsing import model_str
        return "DrinfeldModel(%s)" % model_str(self)

    def phi_t_pow(self, k):
        """phi_{t^k} as an OrePoly, memoized.  Coefficients grow like q^k,
        so keep k small; evaluation paths below never build this."""
        cache = self._tpow
        if k not in cache:
            if k == 0:
                cache[k] = OrePoly.one(self.ctx)
            else:
                cache[k] = self.phi_t * self.phi_t_pow(k - 1)
        return cache[k]

    def phi(self, a):
        """phi_a for a in F_q[t]."""
        out = OrePoly.zero(self.ctx)
        for j, c in enumerate(a.coeffs):
            if c:
                out = out + self.phi_t_pow(j).scale(Poly.const(self.ctx, c))
        return out

    def phi_t_eval(self, x):
        out = Poly.gen(self.ctx) * x
        for i, gi in enumerate(self.g, start=1):
            if not gi.is_zero():
                out = out + gi * x.pow_q(i)
        return out

    def reduced_g(self, m):
        """g_1..g_r reduced mod m, cached; the coefficients of a small model
        can have degree near q^r, far above the moduli the searches use."""
        cache = self._gred
        out = cache.get(m)
        if out is None:
            out = tuple(gi if gi.degree < m.degree else gi % m
                        for gi in self.g)
            cache[m] = out
        return out

    def phi_t_eval_mod(self, x, m):
        out = (Poly.gen(self.ctx) * x) % m
        xi = x
        for gi in self.reduced_g(m):
            xi = frobenius_mod(xi, m)
            if not gi.is_zero():
                out = (out + gi * xi) % m
        return out

    def phi_eval(self, a, x):
        """phi_a(x), exact, by Horner in t: S -> phi_t(S) + a_j x."""
        if a.is_zero() or x.is_zero():
            return Poly.zero(self.ctx)
        acc = x.scale(a.coeffs[-1])
        for j in range(len(a.coeffs) - 2, -1, -1):
            acc = self.phi_t_eval(acc)
            if a.coeffs[j]:
                acc = acc + x.scale(a.coeffs[j])
        return acc

    def phi_eval_mod(self, a, x, m):
        if a.is_zero():
            return Poly.zero(self.ctx)
        x = x % m
        acc = x.scale(a.coeffs[-1])
        for j in range(len(a.coeffs) - 2, -1, -1):
            acc = self.phi_t_eval_mod(acc, m)
            if a.coeffs[j]:
                acc = (acc + x.scale(a.coeffs[j])) % m
        return acc

    def is_small(self):
        """deg g_i <= q^i for every i."""
        return all(g.degree <= self.ctx.q ** i
                   for i, g in enumerate(self.g, start=1))

    def is_very_small(self):
        """deg g_i < q^i for every i."""
        return all(g.degree < self.ctx.q ** i
                   for i, g in enumerate(self.g, start=1))

    def twist_by(self, h):
        """Isomorphic model with g_i replaced by g_i * h^(q^i - 1)."""
        if h.is_zero():
            raise ValueError("twist by zero")
        out = []
        for i, gi in enumerate(self.g, start=1):
            q, r = divmod(h.pow_q(i), h)
            assert r.is_zero()
            out.append(gi * q)
        return DrinfeldModel(self.ctx, out)


def smallest_h_place(ctx):
    """The first place satisfying the hypothesis: t, except t^2+t+1 at q=2."""
    from .poly import Place
    if ctx.q == 2:
        return Place(Poly(ctx, (1, 1, 1), trim=False))
    return Place(Poly.gen(ctx))


def is_torsion_point(model, x):
    """Decide torsion and return (flag, monic annihilator generator or None).

    The fitting ideal at the smallest hypothesis place kills every torsion
    point, and torsion injects into the residue module there, so x is torsion
    iff phi_{a0}(x) = 0 exactly; the annihilator generator is then the first
    monic divisor of a0 (by degree, then lex) that kills x.
    """
    from .poly import monic_polys
    from .residue import fitting_ideal

    ctx = model.ctx
    if x.is_zero():
        return True, Poly.one(ctx)
    p0 = smallest_h_place(ctx)
    a0 = fitting_ideal(model, p0.poly)
    if not model.phi_eval(a0, x).is_zero():
        return False, None
    for d in range(1, a0.degree + 1):
        for cand in monic_polys(ctx, d):
            if (a0 % cand).is_zero() and model.phi_eval(cand, x).is_zero():
                return True, cand
    return True, a0
