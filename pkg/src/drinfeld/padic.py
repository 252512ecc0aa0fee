"""Truncated arithmetic in the completion K_p at a finite place p.

A PadicApprox is p^val * unit + O(p^(val+relprec)) with unit a unit mod p,
reduced mod p^relprec.  Exact zero is val = +inf.  When every digit in range
cancels, the result degrades to an "apparent zero" O(p^A) (val is None); any
operation that then needs the valuation raises PrecisionError, so flows pick
a larger working precision instead of silently reporting a wrong valuation.
"""

import math

from .poly import Poly, inverse_mod, valuation
from .wieferich import bounded_valuation


class PrecisionError(ArithmeticError):
    pass


class PadicApprox:
    __slots__ = ("place", "val", "unit", "relprec")

    def __init__(self, place, val, unit, relprec):
        self.place = place
        self.val = val
        self.unit = unit
        self.relprec = relprec

    # -- constructors ------------------------------------------------------

    @staticmethod
    def exact_zero(place):
        return PadicApprox(place, math.inf, None, math.inf)

    @staticmethod
    def apparent_zero(place, abs_prec):
        return PadicApprox(place, None, None, abs_prec)

    @staticmethod
    def from_poly(f, place, prec):
        """f an exact polynomial, result carried to O(p^prec)."""
        if f.is_zero():
            return PadicApprox.exact_zero(place)
        p = place.poly
        v = valuation(f, p)
        if prec - v <= 0:
            return PadicApprox.apparent_zero(place, prec)
        u = f
        for _ in range(v):
            u = u // p
        return PadicApprox(place, v, u % p ** (prec - v), prec - v)

    @staticmethod
    def from_rational(r, place, prec):
        if r.num.is_zero():
            return PadicApprox.exact_zero(place)
        p = place.poly
        vn = valuation(r.num, p)
        vd = valuation(r.den, p)
        rel = prec - (vn - vd)
        if rel <= 0:
            return PadicApprox.apparent_zero(place, prec)
        a = PadicApprox.from_poly(r.num, place, vn + rel)
        b = PadicApprox.from_poly(r.den, place, vd + rel)
        return a * b.inverse()

    # -- structure ---------------------------------------------------------

    @property
    def is_exact_zero(self):
        return self.val == math.inf

    @property
    def is_apparent_zero(self):
        return self.val is None

    @property
    def abs_prec(self):
        if self.is_exact_zero:
            return math.inf
        if self.is_apparent_zero:
            return self.relprec
        return self.val + self.relprec

    def valuation(self):
        if self.is_exact_zero:
            return math.inf
        if self.is_apparent_zero:
            raise PrecisionError(
                "value is O(p^%s): valuation needs more working precision"
                % (self.relprec,))
        return self.val

    def __bool__(self):
        return not self.is_exact_zero

    def truncate(self, abs_prec):
        if self.is_exact_zero:
            return self
        if self.is_apparent_zero:
            return PadicApprox.apparent_zero(self.place, min(self.relprec, abs_prec))
        rel = min(self.relprec, abs_prec - self.val)
        if rel <= 0:
            return PadicApprox.apparent_zero(self.place, abs_prec)
        p = self.place.poly
        return PadicApprox(self.place, self.val, self.unit % p ** rel, rel)

    def lift_mod(self, k):
        """Polynomial representative mod p^k (needs val >= 0, abs_prec >= k)."""
        if self.abs_prec < k:
            raise PrecisionError("lift mod p^%d from O(p^%s)" % (k, self.abs_prec))
        if self.is_exact_zero or self.is_apparent_zero or self.val >= k:
            ctx = self.place.poly.ctx
            return Poly.zero(ctx)
        if self.val < 0:
            raise ValueError("negative valuation has no polynomial lift")
        p = self.place.poly
        return (p ** self.val * self.unit) % p ** k

    # -- arithmetic --------------------------------------------------------

    def __neg__(self):
        if self.is_exact_zero or self.is_apparent_zero:
            return self
        return PadicApprox(self.place, self.val, -self.unit, self.relprec)

    def __add__(self, other):
        assert self.place == other.place
        if self.is_exact_zero:
            return other
        if other.is_exact_zero:
            return self
        A = min(self.abs_prec, other.abs_prec)
        if A <= 0:
            return PadicApprox.apparent_zero(self.place, A)
        p = self.place.poly
        parts = []
        for x in (self, other):
            if x.is_apparent_zero or x.val >= A:
                continue
            if x.val < 0:
                return self._add_negval(other, A)
            parts.append((p ** x.val * x.unit))
        if not parts:
            return PadicApprox.apparent_zero(self.place, A)
        pA = p ** A
        s = Poly.zero(p.ctx)
        for f in parts:
            s = (s + f) % pA
        v = bounded_valuation(s, p, A)
        if v is None:
            return PadicApprox.apparent_zero(self.place, A)
        u = s
        for _ in range(v):
            u = u // p
        return PadicApprox(self.place, v, u, A - v)

    def _add_negval(self, other, A):
        # shift both by p^(-m), add, shift back; keeps units polynomial
        m = -min(x.val for x in (self, other) if not x.is_apparent_zero)
        return (self.shift(m) + other.shift(m)).shift(-m)

    def shift(self, k):
        """Multiply by p^k."""
        if self.is_exact_zero:
            return self
        if self.is_apparent_zero:
            return PadicApprox.apparent_zero(self.place, self.relprec + k)
        return PadicApprox(self.place, self.val + k, self.unit, self.relprec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        assert self.place == other.place
        if self.is_exact_zero or other.is_exact_zero:
            return PadicApprox.exact_zero(self.place)
        if self.is_apparent_zero or other.is_apparent_zero:
            va = self.relprec if self.is_apparent_zero else self.val
            vb = other.relprec if other.is_apparent_zero else other.val
            return PadicApprox.apparent_zero(self.place, va + vb)
        rel = min(self.relprec, other.relprec)
        p = self.place.poly
        u = (self.unit * other.unit) % p ** rel
        return PadicApprox(self.place, self.val + other.val, u, rel)

    def inverse(self):
        if self.is_exact_zero:
            raise ZeroDivisionError("inverse of zero")
        if self.is_apparent_zero:
            raise PrecisionError("cannot invert an apparent zero")
        p = self.place.poly
        u = inverse_mod(self.unit, p ** self.relprec)
        return PadicApprox(self.place, -self.val, u, self.relprec)

    def __truediv__(self, other):
        return self * other.inverse()

    def mul_poly(self, f):
        """Multiply by an exact polynomial."""
        if self.is_exact_zero or f.is_zero():
            return PadicApprox.exact_zero(self.place)
        p = self.place.poly
        v = valuation(f, p)
        u = f
        for _ in range(v):
            u = u // p
        if self.is_apparent_zero:
            return PadicApprox.apparent_zero(self.place, self.relprec + v)
        return PadicApprox(self.place, self.val + v,
                           (self.unit * u) % p ** self.relprec, self.relprec)

    def pow_q(self, n=1):
        """Raise to the q^n-th power (relative precision is preserved)."""
        if self.is_exact_zero:
            return self
        qn = self.place.poly.ctx.q ** n
        if self.is_apparent_zero:
            return PadicApprox.apparent_zero(self.place, self.relprec * qn)
        p = self.place.poly
        u = pow_mod(self.unit, qn, p ** self.relprec)
        return PadicApprox(self.place, self.val * qn, u, self.relprec)

    def value_at_least(self, k):
        """Certified v_p >= k?  Raises if the precision cannot decide."""
        if self.is_exact_zero:
            return True
        if self.is_apparent_zero:
            if self.relprec >= k:
                return True
            raise PrecisionError("O(p^%s) cannot certify v >= %d" % (self.relprec, k))
        if self.val >= k:
            return True
        return False

    def eq_mod(self, other, k):
        d = self - other
        if d.is_exact_zero:
            return True
        if d.is_apparent_zero:
            if d.relprec >= k:
                return True
            raise PrecisionError("difference only known to O(p^%s)" % (d.relprec,))
        return d.val >= k

    def __repr__(self):
        if self.is_exact_zero:
            return "0 (exact)"
        if self.is_apparent_zero:
            return "O(p^%s)" % (self.relprec,)
        return "p^%d*(%r) + O(p^%s)" % (self.val, self.unit, self.abs_prec)


def pow_mod(f, e, m):
    out = Poly.one(f.ctx)
    base = f % m
    while e:
        if e & 1:
            out = (out * base) % m
        base = (base * base) % m
        e >>= 1
    return out
