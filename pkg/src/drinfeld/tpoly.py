"""Polynomials in an auxiliary variable T over an arbitrary coefficient ring.

Coefficients only need +, -, * and truthiness (falsy = zero), which covers
Poly, RationalFunction and the p-adic approximations in lseries.py.  A TPoly
carries its own zero element so padding and mapping stay type-correct.
"""


class TPoly:
    __slots__ = ("coeffs", "zero")

    def __init__(self, coeffs, zero, trim=True):
        coeffs = tuple(coeffs)
        if trim:
            n = len(coeffs)
            while n and not coeffs[n - 1]:
                n -= 1
            coeffs = coeffs[:n]
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "zero", zero)

    def __setattr__(self, name, value):
        raise AttributeError("TPoly is immutable")

    @staticmethod
    def const(c, zero=None):
        if zero is None:
            zero = c - c
        return TPoly((c,), zero)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.zero

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return TPoly(out, self.zero)

    def __neg__(self):
        return TPoly(tuple(-c for c in self.coeffs), self.zero, trim=False)

    def __sub__(self, other):
        return self + (-other)

    def mul(self, other, trunc=None):
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return TPoly((), self.zero, trim=False)
        n = len(a) + len(b) - 1
        if trunc is not None:
            n = min(n, trunc)
        out = [self.zero] * n
        for i, ai in enumerate(a):
            if not ai or i >= n:
                continue
            stop = min(len(b), n - i)
            for j in range(stop):
                if b[j]:
                    out[i + j] = out[i + j] + ai * b[j]
        return TPoly(out, self.zero)

    def __mul__(self, other):
        return self.mul(other)

    def scale(self, c):
        return TPoly(tuple(c * x for x in self.coeffs), self.zero)

    def shift(self, k):
        if not self.coeffs or k == 0:
            return self
        return TPoly((self.zero,) * k + self.coeffs, self.zero, trim=False)

    def __pow__(self, e):
        # no stored ring one, so square-and-multiply is seeded by self (e >= 1)
        if e < 1:
            raise ValueError("T-polynomial powers need e >= 1")
        out = self
        for bit in bin(e)[3:]:
            out = out * out
            if bit == "1":
                out = out * self
        return out

    def map(self, f, zero=None):
        if zero is None:
            zero = self.zero
        return TPoly(tuple(f(c) for c in self.coeffs), zero)

    def value_at_one(self):
        out = self.zero
        for c in self.coeffs:
            out = out + c
        return out

    def eval(self, x, one=None):
        """Horner evaluation at x from the coefficient ring."""
        out = self.zero
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def divide_T_minus_1(self):
        """Synthetic division by (T - 1): returns (quotient, remainder)."""
        if not self.coeffs:
            return self, self.zero
        acc = self.zero
        out = [self.zero] * (len(self.coeffs) - 1)
        for i in range(len(self.coeffs) - 1, 0, -1):
            acc = acc + self.coeffs[i]
            out[i - 1] = acc
        rem = acc + self.coeffs[0]
        return TPoly(out, self.zero), rem

    def __repr__(self):
        from .parsing import tpoly_str
        return tpoly_str(self)
