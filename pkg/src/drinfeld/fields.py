"""Finite field contexts with table-based arithmetic.

Elements of F_q, q = p^k, are encoded as plain ints in range(q): the integer
sum(a_i * p**i) stands for sum(a_i * z**i), z a fixed generator of F_q over
F_p.  For prime q the int is just the residue.  Binary operations go through
small precomputed tables, so elements stay hashable, picklable and cheap to
ship into numpy arrays.

Residue fields F_q[t]/(p) reuse the same interface (see residue.py), which
lets the generic polynomial layer in poly.py work over either kind of field.
"""

import functools


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _fp_poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _fp_poly_mod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return a[:dm]


def _fp_irreducible(m, p):
    """Trial division by every monic of degree <= deg/2 (deg stays tiny here)."""
    deg = len(m) - 1
    if deg == 1:
        return True
    for dd in range(1, deg // 2 + 1):
        for idx in range(p ** dd):
            f = []
            n = idx
            for _ in range(dd):
                f.append(n % p)
                n //= p
            f.append(1)
            if not any(_fp_poly_mod(m, f, p)):
                return False
    return True


class FqContext:
    """Arithmetic for F_q with precomputed operation tables."""

    def __init__(self, p, k=1, modulus=None):
        if not _is_prime(p):
            raise ValueError("p must be prime, got %r" % (p,))
        if k < 1:
            raise ValueError("k must be >= 1")
        self.p = p
        self.k = k
        self.q = p ** k
        if k == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = _default_modulus(p, k)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree k")
            if not _fp_irreducible(list(modulus), p):
                raise ValueError("modulus is reducible")
            self.modulus = modulus
        self._build_tables()
        # polynomial coefficients drawn from this field are fixed by x -> x^q
        self.frobenius_fixed = True

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        if k == 1:
            add = [[(a + b) % p for b in range(p)] for a in range(p)]
            mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            digs = [self._digits(a) for a in range(q)]
            add = [[self._undigits([(x + y) % p for x, y in zip(digs[a], digs[b])])
                    for b in range(q)] for a in range(q)]
            mul = []
            for a in range(q):
                row = []
                for b in range(q):
                    prod = _fp_poly_mul(digs[a], digs[b], p)
                    prod = _fp_poly_mod(prod + [0] * k, list(self.modulus), p)
                    row.append(self._undigits(prod))
                mul.append(row)
        self.add = tuple(tuple(r) for r in add)
        self.mul = tuple(tuple(r) for r in mul)
        neg = [0] * q
        for a in range(q):
            for b in range(q):
                if self.add[a][b] == 0:
                    neg[a] = b
                    break
        self.neg = tuple(neg)
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul[a][b] == 1:
                    inv[a] = b
                    break
        self.inv = tuple(inv)
        self.sub = tuple(tuple(self.add[a][self.neg[b]] for b in range(q))
                         for a in range(q))

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, digs):
        n = 0
        for c in reversed(digs):
            n = n * self.p + (c % self.p)
        return n

    def from_int(self, n):
        """Image of an integer under Z -> F_p -> F_q."""
        return n % self.p

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv[a], -e
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul[out][base]
            base = self.mul[base][base]
            e >>= 1
        return out

    def frob(self, a):
        """x -> x^p."""
        return self.pow(a, self.p)

    def elem_str(self, a):
        if self.k == 1:
            return str(a)
        digs = self._digits(a)
        terms = []
        for i in range(self.k - 1, -1, -1):
            c = digs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                zs = "z" if i == 1 else "z^%d" % i
                terms.append(zs if c == 1 else "%d*%s" % (c, zs))
        return "+".join(terms) if terms else "0"

    def elements(self):
        return range(self.q)

    def __repr__(self):
        if self.k == 1:
            return "FqContext(q=%d)" % self.q
        return "FqContext(q=%d, modulus=%s)" % (self.q, self.elem_str(self._undigits(list(self.modulus[:-1]))) )

    def __reduce__(self):
        # picklable by construction args so contexts cross process boundaries
        return (fq_context, (self.p, self.k, self.modulus))


def _default_modulus(p, k):
    if (p, k) == (2, 2):
        return (1, 1, 1)  # z^2 + z + 1
    # first irreducible monic in lex order on (c_0, ..., c_{k-1})
    for idx in range(p ** k):
        f = []
        n = idx
        for _ in range(k):
            f.append(n % p)
            n //= p
        f.append(1)
        if _fp_irreducible(f, p):
            return tuple(f)
    raise RuntimeError("no irreducible modulus found")


@functools.lru_cache(maxsize=None)
def _fq_cached(p, k, modulus):
    return FqContext(p, k, modulus)


def fq_context(p, k=1, modulus=None):
    """Shared context factory; equivalent arguments give the identical object."""
    if k == 1:
        modulus = None
    elif modulus is None:
        modulus = _default_modulus(p, k)
    else:
        modulus = tuple(int(c) % p for c in modulus)
    return _fq_cached(p, k, modulus)
