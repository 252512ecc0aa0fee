"""Batched prime-field polynomial kernels for high-throughput place searches.

Rows are candidate moduli processed in lockstep: coefficients live in int16
arrays reduced mod q, one polynomial per row, ascending powers, the monic top
coefficient implicit. Only prime q is supported; coefficient Frobenius is
then the identity and y(t)^q = y(t^q).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "candidate_block",
    "carlitz_wieferich_mask",
    "irreducible_candidate_mask",
    "monic_by_index",
]


def candidate_block(q, degree, start, stop):
    """Rows [c_0..c_{d-1}] of monic candidates start..stop-1, in the order
    that puts the constant coefficient in the most significant index digit."""
    ns = np.arange(start, stop, dtype=np.int64)
    cols = [(ns // q ** (degree - 1 - j)) % q for j in range(degree)]
    return np.stack(cols, axis=1).astype(np.int16)


def monic_by_index(ctx, degree, index):
    """The index-th monic polynomial of the given degree, same order as
    candidate_block and the sequential enumeration."""
    from .poly import Poly

    coeffs = [0] * degree + [1]
    m = index
    for j in range(degree - 1, -1, -1):
        coeffs[j] = m % ctx.q
        m //= ctx.q
    return Poly(ctx, coeffs, trim=False)


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _power_table(F, q, kmax):
    """T[k - w] = coefficients of t^k mod f, k = w..kmax, per row of F."""
    n, w = F.shape
    T = np.empty((kmax - w + 1, n, w), dtype=np.int16)
    T[0] = (-F) % q
    for k in range(1, kmax - w + 1):
        prev = T[k - 1]
        cur = np.zeros_like(prev)
        cur[:, 1:] = prev[:, :-1]
        cur += prev[:, w - 1 : w] * T[0]
        np.mod(cur, q, out=cur)
        T[k] = cur
    return T


def _reduce(Z, T, q, w):
    """Z (n, L) folded into degree < w using the power table of the moduli."""
    R = Z[:, :w].astype(np.int32)
    for k in range(w, Z.shape[1]):
        R += Z[:, k, None].astype(np.int32) * T[k - w]
    np.mod(R, q, out=R)
    return R.astype(np.int16)


def _frobenius(Y, q):
    """y(t) -> y(t^q) by coefficient spreading; valid for prime q only."""
    n, w = Y.shape
    Z = np.zeros((n, q * (w - 1) + 1), dtype=np.int16)
    Z[:, ::q] = Y
    return Z


def _root_free_mask(F, q):
    """False where the monic row polynomial has a root in the prime field."""
    n, d = F.shape
    mask = np.ones(n, dtype=bool)
    for c in range(q):
        acc = np.ones(n, dtype=np.int32)
        for j in range(d - 1, -1, -1):
            acc = (acc * c + F[:, j]) % q
        mask &= acc != 0
    return mask


def irreducible_candidate_mask(F, q):
    """Necessary-condition filter: keeps rows with no prime-field root,
    t^{q^d} = t mod f, and t^{q^{d/l}} != t for every prime l dividing d.
    Every irreducible row passes; the sparse composite survivors (mixed
    factor degrees all dividing d but none equal to it) must be rejected by
    an exact scalar check."""
    n, d = F.shape
    if d == 1:
        return np.ones(n, dtype=bool)
    mask = _root_free_mask(F, q)
    live = np.flatnonzero(mask)
    if live.size == 0:
        return mask
    S = F[live]
    T = _power_table(S, q, q * (d - 1))
    t_row = np.zeros((live.size, d), dtype=np.int16)
    t_row[:, 1] = 1
    proper = {d // l for l in _prime_divisors(d)}
    sub = np.ones(live.size, dtype=bool)
    Y = t_row
    for j in range(1, d + 1):
        Y = _reduce(_frobenius(Y, q), T, q, d)
        if j in proper:
            sub &= ~np.all(Y == t_row, axis=1)
    sub &= np.all(Y == t_row, axis=1)
    mask[live[~sub]] = False
    return mask


def _square_monic(F, q):
    """Lower 2d coefficients of f^2 for monic f with lower coefficients F."""
    n, d = F.shape
    w = 2 * d
    full = np.zeros((n, d + 1), dtype=np.int32)
    full[:, :d] = F
    full[:, d] = 1
    G = np.zeros((n, w), dtype=np.int32)
    for i in range(d + 1):
        hi = min(d + 1, w - i)
        if hi > 0:
            G[:, i : i + hi] += full[:, i, None] * full[:, :hi]
    np.mod(G, q, out=G)
    return G.astype(np.int16)


def carlitz_wieferich_mask(F, q):
    """True where phi_{f-1}(1) = 0 mod f^2 for the Carlitz module phi_t =
    t + tau, f the monic row polynomial. Meaningful for irreducible f; on
    composite rows it is just the same congruence."""
    n, d = F.shape
    if n == 0:
        return np.zeros(0, dtype=bool)
    w = 2 * d
    G = _square_monic(F, q)
    T = _power_table(G, q, q * (w - 1))
    # phi_{f-1}(1) = sum_j a_j phi_t^j(1) with a_j the coefficients of f - 1
    z = np.zeros((n, w), dtype=np.int16)
    z[:, 0] = 1
    acc = np.zeros((n, w), dtype=np.int32)
    a0 = (F[:, 0].astype(np.int32) - 1) % q
    acc[:, 0] = a0
    for j in range(1, d + 1):
        tz = np.zeros_like(z)
        tz[:, 1:] = z[:, :-1]
        tz = tz.astype(np.int32) + z[:, w - 1, None].astype(np.int32) * T[0]
        zq = _reduce(_frobenius(z, q), T, q, w)
        z = (tz + zq) % q
        z = z.astype(np.int16)
        coef = F[:, j, None].astype(np.int32) if j < d else 1
        acc += coef * z
    np.mod(acc, q, out=acc)
    return ~acc.any(axis=1)
