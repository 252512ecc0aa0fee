"""L-series machinery for Drinfeld models over F_q[t].

Covers local L-factors, truncated formal and p-omitted L-series (exact
coefficients in K), exponential and logarithm coefficient recursions,
Taelman units, the p-adic logarithm, the L-value at T = 1 and the special
value after factoring out (T - 1)^k.

Value conventions.  The formal series is the Euler product over finite
places, L(T) = prod_p P_p(T)^{-1} with P_p(T) = p^{-1} |phi~(F_p)|, so its
T^n-coefficients live in K and only places of degree <= n contribute.  The
p-adic value at 1 is computed two ways and both must agree: summing the
series coefficients until their p-adic valuations clear the requested
precision over a window, and the class-formula route through the p-adic
logarithm of phi_a(u(1)) with a the Fitting generator.  The series route is
primary for very small models, where the formal L-series coincides with the
T-expansion of the twisted logarithm at 1 and its coefficients follow the
cheap log recursion; for other models exact coefficients cost one term per
monic polynomial, so the class-formula route is primary and the Euler
partial sums serve as a budgeted consistency check.
"""

from dataclasses import dataclass

from .ore import is_torsion_point
from .padic import PadicApprox, PrecisionError, pow_mod
from .poly import Place, Poly, RationalFunction, places_up_to, valuation
from .residue import fitting_ideal, twisted_fitting
from .tpoly import TPoly
from .wieferich import ordic_valuation


@dataclass(frozen=True)
class TruncatedLSeries:
    """Coefficients c_0 .. c_{N-1} in K; omitted is the skipped place, if any."""

    coeffs: tuple
    order: int
    omitted: Place = None

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)


@dataclass(frozen=True)
class LocalFactor:
    """P_p(phi;T) in 1 + T^{deg p} K[T], as a TPoly over RationalFunction."""

    tpoly: TPoly
    place: Place

    def __getitem__(self, n):
        return self.tpoly[n]

    @property
    def degree(self):
        return self.tpoly.degree


@dataclass(frozen=True)
class TaelmanUnit:
    """u_phi(T); coefficients lie in A and certified is True for small models."""

    poly: TPoly
    certified: bool


# ---------------------------------------------------------------------------
# exponential / logarithm coefficients

_EXP_CACHE = {}
_LOG_CACHE = {}


def exp_coeffs(model, N):
    """e_0 .. e_N of exp_phi, exact in K: e_n = (t^{q^n}-t)^{-1} sum g_i e_{n-i}^{q^i}."""
    ctx = model.ctx
    t = Poly.gen(ctx)
    seq = _EXP_CACHE.setdefault(model, [RationalFunction.one(ctx)])
    while len(seq) <= N:
        n = len(seq)
        s = RationalFunction.zero(ctx)
        for i in range(1, min(model.rank, n) + 1):
            s = s + seq[n - i].pow_q(i) * RationalFunction.of(model.g[i - 1])
        den = t.pow_q(n) - t
        seq.append(s * RationalFunction(Poly.one(ctx), den))
    return list(seq[: N + 1])


def log_coeffs(model, N):
    """l_0 .. l_N of log_phi, exact in K: l_n = (t-t^{q^n})^{-1} sum l_{n-i} g_i^{q^{n-i}}."""
    ctx = model.ctx
    t = Poly.gen(ctx)
    seq = _LOG_CACHE.setdefault(model, [RationalFunction.one(ctx)])
    while len(seq) <= N:
        n = len(seq)
        s = RationalFunction.zero(ctx)
        for i in range(1, min(model.rank, n) + 1):
            s = s + seq[n - i] * RationalFunction.of(model.g[i - 1].pow_q(n - i))
        den = t - t.pow_q(n)
        seq.append(s * RationalFunction(Poly.one(ctx), den))
    return list(seq[: N + 1])


_PADIC_LOG_CACHE = {}


def log_coeffs_padic(model, place, N, prec):
    """l_0 .. l_N as p-adic approximations carried to relative precision
    about prec.

    v_p(t - t^{q^n}) is 1 exactly when deg p divides n (t^{q^n} - t is the
    product of all places of degree dividing n, each once), so v_p(l_n) is
    exactly -(number of multiples of deg p up to n); t^{q^n} must be reduced
    mod p^prec before subtracting or the exact polynomial explodes.
    Frobenius powers of t and of the g_i are carried as running chains, one
    q-th power per step each, and the state is cached per (model, place,
    prec) so repeated calls only extend the sequence.
    """
    ctx = model.ctx
    p = place.poly
    key = (model, place, prec)
    state = _PADIC_LOG_CACHE.get(key)
    if state is None:
        seq = [PadicApprox.from_poly(Poly.one(ctx), place, prec)]
        # chains[i-1] holds g_i^(q^(n-i)) just before step n = len(seq)
        chains = [PadicApprox.from_poly(gi, place, prec) for gi in model.g]
        state = [seq, chains, Poly.gen(ctx)]
        _PADIC_LOG_CACHE[key] = state
    seq, chains, tq = state
    pW = p**prec
    t = Poly.gen(ctx)
    while len(seq) <= N:
        n = len(seq)
        s = PadicApprox.exact_zero(place)
        for i in range(1, min(model.rank, n) + 1):
            if chains[i - 1].is_exact_zero:
                continue
            s = s + seq[n - i] * chains[i - 1]
        tq = pow_mod(tq, ctx.q, pW)
        state[2] = tq
        seq.append(s * PadicApprox.from_poly((t - tq) % pW, place, prec).inverse())
        for i in range(1, min(model.rank, n) + 1):
            chains[i - 1] = chains[i - 1].pow_q()
    return seq[: N + 1]


# ---------------------------------------------------------------------------
# local factors and exact truncated L-series


def _local_charpoly(model, p):
    """|phi~(F_p)| in A[T] (TPoly over Poly); closed norm form in rank 1."""
    zero = Poly.zero(model.ctx)
    d = p.degree
    if model.rank == 1:
        gbar = model.g[0] % p
        if gbar.is_zero():
            return TPoly([p], zero)
        acc = gbar
        x = gbar
        for _ in range(d - 1):
            x = pow_mod(x, model.ctx.q, p)
            acc = (acc * x) % p
        assert acc.degree <= 0
        return TPoly([p] + [zero] * (d - 1) + [-acc], zero)
    return twisted_fitting(model, p)


def local_factor(model, place):
    """P_p(phi;T) = p^{-1} |phi~(F_p)|, with coefficients in K."""
    charpoly = _local_charpoly(model, place.poly)
    ctx = model.ctx
    lf = charpoly.map(
        lambda c: RationalFunction(c, place.poly), zero=RationalFunction.zero(ctx)
    )
    assert lf[0] == RationalFunction.one(ctx)
    for j in range(1, place.degree):
        assert lf[j].is_zero()
    return LocalFactor(lf, place)


def _inverse_factor_coeffs(model, place, kmax):
    """Coefficients c_0 .. c_kmax of P_p(phi;T)^{-1}, exact in K.

    The denominator of c_k divides p^ceil(k/d): nonzero B_j need j >= d, so
    each recursion step adds one power of p while consuming at least d in k.
    """
    ctx = model.ctx
    charpoly = _local_charpoly(model, place.poly)
    b = [RationalFunction(charpoly[j], place.poly) for j in range(charpoly.degree + 1)]
    out = [RationalFunction.one(ctx)]
    for k in range(1, kmax + 1):
        s = RationalFunction.zero(ctx)
        for j in range(1, min(len(b) - 1, k) + 1):
            if b[j].is_zero() or out[k - j].is_zero():
                continue
            s = s - b[j] * out[k - j]
        out.append(s)
    return out


def _series_coeffs(model, N, omit=None):
    """c_0 .. c_{N-1} of the Euler product over places of degree < N.

    Expands prod P_p^{-1} by depth-first search over the finite-support
    exponent patterns (each place contributes one coefficient of its inverse
    factor, almost always c_0 = 1), accumulating numerators over the common
    denominator D_m = prod_{deg p' <= m} p'^ceil(m/deg p'), which every
    pattern of total degree m divides.  Cost grows like the number of monic
    polynomials of degree < N, so large N is expensive by design.
    """
    ctx = model.ctx
    one = Poly.one(ctx)
    ps = [pl for pl in places_up_to(ctx, max(N - 1, 0)) if pl != omit]
    data = []
    for pl in ps:
        cs = _inverse_factor_coeffs(model, pl, N - 1)
        data.append((pl.degree, [(c.num, c.den) for c in cs]))

    dmax = [one] * N
    for m in range(1, N):
        acc = one
        for pl in ps:
            if pl.degree <= m:
                acc = acc * pl.poly ** (-(-m // pl.degree))
        dmax[m] = acc

    acc = [Poly.zero(ctx) for _ in range(N)]

    def rec(i, used, num, den):
        acc[used] = acc[used] + num * (dmax[used] // den)
        for idx in range(i, len(data)):
            dp, cs = data[idx]
            if used + dp >= N:
                break
            for k in range(dp, N - used):
                cn, cd = cs[k]
                if cn.is_zero():
                    continue
                rec(idx + 1, used + k, num * cn, den * cd)

    rec(0, 0, one, one)
    return [RationalFunction(acc[m], dmax[m]) for m in range(N)]


def l_series(model, N):
    """Truncated formal L-series: exact c_0 .. c_{N-1} of prod_p P_p(T)^{-1}."""
    if N < 1:
        raise ValueError("truncation order must be >= 1")
    return TruncatedLSeries(tuple(_series_coeffs(model, N)), N, None)


def lp_series(model, place, N):
    """Truncated p-adic L-series: the Euler product omitting place."""
    if N < 1:
        raise ValueError("truncation order must be >= 1")
    return TruncatedLSeries(tuple(_series_coeffs(model, N, omit=place)), N, place)


# ---------------------------------------------------------------------------
# Taelman units


def _unit_partial_coeffs(model, N):
    """T^0 .. T^{N-1} coefficients of exp~_phi(L(phi;T)) in K: the T^m
    coefficient is the finite sum over n <= m of e_n c_{m-n}^{q^n}."""
    ctx = model.ctx
    es = exp_coeffs(model, N)
    ls = l_series(model, N)
    out = []
    for m in range(N):
        s = RationalFunction.zero(ctx)
        for n in range(m + 1):
            s = s + es[n] * ls[m - n].pow_q(n)
        out.append(s)
    return out


def taelman_unit(model, N=6):
    """u_phi(T).  Exact closed form for small models; partial sums of
    exp~_phi(L(phi;T)) otherwise, accepted once every coefficient is a
    polynomial and the top three T-degrees vanish."""
    ctx = model.ctx
    zero = Poly.zero(ctx)
    if model.is_small():
        coeffs = [Poly.one(ctx)]
        for i in range(1, model.rank + 1):
            gi = model.g[i - 1]
            qi = ctx.q**i
            alpha = gi.coeffs[qi] if gi.degree >= qi else 0
            coeffs.append(Poly.const(ctx, alpha))
        return TaelmanUnit(TPoly(coeffs, zero), True)

    coeffs = _unit_partial_coeffs(model, N)
    if not all(c.is_poly() for c in coeffs):
        raise ValueError("unit partial sums are not polynomial within budget N=%d" % N)
    top = max((m for m, c in enumerate(coeffs) if not c.is_zero()), default=0)
    if top + 3 >= N:
        raise ValueError(
            "unit did not stabilize within budget N=%d; last nonzero T^%d" % (N, top)
        )
    return TaelmanUnit(TPoly([c.to_poly() for c in coeffs], zero), False)


def twisted_apply(model, b, u):
    """phi~_b(u) for b, u in A[T]: sum_j T^j sum_k c_{j,k} T^k sigma^k(u),
    where phi_{b_j} = sum_k c_{j,k} tau^k and sigma raises coefficients to
    the q-th power."""
    zero = Poly.zero(model.ctx)
    out = TPoly((), zero)
    for j in range(b.degree + 1):
        bj = b[j]
        if bj.is_zero():
            continue
        ore = model.phi(bj)
        for k, c in enumerate(ore.coeffs):
            if c.is_zero():
                continue
            term = u.map(lambda x, _k=k: x.pow_q(_k)).scale(c).shift(j + k)
            out = out + term
    return out


def _t1_multiplicity(f):
    """Largest k with (T-1)^k dividing f, plus the exact quotient."""
    if f.is_zero():
        raise ValueError("zero polynomial has no finite multiplicity")
    k = 0
    while True:
        quot, rem = f.divide_T_minus_1()
        if rem:
            return k, f
        f = quot
        k += 1


# ---------------------------------------------------------------------------
# p-adic logarithm


def _log_core(model, place, z, prec):
    """sum_{n>=0} l_n z^{q^n} in K_p to absolute precision about prec, for an
    exact z with v_p(z) >= 1.  Term valuations are bounded below by
    q^n v - floor(n/d), nondecreasing in n, so truncating at the first index
    past prec is rigorous."""
    if z.is_zero():
        return PadicApprox.exact_zero(place)
    p = place.poly
    d = place.degree
    q = model.ctx.q
    v = valuation(z, p)
    assert v >= 1, "log-core needs v_p(z) >= 1"
    n_max = 0
    while q**n_max * v - n_max // d <= prec:
        n_max += 1
    W = prec + n_max // d + 2
    ls = log_coeffs_padic(model, place, n_max, W)
    zp = PadicApprox.from_poly(z, place, W + v)
    out = PadicApprox.exact_zero(place)
    for n in range(n_max + 1):
        out = out + ls[n] * zp.pow_q(n)
    return out


def _reduced_image(model, a, x, place, need):
    """phi_a(x) mod p^M as (reduced poly, exact valuation, M), with M grown
    until at least `need` digits past the valuation are known.  The exact
    image can have astronomical degree, so everything stays mod p^M; the
    caller must rule out phi_a(x) = 0 beforehand (e.g. x non-torsion)."""
    p = place.poly
    M = need + 2
    for _ in range(5):
        ym = model.phi_eval_mod(a, x, p**M)
        if ym.is_zero():
            M = 2 * M + need
            continue
        v = valuation(ym, p)
        if M - v >= need:
            return ym, v, M
        M = v + need + 2
    raise PrecisionError("image valuation too large at %s" % p)


def _log_core_image(model, place, a, x, prec):
    """log-core of phi_a(x) to absolute precision about prec, carrying the
    image mod powers of p throughout."""
    d = place.degree
    q = model.ctx.q
    ym, v, M = _reduced_image(model, a, x, place, prec + 2)
    assert v >= 1, "log-core needs v_p(phi_a(x)) >= 1"
    n_max = 0
    while q**n_max * v - n_max // d <= prec:
        n_max += 1
    W = prec + n_max // d + 2
    if M < W + v:
        ym, v2, M = _reduced_image(model, a, x, place, W + 1)
        assert v2 == v
    ls = log_coeffs_padic(model, place, n_max, W)
    zp = PadicApprox.from_poly(ym, place, W + v)
    out = PadicApprox.exact_zero(place)
    for n in range(n_max + 1):
        out = out + ls[n] * zp.pow_q(n)
    return out


def padic_log(model, place, x, prec):
    """log_{phi,p}(x) to absolute precision prec, via y = phi_a(x) in m_p
    with a the Fitting generator, then a^{-1} sum l_n y^{q^n}."""
    if not place.satisfies_h:
        raise ValueError("padic_log needs hypothesis (H) at the place")
    torsion, _ = is_torsion_point(model, x)
    if torsion:
        return PadicApprox.exact_zero(place)
    a = fitting_ideal(model, place.poly)
    va = valuation(a, place.poly)
    P = prec + va + 1
    core = _log_core_image(model, place, a, x, P)
    ainv = PadicApprox.from_poly(a, place, va + core.relprec + 1).inverse()
    return core * ainv


# ---------------------------------------------------------------------------
# L-values at T = 1


def _stabilized_sum(place, stream, prec, window, cap):
    """Sum PadicApprox terms until the last `window` of them certify
    valuation > prec; returns the partial sum.  Raises PrecisionError when
    the cap is hit first."""
    total = PadicApprox.exact_zero(place)
    run = 0
    n = 0
    for term in stream:
        total = total + term
        try:
            ok = term.value_at_least(prec + 1)
        except PrecisionError:
            ok = False
        run = run + 1 if ok else 0
        n += 1
        if run >= window:
            return total
        if n >= cap:
            raise PrecisionError(
                "L-series tail did not clear p^%d within %d terms" % (prec, cap)
            )
    raise PrecisionError("coefficient stream exhausted before stabilization")


def _very_small_lp_terms(model, place, W):
    """Stream of lp_series coefficients at a very small model, p-adically:
    the full series has coefficients l_n, so the p-omitted one is the product
    by the local factor, c_n = sum_j (B_j/p) l_{n-j}."""
    charpoly = _local_charpoly(model, place.poly)
    pf = [
        PadicApprox.from_rational(RationalFunction(charpoly[j], place.poly), place, W)
        for j in range(charpoly.degree + 1)
    ]
    ls = []
    n = 0
    while True:
        if len(ls) <= n:
            ls = log_coeffs_padic(model, place, max(2 * len(ls), 8), W)
        c = PadicApprox.exact_zero(place)
        for j in range(min(charpoly.degree, n) + 1):
            if pf[j].is_exact_zero:
                continue
            c = c + pf[j] * ls[n - j]
        yield c
        n += 1


def _quotient_terms(stream, k):
    """Coefficient stream of L(T)/(T-1)^k from the stream of L's coefficients:
    one division by T-1 sends the coefficients to their negated running sums,
    valid as a series identity whenever the quotient converges coefficientwise."""
    sums = [None] * k

    def gen():
        for c in stream:
            x = c
            for i in range(k):
                sums[i] = x if sums[i] is None else sums[i] + x
                x = -sums[i]
            yield x

    return gen()


def _series_value_after_factoring(model, place, k, prec):
    """Sum of coefficients of lp_series/(T-1)^k for a very small model by
    windowed stabilization, retrying with more working precision as needed."""
    d = place.degree
    window = 3 * d
    W = prec + 4
    cap = 40 * d + 8 * prec * d + 20 * k * d
    last = None
    for _ in range(4):
        try:
            stream = _quotient_terms(_very_small_lp_terms(model, place, W), k)
            return _stabilized_sum(place, stream, prec, window, cap)
        except PrecisionError as exc:
            last = exc
            W += prec + 4
    raise last


def _euler_budget_order(model):
    """Largest truncation order keeping the exact Euler expansion affordable:
    its cost tracks the count of monic polynomials below the order."""
    q = model.ctx.q
    cap = 260 if model.rank == 1 else 60
    order = 1
    total = 1
    while order < 8 and total + q**order <= cap:
        total += q**order
        order += 1
    return order


def lp_value_at_1(model, place, prec, method="auto", euler_order=None):
    """L_p(phi;1) in K_p to absolute precision prec.

    Two routes must agree mod p^prec or ArithmeticError is raised: summing
    lp_series coefficients at T = 1 with the windowed stabilization rule, and
    the class formula p^{-1} log(phi_a(u(1))) evaluated through padic_log
    when the place satisfies (H).  For very small models the series route is
    exact via the log recursion and is the primary answer; otherwise the
    class-formula value is primary and the Euler side is a budgeted
    consistency check (exact coefficients cost one term per monic
    polynomial).  method="class" skips the series side, method="euler"
    demands genuine series stabilization.
    """
    if method not in ("auto", "class", "euler"):
        raise ValueError("method must be auto, class or euler")
    unit = taelman_unit(model)
    u1 = unit.poly.value_at_one()
    torsion, _ = is_torsion_point(model, u1)
    if torsion:
        # the logarithm kills torsion points, so the value is exactly zero
        return PadicApprox.exact_zero(place)
    a = fitting_ideal(model, place.poly)
    z = model.phi_eval(a, u1)

    cf = _log_core(model, place, z, prec + 1).shift(-1)
    if place.satisfies_h:
        w = padic_log(model, place, z, prec + 2).shift(-1)
        if not cf.eq_mod(w, prec):
            raise ArithmeticError(
                "class-formula mismatch at %s: log route disagrees mod p^%d"
                % (place.poly, prec)
            )
    if method == "class":
        return cf

    if model.is_very_small():
        total = _series_value_after_factoring(model, place, 0, prec)
        if not total.eq_mod(cf, prec):
            raise ArithmeticError(
                "series value and class formula disagree mod p^%d at %s"
                % (prec, place.poly)
            )
        return total

    order = euler_order if euler_order is not None else _euler_budget_order(model)
    series = lp_series(model, place, order)
    terms = [PadicApprox.from_rational(c, place, prec + 2) for c in series.coeffs]
    if method == "euler":
        total = _stabilized_sum(place, iter(terms), prec, 3 * place.degree, order)
        if not total.eq_mod(cf, prec):
            raise ArithmeticError(
                "series value and class formula disagree mod p^%d at %s"
                % (prec, place.poly)
            )
        return total

    # budgeted consistency: compare the partial sum and the class value to
    # the precision the truncated tail actually supports
    partial = PadicApprox.exact_zero(place)
    for term in terms:
        partial = partial + term
    achieved = prec
    for term in terms[-min(3 * place.degree, len(terms)) :]:
        try:
            tv = term.valuation()
        except PrecisionError:
            tv = term.relprec
        achieved = min(achieved, max(tv - 1, 0))
    if achieved >= 1 and not cf.eq_mod(partial, achieved):
        raise ArithmeticError(
            "Euler partial sums contradict the class formula mod p^%d at %s"
            % (achieved, place.poly)
        )
    return cf


# ---------------------------------------------------------------------------
# vanishing order and the special value


def _twist_exponent(model, place):
    gmax = max((g.degree for g in model.g if not g.is_zero()), default=0)
    return int(gmax) // place.degree + 1


def _twist_data(model, place):
    """(m, k_m, Q_m) with phi~_{p^{m-1} a~}(u_phi) = (T-1)^{k_m} Q_m(T).

    Every coefficient of the left side is divisible by p^m (it is p^m times
    a coefficient of the unit of the p^m-twisted model), which is asserted.
    """
    unit = taelman_unit(model)
    if not unit.certified:
        raise ValueError("twist route needs a certified Taelman unit")
    p = place.poly
    d = place.degree
    m = _twist_exponent(model, place)
    # dominant cost: the exact Ore polynomials phi_{b_j} for deg_t b_j <= m d,
    # whose coefficients reach degree about q^(rank m d) max deg g_i
    maxdeg = max((g.degree for g in model.g if not g.is_zero()), default=0)
    steps = model.rank * m * d
    est = model.ctx.q**steps * (steps + 1) ** 2 * (maxdeg + 1)
    if est > 3 * 10**7:
        raise ValueError(
            "twist route too large: rank %d, deg p = %d, m = %d" % (model.rank, d, m)
        )
    charpoly = _local_charpoly(model, p)
    b = charpoly.scale(p ** (m - 1))
    W = twisted_apply(model, b, unit.poly)
    pm = p**m
    for c in W.coeffs:
        assert (c % pm).is_zero(), "twisted unit image must be divisible by p^m"
    k_m, Q = _t1_multiplicity(W)
    return m, k_m, Q


def _unit_order_at_one(model):
    """(k, u*(1)) from the certified unit when that order is provably the
    L-series vanishing order, i.e. when u*(1) is not a torsion point (the
    log of its Fitting image is then nonzero); None when torsion."""
    unit = taelman_unit(model)
    if not unit.certified:
        raise ValueError("the route needs a certified Taelman unit")
    k, ustar = _t1_multiplicity(unit.poly)
    w = ustar.value_at_one()
    torsion, _ = is_torsion_point(model, w)
    if torsion:
        return None
    return k, w


def vanishing_order(model, place=None):
    """Order of vanishing at T = 1 of L_p(phi;T), equal to that of u_phi(T)
    when u*(1) is certified non-torsion; otherwise the p^m-twist route is
    used (the twisted model is torsion-free) and a place is required."""
    quick = _unit_order_at_one(model)
    if quick is not None:
        return quick[0]
    if place is None:
        raise ValueError("u*(1) is a torsion point: the twist route needs a place")
    _, k_m, _ = _twist_data(model, place)
    return k_m


def _class_formula_offset(x, a0, p):
    """v_p(a0 / pi) with pi the mod-p annihilator of x, the exact gap between
    the class-formula valuation v_p(log phi_{a0}(x)) - 1 and c_p(phi;x).

    For x nonzero mod p the annihilator has positive degree, so the quotient
    a0/pi has degree below deg p and the gap is 0; for x zero mod p the
    annihilator is 1 and the gap is v_p(a0), at most 1 since deg a0 = deg p.
    """
    if (x % p).is_zero():
        return valuation(a0, p)
    return 0


def _twist_route_value(model, place, prec):
    """(m, k_m, value) with value = p^{-(m+1)} log-core(phi_p(Q_m(1))).

    The p^m-twist psi = twist_by(p^m) has Fitting generator p at p and unit
    u_psi = p^{-m} (T-1)^{k_m} Q_m, so its class formula collapses to this
    expression; the p-omitted L-series of the twist equals that of the model
    because the twisting polynomial is supported at p alone.
    """
    m, k_m, Q = _twist_data(model, place)
    p = place.poly
    y = Q.value_at_one()
    if y.is_zero():
        return m, k_m, PadicApprox.exact_zero(place)
    # phi_p(y) != 0 because the twist kills all torsion, so the modular
    # image route is safe; the exact image can have astronomical degree
    value = _log_core_image(model, place, p, y, prec + m + 1).shift(-(m + 1))
    twisted = model.twist_by(p**m)
    assert (y % p**m).is_zero()
    xprime = y // p**m
    cp = ordic_valuation(twisted, xprime, place)
    if value.is_apparent_zero:
        raise PrecisionError("twist-route value lost all precision at %s" % p)
    # the twist's Fitting generator at p is p itself: every higher
    # coefficient of the twisted phi_t carries a positive power of p, so the
    # residue module is F_p with the plain multiplication action
    offset = _class_formula_offset(xprime, p, p)
    if value.valuation() != cp.value + offset:
        raise ArithmeticError(
            "twist value valuation %s disagrees with the twisted ordic"
            " valuation %s (+ offset %d) at %s"
            % (value.valuation(), cp.value, offset, p)
        )
    return m, k_m, value


def special_lvalue(model, place, prec):
    """L_p^*(phi;1): the value at 1 of lp_series/(T-1)^k, k = vanishing_order.

    Very small models run the series route (iterated partial sums implement
    the synthetic division) cross-checked against the closed route; small
    models run the closed route directly, cross-checked through the ordic
    valuation c_p(phi; u*(1)) when u*(1) is non-torsion (the two sides of
    the wieferich criterion) and through the twisted model otherwise.
    """
    if not place.satisfies_h:
        raise ValueError("special_lvalue needs hypothesis (H) at the place")
    p = place.poly
    quick = _unit_order_at_one(model)
    if quick is not None:
        k, w = quick
        if k == 0:
            return lp_value_at_1(model, place, prec)
        a = fitting_ideal(model, p)
        z = model.phi_eval(a, w)
        value = _log_core(model, place, z, prec + 1).shift(-1)
        cp = ordic_valuation(model, w, place)
        if value.is_apparent_zero:
            raise PrecisionError("special value lost all precision at %s" % p)
        offset = _class_formula_offset(w, a, p)
        if value.valuation() != cp.value + offset:
            raise ArithmeticError(
                "special value valuation %s disagrees with ordic valuation %s"
                " (+ offset %d) at %s"
                % (value.valuation(), cp.value, offset, p)
            )
        if model.is_very_small():
            series = _series_value_after_factoring(model, place, k, prec)
            if not series.eq_mod(value, prec):
                raise ArithmeticError(
                    "series and closed special values disagree mod p^%d at %s"
                    % (prec, p)
                )
            return series
        return value

    m, k_m, value = _twist_route_value(model, place, prec)
    if model.is_very_small():
        series = _series_value_after_factoring(model, place, k_m, prec)
        if not series.eq_mod(value, prec):
            raise ArithmeticError(
                "series and twist-route special values disagree mod p^%d at %s"
                % (prec, p)
            )
        return series
    return value
