"""Self-contained cross-check suites; the CI entry point behind `check all`.

Each suite re-verifies module invariants with fixed seeds and reports one
result per invariant. A failure here is a mathematical cross-check failure,
not a usage error.
"""

from __future__ import annotations

import math
import random
import tempfile
from dataclasses import dataclass

from .anderson import euler_factor_via_dual
from .fields import fq_context
from .lseries import exp_coeffs, local_factor, log_coeffs, lp_value_at_1
from .ore import DrinfeldModel, OrePoly, is_torsion_point
from .poly import (
    Place,
    Poly,
    RationalFunction,
    irreducible_count,
    is_irreducible,
    monic_polys,
    places,
)
from .residue import annihilator_mod, fitting_ideal
from .stats import Universe, stats_table
from .wieferich import (
    deformation_is_wieferich,
    is_wieferich,
    ordic_valuation,
    wieferich_deg1,
    wieferich_linear_test,
)

__all__ = ["CheckResult", "SUITES", "euler_place_checks", "run_all", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    ok: bool
    detail: str = ""


def _random_poly(rng, ctx, max_deg, nonzero=False, monic=False):
    while True:
        deg = rng.randrange(max_deg + 1)
        coeffs = [rng.randrange(ctx.q) for _ in range(deg)]
        coeffs.append(1 if monic else rng.randrange(1, ctx.q))
        f = Poly(ctx, coeffs)
        if nonzero and f.is_zero():
            continue
        return f


def _random_model(rng, ctx, max_rank, coeff_deg=2):
    rank = rng.randrange(1, max_rank + 1)
    g = [_random_poly(rng, ctx, coeff_deg) for _ in range(rank - 1)]
    g.append(_random_poly(rng, ctx, coeff_deg, nonzero=True))
    return DrinfeldModel(ctx, g)


def _result(suite, name, failures, total):
    ok = not failures
    detail = "%d/%d cases" % (total - len(failures), total)
    if failures:
        detail += "; first failure: %s" % failures[0]
    return CheckResult(suite, name, ok, detail)


def check_core(seed=101):
    out = []
    rng = random.Random(seed)

    fails, total = [], 0
    for q, k in ((2, 1), (3, 1), (2, 2), (5, 1)):
        ctx = fq_context(q, k)
        for _ in range(20):
            f = _random_poly(rng, ctx, 4, nonzero=True)
            g = _random_poly(rng, ctx, 4, nonzero=True)
            total += 1
            if (f * g).degree != f.degree + g.degree:
                fails.append("q=%d %s,%s" % (ctx.q, f, g))
    out.append(_result("core", "degree additive on products", fails, total))

    fails, total = [], 0
    for q, k in ((2, 1), (3, 1), (2, 2), (5, 1)):
        ctx = fq_context(q, k)
        for d in range(1, 9):
            total += 1
            s = sum(e * irreducible_count(ctx.q, e) for e in range(1, d + 1) if d % e == 0)
            if s != ctx.q**d:
                fails.append("q=%d d=%d" % (ctx.q, d))
        for d in range(1, 4):
            total += 1
            if len(places(ctx, d)) != irreducible_count(ctx.q, d):
                fails.append("enumeration q=%d d=%d" % (ctx.q, d))
    out.append(_result("core", "place counts sum to q^d", fails, total))

    fails, total = [], 0
    ctx = fq_context(3)
    p = Poly(ctx, [1, 1])
    from .poly import valuation

    for _ in range(40):
        f = _random_poly(rng, ctx, 5, nonzero=True)
        g = _random_poly(rng, ctx, 5, nonzero=True)
        total += 1
        if valuation(f * g, p) != valuation(f, p) + valuation(g, p):
            fails.append("%s,%s" % (f, g))
        if not (f + g).is_zero():
            total += 1
            if valuation(f + g, p) < min(valuation(f, p), valuation(g, p)):
                fails.append("sum %s,%s" % (f, g))
    out.append(_result("core", "valuation product and sum rules", fails, total))
    return out


def check_ore(seed=102):
    out = []
    rng = random.Random(seed)
    fails, total = [], 0
    for qk in ((2, 1), (3, 1)):
        ctx = fq_context(*qk)
        for _ in range(10):
            model = _random_model(rng, ctx, 2)
            a = _random_poly(rng, ctx, 2, nonzero=True)
            b = _random_poly(rng, ctx, 2, nonzero=True)
            x = _random_poly(rng, ctx, 2)
            total += 1
            if model.phi_eval(a * b, x) != model.phi_eval(a, model.phi_eval(b, x)):
                fails.append("q=%d a=%s b=%s" % (ctx.q, a, b))
            total += 1
            if model.phi_eval(a + b, x) != model.phi_eval(a, x) + model.phi_eval(b, x):
                fails.append("additivity q=%d" % ctx.q)
    out.append(_result("ore", "phi is a ring homomorphism", fails, total))

    fails, total = [], 0
    ctx = fq_context(3)
    for _ in range(10):
        model = _random_model(rng, ctx, 2)
        h = _random_poly(rng, ctx, 1, nonzero=True)
        hp = _random_poly(rng, ctx, 1, nonzero=True)
        total += 1
        lhs = model.twist_by(h).twist_by(hp)
        rhs = model.twist_by(h * hp)
        if [str(g) for g in lhs.g] != [str(g) for g in rhs.g]:
            fails.append("h=%s h'=%s" % (h, hp))
    out.append(_result("ore", "twists compose multiplicatively", fails, total))
    return out


def _brute_annihilator(model, x, m):
    if (x % m).is_zero():
        return Poly.one(model.ctx)
    for d in range(1, m.degree + 1):
        for cand in monic_polys(model.ctx, d):
            if model.phi_eval_mod(cand, x, m).is_zero():
                return cand
    return None


def check_residue(seed=103):
    out = []
    rng = random.Random(seed)

    fails, total = [], 0
    for q in (2, 3):
        ctx = fq_context(q)
        for _ in range(12):
            model = _random_model(rng, ctx, 2)
            m = _random_poly(rng, ctx, 3, monic=True)
            if m.degree < 1:
                continue
            x = _random_poly(rng, ctx, m.degree - 1)
            total += 1
            if annihilator_mod(model, x, m) != _brute_annihilator(model, x, m):
                fails.append("q=%d m=%s x=%s" % (q, m, x))
    out.append(_result("residue", "annihilator matches brute force", fails, total))

    fails, total = [], 0
    ctx = fq_context(3)
    for _ in range(15):
        model = _random_model(rng, ctx, 2)
        m = _random_poly(rng, ctx, 3, monic=True)
        if m.degree < 1:
            continue
        x = _random_poly(rng, ctx, m.degree - 1)
        a = annihilator_mod(model, x, m)
        total += 1
        if not (fitting_ideal(model, m) % a).is_zero():
            fails.append("m=%s x=%s" % (m, x))
        total += 1
        lam = Poly.const(ctx, 1 + rng.randrange(ctx.q - 1))
        if annihilator_mod(model, lam * x, m) != a:
            fails.append("unit orbit m=%s" % m)
    out.append(_result("residue", "annihilator divides Fitting, unit invariant", fails, total))
    return out


def check_wieferich(seed=104):
    out = []
    rng = random.Random(seed)

    fails, total = [], 0
    for q in (3, 5):
        ctx = fq_context(q)
        for _ in range(8):
            model = _random_model(rng, ctx, 2, coeff_deg=3)
            for d in (1, 2):
                pls = places(ctx, d)
                pl = pls[rng.randrange(len(pls))]
                x = _random_poly(rng, ctx, 2)
                if (x % pl.poly).is_zero():
                    continue
                total += 1
                v1 = ordic_valuation(model, x, pl, method="fitting")
                v2 = ordic_valuation(model, x, pl, method="annihilator")
                if v1.value != v2.value or is_wieferich(model, x, pl) != (v1.value >= 1):
                    fails.append("q=%d p=%s" % (q, pl.poly))
    out.append(_result("wieferich", "fitting and annihilator routes agree", fails, total))

    fails, total = [], 0
    for q in (2, 3, 5):
        ctx = fq_context(q)
        for _ in range(10):
            model = _random_model(rng, ctx, 2)
            x = _random_poly(rng, ctx, 2)
            for pl in places(ctx, 1):
                total += 1
                if wieferich_deg1(model, x, pl) != is_wieferich(model, x, pl, method="annihilator"):
                    fails.append("q=%d alpha-place %s" % (q, pl.poly))
    out.append(_result("wieferich", "degree-one derivative criterion", fails, total))

    fails, total = [], 0
    ctx = fq_context(3)
    for _ in range(10):
        model = _random_model(rng, ctx, 2)
        for d in (1, 2):
            pls = places(ctx, d)
            pl = pls[rng.randrange(len(pls))]
            coeffs = [Poly.zero(ctx)] + [_random_poly(rng, ctx, 1) for _ in range(2)]
            f = OrePoly(ctx, coeffs)
            if f.is_zero():
                continue
            total += 1
            if wieferich_linear_test(model, pl, f) != deformation_is_wieferich(model, pl, f):
                fails.append("p=%s" % pl.poly)
    out.append(_result("wieferich", "linear lift criterion matches deformation", fails, total))
    return out


def check_lseries(seed=105):
    out = []
    rng = random.Random(seed)

    fails, total = [], 0
    for q in (2, 3):
        ctx = fq_context(q)
        for _ in range(4):
            m = _random_model(rng, ctx, 2, coeff_deg=2)
            N = 3
            e = exp_coeffs(m, N)
            l = log_coeffs(m, N)
            for n in range(N + 1):
                total += 1
                s = sum(
                    (e[i] * l[n - i].pow_q(i) for i in range(n + 1)),
                    RationalFunction.zero(ctx),
                )
                expect = (
                    RationalFunction.one(ctx) if n == 0 else RationalFunction.zero(ctx)
                )
                if s != expect:
                    fails.append("q=%d n=%d" % (q, n))
    out.append(_result("lseries", "exp and log are inverse series", fails, total))

    fails, total = [], 0
    ctx = fq_context(3)
    for _ in range(4):
        m = _random_model(rng, ctx, 2, coeff_deg=2)
        e = exp_coeffs(m, 3)
        t = RationalFunction(Poly.gen(ctx), Poly.one(ctx))
        gs = [RationalFunction(gi, Poly.one(ctx)) for gi in m.g]
        for n in range(4):
            total += 1
            lhs = t * e[n]
            for i, gi in enumerate(gs, start=1):
                if n - i >= 0:
                    lhs = lhs + gi * e[n - i].pow_q(i)
            rhs = e[n] * t ** (ctx.q**n)
            if lhs != rhs:
                fails.append("n=%d" % n)
    out.append(_result("lseries", "phi_t exp = exp t coefficientwise", fails, total))

    fails, total = [], 0
    m1 = DrinfeldModel(ctx, [Poly(ctx, [0, 0, 0, 1])])
    for pl in places(ctx, 1):
        total += 1
        auto = lp_value_at_1(m1, pl, 3)
        closed = lp_value_at_1(m1, pl, 3, method="class")
        if not auto.eq_mod(closed, 3):
            fails.append(str(pl.poly))
    out.append(_result("lseries", "L-value routes agree", fails, total))

    fails, total = [], 0
    for _ in range(6):
        model = _random_model(rng, ctx, 2, coeff_deg=1)
        if not model.is_very_small():
            continue
        one = Poly.one(ctx)
        if is_torsion_point(model, one)[0]:
            continue
        for d in (1, 2):
            for pl in places(ctx, d):
                if not pl.satisfies_h:
                    continue
                total += 1
                v = lp_value_at_1(model, pl, 4)
                c = ordic_valuation(model, one, pl)
                got = v.valuation()
                if got != c.value:
                    fails.append("g=%s p=%s" % (model.g, pl.poly))
    out.append(_result("lseries", "valuation of L-value equals ordic valuation", fails, total))
    return out


def check_euler(seed=106):
    out = []
    rng = random.Random(seed)
    fails, total = [], 0
    for q in (2, 3):
        ctx = fq_context(q)
        for _ in range(12):
            model = _random_model(rng, ctx, 3, coeff_deg=2)
            for d in (1, 2):
                pls = places(ctx, d)
                pl = pls[rng.randrange(len(pls))]
                total += 1
                if euler_factor_via_dual(model, pl).tpoly != local_factor(model, pl).tpoly:
                    fails.append("q=%d g=%s p=%s" % (q, model.g, pl.poly))
    out.append(_result("euler", "dual route equals residue route", fails, total))

    fails, total = [], 0
    ctx = fq_context(3)
    car = DrinfeldModel.carlitz(ctx)
    for d in (1, 2, 3):
        for pl in places(ctx, d):
            total += 1
            lf = local_factor(car, pl)
            coeff = lf[d]
            want = RationalFunction(Poly.const(ctx, ctx.q - 1), pl.poly)
            if coeff != want or lf.degree != d:
                fails.append("p=%s" % pl.poly)
    out.append(_result("euler", "closed form for the rank-one base model", fails, total))

    fails, total = [], 1
    model = DrinfeldModel(ctx, [Poly(ctx, [0, 0, 0, 1])])
    pl = Place(Poly.gen(ctx))
    lf = euler_factor_via_dual(model, pl)
    if lf.degree != 0:
        fails.append("rank-drop factor not 1")
    out.append(_result("euler", "rank drop gives trivial factor", fails, total))
    return out


def check_stats(seed=107):
    out = []
    fails, total = [], 0
    u21 = Universe(fq_context(2), 1)
    cells = stats_table(u21, [1, 2], exhaustive=True, nt_filter="degree_one")
    want = {(1, "all"): "1.14", (2, "all"): "1.71",
            (1, "non_torsion"): "0.80", (2, "non_torsion"): "0.80"}
    for c in cells:
        total += 1
        if c.render() != want[(c.degree, c.column)]:
            fails.append("d=%d %s got %s" % (c.degree, c.column, c.render()))
    u31 = Universe(fq_context(3), 1)
    for c in stats_table(u31, [1], exhaustive=True):
        total += 1
        want31 = {"all": "1.01", "non_torsion": "0.94"}[c.column]
        if c.render() != want31:
            fails.append("q3 %s got %s" % (c.column, c.render()))
    out.append(_result("stats", "exhaustive tables match frozen cells", fails, total))

    fails, total = [], 1
    a = stats_table(u31, [1], n_samples=120, seed=seed, nt_filter="degree_one")
    b = stats_table(u31, [1], n_samples=120, seed=seed, nt_filter="degree_one")
    if [(c.value, c.n_models) for c in a] != [(c.value, c.n_models) for c in b]:
        fails.append("resampling with one seed changed the table")
    out.append(_result("stats", "seeded sampling is reproducible", fails, total))
    return out


def check_search(seed=108):
    from .search import SearchInterrupted, resume, run_search, search_wieferich

    out = []
    ctx = fq_context(3)
    car = DrinfeldModel.carlitz(ctx)

    fails, total = [], 1
    found = search_wieferich(car, 6)
    if [(p.degree, str(p.poly)) for p, _ in found] != [
        (6, "t^6 + t^4 + t^3 + t^2 + 2*t + 2")
    ]:
        fails.append("degree-6 hit list wrong: %r" % (found,))
    out.append(_result("search", "rank-one base model degree-6 hit", fails, total))

    fails, total = [], 1
    ctx2 = fq_context(2)
    found2 = search_wieferich(DrinfeldModel.carlitz(ctx2), 4)
    want2 = [(d, str(p.poly)) for d in (2, 3, 4) for p in places(ctx2, d)]
    if [(p.degree, str(p.poly)) for p, _ in found2] != want2:
        fails.append("q=2 list wrong")
    out.append(_result("search", "q=2 places of degree 2..4 all hit", fails, total))

    fails, total = [], 1
    with tempfile.TemporaryDirectory() as tmp:
        cp = tmp + "/cp.json"
        try:
            run_search(car, 6, checkpoint_path=cp, checkpoint_every=50, max_chunks=2)
        except SearchInterrupted:
            pass
        resumed = resume(cp)
        if [(p.degree, str(p.poly)) for p, _ in resumed] != [
            (6, "t^6 + t^4 + t^3 + t^2 + 2*t + 2")
        ]:
            fails.append("resume changed the result")
    out.append(_result("search", "interrupt and resume reproduce the run", fails, total))
    return out


SUITES = {
    "core": check_core,
    "ore": check_ore,
    "residue": check_residue,
    "wieferich": check_wieferich,
    "lseries": check_lseries,
    "euler": check_euler,
    "stats": check_stats,
    "search": check_search,
}


def run_suite(name, seed=None):
    if name not in SUITES:
        raise ValueError("unknown suite %r; have %s" % (name, sorted(SUITES)))
    fn = SUITES[name]
    return fn() if seed is None else fn(seed)


def run_all():
    results = []
    for name in SUITES:
        results.extend(run_suite(name))
    return results


def euler_place_checks(model, max_degree):
    """Per-place comparison of the two local-factor routes."""
    results = []
    for d in range(1, max_degree + 1):
        for pl in places(model.ctx, d):
            ok = euler_factor_via_dual(model, pl).tpoly == local_factor(model, pl).tpoly
            results.append(
                CheckResult("euler", str(pl.poly), ok, "degree %d" % d)
            )
    return results
