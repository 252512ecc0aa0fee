"""Model universes, Wieferich frequency tables and independence tests."""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

from .ore import DrinfeldModel, is_torsion_point
from .poly import Place, Poly, places

__all__ = [
    "CellResult",
    "IndependenceReport",
    "Universe",
    "format_cell",
    "frequency_test",
    "independence_test",
    "sample_model",
    "stats_table",
    "substream_seed",
    "wieferich_indicator",
]

EXHAUSTIVE_LIMIT = 10_000

NT_FILTERS = ("exact", "degree_one")


@dataclass(frozen=True)
class Universe:
    """Small models of the given rank: deg g_i <= q^i, top coefficient nonzero."""

    ctx: object
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1, got %r" % (self.rank,))

    @property
    def coefficient_lengths(self):
        """Number of base-field digits in each g_i (degree bound q^i)."""
        q = self.ctx.q
        return tuple(q**i + 1 for i in range(1, self.rank + 1))

    @property
    def cardinality(self):
        q = self.ctx.q
        n = 1
        for length in self.coefficient_lengths[:-1]:
            n *= q**length
        return n * (q ** self.coefficient_lengths[-1] - 1)

    def iter_models(self):
        """All members, coefficient digits enumerated constant-first."""
        q = self.ctx.q
        spaces = [
            itertools.product(range(q), repeat=length)
            for length in self.coefficient_lengths
        ]
        for digits in itertools.product(*spaces):
            if not any(digits[-1]):
                continue
            yield DrinfeldModel(self.ctx, [Poly(self.ctx, list(d)) for d in digits])

    def sample(self, rng):
        """One uniform member; tuples with zero top coefficient are redrawn."""
        q = self.ctx.q
        while True:
            coeffs = [
                Poly(self.ctx, [rng.randrange(q) for _ in range(length)])
                for length in self.coefficient_lengths
            ]
            if not coeffs[-1].is_zero():
                return DrinfeldModel(self.ctx, coeffs)


def substream_seed(seed, index):
    """Derived seed for the index-th draw; stable under any work split."""
    digest = hashlib.sha256(b"%d:%d" % (seed, index)).digest()
    return int.from_bytes(digest[:8], "big")


def sample_model(universe, rng_seed):
    """Deterministic draw from the universe; accepts an int seed or a Random."""
    if isinstance(rng_seed, random.Random):
        rng = rng_seed
    else:
        rng = random.Random(rng_seed)
    return universe.sample(rng)


def wieferich_indicator(model, place):
    """1 when the place is Wieferich for the model at base point 1."""
    from .wieferich import is_wieferich

    return 1 if is_wieferich(model, Poly.one(model.ctx), place) else 0


def _base_point_is_torsion(model, nt_filter):
    one = Poly.one(model.ctx)
    if nt_filter == "exact":
        return is_torsion_point(model, one)[0]
    if nt_filter == "degree_one":
        # phi_{t+c}(1) = phi_t(1) + c, so an annihilator of degree <= 1
        # exists exactly when phi_t(1) is a constant
        return model.phi_t_eval(one).degree < 1
    raise ValueError("unknown torsion filter %r; expected one of %r" % (nt_filter, NT_FILTERS))


@dataclass(frozen=True)
class CellResult:
    """One table cell: normalized mean Wieferich count at one degree."""

    q: int
    rank: int
    degree: int
    column: str
    value: Fraction
    n_models: int
    mode: str
    seed: object = None

    def render(self):
        return format_cell(self.value)


def format_cell(value):
    """Two decimals, halves away from zero; large values print as >100."""
    dec = Decimal(value.numerator) / Decimal(value.denominator)
    if dec > 100:
        return ">100"
    return str(dec.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def stats_table(
    universe,
    degrees,
    n_samples=None,
    seed=None,
    exhaustive=False,
    columns=("all", "non_torsion"),
    nt_filter="exact",
    exhaustive_limit=EXHAUSTIVE_LIMIT,
):
    """Normalized Wieferich frequencies per degree.

    Each cell is (q^d / #P_d) * mean over models of the number of Wieferich
    places of degree d, so a frequency of q^-d per place normalizes to 1.
    The non_torsion column restricts to models whose base point 1 survives
    the chosen torsion filter.
    """
    degrees = list(degrees)
    if not degrees:
        raise ValueError("degrees must be nonempty")
    columns = tuple(columns)
    for col in columns:
        if col not in ("all", "non_torsion"):
            raise ValueError("unknown column %r" % (col,))
    need_nt = "non_torsion" in columns
    if need_nt and nt_filter not in NT_FILTERS:
        raise ValueError("unknown torsion filter %r; expected one of %r" % (nt_filter, NT_FILTERS))

    if exhaustive:
        if universe.cardinality > exhaustive_limit:
            raise ValueError(
                "universe has %d members, above the exhaustive limit %d"
                % (universe.cardinality, exhaustive_limit)
            )
        model_stream = universe.iter_models()
        mode = "exhaustive"
    else:
        if n_samples is None or seed is None:
            raise ValueError("monte carlo mode needs n_samples and seed")
        model_stream = (
            sample_model(universe, substream_seed(seed, i)) for i in range(n_samples)
        )
        mode = "monte_carlo"

    ctx = universe.ctx
    place_lists = {d: places(ctx, d) for d in degrees}
    totals_all = {d: 0 for d in degrees}
    totals_nt = {d: 0 for d in degrees}
    n_total = 0
    n_nt = 0
    for model in model_stream:
        n_total += 1
        keep = not _base_point_is_torsion(model, nt_filter) if need_nt else False
        if keep:
            n_nt += 1
        for d in degrees:
            hits = sum(wieferich_indicator(model, pl) for pl in place_lists[d])
            totals_all[d] += hits
            if keep:
                totals_nt[d] += hits

    out = []
    for d in degrees:
        n_places = len(place_lists[d])
        for col in columns:
            total, n_models = (
                (totals_all[d], n_total) if col == "all" else (totals_nt[d], n_nt)
            )
            if n_models == 0:
                raise ValueError("no models in column %r" % (col,))
            value = Fraction(ctx.q**d * total, n_places * n_models)
            out.append(
                CellResult(
                    q=ctx.q,
                    rank=universe.rank,
                    degree=d,
                    column=col,
                    value=value,
                    n_models=n_models,
                    mode=mode,
                    seed=None if exhaustive else seed,
                )
            )
    return out


@dataclass(frozen=True)
class IndependenceReport:
    """Chi-square comparison of joint Wieferich outcomes with independence."""

    statistic: float
    dof: int
    pvalue: float
    counts: tuple
    expected: tuple
    n_samples: int
    seed: int
    places: tuple


def _chi_square(counts, expected):
    stat = 0.0
    for obs, exp in zip(counts, expected):
        stat += (obs - exp) ** 2 / exp
    return stat


def independence_test(universe, place_list, n_samples, seed):
    """Joint indicator distribution over several places versus the product law.

    Outcome b over k places has predicted probability
    prod_i (q^-d_i if bit i set else 1 - q^-d_i); the chi-square statistic
    over the 2^k outcomes has 2^k - 1 degrees of freedom.
    """
    from scipy.stats import chi2

    place_list = tuple(place_list)
    if len(place_list) < 2:
        raise ValueError("need at least two places")
    if len({pl.poly for pl in place_list}) != len(place_list):
        raise ValueError("places must be distinct")
    k = len(place_list)
    q = universe.ctx.q
    rates = [Fraction(1, q**pl.degree) for pl in place_list]
    expected = []
    for bits in range(2**k):
        prob = Fraction(1)
        for i in range(k):
            prob *= rates[i] if (bits >> i) & 1 else 1 - rates[i]
        expected.append(float(prob * n_samples))
    if min(expected) < 5:
        raise ValueError(
            "smallest expected cell is %.3f; need at least 5, raise n_samples"
            % min(expected)
        )
    counts = [0] * 2**k
    for i in range(n_samples):
        model = sample_model(universe, substream_seed(seed, i))
        bits = 0
        for j, pl in enumerate(place_list):
            if wieferich_indicator(model, pl):
                bits |= 1 << j
        counts[bits] += 1
    stat = _chi_square(counts, expected)
    dof = 2**k - 1
    return IndependenceReport(
        statistic=stat,
        dof=dof,
        pvalue=float(chi2.sf(stat, dof)),
        counts=tuple(counts),
        expected=tuple(expected),
        n_samples=n_samples,
        seed=seed,
        places=place_list,
    )


def frequency_test(universe, place, n_samples, seed):
    """Single-place Wieferich rate versus q^-deg, chi-square with 1 dof."""
    from scipy.stats import chi2

    q = universe.ctx.q
    rate = Fraction(1, q**place.degree)
    expected = [float((1 - rate) * n_samples), float(rate * n_samples)]
    if min(expected) < 5:
        raise ValueError(
            "smallest expected cell is %.3f; need at least 5, raise n_samples"
            % min(expected)
        )
    hits = 0
    for i in range(n_samples):
        model = sample_model(universe, substream_seed(seed, i))
        hits += wieferich_indicator(model, place)
    counts = [n_samples - hits, hits]
    stat = _chi_square(counts, expected)
    return IndependenceReport(
        statistic=stat,
        dof=1,
        pvalue=float(chi2.sf(stat, 1)),
        counts=tuple(counts),
        expected=tuple(expected),
        n_samples=n_samples,
        seed=seed,
        places=(place,),
    )
