"""Frequency tables, sampling determinism and chi-square reports."""

import pytest

from drinfeld import DrinfeldModel, Place, Poly
from drinfeld.fields import fq_context
from drinfeld.poly import places
from drinfeld.stats import (
    CellResult,
    Universe,
    format_cell,
    frequency_test,
    independence_test,
    sample_model,
    stats_table,
    substream_seed,
    wieferich_indicator,
)


def table_strings(universe, degrees, column, nt_filter="exact"):
    cells = stats_table(universe, degrees, exhaustive=True, nt_filter=nt_filter)
    return [c.render() for c in cells if c.column == column]


class TestUniverse:
    def test_cardinalities(self):
        assert Universe(fq_context(2), 1).cardinality == 7
        assert Universe(fq_context(2), 2).cardinality == 248
        assert Universe(fq_context(3), 1).cardinality == 80

    def test_iter_matches_cardinality_and_rank(self):
        u = Universe(fq_context(2), 2)
        models = list(u.iter_models())
        assert len(models) == u.cardinality
        assert all(m.rank == 2 for m in models)
        assert len({tuple(str(g) for g in m.g) for m in models}) == len(models)

    def test_degree_bounds(self):
        u = Universe(fq_context(3), 1)
        assert all(m.g[0].degree <= 3 for m in u.iter_models())

    def test_rank_validation(self):
        with pytest.raises(ValueError):
            Universe(fq_context(2), 0)


class TestSampling:
    def test_sample_model_deterministic(self):
        u = Universe(fq_context(3), 2)
        a = sample_model(u, 42)
        b = sample_model(u, 42)
        c = sample_model(u, 43)
        assert [str(g) for g in a.g] == [str(g) for g in b.g]
        assert [str(g) for g in a.g] != [str(g) for g in c.g]

    def test_sample_top_coefficient_nonzero(self):
        u = Universe(fq_context(2), 2)
        for seed in range(200):
            assert not sample_model(u, seed).g[-1].is_zero()

    def test_substreams_differ(self):
        seen = {substream_seed(5, i) for i in range(100)}
        assert len(seen) == 100

    def test_monte_carlo_reproducible(self):
        u = Universe(fq_context(3), 1)
        a = stats_table(u, [1, 2], n_samples=300, seed=7, nt_filter="degree_one")
        b = stats_table(u, [1, 2], n_samples=300, seed=7, nt_filter="degree_one")
        assert [(c.degree, c.column, c.value, c.n_models) for c in a] == [
            (c.degree, c.column, c.value, c.n_models) for c in b
        ]
        by_key = {(c.degree, c.column): c for c in a}
        assert by_key[(1, "all")].render() == "1.02"
        assert by_key[(1, "non_torsion")].n_models == 285
        assert all(c.mode == "monte_carlo" and c.seed == 7 for c in a)


class TestIndicator:
    def test_carlitz_q3_degree_one_not_wieferich(self):
        ctx = fq_context(3)
        assert wieferich_indicator(DrinfeldModel.carlitz(ctx), Place(Poly.gen(ctx))) == 0

    def test_carlitz_q5_known_wieferich_place(self):
        ctx = fq_context(5)
        pl = Place(Poly(ctx, [1, 4, 0, 0, 0, 1]))
        assert wieferich_indicator(DrinfeldModel.carlitz(ctx), pl) == 1

    def test_carlitz_q2_higher_degree_places(self):
        ctx = fq_context(2)
        c = DrinfeldModel.carlitz(ctx)
        assert wieferich_indicator(c, Place(Poly(ctx, [1, 1, 1]))) == 1
        assert wieferich_indicator(c, Place(Poly.gen(ctx))) == 0


class TestExhaustiveTables:
    def test_q2_rank1_all(self):
        u = Universe(fq_context(2), 1)
        assert table_strings(u, range(1, 9), "all") == [
            "1.14", "1.71", "3.43", "6.86", "13.71", "27.43", "54.86", ">100",
        ]

    def test_q2_rank1_non_torsion_degree_one_filter(self):
        u = Universe(fq_context(2), 1)
        assert table_strings(u, range(1, 9), "non_torsion", "degree_one") == [
            "0.80", "0.80", "1.60", "3.20", "6.40", "12.80", "25.60", "58.03",
        ]

    def test_q2_rank1_non_torsion_exact_filter(self):
        # the exact oracle also rejects the model with annihilator t^2 + t,
        # leaving four models and a different column
        u = Universe(fq_context(2), 1)
        cells = stats_table(
            u, [1, 2], exhaustive=True, columns=("non_torsion",), nt_filter="exact"
        )
        assert [c.render() for c in cells] == ["1.00", "0.00"]
        assert [c.n_models for c in cells] == [4, 4]

    def test_q2_rank2_both_columns(self):
        u = Universe(fq_context(2), 2)
        assert table_strings(u, range(1, 7), "all") == [
            "1.00", "1.24", "0.87", "2.06", "2.54", "5.22",
        ]
        assert table_strings(u, range(1, 7), "non_torsion") == [
            "0.94", "1.08", "0.44", "1.23", "0.77", "1.70",
        ]

    def test_q2_rank2_filters_agree(self):
        u = Universe(fq_context(2), 2)
        assert table_strings(u, [1, 2], "non_torsion", "exact") == table_strings(
            u, [1, 2], "non_torsion", "degree_one"
        )

    def test_q3_rank1_both_columns(self):
        u = Universe(fq_context(3), 1)
        assert table_strings(u, range(1, 6), "all") == [
            "1.01", "0.90", "2.19", "4.56", "9.11",
        ]
        assert table_strings(u, range(1, 6), "non_torsion") == [
            "0.94", "0.58", "1.23", "1.58", "0.00",
        ]

    def test_exhaustive_limit_enforced(self):
        u = Universe(fq_context(3), 2)
        with pytest.raises(ValueError, match="exhaustive limit"):
            stats_table(u, [1], exhaustive=True)

    def test_cell_metadata(self):
        u = Universe(fq_context(2), 1)
        (cell,) = stats_table(u, [1], exhaustive=True, columns=("all",))
        assert (cell.q, cell.rank, cell.degree) == (2, 1, 1)
        assert cell.mode == "exhaustive" and cell.seed is None
        assert cell.n_models == 7


class TestFormatting:
    def test_round_half_away_from_zero(self):
        from fractions import Fraction

        assert format_cell(Fraction(1, 8)) == "0.13"
        assert format_cell(Fraction(5805, 100)) == "58.05"
        assert format_cell(Fraction(1005, 1000)) == "1.01"

    def test_large_values(self):
        from fractions import Fraction

        assert format_cell(Fraction(101)) == ">100"
        assert format_cell(Fraction(100)) == "100.00"


class TestChiSquare:
    def test_independence_report(self):
        u = Universe(fq_context(3), 4)
        rep = independence_test(u, places(fq_context(3), 1)[:2], 400, 11)
        assert rep.dof == 3
        assert sum(rep.counts) == 400
        assert abs(sum(rep.expected) - 400) < 1e-9
        assert 0 <= rep.pvalue <= 1
        again = independence_test(u, places(fq_context(3), 1)[:2], 400, 11)
        assert again.counts == rep.counts

    def test_independence_needs_two_distinct_places(self):
        u = Universe(fq_context(3), 4)
        pls = places(fq_context(3), 1)
        with pytest.raises(ValueError, match="two places"):
            independence_test(u, pls[:1], 400, 11)
        with pytest.raises(ValueError, match="distinct"):
            independence_test(u, [pls[0], pls[0]], 400, 11)

    def test_independence_small_expected_cell_rejected(self):
        u = Universe(fq_context(3), 4)
        pls = places(fq_context(3), 2)
        with pytest.raises(ValueError, match="at least 5"):
            independence_test(u, pls[:2], 100, 11)

    def test_frequency_report(self):
        u = Universe(fq_context(3), 4)
        pl = places(fq_context(3), 1)[0]
        rep = frequency_test(u, pl, 400, 11)
        assert rep.dof == 1
        assert rep.counts == (281, 119)
        assert rep.pvalue > 0.001

    def test_frequency_small_sample_rejected(self):
        u = Universe(fq_context(3), 1)
        pl = places(fq_context(3), 3)[0]
        with pytest.raises(ValueError, match="at least 5"):
            frequency_test(u, pl, 50, 1)


class TestTableValidation:
    def test_unknown_column(self):
        u = Universe(fq_context(2), 1)
        with pytest.raises(ValueError, match="column"):
            stats_table(u, [1], exhaustive=True, columns=("bogus",))

    def test_unknown_filter(self):
        u = Universe(fq_context(2), 1)
        with pytest.raises(ValueError, match="filter"):
            stats_table(u, [1], exhaustive=True, nt_filter="bogus")

    def test_monte_carlo_needs_seed(self):
        u = Universe(fq_context(2), 1)
        with pytest.raises(ValueError, match="n_samples and seed"):
            stats_table(u, [1], n_samples=10)

    def test_empty_degrees(self):
        u = Universe(fq_context(2), 1)
        with pytest.raises(ValueError, match="degrees"):
            stats_table(u, [], exhaustive=True)
