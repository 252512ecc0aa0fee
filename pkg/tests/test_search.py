"""Place search: kernels, hit lists, checkpointing, worker independence."""

import json
import math

import numpy as np
import pytest

from drinfeld import DrinfeldModel, Place, Poly, is_wieferich, ordic_valuation
from drinfeld.fields import fq_context
from drinfeld.kernels import (
    candidate_block,
    carlitz_wieferich_mask,
    irreducible_candidate_mask,
    monic_by_index,
)
from drinfeld.poly import is_irreducible, monic_polys, places
from drinfeld.search import (
    CheckpointMismatch,
    SearchInterrupted,
    resume,
    run_search,
    search_wieferich,
    throughput_report,
)


def found_strings(found):
    return [(pl.degree, str(pl.poly)) for pl, _ in found]


class TestKernels:
    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_candidate_order_matches_enumeration(self, q):
        ctx = fq_context(q)
        d = 3
        F = candidate_block(q, d, 0, q**d)
        for idx, m in enumerate(monic_polys(ctx, d)):
            assert list(map(int, F[idx])) == [m.coeffs[j] for j in range(d)]
            assert monic_by_index(ctx, d, idx) == m

    @pytest.mark.parametrize("q,d", [(2, 4), (3, 4), (3, 6), (5, 3)])
    def test_irreducible_filter_keeps_every_irreducible(self, q, d):
        ctx = fq_context(q)
        mask = irreducible_candidate_mask(candidate_block(q, d, 0, q**d), q)
        for idx, m in enumerate(monic_polys(ctx, d)):
            if is_irreducible(m):
                assert mask[idx], str(m)

    @pytest.mark.parametrize("q,d", [(2, 3), (3, 3), (3, 6), (5, 2)])
    def test_congruence_mask_matches_scalar(self, q, d):
        ctx = fq_context(q)
        car = DrinfeldModel.carlitz(ctx)
        one = Poly.one(ctx)
        F = candidate_block(q, d, 0, q**d)
        mask = carlitz_wieferich_mask(F, q)
        for idx, f in enumerate(monic_polys(ctx, d)):
            want = car.phi_eval_mod(f - one, one, f * f).is_zero()
            assert bool(mask[idx]) == want, str(f)

    def test_empty_block(self):
        assert carlitz_wieferich_mask(np.zeros((0, 4), dtype=np.int16), 3).shape == (0,)


class TestHitLists:
    def test_carlitz_q3_degree_twelve(self):
        ctx = fq_context(3)
        found = search_wieferich(DrinfeldModel.carlitz(ctx), 12)
        assert found_strings(found) == [
            (6, "t^6 + t^4 + t^3 + t^2 + 2*t + 2"),
            (9, "t^9 + t^6 + t^4 + t^2 + 2*t + 2"),
            (12, "t^12 + 2*t^10 + t^9 + 2*t^4 + 2*t^3 + t^2 + 1"),
        ]
        assert all(b == 1 for _, b in found)

    def test_carlitz_q4_degree_five(self):
        ctx = fq_context(2, 2)
        found = search_wieferich(DrinfeldModel.carlitz(ctx), 5)
        assert found_strings(found) == [(2, "t^2 + t + z"), (2, "t^2 + t + z+1")]

    def test_carlitz_q2_all_higher_degree_places(self):
        ctx = fq_context(2)
        found = search_wieferich(DrinfeldModel.carlitz(ctx), 6)
        want = [(d, str(p.poly)) for d in range(2, 7) for p in places(ctx, d)]
        assert found_strings(found) == want
        assert all(b == math.inf for _, b in found)

    def test_non_carlitz_model_scalar_path(self):
        ctx = fq_context(3)
        model = DrinfeldModel(ctx, [Poly(ctx, [0, 0, 0, 1])])
        found = search_wieferich(model, 2)
        for pl, bound in found:
            assert is_wieferich(model, Poly.one(ctx), pl)
            assert bound >= 1 or bound == math.inf

    def test_sorted_output(self):
        ctx = fq_context(2)
        found = search_wieferich(DrinfeldModel.carlitz(ctx), 5)
        keys = [(pl.degree, str(pl.poly)) for pl, _ in found]
        degs = [k[0] for k in keys]
        assert degs == sorted(degs)

    def test_max_degree_validation(self):
        ctx = fq_context(3)
        with pytest.raises(ValueError):
            search_wieferich(DrinfeldModel.carlitz(ctx), 0)


class TestFastSlowAgreement:
    @pytest.mark.parametrize("q", [2, 3])
    def test_fast_test_agrees_with_valuation_up_to_degree_four(self, q):
        ctx = fq_context(q)
        model = DrinfeldModel.carlitz(ctx)
        one = Poly.one(ctx)
        for d in range(1, 5):
            for pl in places(ctx, d):
                fast = is_wieferich(model, one, pl)
                ov = ordic_valuation(model, one, pl)
                slow = ov.value >= 1 or ov.value == math.inf
                assert fast == slow, str(pl.poly)


class TestCheckpointing:
    def test_interrupt_and_resume_identical(self, tmp_path):
        ctx = fq_context(3)
        model = DrinfeldModel.carlitz(ctx)
        cp = str(tmp_path / "cp.json")
        full = search_wieferich(DrinfeldModel.carlitz(ctx), 8)
        with pytest.raises(SearchInterrupted):
            run_search(model, 8, checkpoint_path=cp, checkpoint_every=100, max_chunks=3)
        state = json.loads(open(cp).read())
        assert not state["complete"]
        resumed = resume(cp)
        assert found_strings(resumed) == found_strings(full)

    def test_resume_completed_search(self, tmp_path):
        ctx = fq_context(3)
        cp = str(tmp_path / "cp.json")
        first = search_wieferich(DrinfeldModel.carlitz(ctx), 6, checkpoint_path=cp)
        again = resume(cp)
        assert found_strings(again) == found_strings(first)
        assert json.loads(open(cp).read())["complete"]

    def test_mismatched_model_rejected(self, tmp_path):
        ctx = fq_context(3)
        cp = str(tmp_path / "cp.json")
        search_wieferich(DrinfeldModel.carlitz(ctx), 4, checkpoint_path=cp)
        other = DrinfeldModel(ctx, [Poly(ctx, [0, 1])])
        with pytest.raises(CheckpointMismatch):
            search_wieferich(other, 4, checkpoint_path=cp)

    def test_mismatched_degree_rejected(self, tmp_path):
        ctx = fq_context(3)
        cp = str(tmp_path / "cp.json")
        search_wieferich(DrinfeldModel.carlitz(ctx), 4, checkpoint_path=cp)
        with pytest.raises(CheckpointMismatch):
            search_wieferich(DrinfeldModel.carlitz(ctx), 5, checkpoint_path=cp)

    def test_tampered_checkpoint_rejected(self, tmp_path):
        ctx = fq_context(3)
        cp = str(tmp_path / "cp.json")
        search_wieferich(DrinfeldModel.carlitz(ctx), 4, checkpoint_path=cp)
        state = json.loads(open(cp).read())
        state["model"] = "t + 2*tau"
        open(cp, "w").write(json.dumps(state))
        with pytest.raises(CheckpointMismatch):
            resume(cp)

    def test_csv_output(self, tmp_path):
        ctx = fq_context(2)
        out = str(tmp_path / "hits.csv")
        run_search(DrinfeldModel.carlitz(ctx), 4, out_csv=out)
        lines = open(out).read().strip().splitlines()
        assert lines[0] == "degree,place,wieferich,verified_twice"
        assert lines[1] == "2,t^2 + t + 1,1,True"
        assert len(lines) == 1 + 6  # places of degrees 2, 3, 4


class TestWorkerIndependence:
    def test_two_workers_match_single(self):
        ctx = fq_context(3)
        one_worker = search_wieferich(DrinfeldModel.carlitz(ctx), 9, workers=1)
        two_workers = search_wieferich(DrinfeldModel.carlitz(ctx), 9, workers=2)
        assert found_strings(one_worker) == found_strings(two_workers)


class TestThroughput:
    def test_report_covers_degrees(self):
        ctx = fq_context(3)
        run = run_search(DrinfeldModel.carlitz(ctx), 4)
        rep = throughput_report(run)
        assert set(rep) == {1, 2, 3, 4}
        assert all(v > 0 for v in rep.values())

    def test_completed_resume_has_empty_report(self, tmp_path):
        ctx = fq_context(3)
        cp = str(tmp_path / "cp.json")
        run_search(DrinfeldModel.carlitz(ctx), 4, checkpoint_path=cp)
        again = run_search(DrinfeldModel.carlitz(ctx), 4, checkpoint_path=cp)
        assert throughput_report(again) == {}
