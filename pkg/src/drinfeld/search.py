"""Exhaustive Wieferich place searches with checkpointing and parallelism.

One degree at a time, candidates in the fixed enumeration order (constant
coefficient most significant). Large prime-field Carlitz degrees run through
the batched kernels; everything else goes place by place through the scalar
test. Every reported hit is re-verified by an independent scalar
recomputation before it is recorded.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import dataclass, field

from .kernels import (
    candidate_block,
    carlitz_wieferich_mask,
    irreducible_candidate_mask,
    monic_by_index,
)
from .fields import fq_context
from .parsing import model_str, parse_model, parse_poly
from .poly import Place, Poly, is_irreducible
from .residue import fitting_ideal
from .wieferich import is_wieferich, ordic_valuation

__all__ = [
    "CheckpointMismatch",
    "DegreeStats",
    "SearchError",
    "SearchInterrupted",
    "SearchRun",
    "VerificationError",
    "resume",
    "run_search",
    "search_wieferich",
    "throughput_report",
]

CHUNK = 1 << 16
SCALAR_LIMIT = 2048
SCHEMA_VERSION = 1


class SearchError(Exception):
    pass


class CheckpointMismatch(SearchError):
    pass


class VerificationError(SearchError):
    pass


class SearchInterrupted(SearchError):
    """Raised by the work-budget hook after the checkpoint is flushed."""


@dataclass
class DegreeStats:
    degree: int
    candidates: int
    places: int
    hits: int
    seconds: float


@dataclass
class SearchRun:
    model_spec: str
    q: int
    max_degree: int
    workers: int
    found: list = field(default_factory=list)
    per_degree: list = field(default_factory=list)


def _field_spec(ctx):
    return {
        "p": ctx.p,
        "k": ctx.k,
        "modulus": list(ctx.modulus) if ctx.modulus is not None else None,
    }


def _fingerprint(ctx, spec, max_degree):
    canon = json.dumps(
        {"field": _field_spec(ctx), "model": spec, "max_degree": max_degree},
        sort_keys=True,
    )
    return hashlib.sha256(canon.encode()).hexdigest()


def _now():
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def _save_checkpoint(state, path):
    state["updated"] = _now()
    data = json.dumps(state, indent=1)
    tmp = path + ".tmp"
    last_err = None
    for _ in range(3):
        try:
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(data)
            os.replace(tmp, path)
            return
        except OSError as err:
            last_err = err
            time.sleep(0.05)
    raise SearchError("checkpoint write failed: %s" % (last_err,))


def _load_checkpoint(path):
    with open(path, encoding="utf-8") as fh:
        state = json.load(fh)
    if state.get("schema") != SCHEMA_VERSION:
        raise CheckpointMismatch(
            "unsupported checkpoint schema %r" % (state.get("schema"),)
        )
    return state


def _fresh_state(ctx, spec, max_degree):
    return {
        "schema": SCHEMA_VERSION,
        "field": _field_spec(ctx),
        "model": spec,
        "max_degree": max_degree,
        "fingerprint": _fingerprint(ctx, spec, max_degree),
        "completed_degree": 0,
        "next_index": 0,
        "found": [],
        "complete": False,
        "created": _now(),
        "updated": _now(),
    }


def _bound_to_json(bound):
    return "inf" if bound == math.inf else bound


def _bound_from_json(raw):
    return math.inf if raw == "inf" else raw


def _verify_hit(model, place):
    """Independent recomputation of a detected hit; returns the c_p bound."""
    ov = ordic_valuation(model, Poly.one(model.ctx), place)
    if ov.value != math.inf and ov.value < 1:
        raise VerificationError(
            "fast test flagged %s but the valuation recomputation disagrees"
            % (place.poly,)
        )
    return ov.value


def _verify_carlitz_shortcut(model, ctx, degree):
    """The batched path evaluates phi at p - 1; confirm once per degree that
    this really generates the Fitting ideal, on the first place found."""
    n = ctx.q ** (degree - 1)
    limit = min(2 * n, ctx.q**degree)
    while n < limit:
        f = monic_by_index(ctx, degree, n)
        if is_irreducible(f):
            a = fitting_ideal(model, f)
            if a != f - Poly.one(ctx):
                raise VerificationError(
                    "Fitting ideal at %s is not p - 1; shortcut invalid" % (f,)
                )
            return
        n += 1
    raise SearchError("no place of degree %d found for shortcut check" % degree)


def _batch_block(args):
    q, degree, n0, n1 = args
    F = candidate_block(q, degree, n0, n1)
    mask = irreducible_candidate_mask(F, q)
    import numpy as np

    live = np.flatnonzero(mask)
    if live.size == 0:
        return n0, n1, [], 0
    wmask = carlitz_wieferich_mask(F[live], q)
    hits = [int(n0 + i) for i in live[wmask]]
    return n0, n1, hits, int(live.size)


class _Budget:
    def __init__(self, max_chunks):
        self.remaining = max_chunks

    def spend(self):
        if self.remaining is None:
            return False
        self.remaining -= 1
        return self.remaining <= 0


def _record_hit(run, state, degree, place, bound):
    state["found"].append(
        {"degree": degree, "place": str(place.poly), "bound": _bound_to_json(bound)}
    )
    run.found.append((place, bound))


def _scalar_degree(model, degree, state, run, path, budget, checkpoint_every):
    ctx = model.ctx
    one = Poly.one(ctx)
    total = ctx.q**degree
    start = state["next_index"]
    t0 = time.monotonic()
    tested = 0
    places_seen = 0
    hits = 0
    since_flush = 0
    n = start
    while n < total:
        stop = min(n + CHUNK, total)
        for idx in range(n, stop):
            f = monic_by_index(ctx, degree, idx)
            if not is_irreducible(f):
                continue
            places_seen += 1
            pl = Place(f)
            if is_wieferich(model, one, pl):
                bound = _verify_hit(model, pl)
                _record_hit(run, state, degree, pl, bound)
                hits += 1
        tested += stop - n
        since_flush += stop - n
        n = stop
        state["next_index"] = n
        if path and since_flush >= checkpoint_every:
            _save_checkpoint(state, path)
            since_flush = 0
        if budget.spend():
            if path:
                _save_checkpoint(state, path)
            raise SearchInterrupted("work budget exhausted at degree %d" % degree)
    run.per_degree.append(
        DegreeStats(degree, tested, places_seen, hits, time.monotonic() - t0)
    )


def _batch_degree(model, degree, state, run, path, budget, checkpoint_every, workers):
    ctx = model.ctx
    q = ctx.q
    one = Poly.one(ctx)
    total = q**degree
    start = state["next_index"]
    _verify_carlitz_shortcut(model, ctx, degree)
    t0 = time.monotonic()
    blocks = [
        (q, degree, n0, min(n0 + CHUNK, total)) for n0 in range(start, total, CHUNK)
    ]
    tested = 0
    places_seen = 0
    hits = 0
    since_flush = 0

    def consume(results_iter):
        nonlocal tested, places_seen, hits, since_flush
        for n0, n1, hit_indices, n_live in results_iter:
            for idx in hit_indices:
                f = monic_by_index(ctx, degree, idx)
                if not is_irreducible(f):
                    continue
                pl = Place(f)
                if not is_wieferich(model, one, pl):
                    raise VerificationError(
                        "batched test flagged %s but the scalar test disagrees"
                        % (f,)
                    )
                bound = _verify_hit(model, pl)
                _record_hit(run, state, degree, pl, bound)
                hits += 1
            tested += n1 - n0
            places_seen += n_live
            since_flush += n1 - n0
            state["next_index"] = n1
            if path and since_flush >= checkpoint_every:
                _save_checkpoint(state, path)
                since_flush = 0
            if budget.spend():
                if path:
                    _save_checkpoint(state, path)
                raise SearchInterrupted(
                    "work budget exhausted at degree %d" % degree
                )

    if workers > 1:
        import multiprocessing

        mp = multiprocessing.get_context("fork")
        with mp.Pool(workers) as pool:
            consume(pool.imap(_batch_block, blocks, chunksize=1))
    else:
        consume(map(_batch_block, blocks))
    run.per_degree.append(
        DegreeStats(degree, tested, places_seen, hits, time.monotonic() - t0)
    )


def _write_csv(run, out_csv):
    import csv

    with open(out_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["degree", "place", "wieferich", "verified_twice"])
        for place, _bound in run.found:
            writer.writerow([place.degree, str(place.poly), 1, True])


def run_search(
    model,
    max_degree,
    workers=1,
    checkpoint_path=None,
    out_csv=None,
    checkpoint_every=1_000_000,
    max_chunks=None,
):
    """Test every place of degree 1..max_degree at base point 1; returns a
    SearchRun whose found list is sorted by (degree, enumeration order)."""
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    ctx = model.ctx
    spec = model_str(model)
    if checkpoint_path and os.path.exists(checkpoint_path):
        state = _load_checkpoint(checkpoint_path)
        if state["fingerprint"] != _fingerprint(ctx, spec, max_degree):
            raise CheckpointMismatch(
                "checkpoint at %s was written for a different model, field, "
                "or degree range" % checkpoint_path
            )
    else:
        state = _fresh_state(ctx, spec, max_degree)

    run = SearchRun(spec, ctx.q, max_degree, workers)
    for entry in state["found"]:
        run.found.append(
            (
                Place(parse_poly(entry["place"], ctx)),
                _bound_from_json(entry["bound"]),
            )
        )
    if state["complete"]:
        if out_csv:
            _write_csv(run, out_csv)
        return run

    budget = _Budget(max_chunks)
    batchable = (
        model.is_carlitz() and ctx.k == 1 and Poly.one(ctx) == model.g[0]
    )
    for degree in range(state["completed_degree"] + 1, max_degree + 1):
        use_batch = batchable and degree > 1 and ctx.q**degree > SCALAR_LIMIT
        if use_batch:
            _batch_degree(
                model, degree, state, run, checkpoint_path, budget,
                checkpoint_every, workers,
            )
        else:
            _scalar_degree(
                model, degree, state, run, checkpoint_path, budget,
                checkpoint_every,
            )
        state["completed_degree"] = degree
        state["next_index"] = 0
        if checkpoint_path:
            _save_checkpoint(state, checkpoint_path)
    state["complete"] = True
    if checkpoint_path:
        _save_checkpoint(state, checkpoint_path)
    if out_csv:
        _write_csv(run, out_csv)
    return run


def search_wieferich(model, max_degree, workers=1, checkpoint_path=None, **kwargs):
    """List of (place, ordic valuation bound) pairs, sorted by degree then
    enumeration order."""
    run = run_search(
        model, max_degree, workers=workers, checkpoint_path=checkpoint_path, **kwargs
    )
    return run.found


def resume(checkpoint_path, workers=1, out_csv=None, **kwargs):
    """Continue (or re-emit) a checkpointed search; the checkpoint is
    self-describing, so only its path is needed."""
    state = _load_checkpoint(checkpoint_path)
    fs = state["field"]
    ctx = fq_context(fs["p"], fs["k"], tuple(fs["modulus"]) if fs["modulus"] else None)
    model = parse_model(state["model"], ctx)
    if state["fingerprint"] != _fingerprint(ctx, state["model"], state["max_degree"]):
        raise CheckpointMismatch("checkpoint fingerprint does not match its contents")
    run = run_search(
        model,
        state["max_degree"],
        workers=workers,
        checkpoint_path=checkpoint_path,
        out_csv=out_csv,
        **kwargs,
    )
    return run.found


def throughput_report(run):
    """Places tested per second, keyed by degree; monitoring only."""
    out = {}
    for st in run.per_degree:
        out[st.degree] = st.places / st.seconds if st.seconds > 0 else float("inf")
    return out
