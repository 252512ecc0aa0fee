"""HTTP service over the toolkit: synchronous math endpoints plus
background search jobs.

Every response is an envelope {"config": <resolved parameters>, "result": ...}
so clients can reproduce a run from its output alone.
"""

from __future__ import annotations

import math
import threading
import uuid

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import checks as checks_mod
from .fields import fq_context
from .lseries import lp_value_at_1, taelman_unit
from .ore import DrinfeldModel
from .parsing import ParseError, model_str, parse_model, parse_place, parse_poly
from .poly import places, places_up_to
from .search import run_search, throughput_report
from .stats import Universe, stats_table
from .wieferich import ordic_valuation

__all__ = ["app", "create_app"]


class FieldSpec(BaseModel):
    p: int = Field(ge=2)
    k: int = Field(default=1, ge=1)
    modulus: list[int] | None = None

    def context(self):
        try:
            return fq_context(self.p, self.k, self.modulus)
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e))

    def resolved(self):
        ctx = self.context()
        out = {"p": self.p, "k": self.k, "modulus": self.modulus}
        if self.k > 1 and self.modulus is None:
            out["modulus"] = list(ctx.modulus)
        return out


def _model(ctx, spec):
    try:
        if spec.strip().lower() == "carlitz":
            return DrinfeldModel.carlitz(ctx)
        return parse_model(spec, ctx)
    except (ParseError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))


def _place(ctx, spec):
    try:
        return parse_place(spec, ctx)
    except (ParseError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))


def _envelope(config, result):
    return {"config": config, "result": result}


class PlacesRequest(BaseModel):
    field: FieldSpec
    degree: int = Field(ge=1)
    up_to: bool = False


class CValueRequest(BaseModel):
    field: FieldSpec
    model: str
    place: str
    base: str = "1"
    method: str = "auto"
    c_max: int | None = None


class LValueRequest(BaseModel):
    field: FieldSpec
    model: str
    place: str
    prec: int = Field(default=8, ge=1)
    method: str = "auto"


class UnitRequest(BaseModel):
    field: FieldSpec
    model: str
    terms: int = Field(default=6, ge=1)


class StatsRequest(BaseModel):
    field: FieldSpec
    rank: int = Field(ge=1)
    degrees: list[int]
    columns: list[str] = ["all", "non_torsion"]
    nt_filter: str = "exact"
    exhaustive: bool = False
    n_samples: int | None = None
    seed: int | None = None
    exhaustive_limit: int | None = None


class CheckRequest(BaseModel):
    suite: str = "all"
    field: FieldSpec | None = None
    model: str | None = None
    max_degree: int = Field(default=3, ge=1)


class SearchRequest(BaseModel):
    field: FieldSpec
    model: str = "carlitz"
    max_degree: int = Field(ge=1)
    workers: int = Field(default=1, ge=1)


def _unit_str(tp):
    from .parsing import poly_str

    terms = []
    for i, c in enumerate(tp.coeffs):
        if c.is_zero():
            continue
        cs = poly_str(c)
        if i == 0:
            terms.append(cs)
        else:
            var = "T" if i == 1 else "T^%d" % i
            terms.append(var if cs == "1" else "(%s)*%s" % (cs, var))
    return " + ".join(terms) if terms else "0"


def create_app():
    app = FastAPI(title="drinfeld", version="0.1.0")
    jobs = {}
    jobs_lock = threading.Lock()

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/places")
    def places_ep(req: PlacesRequest):
        ctx = req.field.context()
        pls = places_up_to(ctx, req.degree) if req.up_to else places(ctx, req.degree)
        cfg = {"field": req.field.resolved(), "degree": req.degree, "up_to": req.up_to}
        return _envelope(cfg, [str(pl.poly) for pl in pls])

    @app.post("/cvalue")
    def cvalue_ep(req: CValueRequest):
        ctx = req.field.context()
        model = _model(ctx, req.model)
        pl = _place(ctx, req.place)
        try:
            base = parse_poly(req.base, ctx)
            v = ordic_valuation(model, base, pl, method=req.method,
                                max_precision=req.c_max)
        except (ParseError, ValueError) as e:
            raise HTTPException(status_code=400, detail=str(e))
        result = {"c": "inf" if v.value is math.inf else v.value}
        if v.torsion:
            result["torsion"] = True
        cfg = {"field": req.field.resolved(), "model": model_str(model),
               "place": str(pl.poly), "base": req.base, "method": v.method,
               "c_max": req.c_max}
        return _envelope(cfg, result)

    @app.post("/lvalue")
    def lvalue_ep(req: LValueRequest):
        ctx = req.field.context()
        model = _model(ctx, req.model)
        pl = _place(ctx, req.place)
        try:
            v = lp_value_at_1(model, pl, req.prec, method=req.method)
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e))
        cfg = {"field": req.field.resolved(), "model": model_str(model),
               "place": str(pl.poly), "prec": req.prec, "method": req.method}
        return _envelope(cfg, {"value": str(v), "valuation": v.valuation()})

    @app.post("/unit")
    def unit_ep(req: UnitRequest):
        ctx = req.field.context()
        model = _model(ctx, req.model)
        u = taelman_unit(model, req.terms)
        cfg = {"field": req.field.resolved(), "model": model_str(model),
               "terms": req.terms}
        return _envelope(cfg, {"unit": _unit_str(u.poly), "certified": u.certified})

    @app.post("/stats")
    def stats_ep(req: StatsRequest):
        ctx = req.field.context()
        try:
            u = Universe(ctx, req.rank)
            kwargs = {}
            if req.exhaustive_limit is not None:
                kwargs["exhaustive_limit"] = req.exhaustive_limit
            cells = stats_table(
                u, req.degrees, n_samples=req.n_samples, seed=req.seed,
                exhaustive=req.exhaustive, columns=tuple(req.columns),
                nt_filter=req.nt_filter, **kwargs)
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e))
        cfg = {"field": req.field.resolved(), "rank": req.rank,
               "degrees": req.degrees, "columns": req.columns,
               "nt_filter": req.nt_filter, "exhaustive": req.exhaustive,
               "n_samples": req.n_samples, "seed": req.seed}
        rows = [{"q": c.q, "rank": c.rank, "degree": c.degree, "column": c.column,
                 "value": str(c.value), "rendered": c.render(),
                 "n_models": c.n_models, "mode": c.mode, "seed": c.seed}
                for c in cells]
        return _envelope(cfg, rows)

    @app.post("/check")
    def check_ep(req: CheckRequest):
        if req.model is not None:
            if req.field is None:
                raise HTTPException(status_code=400,
                                    detail="per-model check needs a field")
            ctx = req.field.context()
            model = _model(ctx, req.model)
            results = checks_mod.euler_place_checks(model, req.max_degree)
            cfg = {"suite": "euler", "field": req.field.resolved(),
                   "model": model_str(model), "max_degree": req.max_degree}
        else:
            try:
                results = (checks_mod.run_all() if req.suite == "all"
                           else checks_mod.run_suite(req.suite))
            except ValueError as e:
                raise HTTPException(status_code=400, detail=str(e))
            cfg = {"suite": req.suite}
        rows = [{"suite": r.suite, "name": r.name, "ok": r.ok, "detail": r.detail}
                for r in results]
        return _envelope(cfg, {"ok": all(r.ok for r in results), "checks": rows})

    def _run_job(job_id, ctx, model, max_degree, workers):
        try:
            run = run_search(model, max_degree, workers=workers)
            found = [{"degree": pl.degree, "place": str(pl.poly),
                      "bound": "inf" if b is math.inf else b}
                     for pl, b in run.found]
            payload = {"found": found,
                       "throughput": {str(d): v for d, v in
                                      throughput_report(run).items()}}
            with jobs_lock:
                jobs[job_id].update(status="done", result=payload)
        except Exception as e:
            with jobs_lock:
                jobs[job_id].update(status="error", error=str(e))

    @app.post("/search")
    def search_ep(req: SearchRequest):
        ctx = req.field.context()
        model = _model(ctx, req.model)
        job_id = uuid.uuid4().hex
        cfg = {"field": req.field.resolved(), "model": model_str(model),
               "max_degree": req.max_degree, "workers": req.workers}
        with jobs_lock:
            jobs[job_id] = {"status": "running", "config": cfg}
        th = threading.Thread(
            target=_run_job, args=(job_id, ctx, model, req.max_degree, req.workers),
            daemon=True)
        th.start()
        return _envelope(cfg, {"job": job_id})

    @app.get("/search/{job_id}")
    def search_status(job_id: str):
        with jobs_lock:
            job = jobs.get(job_id)
            if job is None:
                raise HTTPException(status_code=404, detail="no such job")
            out = dict(job)
        cfg = out.pop("config")
        return _envelope(cfg, out)

    return app


app = create_app()
