"""Command-line interface.

One binary, subcommand style. JSON (default) is the machine interface and
aligned tables the human one; every run prints its resolved configuration to
stderr as a `config:` line so output files alone reproduce the run.

Exit codes: 0 success, 1 mathematical cross-check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass

from . import checks as checks_mod
from .fields import fq_context
from .lseries import lp_value_at_1, taelman_unit
from .ore import DrinfeldModel
from .padic import PrecisionError
from .parsing import model_str, parse_model, parse_place, parse_poly
from .poly import places, places_up_to
from .search import (CheckpointMismatch, SearchError, VerificationError,
                     resume, run_search, throughput_report)
from .stats import EXHAUSTIVE_LIMIT, Universe, stats_table
from .wieferich import ordic_valuation

__all__ = ["Config", "main", "run"]

_ENV_PREFIX = "DRINFELD_"


@dataclass(frozen=True)
class Config:
    """Resolved run parameters; emitted with every output for reproducibility."""

    p: int
    k: int
    modulus: list | None
    seed: int | None
    workers: int
    format: str
    c_max: int | None
    truncation: int
    exhaustive_limit: int

    def as_dict(self):
        return asdict(self)


def _env_int(name, default):
    raw = os.environ.get(_ENV_PREFIX + name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError("%s%s must be an integer, got %r" % (_ENV_PREFIX, name, raw))


def _factor_prime_power(q):
    if q < 2:
        raise ValueError("q must be a prime power >= 2")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        p = q
    k = 0
    n = q
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise ValueError("q = %d is not a prime power" % q)
    return p, k


def _parse_modulus(s):
    if s is None:
        return None
    try:
        return [int(c) for c in s.split(",")]
    except ValueError:
        raise ValueError("modulus must be comma-separated integer coefficients,"
                         " constant first, e.g. 1,1,1 for z^2+z+1")


def _parse_degrees(s):
    out = []
    for part in s.split(","):
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError("bad degree range %r" % part)
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out or any(d < 1 for d in out):
        raise ValueError("degrees must be positive, got %r" % s)
    return out


def _resolve_config(args):
    q = getattr(args, "q", None)
    if q is None:
        p, k = 0, 0
    else:
        p, k = _factor_prime_power(q)
    modulus = _parse_modulus(getattr(args, "modulus", None))
    workers = getattr(args, "workers", None)
    if workers is None:
        workers = _env_int("WORKERS", 1)
    seed = getattr(args, "seed", None)
    cfg = Config(
        p=p,
        k=k,
        modulus=modulus,
        seed=seed,
        workers=workers,
        format=args.format,
        c_max=getattr(args, "c_max", None) or _env_int("CMAX", 0) or None,
        truncation=getattr(args, "prec", None)
        or getattr(args, "terms", None)
        or _env_int("TRUNCATION", 8),
        exhaustive_limit=_env_int("EXHAUSTIVE_LIMIT", EXHAUSTIVE_LIMIT),
    )
    return cfg


def _context(cfg):
    if cfg.p == 0:
        raise ValueError("--q is required")
    return fq_context(cfg.p, cfg.k, cfg.modulus)


def _field_payload(cfg):
    return {"p": cfg.p, "k": cfg.k, "modulus": cfg.modulus}


def _emit_config(cfg, extra=None):
    d = cfg.as_dict()
    if extra:
        d.update(extra)
    print("config: " + json.dumps(d, sort_keys=True), file=sys.stderr)


def _write_out(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _jdump(obj):
    return json.dumps(obj, separators=(",", ":"))


def _get_model(args, ctx):
    spec = args.model
    if spec.strip().lower() == "carlitz":
        return DrinfeldModel.carlitz(ctx)
    return parse_model(spec, ctx)


def _post(args, endpoint, payload):
    import httpx

    base = args.server.rstrip("/")
    r = httpx.post(base + endpoint, json=payload, timeout=600.0)
    r.raise_for_status()
    return r.json()


def _poll_search(args, job_id):
    import httpx

    base = args.server.rstrip("/")
    while True:
        r = httpx.get("%s/search/%s" % (base, job_id), timeout=600.0)
        r.raise_for_status()
        body = r.json()
        status = body["result"]["status"]
        if status == "done":
            return body["result"]["result"]
        if status == "error":
            raise VerificationError(body["result"].get("error", "search failed"))
        time.sleep(0.5)


# --- subcommands -----------------------------------------------------------


def _cmd_places(args):
    cfg = _resolve_config(args)
    _emit_config(cfg, {"command": "places", "degree": args.degree})
    if args.server:
        payload = {"field": _field_payload(cfg), "degree": args.degree,
                   "up_to": args.up_to}
        names = _post(args, "/places", payload)["result"]
    else:
        ctx = _context(cfg)
        pls = places_up_to(ctx, args.degree) if args.up_to else places(ctx, args.degree)
        names = [str(pl.poly) for pl in pls]
    if args.format == "json":
        _write_out(_jdump(names), args.out)
    else:
        _write_out("\n".join(names) if names else "(none)", args.out)
    return 0


def _cmd_cvalue(args):
    cfg = _resolve_config(args)
    _emit_config(cfg, {"command": "cvalue", "model": args.model,
                       "place": args.place, "base": args.base})
    if args.server:
        payload = {"field": _field_payload(cfg), "model": args.model,
                   "place": args.place, "base": args.base,
                   "method": args.method, "c_max": cfg.c_max}
        result = _post(args, "/cvalue", payload)["result"]
    else:
        ctx = _context(cfg)
        model = _get_model(args, ctx)
        pl = parse_place(args.place, ctx)
        base = parse_poly(args.base, ctx)
        v = ordic_valuation(model, base, pl, method=args.method,
                            max_precision=cfg.c_max)
        result = {"c": "inf" if v.value is math.inf else v.value}
        if v.torsion:
            result["torsion"] = True
    if args.format == "json":
        _write_out(_jdump(result), args.out)
    else:
        line = "c = %s" % result["c"]
        if result.get("torsion"):
            line += " (torsion)"
        _write_out(line, args.out)
    return 0


def _cmd_lvalue(args):
    cfg = _resolve_config(args)
    prec = args.prec if args.prec is not None else cfg.truncation
    _emit_config(cfg, {"command": "lvalue", "model": args.model,
                       "place": args.place, "prec": prec})
    if args.server:
        payload = {"field": _field_payload(cfg), "model": args.model,
                   "place": args.place, "prec": prec, "method": args.method}
        result = _post(args, "/lvalue", payload)["result"]
    else:
        ctx = _context(cfg)
        model = _get_model(args, ctx)
        pl = parse_place(args.place, ctx)
        v = lp_value_at_1(model, pl, prec, method=args.method)
        result = {"value": str(v), "valuation": v.valuation()}
    if args.format == "json":
        _write_out(_jdump(result), args.out)
    else:
        _write_out("value = %s\nvaluation = %d"
                   % (result["value"], result["valuation"]), args.out)
    return 0


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


def _cmd_unit(args):
    cfg = _resolve_config(args)
    terms = args.terms if args.terms is not None else cfg.truncation
    _emit_config(cfg, {"command": "unit", "model": args.model, "terms": terms})
    if args.server:
        payload = {"field": _field_payload(cfg), "model": args.model,
                   "terms": terms}
        result = _post(args, "/unit", payload)["result"]
    else:
        ctx = _context(cfg)
        model = _get_model(args, ctx)
        u = taelman_unit(model, terms)
        result = {"unit": _unit_str(u.poly), "certified": u.certified}
    if args.format == "json":
        _write_out(json.dumps(result["unit"]), args.out)
    else:
        line = result["unit"]
        if not result["certified"]:
            line += "  (uncertified)"
        _write_out(line, args.out)
    return 0


def _stats_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["q", "rank", "degree", "column", "value",
                "n_samples", "mode", "seed"])
    for r in rows:
        w.writerow([r["q"], r["rank"], r["degree"], r["column"], r["rendered"],
                    r["n_models"], r["mode"], "" if r["seed"] is None else r["seed"]])
    return buf.getvalue().rstrip("\n")


def _stats_table_text(rows, columns):
    degrees = sorted({r["degree"] for r in rows})
    cell = {(r["degree"], r["column"]): r["rendered"] for r in rows}
    header = ["degree"] + list(columns)
    widths = [max(len(h), 6) for h in header]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    for d in degrees:
        row = [str(d)] + [cell.get((d, c), "-") for c in columns]
        lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    return "\n".join(lines)


def _cmd_stats(args):
    cfg = _resolve_config(args)
    columns = tuple(args.columns.split(","))
    degrees = _parse_degrees(args.degrees)
    _emit_config(cfg, {"command": "stats", "rank": args.rank, "degrees": degrees,
                       "columns": list(columns), "nt_filter": args.nt_filter,
                       "exhaustive": args.exhaustive, "samples": args.samples})
    if args.server:
        payload = {"field": _field_payload(cfg), "rank": args.rank,
                   "degrees": degrees, "columns": list(columns),
                   "nt_filter": args.nt_filter, "exhaustive": args.exhaustive,
                   "n_samples": args.samples, "seed": cfg.seed,
                   "exhaustive_limit": cfg.exhaustive_limit}
        rows = _post(args, "/stats", payload)["result"]
    else:
        ctx = _context(cfg)
        u = Universe(ctx, args.rank)
        cells = stats_table(u, degrees, n_samples=args.samples, seed=cfg.seed,
                            exhaustive=args.exhaustive, columns=columns,
                            nt_filter=args.nt_filter,
                            exhaustive_limit=cfg.exhaustive_limit)
        rows = [{"q": c.q, "rank": c.rank, "degree": c.degree, "column": c.column,
                 "value": str(c.value), "rendered": c.render(),
                 "n_models": c.n_models, "mode": c.mode, "seed": c.seed}
                for c in cells]
    if args.out and args.out.endswith(".csv"):
        _write_out(_stats_csv(rows), args.out)
    elif args.format == "json":
        _write_out(_jdump(rows), args.out)
    else:
        _write_out(_stats_table_text(rows, columns), args.out)
    return 0


def _cmd_search(args):
    cfg = _resolve_config(args)
    _emit_config(cfg, {"command": "search", "model": args.model,
                       "max_degree": args.max_degree,
                       "checkpoint": args.checkpoint, "resume": args.resume})
    if args.server:
        payload = {"field": _field_payload(cfg), "model": args.model,
                   "max_degree": args.max_degree, "workers": cfg.workers}
        job = _post(args, "/search", payload)["result"]["job"]
        result = _poll_search(args, job)
        found = result["found"]
        throughput = result["throughput"]
    else:
        csv_path = args.out if args.out and args.out.endswith(".csv") else None
        if args.resume:
            run = None
            found_pairs = resume(args.resume, workers=cfg.workers, out_csv=csv_path)
            found = [{"degree": pl.degree, "place": str(pl.poly),
                      "bound": "inf" if b is math.inf else b}
                     for pl, b in found_pairs]
            throughput = {}
        else:
            if args.max_degree is None:
                raise ValueError("--max-degree is required unless --resume is given")
            ctx = _context(cfg)
            model = _get_model(args, ctx)
            run = run_search(model, args.max_degree, workers=cfg.workers,
                             checkpoint_path=args.checkpoint, out_csv=csv_path)
            found = [{"degree": pl.degree, "place": str(pl.poly),
                      "bound": "inf" if b is math.inf else b}
                     for pl, b in run.found]
            throughput = {str(d): v for d, v in throughput_report(run).items()}
    payload_out = {"found": found, "throughput": throughput}
    text_out = None if (args.out or "").endswith(".csv") else args.out
    if args.format == "json":
        _write_out(_jdump(payload_out), text_out)
    else:
        if found:
            width = max(len(f["place"]) for f in found)
            lines = ["deg %2d  %s  bound %s"
                     % (f["degree"], f["place"].ljust(width), f["bound"])
                     for f in found]
        else:
            lines = ["(no Wieferich places found)"]
        _write_out("\n".join(lines), text_out)
    return 0


def _cmd_check(args):
    cfg = _resolve_config(args)
    _emit_config(cfg, {"command": "check", "suite": args.suite,
                       "model": args.model, "max_degree": args.max_degree})
    if args.server:
        payload = {"suite": args.suite, "model": args.model,
                   "max_degree": args.max_degree}
        if args.model is not None:
            payload["field"] = _field_payload(cfg)
        result = _post(args, "/check", payload)["result"]
        ok = result["ok"]
        rows = result["checks"]
    else:
        if args.model is not None:
            if args.suite != "euler":
                raise ValueError("per-model checks exist for the euler suite only")
            ctx = _context(cfg)
            model = _get_model(args, ctx)
            results = checks_mod.euler_place_checks(model, args.max_degree)
        elif args.suite == "all":
            results = checks_mod.run_all()
        else:
            results = checks_mod.run_suite(args.suite)
        ok = all(r.ok for r in results)
        rows = [{"suite": r.suite, "name": r.name, "ok": r.ok, "detail": r.detail}
                for r in results]
    if args.format == "json":
        _write_out(_jdump({"ok": ok, "checks": rows}), args.out)
    else:
        lines = ["%s %s :: %s%s"
                 % ("PASS" if r["ok"] else "FAIL", r["suite"], r["name"],
                    "  [%s]" % r["detail"] if r["detail"] else "")
                 for r in rows]
        lines.append("pass" if ok else "fail")
        _write_out("\n".join(lines), args.out)
    return 0 if ok else 1


# --- parser ----------------------------------------------------------------


def _add_common(sp, fmt_default="json", with_field=True, with_out=True):
    if with_field:
        sp.add_argument("--q", type=int, help="field size (prime power)")
        sp.add_argument("--modulus",
                        help="extension modulus coefficients, constant first"
                             " (e.g. 1,1,1 for z^2+z+1)")
    sp.add_argument("--format", choices=("json", "table"), default=fmt_default)
    sp.add_argument("--server", help="delegate to a running service at this URL")
    if with_out:
        sp.add_argument("--out", help="write output to this file instead of stdout")


def _parser():
    ap = argparse.ArgumentParser(
        prog="drinfeld",
        description="Drinfeld modules over F_q[t]: Wieferich places, ordic"
                    " valuations, L-series, units and statistics.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("places", help="list the places of a given degree")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--up-to", action="store_true",
                    help="all places of degree 1..degree")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_places)

    sp = sub.add_parser("cvalue", help="ordic valuation c_p(model; base)")
    sp.add_argument("--model", required=True)
    sp.add_argument("--place", required=True)
    sp.add_argument("--base", default="1")
    sp.add_argument("--method", choices=("auto", "fitting", "annihilator"),
                    default="auto")
    sp.add_argument("--c-max", dest="c_max", type=int,
                    help="cap on the working precision")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_cvalue)

    sp = sub.add_parser("lvalue", help="p-adic L-value at 1")
    sp.add_argument("--model", required=True)
    sp.add_argument("--place", required=True)
    sp.add_argument("--prec", type=int, help="p-adic precision (digits in p)")
    sp.add_argument("--method", choices=("auto", "class", "euler"),
                    default="auto")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_lvalue)

    sp = sub.add_parser("unit", help="Taelman unit u(T) truncation")
    sp.add_argument("--model", required=True)
    sp.add_argument("--terms", type=int, help="number of T-coefficients")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_unit)

    sp = sub.add_parser("stats", help="Wieferich frequency tables")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--degrees", required=True,
                    help="e.g. 1-8 or 1,2,3")
    sp.add_argument("--columns", default="all,non_torsion")
    sp.add_argument("--nt-filter", dest="nt_filter",
                    choices=("exact", "degree_one"), default="exact")
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--samples", type=int, help="Monte Carlo sample count")
    sp.add_argument("--seed", type=int)
    _add_common(sp)
    sp.set_defaults(fn=_cmd_stats)

    sp = sub.add_parser("search", help="search Wieferich places up to a degree")
    sp.add_argument("--model", default="carlitz")
    sp.add_argument("--max-degree", dest="max_degree", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--checkpoint", help="checkpoint file to write/extend")
    sp.add_argument("--resume", help="resume from this checkpoint file")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_search)

    sp = sub.add_parser("check", help="run cross-check suites")
    sp.add_argument("suite", nargs="?", default="all",
                    help="all, or one of the module suites, or euler with"
                         " --model for a per-place report")
    sp.add_argument("--model")
    sp.add_argument("--max-degree", dest="max_degree", type=int, default=3)
    _add_common(sp, fmt_default="table")
    sp.set_defaults(fn=_cmd_check)

    return ap


def run(argv=None):
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args)
    except (CheckpointMismatch, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (ArithmeticError, PrecisionError, VerificationError, SearchError) as e:
        print("cross-check failure: %s" % e, file=sys.stderr)
        return 1
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
