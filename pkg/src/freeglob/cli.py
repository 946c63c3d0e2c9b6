"""Command-line front end: term parsing, one subcommand per engine
entry point, and the deterministic verification corpus.

Exit codes are scripting contract, not decoration: 0 success, 1 a
verification failure, 2 bad input (parse errors, missing files, broken
config), 3 a distinct verdict from ``eq``, 4 an unknown verdict or an
exhausted search budget.

All output is JSON on stdout.  Corpus reports omit timings unless asked,
so two runs with the same configuration are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .cylinder import (
    Cylinder,
    contractibility_witness,
    validate_cylinder,
    verify_contraction,
)
from .globset import GlobSet, ShapeError, Table, globular_sum
from .homotopy import ConnectBudget, NotParallel, connect_arrow, pi0, pi1_free_rank
from .rewrite import (
    CheckReport,
    SearchBudget,
    equal,
    normalize,
    verify_inverse_telescope,
    verify_sharp_chain_absorption,
)
from .terms import (
    SRC,
    TGT,
    Context,
    FormalCell,
    Gen,
    Term,
    TermTypeError,
    comp_at,
    disk_context,
    elaborate,
    sum_context,
    to_text,
    type_check,
)
from .theta0 import hom_theta0
from .tower import (
    AdmissiblePair,
    EvaluationStuck,
    ExtPresentation,
    FormalLift,
    InadmissiblePair,
    ThetaTildeMor,
    boundary_leg,
    disk_table,
    evaluate_tower,
    extend_tower,
    is_admissible,
    lift_in_theta_tilde,
    uniqueness_check,
    verify_precat_equations,
)

__all__ = ["ParseError", "RunConfig", "main", "parse_surface"]

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_DISTINCT = 3
EXIT_UNKNOWN = 4


# ---------------------------------------------------------------------------
# surface syntax


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, column: int) -> None:
        super().__init__(f"{msg} (line {line}, column {column})")
        self.line = line
        self.column = column


_TOKEN = re.compile(r"[A-Za-z0-9_]+|\*|\(|\)|\S")


def _lex(text: str) -> list[tuple[str, str, int, int]]:
    out = []
    for ln, src in enumerate(text.splitlines() or [""], start=1):
        for m in _TOKEN.finditer(src):
            tok = m.group()
            col = m.start() + 1
            if tok in "()*":
                out.append((tok, tok, ln, col))
            elif re.fullmatch(r"[A-Za-z0-9_]+", tok):
                out.append(("ident", tok, ln, col))
            else:
                raise ParseError(f"unexpected character {tok!r}", ln, col)
    out.append(("eof", "", ln if text else 1, len(text.splitlines()[-1]) + 1 if text else 1))
    return out


def parse_surface(text: str, ctx: Context | None = None):
    """Parse ``IDENT | id(t) | inv(t) | (t) | t *LEVEL t`` with ``*`` at
    every level left-associative.

    Without a context the surface tree is returned as-is (strings for
    cells, ``("id", t)``/``("inv", t)`` wrappers, ``(level, u, v)``
    compositions); with one it is elaborated to a padded term, which also
    resolves the ``1_c`` identity spelling.
    """
    toks = _lex(text)
    pos = 0

    def peek():
        return toks[pos]

    def take(kind: str):
        nonlocal pos
        t = toks[pos]
        if t[0] != kind:
            raise ParseError(f"expected {kind}, found {t[1] or 'end of input'!r}", t[2], t[3])
        pos += 1
        return t

    def atom():
        kind, val, ln, col = peek()
        if kind == "(":
            take("(")
            t = term()
            take(")")
            return t
        if kind == "ident":
            take("ident")
            if val in ("id", "inv") and peek()[0] == "(":
                take("(")
                t = term()
                take(")")
                return (val, t)
            return val
        raise ParseError(f"expected a term, found {val or 'end of input'!r}", ln, col)

    def term():
        t = atom()
        while peek()[0] == "*":
            take("*")
            kind, val, ln, col = peek()
            if kind != "ident" or not val.isdigit():
                raise ParseError("composition needs a level, as in '*0'", ln, col)
            take("ident")
            t = (int(val), t, atom())
        return t

    tree = term()
    k, val, ln, col = peek()
    if k != "eof":
        raise ParseError(f"trailing input {val!r}", ln, col)
    return tree if ctx is None else elaborate(tree, ctx)


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    """Shared knobs: the ambient dimension bound, the search budget, corpus
    selection, and whether reports carry timings (breaking byte-stability)."""

    dim_bound: int = 6
    closure_depth: int = 6
    node_cap: int = 200_000
    time_cap: float = 60.0
    suites: tuple[str, ...] | None = None
    timings: bool = False
    jobs: int = 4

    def __post_init__(self) -> None:
        if self.dim_bound < 2:
            raise ValueError("dimension bound must be at least 2")
        if self.node_cap <= 0 or self.time_cap <= 0 or self.jobs <= 0:
            raise ValueError("budgets must be positive")
        if self.closure_depth < 0:
            raise ValueError("closure depth must not be negative")

    def budget(self) -> SearchBudget:
        return SearchBudget(self.closure_depth, self.node_cap, self.time_cap)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        bad = set(raw) - known
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        if "suites" in raw and raw["suites"] is not None:
            raw["suites"] = tuple(raw["suites"])
        return cls(**raw)


def _load_config(args) -> RunConfig:
    path = getattr(args, "config", None) or os.environ.get("FREEGLOB_CONFIG")
    cfg = RunConfig.from_file(path) if path else RunConfig()
    for name in ("closure_depth", "node_cap", "time_cap", "dim_bound", "jobs"):
        v = getattr(args, name, None)
        if v is not None:
            cfg = replace(cfg, **{name: v})
    if getattr(args, "suite", None):
        cfg = replace(cfg, suites=tuple(args.suite))
    if getattr(args, "timings", False):
        cfg = replace(cfg, timings=True)
    return cfg


# ---------------------------------------------------------------------------
# shared helpers


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _fail(msg: str, code: int) -> int:
    _emit({"error": msg})
    return code


def _context_of(args) -> Context:
    if args.table is not None:
        return sum_context(Table.from_text(args.table))
    if args.globset is not None:
        with open(args.globset, encoding="utf-8") as fh:
            return Context(GlobSet.from_json(fh.read()))
    return disk_context(args.disk if args.disk is not None else 2)


def _add_context_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--disk", type=int, metavar="N", help="work over the N-disk (default 2)")
    g.add_argument("--table", metavar="TEXT", help="work over the sum of the table, e.g. '2 2 / 1'")
    g.add_argument("--globset", metavar="FILE", help="work over a globular set loaded from JSON")


def _budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--closure-depth", type=int, dest="closure_depth")
    p.add_argument("--node-cap", type=int, dest="node_cap")
    p.add_argument("--time-cap", type=float, dest="time_cap")


def _report_exit(rep: CheckReport) -> int:
    if any(i.verdict.is_distinct for i in rep.items):
        return EXIT_FAIL
    if rep.any_unknown:
        return EXIT_UNKNOWN
    return EXIT_OK


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check(args) -> int:
    try:
        ctx = _context_of(args)
    except (ShapeError, OSError, ValueError) as e:
        return _fail(str(e), EXIT_INPUT)
    try:
        term = parse_surface(args.term, ctx)
        tt = type_check(term, ctx)
    except ParseError as e:
        return _fail(str(e), EXIT_INPUT)
    except TermTypeError as e:
        _emit({"ok": False, "error": str(e)})
        return EXIT_FAIL
    _emit(
        {
            "ok": True,
            "term": to_text(tt.term),
            "dim": tt.dim,
            "src": to_text(tt.src) if tt.src is not None else None,
            "tgt": to_text(tt.tgt) if tt.tgt is not None else None,
        }
    )
    return EXIT_OK


def _cmd_nf(args) -> int:
    try:
        ctx = _context_of(args)
        term = parse_surface(args.term, ctx)
        type_check(term, ctx)
    except (ParseError, ShapeError, OSError, ValueError) as e:
        return _fail(str(e), EXIT_INPUT)
    tr = normalize(ctx, term)
    _emit({"input": to_text(tr.start), "normal_form": to_text(tr.result), "steps": len(tr.steps)})
    return EXIT_OK


def _cmd_eq(args) -> int:
    cfg = _load_config(args)
    try:
        ctx = _context_of(args)
        t = parse_surface(args.left, ctx)
        u = parse_surface(args.right, ctx)
        type_check(t, ctx)
        type_check(u, ctx)
    except (ParseError, ShapeError, OSError, ValueError) as e:
        return _fail(str(e), EXIT_INPUT)
    v = equal(ctx, t, u, cfg.budget())
    _emit(
        {
            "kind": v.kind,
            "detail": v.detail,
            "trace_steps": len(v.trace.steps) if v.trace else None,
        }
    )
    return {"equal": EXIT_OK, "distinct": EXIT_DISTINCT}.get(v.kind, EXIT_UNKNOWN)


def _cmd_connect(args) -> int:
    cfg = _load_config(args)
    try:
        ctx = _context_of(args)
        u = parse_surface(args.source, ctx)
        v = parse_surface(args.target, ctx)
        budget = ConnectBudget(args.rounds, args.pool_cap, cfg.budget())
        r = connect_arrow(ctx, u, v, budget)
    except (ParseError, ShapeError, NotParallel, TermTypeError, OSError, ValueError) as e:
        return _fail(str(e), EXIT_INPUT)
    if r.is_found:
        _emit({"found": True, "arrow": to_text(r.h.term), "dim": r.h.dim, "nodes": r.nodes})
        return EXIT_OK
    _emit({"found": False, "detail": r.detail, "nodes": r.nodes})
    return EXIT_UNKNOWN


def _cmd_pi(args) -> int:
    try:
        if args.globset.startswith("@"):
            with open(args.globset[1:], encoding="utf-8") as fh:
                gs = GlobSet.from_json(fh.read())
        else:
            gs = globular_sum(Table.from_text(args.globset)).gs
    except (ShapeError, OSError, ValueError) as e:
        return _fail(str(e), EXIT_INPUT)
    if args.level == 0:
        comps = pi0(gs)
        _emit({"level": 0, "components": [list(c) for c in comps], "count": len(comps)})
    else:
        _emit({"level": 1, "free_rank": pi1_free_rank(gs)})
    return EXIT_OK


def _cmd_theta0_hom(args) -> int:
    try:
        s = Table.from_text(args.source)
        t = Table.from_text(args.target)
        mors = hom_theta0(s, t)
    except (ShapeError, ValueError) as e:
        return _fail(str(e), EXIT_INPUT)
    _emit(
        {
            "source": s.text(),
            "target": t.text(),
            "count": len(mors),
            "morphisms": [dict(sorted(m.map.mapping.items())) for m in mors],
        }
    )
    return EXIT_OK


def _term_list(raw, what: str, ctx: Context) -> list[Term]:
    if not isinstance(raw, list):
        raise ValueError(f"{what} must be a list of term strings")
    return [parse_surface(s, ctx) for s in raw]


def _cmd_cyl_verify(args) -> int:
    cfg = _load_config(args)
    try:
        with open(args.file, encoding="utf-8") as fh:
            raw = json.load(fh)
        spec = raw["context"]
        if "disk" in spec:
            ctx = disk_context(int(spec["disk"]))
        else:
            ctx = sum_context(Table.from_text(spec["table"]))
        z = Cylinder(
            ctx,
            parse_surface(raw["from"], ctx),
            parse_surface(raw["to"], ctx),
            tuple(_term_list(raw["flats"], "flats", ctx)),
            tuple(_term_list(raw["sharps"], "sharps", ctx)),
            parse_surface(raw["top"], ctx),
        )
        rep = validate_cylinder(z, cfg.budget())
    except (ParseError, ShapeError, TermTypeError, OSError, KeyError, TypeError, ValueError) as e:
        return _fail(f"{type(e).__name__}: {e}", EXIT_INPUT)
    _emit(rep.as_dict())
    return _report_exit(rep)


def _cmd_cyl_contract(args) -> int:
    cfg = _load_config(args)
    try:
        rep = verify_contraction(args.n, cfg.budget())
        wit = contractibility_witness(args.n)
    except (ShapeError, ValueError) as e:
        return _fail(str(e), EXIT_INPUT)
    out = rep.as_dict()
    out["witness"] = {
        "identity_endpoint": wit.id_endpoint,
        "constant_endpoint": wit.const_endpoint,
    }
    _emit(out)
    if not (wit.id_endpoint and wit.const_endpoint):
        return EXIT_FAIL
    return _report_exit(rep)


# tower JSON: {"stages": [[pair, ...], ...]}; pair {"n", "target", "f", "g"};
# morphism {"src", "dst", "tops", "formal"?}; formal cell
# {"name", "dim", "src"?, "tgt"?}


def _mor_from_json(raw) -> ThetaTildeMor:
    dst = Table.from_text(raw["dst"])
    ctx = sum_context(dst)
    formal = []
    for fc in raw.get("formal", ()):
        cell = FormalCell(
            fc["name"],
            int(fc["dim"]),
            parse_surface(fc["src"], ctx) if fc.get("src") else None,
            parse_surface(fc["tgt"], ctx) if fc.get("tgt") else None,
        )
        formal.append(cell)
        ctx = ctx.extend(cell)
    return ThetaTildeMor(
        Table.from_text(raw["src"]),
        dst,
        tuple(parse_surface(s, ctx) for s in raw["tops"]),
        tuple(formal),
    )


def _mor_to_json(m: ThetaTildeMor) -> dict:
    out = {
        "src": m.src.text(),
        "dst": m.dst.text(),
        "tops": [to_text(t) for t in m.tops],
    }
    if m.formal:
        out["formal"] = [
            {
                "name": fc.name,
                "dim": fc.dim,
                "src": to_text(fc.src) if fc.src is not None else None,
                "tgt": to_text(fc.tgt) if fc.tgt is not None else None,
            }
            for fc in m.formal
        ]
    return out


def _pair_from_json(raw) -> AdmissiblePair:
    return AdmissiblePair(
        int(raw["n"]),
        Table.from_text(raw["target"]),
        _mor_from_json(raw["f"]),
        _mor_from_json(raw["g"]),
    )


def _cmd_tower_build(args) -> int:
    try:
        with open(args.stages, encoding="utf-8") as fh:
            raw = json.load(fh)
        stage_data = raw["stages"]
        ext = ExtPresentation()
        for stage in stage_data:
            names = [p["cell"] for p in stage] if all("cell" in p for p in stage) else None
            ext = extend_tower(ext, [_pair_from_json(p) for p in stage], names)
    except InadmissiblePair as e:
        return _fail(f"inadmissible pair: {e}", EXIT_FAIL)
    except (ParseError, ShapeError, TermTypeError, OSError, KeyError, TypeError, ValueError) as e:
        return _fail(f"{type(e).__name__}: {e}", EXIT_INPUT)
    _emit(
        {
            "stages": [
                [
                    {
                        "cell": fl.name,
                        "n": fl.pair.n,
                        "target": fl.pair.target.text(),
                        "f": _mor_to_json(fl.pair.f),
                        "g": _mor_to_json(fl.pair.g),
                    }
                    for fl in stage
                ]
                for stage in ext.stages
            ]
        }
    )
    return EXIT_OK


def _cmd_tower_eval(args) -> int:
    cfg = _load_config(args)
    try:
        with open(args.tower, encoding="utf-8") as fh:
            raw = json.load(fh)
        stages = []
        for stage in raw["stages"]:
            stages.append(
                tuple(FormalLift(p["cell"], _pair_from_json(p)) for p in stage)
            )
        ext = ExtPresentation(tuple(stages))
    except (ParseError, ShapeError, TermTypeError, OSError, KeyError, TypeError, ValueError) as e:
        return _fail(f"{type(e).__name__}: {e}", EXIT_INPUT)
    try:
        images = evaluate_tower(
            ext, ConnectBudget(args.rounds, args.pool_cap, cfg.budget())
        )
    except EvaluationStuck as e:
        return _fail(str(e), EXIT_UNKNOWN)
    except ValueError as e:
        return _fail(str(e), EXIT_INPUT)
    _emit({name: _mor_to_json(m) for name, m in sorted(images.items())})
    return EXIT_OK


# ---------------------------------------------------------------------------
# the corpus


def _corpus_items(cfg: RunConfig):
    b = cfg.budget()
    items: list[tuple[str, object]] = []
    for n in range(0, 7):
        items.append((f"telescope/n={n}", lambda n=n: _from_report(verify_inverse_telescope(n, b))))
    for n in range(0, 7):
        items.append((f"absorption/n={n}", lambda n=n: _from_report(verify_sharp_chain_absorption(n, b))))
    for n in range(0, 6):
        items.append((f"contraction/n={n}", lambda n=n: _from_report(verify_contraction(n, b))))
    for i in range(1, 4):
        for j in range(0, i):
            items.append(
                (f"precat/i={i},j={j}", lambda i=i, j=j: _from_report(verify_precat_equations(i, j, b)))
            )
    for w in range(1, 7):
        items.append((f"dim1/width={w}", lambda w=w: _dim1_item(w)))
    items.append(("admissibility/corpus", lambda: _admissibility_item(cfg)))
    if cfg.suites is not None:
        wanted = set(cfg.suites)
        items = [it for it in items if it[0].split("/", 1)[0] in wanted]
    return items


def _from_report(rep: CheckReport) -> dict:
    if any(i.verdict.is_distinct for i in rep.items):
        verdict = "distinct"
    elif rep.any_unknown:
        verdict = "unknown"
    else:
        verdict = "equal"
    return {
        "verdict": verdict,
        "detail": "; ".join(
            f"{i.name}: {i.verdict.kind}" for i in rep.items if not i.verdict.is_equal
        ),
        "trace_steps": sum(
            len(i.verdict.trace.steps) for i in rep.items if i.verdict.trace
        ),
    }


def _dim1_item(width: int) -> dict:
    tbl = Table((1,) * width, (0,) * (width - 1))
    gs = globular_sum(tbl).gs
    comps = pi0(gs)
    rank = pi1_free_rank(gs)
    ok = len(comps) == 1 and rank == 0
    return {
        "verdict": "equal" if ok else "distinct",
        "detail": f"pi0={len(comps)} pi1_rank={rank}",
        "trace_steps": 0,
    }


def _admissibility_item(cfg: RunConfig) -> dict:
    budget = ConnectBudget(eq=cfg.budget())
    failures: list[str] = []
    unknowns: list[str] = []

    def lift_pair(name: str, p: AdmissiblePair) -> None:
        ok, reason = is_admissible(p)
        if not ok:
            failures.append(f"{name}: rejected ({reason})")
            return
        try:
            h = lift_in_theta_tilde(p, budget)
        except Exception as e:  # noqa: BLE001 - report, not crash, on any lift failure
            unknowns.append(f"{name}: {e}")
            return
        if not uniqueness_check(p, [h, h], cfg.budget()):
            failures.append(f"{name}: uniqueness failed")

    for n in range(0, 4):
        lift_pair(
            f"boundary legs into the {n + 1}-disk",
            AdmissiblePair(n, disk_table(n + 1), boundary_leg(n + 1, SRC), boundary_leg(n + 1, TGT)),
        )
    for n in range(1, 3):
        leg = boundary_leg(n + 1, SRC)
        lift_pair(f"identity pair on the {n}-disk legs", AdmissiblePair(n, disk_table(n + 1), leg, leg))
    for txt, j, n in (("1 1 / 0", 0, 1), ("2 2 / 0", 0, 2), ("2 2 / 1", 1, 2)):
        tbl = Table.from_text(txt)
        ctx = sum_context(tbl)
        gsum = globular_sum(tbl)
        comp = comp_at(j, Gen(gsum.top_cell(0)), Gen(gsum.top_cell(1)), ctx)
        tt = type_check(comp, ctx)
        f = ThetaTildeMor(disk_table(tt.dim - 1), tbl, (tt.src,))
        g = ThetaTildeMor(disk_table(tt.dim - 1), tbl, (tt.tgt,))
        lift_pair(f"composite boundary pair over [{txt}]", AdmissiblePair(tt.dim - 1, tbl, f, g))

    reject = AdmissiblePair(
        0,
        disk_table(2),
        ThetaTildeMor(disk_table(0), disk_table(2), (Gen("0s0"),)),
        ThetaTildeMor(disk_table(0), disk_table(2), (Gen("0t0"),)),
    )
    ok, reason = is_admissible(reject)
    if ok or reason != "dimension 2 > 1":
        failures.append(f"object pair into the 2-disk: expected rejection, got ({ok}, {reason!r})")

    if failures:
        return {"verdict": "distinct", "detail": "; ".join(failures), "trace_steps": 0}
    if unknowns:
        return {"verdict": "unknown", "detail": "; ".join(unknowns), "trace_steps": 0}
    return {"verdict": "equal", "detail": "", "trace_steps": 0}


def _cmd_corpus(args) -> int:
    try:
        cfg = _load_config(args)
        items = _corpus_items(cfg)
    except (OSError, ValueError) as e:
        return _fail(str(e), EXIT_INPUT)

    import time

    def run(item):
        name, fn = item
        t0 = time.perf_counter()
        try:
            out = fn()
        except Exception as e:  # noqa: BLE001 - corpus items must not kill the run
            out = {"verdict": "distinct", "detail": f"{type(e).__name__}: {e}", "trace_steps": 0}
        out["seconds"] = time.perf_counter() - t0
        return name, out

    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        results = dict(pool.map(run, items))

    report = []
    for name, _ in items:
        row = {"id": name, **results[name]}
        if not cfg.timings:
            del row["seconds"]
        else:
            row["seconds"] = round(row["seconds"], 3)
        report.append(row)
    verdicts = [r["verdict"] for r in report]
    _emit(
        {
            "config": {
                "dim_bound": cfg.dim_bound,
                "closure_depth": cfg.closure_depth,
                "node_cap": cfg.node_cap,
                "time_cap": cfg.time_cap,
            },
            "items": report,
            "all_expected": all(v == "equal" for v in verdicts),
        }
    )
    if "distinct" in verdicts:
        return EXIT_FAIL
    if "unknown" in verdicts:
        return EXIT_UNKNOWN
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="freeglob",
        description="Terms over pasting schemes: type checking, normal forms, "
        "equality certificates, connecting arrows, and verification suites.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="type-check a term")
    p.add_argument("term")
    _add_context_flags(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("nf", help="normal form and rewrite step count")
    p.add_argument("term")
    _add_context_flags(p)
    p.set_defaults(fn=_cmd_nf)

    p = sub.add_parser("eq", help="decide equality of two terms")
    p.add_argument("left")
    p.add_argument("right")
    _add_context_flags(p)
    _budget_flags(p)
    p.add_argument("--config")
    p.set_defaults(fn=_cmd_eq)

    p = sub.add_parser("connect", help="search for an arrow between two parallel terms")
    p.add_argument("source")
    p.add_argument("target")
    _add_context_flags(p)
    _budget_flags(p)
    p.add_argument("--config")
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--pool-cap", type=int, default=4096, dest="pool_cap")
    p.set_defaults(fn=_cmd_connect)

    p = sub.add_parser("pi", help="path components or fundamental rank")
    p.add_argument("--level", type=int, choices=(0, 1), required=True)
    p.add_argument("globset", help="a table like '1 1 / 0', or @file.json")
    p.set_defaults(fn=_cmd_pi)

    p = sub.add_parser("theta0", help="the base category of tables")
    t0sub = p.add_subparsers(dest="theta0_cmd", required=True)
    q = t0sub.add_parser("hom", help="enumerate morphisms between two tables")
    q.add_argument("source")
    q.add_argument("target")
    q.set_defaults(fn=_cmd_theta0_hom)

    p = sub.add_parser("cyl", help="cylinders")
    csub = p.add_subparsers(dest="cyl_cmd", required=True)
    q = csub.add_parser("verify", help="validate a cylinder from a JSON file")
    q.add_argument("file")
    _budget_flags(q)
    q.add_argument("--config")
    q.set_defaults(fn=_cmd_cyl_verify)
    q = csub.add_parser("contract", help="verify the disk contraction cylinder")
    q.add_argument("n", type=int)
    _budget_flags(q)
    q.add_argument("--config")
    q.set_defaults(fn=_cmd_cyl_contract)

    p = sub.add_parser("tower", help="formal lifting towers")
    tsub = p.add_subparsers(dest="tower_cmd", required=True)
    q = tsub.add_parser("build", help="build a presentation from a stages file")
    q.add_argument("--stages", required=True)
    q.set_defaults(fn=_cmd_tower_build)
    q = tsub.add_parser("eval", help="interpret every formal cell of a tower")
    q.add_argument("tower")
    _budget_flags(q)
    q.add_argument("--config")
    q.add_argument("--rounds", type=int, default=3)
    q.add_argument("--pool-cap", type=int, default=4096, dest="pool_cap")
    q.set_defaults(fn=_cmd_tower_eval)

    p = sub.add_parser("corpus", help="run the verification corpus")
    _budget_flags(p)
    p.add_argument("--config")
    p.add_argument("--dim-bound", type=int, dest="dim_bound")
    p.add_argument("--jobs", type=int)
    p.add_argument("--suite", action="append", help="restrict to a suite (repeatable)")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(fn=_cmd_corpus)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
