"""Command-line frontend: ``rauzy-ends <subcommand> ...``.

Every flag has an environment override (``RAUZY_EPS``, ``RAUZY_SAMPLES``,
``RAUZY_NODE_BUDGET``, ``RAUZY_CACHE_DIR``, ``RAUZY_JOBS``, ``RAUZY_FORMAT``);
a flag given on the command line wins over the environment.

Exit codes: 0 success, 1 usage error, 2 invalid permutation, 3 reducible
input, 4 budget exceeded, 5 a produced certificate failed replay.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import boundary, classes, dynamics, genperm, suspension, surface
from .errors import CorruptCache, RauzyError, Reducible, VerificationFailure
from .genperm import Move, format_perm, parse
from .suspension import WitnessConstraints, fmt_q, parse_datum

ENV = {
    "eps": "RAUZY_EPS",
    "samples": "RAUZY_SAMPLES",
    "node_budget": "RAUZY_NODE_BUDGET",
    "cache_dir": "RAUZY_CACHE_DIR",
    "jobs": "RAUZY_JOBS",
    "format": "RAUZY_FORMAT",
}


@dataclass(frozen=True)
class Settings:
    eps: Fraction = Fraction(1, 10)
    samples: int = 17
    node_budget: int = classes.DEFAULT_NODE_BUDGET
    cache_dir: str = "./rauzy-cache"
    jobs: int = 1
    format: str = "text"

    @classmethod
    def from_env(cls, env=None) -> "Settings":
        env = os.environ if env is None else env
        base = cls()
        return cls(
            eps=_rational(env.get(ENV["eps"], fmt_q(base.eps))),
            samples=int(env.get(ENV["samples"], base.samples)),
            node_budget=int(env.get(ENV["node_budget"], base.node_budget)),
            cache_dir=env.get(ENV["cache_dir"], base.cache_dir),
            jobs=int(env.get(ENV["jobs"], base.jobs)),
            format=env.get(ENV["format"], base.format),
        )


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational: {text!r}") from exc


def _positive_rational(text: str) -> Fraction:
    q = _rational(text)
    if q <= 0:
        raise UsageError("eps must be positive")
    return q


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's 2, which means "invalid permutation" here
        raise UsageError(message)


def _perm(text: str):
    return parse(text)


def _stratum_arg(text: str):
    try:
        return surface.parse_stratum(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands: each returns (json payload, text lines)


def cmd_reduce(a, s):
    q, f = genperm.reduce(_perm(a.perm))
    return {"reduced": format_perm(q), "relabel": {str(k): v for k, v in sorted(f.items())}}, [format_perm(q)]


def cmd_regular(a, s):
    reg = sorted(genperm.regular_symbols(_perm(a.perm)))
    return {"regular": reg}, [" ".join(map(str, reg))]


def cmd_irreducible(a, s):
    ok = suspension.is_irreducible(_perm(a.perm))
    return {"irreducible": ok}, [str(ok).lower()]


def _require_irreducible(p):
    if not suspension.is_irreducible(p):
        raise Reducible(f"{format_perm(p)} is reducible")


def cmd_witness(a, s):
    p = _perm(a.perm)
    _require_irreducible(p)
    caps = []
    for item in a.cap or []:
        sym, _, bound = item.partition(":")
        try:
            caps.append((int(sym), _rational(bound)))
        except ValueError as exc:
            raise UsageError(f"bad --cap {item!r}, expected SYMBOL:BOUND") from exc
    c = WitnessConstraints(zero_im_sum=a.zero_im_sum, re_order=a.order, caps=tuple(caps))
    z = suspension.witness_suspension(p, c, embed=not a.no_embed, seed=a.seed)
    A = suspension.signed_area(p, z)
    return {"zeta": z.as_json(), "area": fmt_q(abs(A)), "embedded": suspension.is_embedded(p, z)}, [str(z)]


def cmd_stratum(a, s):
    sig = surface.stratum(_perm(a.perm))
    return {"stratum": str(sig), "genus": sig.genus}, [str(sig)]


def cmd_move(a, s):
    q = genperm.apply_move(_perm(a.perm), Move(a.move))
    return {"move": a.move, "result": format_perm(q)}, [format_perm(q)]


def cmd_induct(a, s):
    p = _perm(a.perm)
    z = parse_datum(a.zeta)
    bad = suspension.check_suspension(p, z)
    if bad:
        raise UsageError(f"not a suspension datum: {bad[0]}")
    q, z2, mv, f = dynamics.induct(p, z)
    payload = {
        "move": mv.value,
        "result": format_perm(q),
        "zeta": z2.as_json(),
        "relabel": {str(k): v for k, v in sorted(f.items())},
    }
    return payload, [f"{mv.value} {format_perm(q)}", str(z2)]


def _class_lines(c) -> list[str]:
    head = f"{len(c)} nodes, {len(c.edges)} edges, stratum {c.stratum}"
    return [head] + [format_perm(q) for q in c.nodes]


def cmd_class(a, s):
    p = genperm.reduce(_perm(a.perm))[0]
    _require_irreducible(p)
    key = classes.cache_key(classes.ClassGraph((p,), (), a.extended))
    c = None
    if not a.no_cache and (Path(s.cache_dir) / f"{key}.class").exists():
        try:
            c = classes.load(key, s.cache_dir)
        except CorruptCache as exc:
            print(f"warning: {exc}; recomputing", file=sys.stderr)
    if c is None:
        c = classes.rauzy_class(p, a.extended, s.node_budget, s.jobs)
        c = replace(c, stratum=surface.stratum(c.representative))
        if not a.no_cache:
            classes.persist(c, s.cache_dir)
    payload = {**c.summary(), "nodes": [format_perm(q) for q in c.nodes],
               "edges": [[format_perm(x), mv.value, format_perm(y)] for x, mv, y in c.edges]}
    return payload, _class_lines(c)


def cmd_census(a, s):
    res = classes.census(a.d, jobs=s.jobs, strata=a.stratum or None,
                         all_nodes=not a.representatives_only, node_budget=s.node_budget)
    payload = res.as_json()
    lines = [f"d={res.d} candidates={res.candidates} irreducible={res.irreducible} "
             f"extended_classes={len(res.classes)}"]
    for label, info in payload["strata"].items():
        lines.append(f"{label}: {info['classes']} class(es), sizes {info['sizes']}")
    if res.nonconstant:
        lines.append("NONCONSTANT stratum: " + "; ".join(res.nonconstant))
    return payload, lines


def cmd_connect(a, s):
    p = genperm.reduce(_perm(a.perm))[0]
    if a.kind == "s":
        w = boundary.s_connect(p, s.eps)
    else:
        if a.move not in ("R0", "R1"):
            raise UsageError("connect rauzy needs a move R0 or R1")
        w = boundary.rauzy_connect(p, a.move, s.eps)
    j = w.as_json()
    lines = [
        f"{w.mechanism} {w.move.value}: {format_perm(w.source)} -> {format_perm(w.target)}",
        f"source {w.source_zeta} short {w.source_symbol}",
        f"target {w.target_zeta} short {w.target_symbol}",
    ]
    if w.note:
        lines.append(f"note: {w.note}")
    return j, lines


def cmd_dpath(a, s):
    p = _perm(a.perm)
    w = boundary.d_path(p, parse_datum(a.zeta1), parse_datum(a.zeta2), s.eps, s.samples)
    boundary.verify_path(w)
    lines = [f"{len(w.legs)} leg(s)"]
    for leg in w.legs:
        lines.append(f"{leg.case} shift {list(leg.shift)} N={leg.N} samples={len(leg.samples)}")
    lines.append(f"note: {w.note}")
    return w.as_json(), lines


def cmd_report(a, s):
    if (a.perm is None) == (a.d is None):
        raise UsageError("report needs exactly one of PERM or --d N")
    if a.perm is not None:
        p = genperm.reduce(_perm(a.perm))[0]
        _require_irreducible(p)
        c = classes.rauzy_class(p, True, s.node_budget, s.jobs)
        cs = [replace(c, stratum=surface.stratum(c.representative))]
    else:
        cs = list(classes.census(a.d, jobs=s.jobs, all_nodes=False, node_budget=s.node_budget).classes)
    reports = [boundary.connectivity_report(c, s.eps, s.samples, s.jobs).as_json() for c in cs]
    lines = []
    for r in reports:
        lines.append(
            f"{r['stratum']} [{r['representative']}] nodes={len(r['nodes'])} "
            f"verified_edges={r['verified_edges']} unverified_edges={r['unverified_edges']} "
            f"connected={str(r['connected']).lower()} witness_connected={str(r['witness_connected']).lower()} "
            f"replay_failures={r['replay_failures']}"
        )
        for e in r["edges"]:
            if e["status"] != "verified":
                lines.append(f"  unverified {e['source']} {e['move']}: {e['error']}")
    payload = {"eps": fmt_q(s.eps), "samples": s.samples, "classes": reports}
    failures = sum(r["replay_failures"] for r in reports)
    return payload, lines, failures


COMMANDS: dict[str, Callable] = {
    "reduce": cmd_reduce,
    "regular": cmd_regular,
    "irreducible": cmd_irreducible,
    "witness": cmd_witness,
    "stratum": cmd_stratum,
    "move": cmd_move,
    "induct": cmd_induct,
    "class": cmd_class,
    "census": cmd_census,
    "connect": cmd_connect,
    "dpath": cmd_dpath,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=None)
    common.add_argument("--eps", type=_positive_rational, default=None, help="p/q, default 1/10")
    common.add_argument("--samples", type=int, default=None, help="path samples, default 17")
    common.add_argument("--node-budget", type=int, default=None)
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--jobs", type=int, default=None)

    parser = _Parser(prog="rauzy-ends", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    for name, help_ in [
        ("reduce", "renumber to reduced form"),
        ("regular", "list regular symbols"),
        ("irreducible", "print true/false"),
        ("stratum", "stratum of the suspensions"),
    ]:
        add(name, help_).add_argument("perm")

    w = add("witness", "an exact suspension datum")
    w.add_argument("perm")
    w.add_argument("--zero-im-sum", action="store_true")
    w.add_argument("--order", choices=["<", ">"], default=None)
    w.add_argument("--cap", action="append", metavar="SYMBOL:BOUND")
    w.add_argument("--no-embed", action="store_true")
    w.add_argument("--seed", type=int, default=0)

    m = add("move", "apply R0, R1 or S")
    m.add_argument("perm")
    m.add_argument("move", choices=["R0", "R1", "S"])

    i = add("induct", "one induction step on PERM with datum ZETA")
    i.add_argument("perm")
    i.add_argument("zeta", help='e.g. "(2, 2) (1, -1) (1, -2) (1, 4)"')

    c = add("class", "Rauzy class (extended with --extended)")
    c.add_argument("perm")
    c.add_argument("--extended", action="store_true")
    c.add_argument("--no-cache", action="store_true")

    ce = add("census", "all extended classes with d symbols")
    ce.add_argument("--d", type=int, required=True)
    ce.add_argument("--stratum", type=_stratum_arg, action="append")
    ce.add_argument("--representatives-only", action="store_true")

    co = add("connect", "connection witness along a class edge")
    co.add_argument("kind", choices=["rauzy", "s"])
    co.add_argument("perm")
    co.add_argument("move", nargs="?")

    dp = add("dpath", "sampled path between two points of D(p, eps)")
    dp.add_argument("perm")
    dp.add_argument("zeta1")
    dp.add_argument("zeta2")

    r = add("report", "connectivity report for extended classes")
    r.add_argument("perm", nargs="?")
    r.add_argument("--d", type=int)
    return parser


def _settings(ns) -> Settings:
    base = Settings.from_env()
    s = Settings(
        eps=ns.eps if ns.eps is not None else base.eps,
        samples=ns.samples if ns.samples is not None else base.samples,
        node_budget=ns.node_budget if ns.node_budget is not None else base.node_budget,
        cache_dir=ns.cache_dir if ns.cache_dir is not None else base.cache_dir,
        jobs=ns.jobs if ns.jobs is not None else base.jobs,
        format=ns.format if ns.format is not None else base.format,
    )
    if s.eps <= 0 or s.samples < 3 or s.jobs < 1 or s.node_budget < 1 or s.format not in ("text", "json"):
        raise UsageError(f"invalid settings: {s}")
    return s


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        ns = build_parser().parse_args(argv)
        if ns.command is None:
            raise UsageError("missing subcommand")
        s = _settings(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 1
    except ValueError as exc:  # malformed environment override
        print(f"usage error: {exc}", file=err)
        return 1
    try:
        res = COMMANDS[ns.command](ns, s)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 1
    except RauzyError as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return exc.exit_code
    except ValueError as exc:
        print(f"usage error: {exc}", file=err)
        return 1
    payload, lines = res[0], res[1]
    failures = res[2] if len(res) > 2 else 0
    if s.format == "json":
        print(json.dumps({"command": ns.command, "result": payload}, sort_keys=True), file=out)
    else:
        for ln in lines:
            print(ln, file=out)
    if failures:
        print(f"{VerificationFailure.__name__}: {failures} certificate(s) failed replay", file=err)
        return VerificationFailure.exit_code
    return 0


def main() -> None:
    sys.exit(run())
