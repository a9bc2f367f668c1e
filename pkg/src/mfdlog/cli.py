"""Command-line frontend: solve, query, check, transform and the corpus runner.

Exit codes: 0 models found or query true, 1 no models or query false,
2 usage or input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

from .corpus import EXAMPLES
from .grounder import DEFAULT_MAX_RULES, GroundingError, GroundProgram, attach_database, ground
from .kernel import head_delete, is_founded, is_model, reduct, rewrite_denials
from .oracle import oracle_enumerate
from .query import BoundQuery, IncompleteError, QueryVerdict, check_goal, decide, load_database
from .search import Budget, BudgetExhausted
from .solver import (ModelSet, NotStratifiedError, Semantics, default_budget, enumerate_models,
                     is_minimal_founded, is_minimal_model, is_stable)
from .syntax import ProgramError, format_program, parse_literal, parse_program

EXIT_OK, EXIT_NONE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

_ATOM = re.compile(r"\s*([^,()\s]+(?:\([^)]*\))?)\s*(?:,|$)")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    program_path: str
    semantics: Semantics = Semantics.MF
    mode: str = "enumerate"  # enumerate | brave | cautious
    goal: Optional[str] = None
    db_path: Optional[str] = None
    budget: Optional[int] = None
    max_ground: int = DEFAULT_MAX_RULES
    oracle: bool = False
    format: str = "text"
    edb: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.mode not in ("enumerate", "brave", "cautious"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.mode == "enumerate" and self.goal is not None:
            raise UsageError("enumeration takes no goal")
        if self.mode != "enumerate" and self.goal is None:
            raise UsageError(f"{self.mode} query needs --goal")
        if self.format not in ("text", "json"):
            raise UsageError(f"unknown format {self.format!r}")


@dataclass
class Outcome:
    code: int
    text: str
    warning: Optional[str] = None


def split_atoms(text: str) -> list[str]:
    """Split "a,p(x,y),b" into atoms, keeping argument lists together."""
    text = text.strip()
    if not text:
        return []
    out, pos = [], 0
    while pos < len(text):
        m = _ATOM.match(text, pos)
        if m is None or m.end() == pos:
            raise UsageError(f"cannot read atom list {text!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def render_model(atoms: Sequence[str]) -> str:
    return "{" + ", ".join(atoms) + "}"


def _load(cfg: RunConfig):
    program = parse_program(Path(cfg.program_path).read_text(), edb=cfg.edb)
    db = load_database(cfg.db_path) if cfg.db_path else None
    return program, db


def _ground(program, db, max_rules: int) -> GroundProgram:
    if db is None:
        return ground(program, max_rules)
    return ground(attach_database(program, db), max_rules, closed_edb=True)


def _models(cfg: RunConfig, g: GroundProgram) -> ModelSet:
    if cfg.oracle:
        return oracle_enumerate(g, cfg.semantics)
    return enumerate_models(g, cfg.semantics, cfg.budget)


def _payload(models: ModelSet, g: GroundProgram, verdict: Optional[QueryVerdict] = None) -> dict:
    query = None
    if verdict is not None:
        query = {"mode": verdict.mode, "goal": str(verdict.goal), "answer": verdict.answer,
                 "witness": verdict.witness_atoms()}
    return {"semantics": str(models.semantics), "complete": models.complete,
            "models": [g.render(m) for m in models], "query": query}


def _text(payload: dict) -> str:
    q = payload["query"]
    if q is not None:
        lines = ["true" if q["answer"] else "false"]
        if q["witness"] is not None:
            lines.append("witness: " + render_model(q["witness"]))
        return "\n".join(lines)
    if not payload["models"]:
        return "no models"
    return "\n".join(render_model(m) for m in payload["models"])


def _emit(cfg: RunConfig, payload: dict) -> str:
    if cfg.format == "json":
        return json.dumps(payload, sort_keys=True)
    return _text(payload)


def run(cfg: RunConfig) -> Outcome:
    program, db = _load(cfg)
    g = _ground(program, db, cfg.max_ground)
    if cfg.mode == "enumerate":
        models = _models(cfg, g)
        text = _emit(cfg, _payload(models, g))
        if models.budget_exhausted:
            return Outcome(EXIT_BUDGET, text, "budget exhausted: model list is partial")
        return Outcome(EXIT_OK if models.models else EXIT_NONE, text)

    q = BoundQuery(program, parse_literal(cfg.goal))
    check_goal(q, db)
    models = _models(cfg, g)
    verdict = decide(q.goal, g, models, cfg.mode)
    return Outcome(EXIT_OK if verdict.answer else EXIT_NONE, _emit(cfg, _payload(models, g, verdict)))


# -- check and transform ----------------------------------------------------

def _member(kind: Semantics, m: frozenset[int], g: GroundProgram, budget: Budget) -> bool:
    if kind is Semantics.PM:
        return m in enumerate_models(g, kind, budget.limit).as_set()
    checks: dict[Semantics, Callable[..., bool]] = {
        Semantics.MODELS: lambda m, g, b: is_model(m, g),
        Semantics.F: lambda m, g, b: is_founded(m, g),
        Semantics.MM: is_minimal_model,
        Semantics.MF: is_minimal_founded,
        Semantics.SM: is_stable,
    }
    return checks[kind](m, g, budget)


def check(cfg: RunConfig, model: str) -> Outcome:
    program, db = _load(cfg)
    g = _ground(program, db, cfg.max_ground)
    m = g.interpretation(split_atoms(model))
    budget = Budget(default_budget() if cfg.budget is None else cfg.budget)
    ok = _member(cfg.semantics, m, g, budget)
    return Outcome(EXIT_OK if ok else EXIT_NONE, "true" if ok else "false")


def transform(cfg: RunConfig, op: str, atoms: Optional[str]) -> Outcome:
    program, db = _load(cfg)
    if op == "rewrite-denials":
        return Outcome(EXIT_OK, format_program(rewrite_denials(program)).rstrip("\n"))
    g = _ground(program, db, cfg.max_ground)
    i = g.interpretation(split_atoms(atoms or ""))
    rules = reduct(g, i).rules if op == "reduct" else head_delete(g, i).rules
    return Outcome(EXIT_OK, str(g.with_rules(rules)))


def corpus(fmt: str) -> Outcome:
    results = []
    for name, (text, expected) in EXAMPLES.items():
        g = ground(parse_program(text))
        for kind, sets in expected.items():
            got = {frozenset(g.render(m)) for m in enumerate_models(g, kind)}
            ok = got == {frozenset(s) for s in sets}
            results.append({"program": name, "semantics": kind, "ok": ok,
                            "models": sorted(sorted(m) for m in got)})
    all_ok = all(r["ok"] for r in results)
    if fmt == "json":
        text = json.dumps(results, sort_keys=True)
    else:
        text = "\n".join(f"{'PASS' if r['ok'] else 'FAIL'} {r['program']} {r['semantics']}: "
                         + (", ".join(render_model(m) for m in r["models"]) or "no models")
                         for r in results)
    return Outcome(EXIT_OK if all_ok else EXIT_NONE, text)


# -- argument parsing -------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("program", help="program file")
    p.add_argument("--semantics", choices=[s.value for s in Semantics], default="mf")
    p.add_argument("--db", dest="db_path", help="database file of ground facts")
    p.add_argument("--edb", help="comma-separated EDB predicate names (default: predicates with no defining rule)")
    p.add_argument("--budget", type=int, help="search node budget (default: MFDLOG_BUDGET or built-in)")
    p.add_argument("--max-ground", type=int, default=DEFAULT_MAX_RULES, help="cap on ground rule instances")
    p.add_argument("--oracle", action="store_true", help="enumerate with the brute-force oracle")
    p.add_argument("--format", choices=["text", "json"], default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfdlog", description="Disjunctive datalog model enumeration and queries.")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("solve", help="enumerate the models of a semantics"))

    q = sub.add_parser("query", help="brave or cautious query")
    _common(q)
    mode = q.add_mutually_exclusive_group(required=True)
    mode.add_argument("--brave", dest="mode", action="store_const", const="brave")
    mode.add_argument("--cautious", dest="mode", action="store_const", const="cautious")
    q.add_argument("--goal", required=True, help="ground literal, e.g. 'thirsty' or 'not g'")

    c = sub.add_parser("check", help="test whether an interpretation belongs to a semantics")
    _common(c)
    c.add_argument("--model", required=True, help="true atoms, e.g. 'a,b'")

    t = sub.add_parser("transform", help="print a transformed program")
    _common(t)
    op = t.add_mutually_exclusive_group(required=True)
    op.add_argument("--reduct", metavar="I", help="reduct with respect to the atoms I")
    op.add_argument("--head-delete", metavar="M", help="drop head atoms outside M")
    op.add_argument("--rewrite-denials", action="store_true", help="replace denials by self-defeating rules")

    r = sub.add_parser("corpus", help="run the built-in example corpus")
    r.add_argument("--format", choices=["text", "json"], default="text")
    return parser


def _config(args: argparse.Namespace, mode: str = "enumerate", goal: Optional[str] = None) -> RunConfig:
    edb = tuple(x.strip() for x in args.edb.split(",") if x.strip()) if args.edb else None
    return RunConfig(args.program, Semantics(args.semantics), mode, goal, args.db_path, args.budget,
                     args.max_ground, args.oracle, args.format, edb)


def dispatch(args: argparse.Namespace) -> Outcome:
    if args.command == "corpus":
        return corpus(args.format)
    if args.command == "query":
        return run(_config(args, args.mode, args.goal))
    cfg = _config(args)
    if args.command == "solve":
        return run(cfg)
    if args.command == "check":
        return check(cfg, args.model)
    if args.reduct is not None:
        return transform(cfg, "reduct", args.reduct)
    if args.head_delete is not None:
        return transform(cfg, "head-delete", args.head_delete)
    return transform(cfg, "rewrite-denials", None)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        outcome = dispatch(args)
    except (IncompleteError, BudgetExhausted) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ProgramError, GroundingError, NotStratifiedError, OSError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    print(outcome.text)
    if outcome.warning:
        print(f"warning: {outcome.warning}", file=sys.stderr)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
