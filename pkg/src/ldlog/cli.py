"""Command-line front end.

    ldlog run FILE [--lib FILE]... [--max-depth N] [--all] [--json]
                   [--check] [--oracle]

Exit codes: 0 all queries solved, 1 some query unprovable or floundered,
2 lexing/parsing/elaboration errors, 3 a solver-produced proof failed
re-checking under --check.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from .elaborator import ElaborationError, elaborate, elaborate_library
from .errors import LdlogError, SourceError
from .oracle import UnsafeRule, oracle_answers
from .parser import parse_program
from .proof import CheckError, check_proof, render_proof, serialize_proof
from .solver import FlounderedBuiltin, SolverConfig, TypeMismatch, solve
from .terms import Query, apply_subst_atom, atom_text, term_text


@dataclass
class ReportEntry:
    """One query's outcome, ready for formatting."""

    name: str
    goal_text: str
    status: str  # "solved" | "unprovable" | "floundered" | "error"
    solutions: list = field(default_factory=list)  # (instance, bindings, render or None)
    depth_note: str = ""
    detail: str = ""


def format_report(entries: List[ReportEntry]) -> str:
    """Human-readable report, one line per query result."""
    if not entries:
        return "no queries.\n"
    lines = []
    for e in entries:
        if e.status == "solved":
            for instance, bindings, render in e.solutions:
                parts = [f"{e.name}: {instance}"]
                if bindings:
                    parts.append(f"[{bindings}]")
                if render is not None:
                    parts.append(f"proof: {render}")
                lines.append("  ".join(parts))
        elif e.status == "unprovable":
            lines.append(f"{e.name}: {e.goal_text}  unprovable ({e.depth_note})")
        elif e.status == "floundered":
            lines.append(f"{e.name}: {e.goal_text}  floundered ({e.detail})")
        else:
            lines.append(f"{e.name}: {e.goal_text}  error: {e.detail}")
    return "\n".join(lines) + "\n"


def _bindings_text(q: Query, bindings) -> str:
    ordered = sorted(bindings.items(), key=lambda kv: kv[0].id)
    return ", ".join(f"{m.source_name} := {term_text(v)}" for m, v in ordered)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ldlog", description="Certifying rule engine: answer queries with checkable proofs.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="evaluate every query in a program")
    run.add_argument("file", help="program file")
    run.add_argument("--lib", action="append", default=[], metavar="FILE", help="library file for use statements (repeatable)")
    run.add_argument("--max-depth", type=int, default=6, metavar="N", help="proof height budget (default 6)")
    run.add_argument("--all", action="store_true", help="report every solution instead of the first")
    run.add_argument("--json", action="store_true", help="emit one JSON document per solution")
    run.add_argument("--check", action="store_true", help="re-verify each emitted proof with the certificate checker")
    run.add_argument("--oracle", action="store_true", help="answer by forward-chaining saturation (no proofs)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return run_command(args)


def _parse_file(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"ldlog: {exc}", file=sys.stderr)
        return None
    try:
        return parse_program(text)
    except SourceError as exc:
        print(f"{path}:{exc}", file=sys.stderr)
        return None


def run_command(args) -> int:
    if args.oracle and (args.json or args.check):
        print("ldlog: --oracle answers carry no proofs; it cannot be combined with --json or --check", file=sys.stderr)
        return 2

    library = None
    if args.lib:
        lib_statements = []
        for lib_path in args.lib:
            parsed = _parse_file(lib_path)
            if parsed is None:
                return 2
            lib_statements.extend(parsed)
        try:
            library = elaborate_library(lib_statements)
        except ElaborationError as exc:
            print(f"ldlog: {exc}", file=sys.stderr)
            return 2

    statements = _parse_file(args.file)
    if statements is None:
        return 2
    try:
        kb, queries = elaborate(statements, library)
    except ElaborationError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 2

    try:
        cfg = SolverConfig(max_depth=args.max_depth, solution_limit=None if args.all else 1)
    except ValueError as exc:
        print(f"ldlog: {exc}", file=sys.stderr)
        return 2

    if args.oracle:
        return _run_oracle(kb, queries, args)
    return _run_solver(kb, queries, cfg, args)


def _run_solver(kb, queries: List[Query], cfg: SolverConfig, args) -> int:
    entries: List[ReportEntry] = []
    any_failed = False
    check_failed = False
    checked = 0
    json_lines: List[str] = []
    for q in queries:
        goal_text = atom_text(q.goal)
        try:
            solutions = solve(kb, q, cfg)
        except FlounderedBuiltin as exc:
            entries.append(ReportEntry(q.name, goal_text, "floundered", detail=atom_text(exc.atom)))
            any_failed = True
            continue
        except (TypeMismatch, LdlogError) as exc:
            entries.append(ReportEntry(q.name, goal_text, "error", detail=str(exc)))
            any_failed = True
            continue
        if not solutions:
            entries.append(ReportEntry(q.name, goal_text, "unprovable", depth_note=f"depth {cfg.max_depth}"))
            any_failed = True
            continue
        if args.check:
            for sol in solutions:
                try:
                    check_proof(kb, sol.proof)
                    checked += 1
                except CheckError as exc:
                    print(f"check failed: {q.name}: {exc}", file=sys.stderr)
                    check_failed = True
        if args.json:
            json_lines.extend(serialize_proof(sol.proof, q) for sol in solutions)
        entry = ReportEntry(q.name, goal_text, "solved")
        for sol in solutions:
            instance = atom_text(apply_subst_atom(q.goal, sol.bindings))
            entry.solutions.append((instance, _bindings_text(q, sol.bindings), render_proof(sol.proof)))
        entries.append(entry)

    if args.json:
        for line in json_lines:
            print(line)
    else:
        print(format_report(entries), end="")
    if args.check and not check_failed:
        print(f"check: {checked} proofs verified.", file=sys.stderr)
    if check_failed:
        return 3
    return 1 if any_failed else 0


def _run_oracle(kb, queries: List[Query], args) -> int:
    entries: List[ReportEntry] = []
    any_failed = False
    for q in queries:
        goal_text = atom_text(q.goal)
        try:
            answers = oracle_answers(kb, q.goal)
        except (UnsafeRule, LdlogError) as exc:
            print(f"ldlog: {exc}", file=sys.stderr)
            return 2
        if not answers:
            entries.append(ReportEntry(q.name, goal_text, "unprovable", depth_note="oracle"))
            any_failed = True
            continue
        if not args.all:
            answers = answers[:1]
        entry = ReportEntry(q.name, goal_text, "solved")
        for bindings in answers:
            instance = atom_text(apply_subst_atom(q.goal, bindings))
            entry.solutions.append((instance, _bindings_text(q, bindings), None))
        entries.append(entry)
    print(format_report(entries), end="")
    return 1 if any_failed else 0


if __name__ == "__main__":
    sys.exit(main())
