"""Shared helpers and random generators for the test suite.

Generators take an explicit random.Random so every suite is seeded and
reproducible. The program generator only emits range-restricted,
comparison-free rules, which both evaluation strategies must agree on.
"""

from __future__ import annotations

import itertools
import random
from typing import List, Optional, Tuple

from ldlog.elaborator import elaborate, elaborate_library
from ldlog.parser import (
    AppAst,
    Application,
    CmpAst,
    DefStmt,
    FactStmt,
    IdentAst,
    IntAst,
    ParenTerm,
    ProjAst,
    QueryStmt,
    RuleStmt,
    StrAst,
    StructStmt,
    UseStmt,
    parse_program,
)
from ldlog.terms import App, IntLit, Meta, Pred, StrLit, Var, apply_subst, free_vars


def compile_text(text: str, lib_text: Optional[str] = None):
    """Parse and elaborate a program, optionally against a library."""
    library = elaborate_library(parse_program(lib_text)) if lib_text else None
    return elaborate(parse_program(text), library)


# ---------------------------------------------------------------------------
# Random terms (for unification properties)
# ---------------------------------------------------------------------------

TERM_VARS = (Var("x"), Var("y"), Var("z"))
TERM_CONSTS = (StrLit("a"), StrLit("b"), StrLit("c"))
TERM_CTORS = (("f", 1), ("g", 2), ("h", 0))
UNIVERSE = TERM_CONSTS


def ground_unifiers(t1, t2):
    """All assignments over the constant universe making t1 equal t2."""
    vars_ = sorted(free_vars(t1) | free_vars(t2), key=str)
    found = []
    for values in itertools.product(UNIVERSE, repeat=len(vars_)):
        sigma = dict(zip(vars_, values))
        if apply_subst(t1, sigma) == apply_subst(t2, sigma):
            found.append(sigma)
    return found


def random_term(rng: random.Random, depth: int = 3):
    """Random term over three variables, three constants, three constructors."""
    roll = rng.random()
    if depth <= 0 or roll < 0.30:
        if rng.random() < 0.5:
            return rng.choice(TERM_VARS)
        return rng.choice(TERM_CONSTS)
    if roll < 0.40:
        return IntLit(rng.randint(0, 2))
    name, arity = rng.choice(TERM_CTORS)
    return App(name, tuple(random_term(rng, depth - 1) for _ in range(arity)))


def random_ground_term(rng: random.Random, depth: int = 2):
    t = random_term(rng, depth)
    return t if not _has_vars(t) else rng.choice(TERM_CONSTS)


def _has_vars(t) -> bool:
    if isinstance(t, (Var, Meta)):
        return True
    if isinstance(t, App):
        return any(_has_vars(a) for a in t.args)
    return False


# ---------------------------------------------------------------------------
# Random statement ASTs (for parser round-trips)
# ---------------------------------------------------------------------------

_IDENTS = ("p", "q", "r", "edge", "path", "node_1", "Big", "_u")
_FIELDS = ("x1", "y1", "x2", "y2", "tag")
_STRINGS = ("a", "b", "left edge", 'quo"te', "back\\slash", "tab\there", "")


def random_term_ast(rng: random.Random, depth: int = 2, query: bool = False):
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        if query and rng.random() < 0.4:
            return IdentAst(rng.choice(("m?", "h?", "out?")))
        return IdentAst(rng.choice(_IDENTS))
    if roll < 0.55:
        return IntAst(rng.randint(-2**40, 2**40))
    if roll < 0.70:
        return StrAst(rng.choice(_STRINGS))
    if roll < 0.85:
        n = rng.randint(0, 3)
        return AppAst(rng.choice(_IDENTS), tuple(random_term_ast(rng, depth - 1, query) for _ in range(n)))
    return ProjAst(random_term_ast(rng, depth - 1, query), rng.choice(_FIELDS))


def random_atom_ast(rng: random.Random, query: bool = False, allow_cmp: bool = True):
    if allow_cmp and rng.random() < 0.25:
        op = rng.choice(("<", "<=", ">", ">=", "=", "!="))
        return ParenTerm(CmpAst(op, random_term_ast(rng, 1, query), random_term_ast(rng, 1, query)))
    n = rng.randint(0, 3)
    return Application(rng.choice(_IDENTS), tuple(random_term_ast(rng, 2, query) for _ in range(n)))


def random_statement_ast(rng: random.Random):
    roll = rng.random()
    label = rng.choice((None, "s1", "lemma_2", "f10"))
    if roll < 0.30:
        return FactStmt(label, random_atom_ast(rng))
    if roll < 0.55:
        body = tuple(random_atom_ast(rng) for _ in range(rng.randint(1, 3)))
        return RuleStmt(label, random_atom_ast(rng, allow_cmp=False), body)
    if roll < 0.70:
        return QueryStmt(label, random_atom_ast(rng, query=True))
    if roll < 0.80:
        return UseStmt(tuple(rng.choice(_IDENTS) for _ in range(rng.randint(1, 3))))
    if roll < 0.90:
        n = rng.randint(1, 4)
        return StructStmt(rng.choice(("Rect", "Pair", "T_0")), tuple(_FIELDS[:n]))
    return DefStmt(rng.choice(("c1", "origin", "unit")), random_term_ast(rng, 2))


def random_program_ast(rng: random.Random, max_statements: int = 6) -> List:
    return [random_statement_ast(rng) for _ in range(rng.randint(0, max_statements))]


# ---------------------------------------------------------------------------
# Random safe programs (for solver/oracle differential runs)
# ---------------------------------------------------------------------------


def random_safe_program(rng: random.Random) -> Tuple[str, List[str], List[str]]:
    """Comparison-free program with range-restricted rules.

    Stays within: 6 constants, 4 binary predicates, 10 facts, 6 rules.
    Returns (text, predicate names, constant literals).
    """
    consts = [f'"c{i}"' for i in range(rng.randint(2, 5))]
    preds = [f"p{i}" for i in range(rng.randint(1, 3))]
    lines = []
    for _ in range(rng.randint(1, 8)):
        lines.append(f"{rng.choice(preds)}({rng.choice(consts)}, {rng.choice(consts)}).")
    rule_count = rng.choice((0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 6))
    var_pool = ("x", "y", "z", "w")
    for _ in range(rule_count):
        body = []
        body_vars: List[str] = []
        for _ in range(rng.randint(1, 2)):
            args = []
            for _ in range(2):
                if rng.random() < 0.75:
                    v = rng.choice(var_pool)
                    body_vars.append(v)
                    args.append(v)
                else:
                    args.append(rng.choice(consts))
            body.append(f"{rng.choice(preds)}({args[0]}, {args[1]})")
        if body_vars:
            head_args = [rng.choice(body_vars) if rng.random() < 0.8 else rng.choice(consts) for _ in range(2)]
        else:
            head_args = [rng.choice(consts), rng.choice(consts)]
        lines.append(f"{rng.choice(preds)}({head_args[0]}, {head_args[1]}) :- {', '.join(body)}.")
    return "\n".join(lines) + "\n", preds, consts


def ground_probe(symbol: str, left: str, right: str) -> Pred:
    return Pred(symbol, (StrLit(left), StrLit(right)))


def enumeration_bound(kb, depth: int) -> int:
    """Upper bound on derivations the depth-bounded search can visit.

    Backward search enumerates every proof shape, so recursive rule sets
    can blow up combinatorially even when the set of distinct answers is
    tiny. proofs(sym, b) over-approximates the number of derivations of
    any goal on sym within budget b; tests reject programs whose bound is
    too large instead of timing out on them.
    """
    by_symbol: dict = {}
    for c in kb.clauses:
        if c.name in kb.active:
            by_symbol.setdefault(c.head.symbol, []).append(c)
    cap = 10**9
    memo: dict = {}

    def proofs(sym: str, budget: int) -> int:
        if budget < 1:
            return 0
        key = (sym, budget)
        if key in memo:
            return memo[key]
        total = 0
        for clause in by_symbol.get(sym, ()):
            branch = 1
            for atom in clause.body:
                branch *= proofs(atom.symbol, budget - 1)
                if branch >= cap:
                    break
            total += branch
            if total >= cap:
                total = cap
                break
        memo[key] = total
        return total

    return max((proofs(s, depth) for s in by_symbol), default=0)
