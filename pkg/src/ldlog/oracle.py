"""Forward-chaining fixpoint evaluation, used as a testing oracle.

Naive bottom-up saturation: each pass instantiates every active rule
against the facts derived so far and adds the new heads, until nothing
changes. Rules must be range-restricted (every head or comparison variable
occurs in some predicate premise), which guarantees every derived atom is
ground and the fixpoint is finite over the program's constants.
"""

from __future__ import annotations

from typing import Dict, Iterator, List, Set

from .errors import LdlogError
from .terms import (
    Atom,
    Builtin,
    Clause,
    KnowledgeBase,
    Meta,
    Pred,
    Substitution,
    apply_subst_atom,
    atom_free_vars,
    eval_builtin,
    term_text,
)
from .unify import BuiltinNotUnifiable, match_atoms, unify_atoms


class UnsafeRule(LdlogError):
    """A rule variable occurs only in its head or in comparisons."""

    def __init__(self, name: str, variables):
        names = ", ".join(sorted(v.name for v in variables))
        super().__init__(f"rule '{name}' is not range-restricted: {names} never occur in a predicate premise")
        self.name = name


def saturate(kb: KnowledgeBase) -> Set[Pred]:
    """All ground atoms derivable from the active clauses."""
    active = [c for c in kb.clauses if c.name in kb.active]
    rules = [c for c in active if c.body]
    for c in rules:
        _check_range_restricted(c)
    derived: Set[Pred] = {c.head for c in active if not c.body}
    while True:
        snapshot = list(derived)
        new: Set[Pred] = set()
        for c in rules:
            for s in _body_matches(c.body, snapshot):
                head = apply_subst_atom(c.head, s)
                if head not in derived:
                    new.add(head)
        if not new:
            return derived
        derived |= new


def _check_range_restricted(c: Clause) -> None:
    positive = set()
    for a in c.body:
        if isinstance(a, Pred):
            positive |= atom_free_vars(a)
    loose = (atom_free_vars(c.head) | _comparison_vars(c.body)) - positive
    if loose:
        raise UnsafeRule(c.name, loose)


def _comparison_vars(body) -> set:
    out = set()
    for a in body:
        if isinstance(a, Builtin):
            out |= atom_free_vars(a)
    return out


def _body_matches(body, facts: List[Pred]) -> Iterator[Substitution]:
    """Substitutions grounding every premise against the given facts."""
    premises = [a for a in body if isinstance(a, Pred)]
    comparisons = [a for a in body if isinstance(a, Builtin)]

    def walk(i: int, s: Substitution) -> Iterator[Substitution]:
        if i == len(premises):
            if all(eval_builtin(c, s) for c in comparisons):
                yield s
            return
        pattern = apply_subst_atom(premises[i], s)
        for fact in facts:
            s2 = unify_atoms(pattern, fact, s)
            if s2 is not None:
                yield from walk(i + 1, s2)

    yield from walk(0, {})


def oracle_entails(kb: KnowledgeBase, a: Pred) -> bool:
    """Whether a ground atom is in the fixpoint."""
    return a in saturate(kb)


def oracle_answers(kb: KnowledgeBase, goal: Atom) -> List[Substitution]:
    """Every placeholder binding whose goal instance is in the fixpoint.

    Deterministic order: sorted by the rendered binding values.
    """
    if isinstance(goal, Builtin):
        raise BuiltinNotUnifiable("a comparison cannot be an oracle goal")
    metas = sorted((v for v in atom_free_vars(goal) if isinstance(v, Meta)), key=lambda m: m.id)
    answers: Dict[tuple, Substitution] = {}
    for fact in saturate(kb):
        bindings = match_atoms(goal, fact)
        if bindings is None:
            continue
        key = tuple(term_text(bindings[m]) for m in metas)
        answers.setdefault(key, bindings)
    return [answers[key] for key in sorted(answers)]
