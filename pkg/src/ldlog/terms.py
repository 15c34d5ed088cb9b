"""Core term language: terms, atoms, clauses, queries, substitutions.

Terms are immutable trees. Variables come in two flavors that unify the
same way: Var (from rule statements) and Meta (query placeholders, carrying
a numeric id and the surface name they came from). Substitutions are plain
dicts from Var/Meta keys to terms and are kept idempotent by the operations
that build them.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Dict, Optional, Set, Union

from .errors import LdlogError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class IntLit:
    """Signed 64-bit integer literal."""

    value: int


@dataclass(frozen=True)
class StrLit:
    """String literal."""

    value: str


@dataclass(frozen=True)
class Var:
    """Named logic variable (scoped to a single clause)."""

    name: str


@dataclass(frozen=True)
class Meta:
    """Query placeholder; id is unique within one elaborated program."""

    id: int
    source_name: str


@dataclass(frozen=True)
class App:
    """Constructor application; a constant is an App with no args."""

    constructor: str
    args: tuple = ()


Term = Union[IntLit, StrLit, Var, Meta, App]
Key = Union[Var, Meta]
Substitution = Dict[Key, Term]


@dataclass(frozen=True)
class Pred:
    """Predicate atom p(t1, ..., tn)."""

    symbol: str
    args: tuple = ()


BUILTIN_OPS = ("lt", "le", "gt", "ge", "eq", "ne")

OP_TEXT = {"lt": "<", "le": "<=", "gt": ">", "ge": ">=", "eq": "=", "ne": "!="}
TEXT_OP = {text: op for op, text in OP_TEXT.items()}

_OP_FUNC = {
    "lt": operator.lt,
    "le": operator.le,
    "gt": operator.gt,
    "ge": operator.ge,
    "eq": operator.eq,
    "ne": operator.ne,
}


@dataclass(frozen=True)
class Builtin:
    """Comparison atom between two terms; op is one of BUILTIN_OPS."""

    op: str
    lhs: Term
    rhs: Term


Atom = Union[Pred, Builtin]

ORIGIN_FACT = "fact"
ORIGIN_RULE = "rule"
ORIGIN_IMPORTED = "imported"


@dataclass(frozen=True)
class Clause:
    """Named Horn clause: head holds if every body atom holds."""

    name: str
    head: Pred
    body: tuple = ()
    origin: str = ORIGIN_FACT


@dataclass
class Query:
    """Named goal whose placeholders became Meta variables."""

    name: str
    goal: Atom
    placeholder_map: Dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Constructor:
    """Declared constructor: arity, plus field names when struct-declared."""

    arity: int
    fields: Optional[tuple] = None


@dataclass
class KnowledgeBase:
    """Clauses in declaration order plus the declaration environment."""

    clauses: list = field(default_factory=list)
    active: set = field(default_factory=set)
    constructors: Dict[str, Constructor] = field(default_factory=dict)
    defs: Dict[str, Term] = field(default_factory=dict)

    def clause_named(self, name: str) -> Optional[Clause]:
        for c in self.clauses:
            if c.name == name:
                return c
        return None


class ConflictingBinding(LdlogError):
    """Raised by compose when two substitutions disagree on a key."""


class NonGroundBuiltin(LdlogError):
    """Raised by eval_builtin when an operand still has variables."""


class TypeMismatch(LdlogError):
    """Raised by eval_builtin on operands the comparison does not cover."""


def apply_subst(t: Term, s: Substitution) -> Term:
    """Replace every bound Var/Meta leaf in t by its binding."""
    if isinstance(t, (Var, Meta)):
        return s.get(t, t)
    if isinstance(t, App) and t.args:
        return App(t.constructor, tuple(apply_subst(a, s) for a in t.args))
    return t


def apply_subst_atom(a: Atom, s: Substitution) -> Atom:
    """Apply a substitution to every argument of an atom."""
    if isinstance(a, Pred):
        return Pred(a.symbol, tuple(apply_subst(t, s) for t in a.args))
    return Builtin(a.op, apply_subst(a.lhs, s), apply_subst(a.rhs, s))


def compose(s1: Substitution, s2: Substitution) -> Substitution:
    """Substitution satisfying apply(t, result) == apply(apply(t, s1), s2)."""
    result: Substitution = {k: apply_subst(v, s2) for k, v in s1.items()}
    for k, v in s2.items():
        if k in result:
            if result[k] != v:
                raise ConflictingBinding(f"conflicting bindings for {term_text(k)}")
        else:
            result[k] = v
    for k, v in result.items():
        # idempotence: no key of the result may survive in its range
        if free_vars(v) & result.keys():
            raise ConflictingBinding(f"composition is cyclic at {term_text(k)}")
    return result


def free_vars(t: Term) -> Set[Key]:
    """Set of Var and Meta leaves occurring in t."""
    out: Set[Key] = set()
    _collect_vars(t, out)
    return out


def _collect_vars(t: Term, out: Set[Key]) -> None:
    if isinstance(t, (Var, Meta)):
        out.add(t)
    elif isinstance(t, App):
        for a in t.args:
            _collect_vars(a, out)


def atom_free_vars(a: Atom) -> Set[Key]:
    out: Set[Key] = set()
    if isinstance(a, Pred):
        for t in a.args:
            _collect_vars(t, out)
    else:
        _collect_vars(a.lhs, out)
        _collect_vars(a.rhs, out)
    return out


def clause_vars(c: Clause) -> Set[Key]:
    out = atom_free_vars(c.head)
    for a in c.body:
        out |= atom_free_vars(a)
    return out


def is_ground(t: Term) -> bool:
    if isinstance(t, (Var, Meta)):
        return False
    if isinstance(t, App):
        return all(is_ground(a) for a in t.args)
    return True


def atom_is_ground(a: Atom) -> bool:
    if isinstance(a, Pred):
        return all(is_ground(t) for t in a.args)
    return is_ground(a.lhs) and is_ground(a.rhs)


def eval_builtin(a: Builtin, s: Optional[Substitution] = None) -> bool:
    """Decide a comparison atom once its operands are ground.

    Integers support all six operators; strings only equality and
    inequality. Anything else is a TypeMismatch.
    """
    lhs = apply_subst(a.lhs, s or {})
    rhs = apply_subst(a.rhs, s or {})
    if not (is_ground(lhs) and is_ground(rhs)):
        raise NonGroundBuiltin(f"comparison on non-ground operands: {atom_text(Builtin(a.op, lhs, rhs))}")
    if isinstance(lhs, IntLit) and isinstance(rhs, IntLit):
        return _OP_FUNC[a.op](lhs.value, rhs.value)
    if isinstance(lhs, StrLit) and isinstance(rhs, StrLit):
        if a.op == "eq":
            return lhs.value == rhs.value
        if a.op == "ne":
            return lhs.value != rhs.value
        raise TypeMismatch(f"ordered comparison on strings: {atom_text(Builtin(a.op, lhs, rhs))}")
    raise TypeMismatch(f"comparison on mixed or structured operands: {atom_text(Builtin(a.op, lhs, rhs))}")


_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\t": "\\t"}


def quote_string(value: str) -> str:
    """Render a string value as a quoted literal."""
    return '"' + "".join(_ESCAPES.get(ch, ch) for ch in value) + '"'


def term_text(t: Term) -> str:
    """Concrete syntax of a term."""
    if isinstance(t, IntLit):
        return str(t.value)
    if isinstance(t, StrLit):
        return quote_string(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Meta):
        return t.source_name
    if not t.args:
        return t.constructor
    return f"{t.constructor}({', '.join(term_text(a) for a in t.args)})"


def atom_text(a: Atom) -> str:
    """Concrete syntax of an atom."""
    if isinstance(a, Pred):
        return f"{a.symbol}({', '.join(term_text(t) for t in a.args)})"
    return f"{term_text(a.lhs)} {OP_TEXT[a.op]} {term_text(a.rhs)}"
