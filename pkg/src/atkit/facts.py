"""Subject-predicate-object facts: the persistence and inference unit.

Fact file grammar (one fact per line)::

    line     :=  subject predicate object '.'
    subject  :=  identifier
    predicate:=  identifier
    object   :=  identifier | text | integer | rational
    identifier: token of [A-Za-z0-9_:.-]+ that is not a valid number
    text     :=  '"' characters '"'   with \\ \" \n \r \t escapes
    integer  :=  -?[0-9]+
    rational :=  -?[0-9]+/[0-9]+      (non-zero denominator)

Canonical serialization is byte-deterministic: one fact per line in the
form ``subject predicate object .``, lines sorted lexicographically,
trailing newline.  The parser additionally accepts arbitrary whitespace
between tokens, blank lines and ``#`` comments; duplicate facts collapse.

Rationals are normalized on construction (lowest terms, denominator 1
becomes an integer) so equal values always serialize identically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

IDENT_RE = re.compile(r"[A-Za-z0-9_:.\-]+")
INT_RE = re.compile(r"-?[0-9]+")
RATIONAL_RE = re.compile(r"-?[0-9]+/[0-9]+")

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


class FactError(ValueError):
    """Invalid fact component."""


class FactSyntaxError(FactError):
    """Malformed fact text; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def is_identifier(token: str) -> bool:
    """True for tokens usable as subjects, predicates or identifier objects."""
    if not IDENT_RE.fullmatch(token):
        return False
    if token == ".":  # reserved: fact terminator
        return False
    # Numeric-looking tokens always parse back as numbers.
    return not INT_RE.fullmatch(token)


@dataclass(frozen=True, order=True)
class Ident:
    """An identifier used in object position (distinct from a text literal)."""

    name: str

    def __post_init__(self):
        if not is_identifier(self.name):
            raise FactError(f"not a valid identifier: {self.name!r}")


Obj = Union[Ident, str, int, Fraction]


def normalize_object(obj: Obj) -> Obj:
    """Coerce an object value to its canonical representative."""
    if isinstance(obj, bool):
        raise FactError("boolean objects are not supported")
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else obj
    if isinstance(obj, (Ident, str, int)):
        return obj
    raise FactError(f"unsupported object type: {type(obj).__name__}")


def object_token(obj: Obj) -> str:
    """Canonical token form of an object value."""
    if isinstance(obj, Ident):
        return obj.name
    if isinstance(obj, str):
        out = ['"']
        for ch in obj:
            out.append(_ESCAPES.get(ch, ch))
        out.append('"')
        return "".join(out)
    if isinstance(obj, bool):  # pragma: no cover - rejected on construction
        raise FactError("boolean objects are not supported")
    if isinstance(obj, int):
        return str(obj)
    return f"{obj.numerator}/{obj.denominator}"


@dataclass(frozen=True)
class Fact:
    """One subject-predicate-object assertion."""

    subject: str
    predicate: str
    obj: Obj

    def __post_init__(self):
        if not is_identifier(self.subject):
            raise FactError(f"invalid subject: {self.subject!r}")
        if not is_identifier(self.predicate):
            raise FactError(f"invalid predicate: {self.predicate!r}")
        object.__setattr__(self, "obj", normalize_object(self.obj))

    def line(self) -> str:
        return f"{self.subject} {self.predicate} {object_token(self.obj)} ."


class FactSet:
    """An immutable set of facts; insertion of an existing fact is a no-op.

    Iteration is always in canonical (sorted line) order so that every
    consumer is deterministic by construction.
    """

    __slots__ = ("_facts",)

    def __init__(self, facts: Iterable[Fact] = ()):
        self._facts = frozenset(facts)

    def __iter__(self) -> Iterator[Fact]:
        return iter(sorted(self._facts, key=Fact.line))

    def __len__(self) -> int:
        return len(self._facts)

    def __contains__(self, fact: Fact) -> bool:
        return fact in self._facts

    def __eq__(self, other) -> bool:
        return isinstance(other, FactSet) and self._facts == other._facts

    def __hash__(self) -> int:
        return hash(self._facts)

    def __or__(self, other: "FactSet | Iterable[Fact]") -> "FactSet":
        extra = other._facts if isinstance(other, FactSet) else other
        return FactSet(self._facts | frozenset(extra))

    def __repr__(self) -> str:
        return f"FactSet({len(self._facts)} facts)"

    def with_fact(self, fact: Fact) -> "FactSet":
        return self if fact in self._facts else FactSet(self._facts | {fact})


def serialize_facts(facts: FactSet) -> str:
    """Canonical text form: sorted lines, trailing newline, empty set -> ''."""
    lines = sorted(fact.line() for fact in facts)
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


class _Scanner:
    """Single-line token scanner with column tracking."""

    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno
        self.pos = 0
        self.last_start = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        if self.pos >= len(self.text):
            return True
        return self.text[self.pos] == "#"

    def error(self, message: str) -> FactSyntaxError:
        return FactSyntaxError(message, self.lineno, self.pos + 1)

    def token_error(self, message: str) -> FactSyntaxError:
        return FactSyntaxError(message, self.lineno, self.last_start + 1)

    def next_token(self, expect: str) -> str:
        self.skip_ws()
        if self.at_end():
            raise self.error(f"expected {expect}, found end of line")
        start = self.pos
        self.last_start = start
        ch = self.text[start]
        if ch == '"':
            return self._quoted()
        match = re.compile(r"[A-Za-z0-9_:.\-/]+").match(self.text, start)
        if not match:
            raise self.error(f"expected {expect}, found {ch!r}")
        self.pos = match.end()
        # A lone '.' is the fact terminator; identifiers may contain dots.
        return match.group()

    def _quoted(self) -> str:
        # Returns the raw quoted token including the surrounding quotes.
        start = self.pos
        self.pos += 1
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "\\":
                if self.pos + 1 >= len(self.text):
                    raise self.error("dangling escape in text literal")
                if self.text[self.pos + 1] not in _UNESCAPES:
                    self.pos += 1
                    raise self.error(
                        f"unknown escape \\{self.text[self.pos]} in text literal"
                    )
                self.pos += 2
            elif ch == '"':
                self.pos += 1
                return self.text[start : self.pos]
            else:
                self.pos += 1
        self.pos = start
        raise self.error("unterminated text literal")


def _decode_text(token: str) -> str:
    body = token[1:-1]
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            out.append(_UNESCAPES[body[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def decode_object(token: str) -> Obj:
    """Turn a raw object token into a typed value."""
    if token.startswith('"'):
        return _decode_text(token)
    if INT_RE.fullmatch(token):
        return int(token)
    if RATIONAL_RE.fullmatch(token):
        num, den = token.split("/")
        if int(den) == 0:
            raise FactError("rational with zero denominator")
        return normalize_object(Fraction(int(num), int(den)))
    if is_identifier(token):
        return Ident(token)
    raise FactError(f"not a valid object token: {token!r}")


def parse_facts(text: str) -> FactSet:
    """Parse fact text; inverse of :func:`serialize_facts` on its output.

    Accepts non-canonical whitespace and line order; blank lines and
    ``#`` comment lines are ignored; duplicate facts collapse.  Malformed
    input raises :class:`FactSyntaxError` with line and column.
    """
    facts = set()
    # Split on real newlines only: str.splitlines would also split on
    # control characters that are legal inside escaped text literals.
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, raw in enumerate(lines, start=1):
        raw = raw.rstrip("\r")
        scanner = _Scanner(raw, lineno)
        if scanner.at_end():
            continue
        subject = scanner.next_token("subject")
        if not is_identifier(subject):
            raise scanner.token_error(f"invalid subject {subject!r}")
        predicate = scanner.next_token("predicate")
        if not is_identifier(predicate):
            raise scanner.token_error(f"invalid predicate {predicate!r}")
        obj_token = scanner.next_token("object")
        try:
            obj = decode_object(obj_token)
        except FactError as exc:
            raise scanner.token_error(str(exc)) from None
        dot = scanner.next_token("terminating '.'")
        if dot != ".":
            raise scanner.token_error(f"expected terminating '.', found {dot!r}")
        if not scanner.at_end():
            raise scanner.error("trailing content after '.'")
        facts.add(Fact(subject, predicate, obj))
    return FactSet(facts)


@dataclass(frozen=True)
class Var:
    """A query/rule variable, written ``?name``."""

    name: str

    def __post_init__(self):
        if not self.name or not re.fullmatch(r"[A-Za-z0-9_]+", self.name):
            raise FactError(f"invalid variable name: {self.name!r}")

    def __str__(self) -> str:
        return f"?{self.name}"


Term = Union[Var, str, Ident, int, Fraction]


def as_term(value: Term) -> Term:
    """Interpret plain strings: ``?x`` becomes a variable, else kept as-is."""
    if isinstance(value, str) and value.startswith("?"):
        return Var(value[1:])
    return value


def _match_position(term: Term, value, binding: dict) -> dict | None:
    if isinstance(term, Var):
        if term.name in binding:
            return binding if binding[term.name] == value else None
        new = dict(binding)
        new[term.name] = value
        return new
    return binding if term == value else None


def _value_key(value) -> tuple[str, str]:
    if isinstance(value, Ident):
        return (value.name, "ident")
    if isinstance(value, str):
        return (value, "text")
    return (object_token(value), "number")


def binding_key(binding: dict) -> tuple:
    """Deterministic sort key over a binding's values, in variable-name order."""
    return tuple(_value_key(binding[name]) for name in sorted(binding))


def match_fact(pattern: tuple[Term, Term, Term], fact: Fact, binding: dict | None = None) -> dict | None:
    """Extend ``binding`` so the pattern equals the fact, or None.

    Variables bind typed values: subject and predicate positions bind
    :class:`Ident` (so a variable can carry a value between positions),
    the object position binds the object as stored.  A constant ``str``
    in subject/predicate position is the identifier itself; in object
    position it is a text literal.
    """
    s_term, p_term, o_term = (as_term(t) for t in pattern)
    binding = {} if binding is None else binding
    for term, value in ((s_term, fact.subject), (p_term, fact.predicate)):
        if isinstance(term, Var):
            binding = _match_position(term, Ident(value), binding)
        elif isinstance(term, Ident):
            binding = binding if term.name == value else None
        elif isinstance(term, str):
            binding = binding if term == value else None
        else:
            return None
        if binding is None:
            return None
    o_const = o_term if isinstance(o_term, Var) else normalize_object(o_term)
    return _match_position(o_const, fact.obj, binding)


def query(facts: FactSet, pattern: tuple[Term, Term, Term]) -> list[dict]:
    """All substitutions making the pattern a member of the fact set.

    Constants match themselves; ``?name`` terms bind.  The result order is
    deterministic: lexicographic by the bound values (canonical token form).
    An all-constant pattern present in the set yields one empty binding.
    """
    results = []
    seen = set()
    for fact in facts:
        binding = match_fact(pattern, fact, {})
        if binding is not None:
            key = binding_key(binding)
            if key not in seen:
                seen.add(key)
                results.append(binding)
    results.sort(key=binding_key)
    return results
