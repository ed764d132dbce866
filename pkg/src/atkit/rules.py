"""Production-rule DSL and deterministic forward chaining.

Expert knowledge lives outside the business logic, in rule files::

    # comment to end of line
    RULE <name>
    WHEN <clause> {AND <clause>}
    THEN <conclusion> {AND <conclusion>}
    END

    clause      := (term, term, term)            fact pattern
                 | ?var <op> constant            guard over a bound variable
    op          := < | <= | = | != | > | >=
    term        := ?var | identifier | integer | rational | "text"
    conclusion  := assert (term, term, term)     derive a fact
                 | directive kind(arg, ...)      emit an adaptation directive
    kind        := present(topic, modality, ordering)
                 | skip(topic) | embed_tool(tool) | link_blogs()

Layout is free-form: newlines are whitespace.  Rule priority is file
order.  Guards may only reference variables bound by earlier patterns
in the same rule; every conclusion variable must be bound by some
pattern.  Ordered guard comparisons are defined for numbers and for
knowledge levels (none < little < working < expert); anything else
ordered-compares to false.  Equality works on any value.

Inference is semi-naive forward chaining run in synchronous rounds:
every rule is matched against the current fact set, asserted facts
become visible in the next round, and the process repeats to fixpoint.
Matching is deterministic: rules fire in priority order, bindings in
lexicographic order of their bound values.  Directives are recorded in
firing order and deduplicated first-wins by (kind, first argument), so
earlier rules act as more-specific defaults.  An assert whose bound
values do not fit the target positions (e.g. a text literal in subject
position) derives nothing; inference itself never fails.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .facts import (
    Fact,
    FactError,
    FactSet,
    Ident,
    Obj,
    Term,
    Var,
    binding_key,
    is_identifier,
    match_fact,
    object_token,
)
from .profile import KnowledgeLevel

LEVEL_RANK = {level.value: rank for rank, level in enumerate(KnowledgeLevel)}


class RuleError(ValueError):
    """Rulebase cannot be parsed or used."""


class RuleSyntaxError(RuleError):
    """Syntax error with position and the token set that was expected."""

    def __init__(self, message: str, line: int, column: int, expected: set[str] | None = None):
        hint = f" (expected {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"line {line}, column {column}: {message}{hint}")
        self.line = line
        self.column = column
        self.expected = expected or set()


class NotDerivableError(RuleError):
    """The directive asked about is not produced by this rulebase."""


class DirectiveKind(str, Enum):
    PRESENT = "present"
    SKIP = "skip"
    EMBED_TOOL = "embed_tool"
    LINK_BLOGS = "link_blogs"


DIRECTIVE_ARITY = {
    DirectiveKind.PRESENT: 3,
    DirectiveKind.SKIP: 1,
    DirectiveKind.EMBED_TOOL: 1,
    DirectiveKind.LINK_BLOGS: 0,
}

MODALITIES = ("audio", "video", "text")
ORDERINGS = ("deductive", "inductive")


@dataclass(frozen=True)
class Directive:
    """An adaptation instruction emitted by inference."""

    kind: DirectiveKind
    args: tuple[Obj, ...] = ()

    def key(self) -> tuple[str, str]:
        return (self.kind.value, object_token(self.args[0]) if self.args else "")

    def canonical(self) -> str:
        return f"{self.kind.value}({','.join(object_token(a) for a in self.args)})"

    def arg_token(self, index: int) -> str:
        value = self.args[index]
        return value.name if isinstance(value, Ident) else object_token(value)

    @property
    def topic(self) -> str:
        return self.arg_token(0)

    @property
    def tool(self) -> str:
        return self.arg_token(0)

    @property
    def modality(self) -> str:
        return self.arg_token(1)

    @property
    def ordering(self) -> str:
        return self.arg_token(2)


def dedupe_directives(directives: list[Directive]) -> list[Directive]:
    """First directive per (kind, first-argument) key wins."""
    seen = set()
    result = []
    for directive in directives:
        key = directive.key()
        if key not in seen:
            seen.add(key)
            result.append(directive)
    return result


def sort_directives(directives: list[Directive]) -> list[Directive]:
    """Canonical CLI order: by kind, then key, then remaining arguments."""
    return sorted(directives, key=lambda d: (d.kind.value, d.key()[1], d.canonical()))


@dataclass(frozen=True)
class Pattern:
    terms: tuple[Term, Term, Term]

    def variables(self) -> set[str]:
        return {t.name for t in self.terms if isinstance(t, Var)}


@dataclass(frozen=True)
class Guard:
    var: Var
    op: str
    constant: Obj


@dataclass(frozen=True)
class AssertConclusion:
    terms: tuple[Term, Term, Term]

    def variables(self) -> set[str]:
        return {t.name for t in self.terms if isinstance(t, Var)}


@dataclass(frozen=True)
class DirectiveConclusion:
    kind: DirectiveKind
    args: tuple[Term, ...]

    def variables(self) -> set[str]:
        return {t.name for t in self.args if isinstance(t, Var)}


Conclusion = AssertConclusion | DirectiveConclusion


@dataclass(frozen=True)
class Rule:
    name: str
    conditions: tuple[Pattern | Guard, ...]
    conclusions: tuple[Conclusion, ...]
    priority: int

    @property
    def patterns(self) -> list[Pattern]:
        return [c for c in self.conditions if isinstance(c, Pattern)]


@dataclass
class RuleBase:
    rules: list[Rule]
    source: str = ""

    def __len__(self) -> int:
        return len(self.rules)


# ---------------------------------------------------------------------------
# Tokenizer


@dataclass(frozen=True)
class _Token:
    kind: str  # KEYWORD NAME VAR NUMBER RATIONAL TEXT PUNCT OP EOF
    value: str
    line: int
    column: int


_KEYWORDS = {"RULE", "WHEN", "AND", "THEN", "END", "assert", "directive"}
_OPS = ("<=", ">=", "!=", "<", ">", "=")
_WORD_RE = re.compile(r"[A-Za-z0-9_:.\-/]+")


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    column = 1
    i = 0
    length = len(text)
    while i < length:
        ch = text[i]
        if ch == "\n":
            line += 1
            column = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            column += 1
            continue
        if ch == "#":
            while i < length and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, column

        if ch == '"':
            j = i + 1
            value = []
            while j < length and text[j] != '"':
                if text[j] == "\\" and j + 1 < length:
                    escapes = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}
                    if text[j + 1] not in escapes:
                        raise RuleSyntaxError(
                            f"unknown escape \\{text[j + 1]}", start_line, start_col
                        )
                    value.append(escapes[text[j + 1]])
                    j += 2
                elif text[j] == "\n":
                    break
                else:
                    value.append(text[j])
                    j += 1
            if j >= length or text[j] != '"':
                raise RuleSyntaxError("unterminated text literal", start_line, start_col)
            tokens.append(_Token("TEXT", "".join(value), start_line, start_col))
            column += j + 1 - i
            i = j + 1
            continue

        if ch in "(),":
            tokens.append(_Token("PUNCT", ch, start_line, start_col))
            i += 1
            column += 1
            continue

        matched_op = next((op for op in _OPS if text.startswith(op, i)), None)
        if matched_op:
            tokens.append(_Token("OP", matched_op, start_line, start_col))
            i += len(matched_op)
            column += len(matched_op)
            continue

        if ch == "?":
            match = _WORD_RE.match(text, i + 1)
            if not match or not re.fullmatch(r"[A-Za-z0-9_]+", match.group()):
                raise RuleSyntaxError("invalid variable name", start_line, start_col)
            tokens.append(_Token("VAR", match.group(), start_line, start_col))
            column += match.end() - i
            i = match.end()
            continue

        match = _WORD_RE.match(text, i)
        if match:
            word = match.group()
            if word in _KEYWORDS:
                kind = "KEYWORD"
            elif re.fullmatch(r"-?[0-9]+", word):
                kind = "NUMBER"
            elif re.fullmatch(r"-?[0-9]+/[0-9]+", word):
                kind = "RATIONAL"
            elif is_identifier(word):
                kind = "NAME"
            else:
                raise RuleSyntaxError(f"invalid token {word!r}", start_line, start_col)
            tokens.append(_Token(kind, word, start_line, start_col))
            column += match.end() - i
            i = match.end()
            continue

        raise RuleSyntaxError(f"unexpected character {ch!r}", start_line, start_col)
    tokens.append(_Token("EOF", "", line, column))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, message: str, expected: set[str]) -> RuleSyntaxError:
        token = self.peek()
        found = token.value or "end of input"
        return RuleSyntaxError(f"{message}, found {found!r}", token.line, token.column, expected)

    def expect_keyword(self, word: str) -> _Token:
        token = self.peek()
        if token.kind == "KEYWORD" and token.value == word:
            return self.advance()
        raise self.fail(f"expected {word}", {word})

    def expect_punct(self, ch: str) -> _Token:
        token = self.peek()
        if token.kind == "PUNCT" and token.value == ch:
            return self.advance()
        raise self.fail(f"expected {ch!r}", {ch})

    def at_keyword(self, word: str) -> bool:
        token = self.peek()
        return token.kind == "KEYWORD" and token.value == word

    def parse_rulebase(self, source: str) -> RuleBase:
        rules = []
        names = set()
        while not self.peek().kind == "EOF":
            rule = self.parse_rule(priority=len(rules))
            if rule.name in names:
                raise RuleError(f"duplicate rule name: {rule.name}")
            names.add(rule.name)
            rules.append(rule)
        return RuleBase(rules, source)

    def parse_rule(self, priority: int) -> Rule:
        self.expect_keyword("RULE")
        name_token = self.peek()
        if name_token.kind != "NAME":
            raise self.fail("expected rule name", {"identifier"})
        self.advance()
        self.expect_keyword("WHEN")

        conditions: list[Pattern | Guard] = [self.parse_clause(name_token.value)]
        while self.at_keyword("AND"):
            # AND joins both clauses and conclusions; look ahead to THEN.
            self.advance()
            conditions.append(self.parse_clause(name_token.value))
        self.expect_keyword("THEN")
        conclusions = [self.parse_conclusion(name_token.value)]
        while self.at_keyword("AND"):
            self.advance()
            conclusions.append(self.parse_conclusion(name_token.value))
        self.expect_keyword("END")

        rule = Rule(name_token.value, tuple(conditions), tuple(conclusions), priority)
        self.check_bindings(rule)
        return rule

    def parse_clause(self, rule_name: str) -> Pattern | Guard:
        token = self.peek()
        if token.kind == "PUNCT" and token.value == "(":
            return self.parse_pattern()
        if token.kind == "VAR":
            var_token = self.advance()
            op_token = self.peek()
            if op_token.kind != "OP":
                raise self.fail("expected comparison operator", set(_OPS))
            self.advance()
            constant = self.parse_constant()
            return Guard(Var(var_token.value), op_token.value, constant)
        raise self.fail("expected a pattern or a guard", {"(", "?var"})

    def parse_pattern(self) -> Pattern:
        self.expect_punct("(")
        terms = [self.parse_term(position="subject")]
        self.expect_punct(",")
        terms.append(self.parse_term(position="predicate"))
        self.expect_punct(",")
        terms.append(self.parse_term(position="object"))
        self.expect_punct(")")
        return Pattern(tuple(terms))

    def parse_term(self, position: str) -> Term:
        token = self.peek()
        if token.kind == "VAR":
            self.advance()
            return Var(token.value)
        if token.kind == "NAME":
            self.advance()
            # Identifier constants stay plain in subject/predicate position
            # and become Ident objects in object position.
            return Ident(token.value) if position == "object" else token.value
        if position in ("subject", "predicate"):
            raise self.fail(f"expected identifier or variable as {position}", {"identifier", "?var"})
        return self.parse_value_token()

    def parse_constant(self) -> Obj:
        token = self.peek()
        if token.kind == "NAME":
            self.advance()
            return Ident(token.value)
        return self.parse_value_token()

    def parse_value_token(self) -> Obj:
        token = self.peek()
        if token.kind == "NUMBER":
            self.advance()
            return int(token.value)
        if token.kind == "RATIONAL":
            self.advance()
            num, den = token.value.split("/")
            if int(den) == 0:
                raise RuleSyntaxError("rational with zero denominator", token.line, token.column)
            value = Fraction(int(num), int(den))
            return int(value) if value.denominator == 1 else value
        if token.kind == "TEXT":
            self.advance()
            return token.value
        raise self.fail("expected a constant", {"identifier", "number", "text"})

    def parse_conclusion(self, rule_name: str) -> Conclusion:
        if self.at_keyword("assert"):
            self.advance()
            pattern = self.parse_pattern()
            return AssertConclusion(pattern.terms)
        if self.at_keyword("directive"):
            self.advance()
            kind_token = self.peek()
            if kind_token.kind != "NAME" or kind_token.value not in DirectiveKind._value2member_map_:
                raise self.fail(
                    "expected directive kind", {k.value for k in DirectiveKind}
                )
            self.advance()
            kind = DirectiveKind(kind_token.value)
            self.expect_punct("(")
            args: list[Term] = []
            if not (self.peek().kind == "PUNCT" and self.peek().value == ")"):
                args.append(self.parse_directive_arg())
                while self.peek().kind == "PUNCT" and self.peek().value == ",":
                    self.advance()
                    args.append(self.parse_directive_arg())
            closing = self.expect_punct(")")
            if len(args) != DIRECTIVE_ARITY[kind]:
                raise RuleSyntaxError(
                    f"{kind.value} takes {DIRECTIVE_ARITY[kind]} argument(s), got {len(args)}",
                    closing.line,
                    closing.column,
                )
            self.check_directive_constants(kind, args, closing)
            return DirectiveConclusion(kind, tuple(args))
        raise self.fail("expected a conclusion", {"assert", "directive"})

    def parse_directive_arg(self) -> Term:
        token = self.peek()
        if token.kind == "VAR":
            self.advance()
            return Var(token.value)
        if token.kind == "NAME":
            self.advance()
            return Ident(token.value)
        raise self.fail("expected directive argument", {"identifier", "?var"})

    def check_directive_constants(self, kind: DirectiveKind, args: list[Term], token: _Token):
        if kind is not DirectiveKind.PRESENT:
            return
        modality, ordering = args[1], args[2]
        if isinstance(modality, Ident) and modality.name not in MODALITIES:
            raise RuleSyntaxError(
                f"unknown modality {modality.name!r}", token.line, token.column,
                set(MODALITIES),
            )
        if isinstance(ordering, Ident) and ordering.name not in ORDERINGS:
            raise RuleSyntaxError(
                f"unknown ordering {ordering.name!r}", token.line, token.column,
                set(ORDERINGS),
            )

    def check_bindings(self, rule: Rule):
        bound: set[str] = set()
        for condition in rule.conditions:
            if isinstance(condition, Pattern):
                bound |= condition.variables()
            else:
                if condition.var.name not in bound:
                    raise RuleError(
                        f"rule {rule.name}: guard references unbound variable ?{condition.var.name}"
                    )
        for conclusion in rule.conclusions:
            unbound = conclusion.variables() - bound
            if unbound:
                name = sorted(unbound)[0]
                raise RuleError(
                    f"rule {rule.name}: conclusion uses unbound variable ?{name}"
                )


def parse_rules(text: str) -> RuleBase:
    """Parse rule text into a :class:`RuleBase`; empty text is allowed."""
    return _Parser(_tokenize(text)).parse_rulebase(text)


def load_rulebase(path=None) -> RuleBase:
    """Load a rule file; defaults to the shipped ``adaptation.rules``."""
    from .resources import config_path

    resolved = config_path("adaptation.rules", path)
    return parse_rules(resolved.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Evaluation


def _compare(left: Obj, right: Obj, op: str) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if isinstance(left, Ident) and isinstance(right, Ident):
        if left.name in LEVEL_RANK and right.name in LEVEL_RANK:
            lv, rv = LEVEL_RANK[left.name], LEVEL_RANK[right.name]
        else:
            return False
    elif isinstance(left, (int, Fraction)) and isinstance(right, (int, Fraction)) and not (
        isinstance(left, bool) or isinstance(right, bool)
    ):
        lv, rv = left, right
    else:
        return False
    return {"<": lv < rv, "<=": lv <= rv, ">": lv > rv, ">=": lv >= rv}[op]


def _instantiate_term(term: Term, binding: dict) -> Obj:
    return binding[term.name] if isinstance(term, Var) else term


def _instantiate_fact(conclusion: AssertConclusion, binding: dict) -> Fact | None:
    s, p, o = (_instantiate_term(t, binding) for t in conclusion.terms)
    subject = s.name if isinstance(s, Ident) else s
    predicate = p.name if isinstance(p, Ident) else p
    if not isinstance(subject, str) or not isinstance(predicate, str):
        return None
    try:
        return Fact(subject, predicate, o)
    except FactError:
        return None


@dataclass(frozen=True)
class Firing:
    """One rule application: the rule, its bindings, what it matched."""

    seq: int
    rule: Rule
    binding: dict
    supports: tuple[Fact, ...]

    def __hash__(self):  # pragma: no cover - identity hashing is enough
        return id(self)


@dataclass
class InferenceResult:
    derived: FactSet
    directives: list[Directive]
    events: list[tuple[Directive, "Firing"]] = field(default_factory=list)
    producers: dict[Fact, "Firing"] = field(default_factory=dict)

    def __iter__(self):
        # Allows ``derived, directives = infer(...)``.
        return iter((self.derived, self.directives))


def _enumerate_firings(rule: Rule, total: list[Fact], delta: list[Fact] | None):
    """All (binding, supports) for a rule, deterministically ordered.

    ``delta`` restricts enumeration to bindings where at least one
    pattern matches a delta fact (the semi-naive frontier); None means
    no restriction.
    """
    pattern_count = len(rule.patterns)
    found: dict[frozenset, tuple[dict, tuple[Fact, ...]]] = {}

    def walk(ci: int, binding: dict, supports: tuple[Fact, ...], pattern_i: int, delta_i: int | None):
        if ci == len(rule.conditions):
            key = frozenset(binding.items())
            if key not in found:
                found[key] = (binding, supports)
            return
        condition = rule.conditions[ci]
        if isinstance(condition, Guard):
            if _compare(binding[condition.var.name], condition.constant, condition.op):
                walk(ci + 1, binding, supports, pattern_i, delta_i)
            return
        pool = delta if delta_i == pattern_i else total
        for fact in pool:
            extended = match_fact(condition.terms, fact, binding)
            if extended is not None:
                walk(ci + 1, extended, supports + (fact,), pattern_i + 1, delta_i)

    if delta is None:
        walk(0, {}, (), 0, None)
    else:
        for delta_i in range(pattern_count):
            walk(0, {}, (), 0, delta_i)
    return sorted(found.values(), key=lambda pair: binding_key(pair[0]))


def _universe_size(facts: FactSet, rulebase: RuleBase) -> int:
    values: set = set()
    for fact in facts:
        values.update((Ident(fact.subject), Ident(fact.predicate), fact.obj))
    for rule in rulebase.rules:
        for condition in rule.conditions:
            if isinstance(condition, Pattern):
                values.update(t for t in condition.terms if not isinstance(t, Var))
        for conclusion in rule.conclusions:
            if isinstance(conclusion, AssertConclusion):
                values.update(t for t in conclusion.terms if not isinstance(t, Var))
    return max(1, len(values))


def infer(facts: FactSet, rulebase: RuleBase) -> InferenceResult:
    """Forward-chain to fixpoint; returns derived facts and directives.

    Deterministic, monotone and total: identical inputs give identical
    outputs, and permuting input facts changes nothing.
    """
    total_set = set(facts)
    total_sorted = sorted(total_set, key=Fact.line)
    delta_sorted = None  # first round matches everything
    events: list[tuple[Directive, Firing]] = []
    producers: dict[Fact, Firing] = {}
    seq = 0

    # Safety backstop; the derived-fact space is finite (no function
    # symbols) so this can only trip on an engine bug.
    universe = _universe_size(facts, rulebase)
    max_rounds = max(1, len(rulebase.rules)) * universe**3 + 2

    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise RuntimeError("inference iteration budget exceeded")
        new_facts: list[Fact] = []
        new_set: set[Fact] = set()
        for rule in rulebase.rules:
            for binding, supports in _enumerate_firings(rule, total_sorted, delta_sorted):
                firing = Firing(seq, rule, binding, supports)
                seq += 1
                for conclusion in rule.conclusions:
                    if isinstance(conclusion, DirectiveConclusion):
                        args = tuple(
                            _instantiate_term(t, binding) for t in conclusion.args
                        )
                        events.append((Directive(conclusion.kind, args), firing))
                    else:
                        derived = _instantiate_fact(conclusion, binding)
                        if derived is None or derived in total_set or derived in new_set:
                            continue
                        new_set.add(derived)
                        new_facts.append(derived)
                        producers[derived] = firing
        if not new_facts:
            break
        total_set |= new_set
        total_sorted = sorted(total_set, key=Fact.line)
        delta_sorted = sorted(new_set, key=Fact.line)

    directives = dedupe_directives([directive for directive, _ in events])
    return InferenceResult(FactSet(total_set), directives, events, producers)


def explain(facts: FactSet, rulebase: RuleBase, directive: Directive) -> list[tuple[str, dict]]:
    """Derivation trace for a directive from :func:`infer`'s output.

    Returns (rule name, bindings) steps in firing order; replaying the
    asserts of the earlier steps makes the final step's conditions hold
    and re-emits the directive.
    """
    result = infer(facts, rulebase)
    winner = next((f for d, f in result.events if d == directive), None)
    if winner is None:
        raise NotDerivableError(f"not derivable: {directive.canonical()}")

    needed: list[Firing] = []
    seen: set[int] = set()

    def collect(firing: Firing):
        if firing.seq in seen:
            return
        seen.add(firing.seq)
        for support in firing.supports:
            producer = result.producers.get(support)
            if producer is not None:
                collect(producer)
        needed.append(firing)

    collect(winner)
    needed.sort(key=lambda f: f.seq)
    return [(f.rule.name, dict(f.binding)) for f in needed]
