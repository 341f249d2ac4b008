"""Abstract syntax, parser and printer for the supported ASP-Core-2 subset.

The parser is a small hand-written recursive descent over a regex lexer.  It
keeps rule bodies split by literal kind (positive atoms, negative atoms,
aggregates, comparisons) because that is all later stages need; the textual
order of body literals is not preserved.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Union


class ParseError(SyntaxError):
    """Malformed program text.  Carries 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.message = message
        self.line = line
        self.column = column


class UnsupportedStatement(ParseError):
    """Statement kind outside the supported language (weak constraints, #minimize, ...)."""


class ArityConflict(UserWarning):
    """A predicate name is used with more than one arity."""


class DirectiveIgnored(UserWarning):
    """A #show or #const directive was skipped."""


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class IntegerConstant:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class SymbolicConstant:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class FunctionTerm:
    symbol: str
    args: tuple

    def __str__(self):
        return f"{self.symbol}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class BinaryOpTerm:
    op: str
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.left}{self.op}{self.right})"


@dataclass(frozen=True)
class PoolTerm:
    members: tuple

    def __str__(self):
        return f"({';'.join(map(str, self.members))})"


@dataclass(frozen=True)
class IntervalTerm:
    low: "Term"
    high: "Term"

    def __str__(self):
        return f"({self.low}..{self.high})"


Term = Union[IntegerConstant, SymbolicConstant, Variable, FunctionTerm,
             BinaryOpTerm, PoolTerm, IntervalTerm]

# (name, arity); the unit the dependency graph is built over
Predicate = tuple


def term_variables(term) -> Iterator[str]:
    if isinstance(term, Variable):
        yield term.name
    elif isinstance(term, FunctionTerm):
        for a in term.args:
            yield from term_variables(a)
    elif isinstance(term, BinaryOpTerm):
        yield from term_variables(term.left)
        yield from term_variables(term.right)
    elif isinstance(term, PoolTerm):
        for m in term.members:
            yield from term_variables(m)
    elif isinstance(term, IntervalTerm):
        yield from term_variables(term.low)
        yield from term_variables(term.high)


def map_term(term, fn):
    """Rebuild ``term`` bottom-up, applying ``fn`` to every node."""
    if isinstance(term, FunctionTerm):
        term = FunctionTerm(term.symbol, tuple(map_term(a, fn) for a in term.args))
    elif isinstance(term, BinaryOpTerm):
        term = BinaryOpTerm(term.op, map_term(term.left, fn), map_term(term.right, fn))
    elif isinstance(term, PoolTerm):
        term = PoolTerm(tuple(map_term(m, fn) for m in term.members))
    elif isinstance(term, IntervalTerm):
        term = IntervalTerm(map_term(term.low, fn), map_term(term.high, fn))
    return fn(term)


def iter_subterms(term) -> Iterator:
    yield term
    if isinstance(term, FunctionTerm):
        for a in term.args:
            yield from iter_subterms(a)
    elif isinstance(term, BinaryOpTerm):
        yield from iter_subterms(term.left)
        yield from iter_subterms(term.right)
    elif isinstance(term, PoolTerm):
        for m in term.members:
            yield from iter_subterms(m)
    elif isinstance(term, IntervalTerm):
        yield from iter_subterms(term.low)
        yield from iter_subterms(term.high)


# ---------------------------------------------------------------- literals


@dataclass(frozen=True)
class Atom:
    predicate: str
    terms: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.terms)

    @property
    def key(self) -> Predicate:
        return (self.predicate, len(self.terms))

    def variables(self) -> set:
        return {v for t in self.terms for v in term_variables(t)}

    def __str__(self):
        if not self.terms:
            return self.predicate
        return f"{self.predicate}({','.join(map(str, self.terms))})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self):
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True)
class ComparisonLiteral:
    op: str
    left: Term
    right: Term

    def variables(self) -> set:
        return set(term_variables(self.left)) | set(term_variables(self.right))

    def __str__(self):
        return f"{self.left}{self.op}{self.right}"


@dataclass(frozen=True)
class AggregateElement:
    terms: tuple
    literals: tuple = ()

    def __str__(self):
        head = ",".join(map(str, self.terms))
        if not self.literals:
            return head
        return f"{head}:{','.join(map(str, self.literals))}"


@dataclass(frozen=True)
class AggregateAtom:
    """``#function{elements} op bound``; a left guard ``t op #f{}`` is stored flipped."""

    function: str
    elements: tuple
    guards: tuple = ()  # ((op, term), ...)
    negated: bool = False

    def __str__(self):
        body = ";".join(map(str, self.elements))
        text = f"#{self.function}{{{body}}}" + "".join(f"{op}{t}" for op, t in self.guards)
        return f"not {text}" if self.negated else text


@dataclass(frozen=True)
class ChoiceElement:
    atom: Atom
    condition: tuple = ()  # Literal | ComparisonLiteral

    def __str__(self):
        if not self.condition:
            return str(self.atom)
        return f"{self.atom}:{','.join(map(str, self.condition))}"


@dataclass(frozen=True)
class Disjunction:
    atoms: tuple

    def __str__(self):
        return " | ".join(map(str, self.atoms))


@dataclass(frozen=True)
class Choice:
    elements: tuple
    lower: Optional[Term] = None
    upper: Optional[Term] = None

    def __str__(self):
        lo = f"{self.lower}<=" if self.lower is not None else ""
        hi = f"<={self.upper}" if self.upper is not None else ""
        return f"{lo}{{{';'.join(map(str, self.elements))}}}{hi}"


# A head of None is falsum (an integrity constraint).
Head = Union[Atom, Disjunction, Choice, None]


@dataclass(frozen=True)
class RawRule:
    head: Head = None
    positive_body: tuple = ()
    negative_body: tuple = ()
    aggregates: tuple = ()
    comparisons: tuple = ()
    line: int = field(default=0, compare=False)
    # filled in by aggregate stripping
    stripped: int = field(default=0, compare=False)
    assigned: frozenset = field(default=frozenset(), compare=False)

    @property
    def is_fact(self) -> bool:
        return (isinstance(self.head, Atom) and not self.positive_body
                and not self.negative_body and not self.aggregates and not self.comparisons)

    def atoms(self) -> Iterator[Atom]:
        """All atoms outside aggregates, head first."""
        h = self.head
        if isinstance(h, Atom):
            yield h
        elif isinstance(h, Disjunction):
            yield from h.atoms
        elif isinstance(h, Choice):
            for e in h.elements:
                yield e.atom
                yield from (c.atom for c in e.condition if isinstance(c, Literal))
        yield from self.positive_body
        yield from self.negative_body

    def __str__(self):
        body = [str(a) for a in self.positive_body]
        body += [f"not {a}" for a in self.negative_body]
        body += [str(a) for a in self.aggregates]
        body += [str(c) for c in self.comparisons]
        head = "" if self.head is None else str(self.head)
        if not body:
            return f"{head}." if head else ":- ."
        if head:
            return f"{head} :- {', '.join(body)}."
        return f":- {', '.join(body)}."


def format_program(rules) -> str:
    return "".join(f"{r}\n" for r in rules)


# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<blockcomment>%\*.*?\*%)
  | (?P<comment>%[^\n]*)
  | (?P<string>"(?:\\.|[^"\\])*")
  | (?P<number>\d+)
  | (?P<variable>[A-Z_][A-Za-z0-9_']*)
  | (?P<ident>[a-z][A-Za-z0-9_']*)
  | (?P<directive>\#[a-z_]+)
  | (?P<op>:-|:~|\.\.|<=|>=|!=|<>|==|\*\*|[.,;:(){}\[\]@|=<>+\-*/\\])
""", re.VERBOSE | re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment", "blockcomment"):
            if kind == "op":
                kind = m.group()
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------- parser

COMPARATORS = {"<": "<", "<=": "<=", ">": ">", ">=": ">=", "=": "=", "==": "=",
               "!=": "!=", "<>": "!="}
AGGREGATE_FUNCTIONS = ("count", "sum", "max", "min")
_IGNORED_DIRECTIVES = ("#show", "#const")
_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "!=": "!="}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def expect(self, kind) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {kind!r}, found {found!r}")
        return self.advance()

    def accept(self, kind) -> bool:
        if self.tok.kind == kind:
            self.pos += 1
            return True
        return False

    # -- statements
    def program(self) -> list:
        rules = []
        while self.tok.kind != "eof":
            rule = self.statement()
            if rule is not None:
                rules.append(rule)
        return rules

    def statement(self) -> Optional[RawRule]:
        start = self.tok
        if start.kind == ":~":
            raise UnsupportedStatement("weak constraints are not supported", start.line, start.column)
        if start.kind == "directive":
            if start.text in _IGNORED_DIRECTIVES:
                self.skip_statement()
                warnings.warn(f"line {start.line}: {start.text} directive ignored",
                              DirectiveIgnored, stacklevel=4)
                return None
            raise UnsupportedStatement(f"{start.text} statements are not supported",
                                       start.line, start.column)
        head = None
        if start.kind != ":-":
            head = self.head()
        body = ([], [], [], [])
        if self.accept(":-"):
            if self.tok.kind != ".":
                self.body(body)
        elif head is None:
            raise self.error("expected a rule")
        self.expect(".")
        pos, neg, aggs, cmps = body
        return RawRule(head, tuple(pos), tuple(neg), tuple(aggs), tuple(cmps), line=start.line)

    def skip_statement(self):
        while self.tok.kind not in (".", "eof"):
            self.advance()
        self.expect(".")

    # -- heads
    def head(self) -> Head:
        save = self.pos
        choice = self.try_choice()
        if choice is not None:
            return choice
        self.pos = save
        atoms = [self.classical_atom()]
        while self.tok.kind in ("|", ";"):
            self.advance()
            atoms.append(self.classical_atom())
        return atoms[0] if len(atoms) == 1 else Disjunction(tuple(atoms))

    def try_choice(self) -> Optional[Choice]:
        lower = None
        if self.tok.kind != "{":
            try:
                lower = self.term()
            except ParseError:
                return None
            op = None
            if self.tok.kind in COMPARATORS:
                op = COMPARATORS[self.advance().kind]
            if self.tok.kind != "{":
                return None
            if op not in (None, "<="):
                raise self.error(f"unsupported choice bound comparator {op!r}")
        self.expect("{")
        elements = []
        if self.tok.kind != "}":
            elements.append(self.choice_element())
            while self.accept(";"):
                elements.append(self.choice_element())
        self.expect("}")
        upper = None
        if self.tok.kind in COMPARATORS:
            op = COMPARATORS[self.advance().kind]
            bound = self.term()
            if op == "=":
                lower = upper = bound
            elif op == "<=":
                upper = bound
            elif op == ">=":
                lower = bound
            else:
                raise self.error(f"unsupported choice bound comparator {op!r}")
        elif self.tok.kind in ("number", "variable", "ident", "(", "-"):
            upper = self.term()
        return Choice(tuple(elements), lower, upper)

    def choice_element(self) -> ChoiceElement:
        atom = self.classical_atom()
        condition = []
        if self.accept(":"):
            condition.append(self.condition_literal())
            while self.accept(","):
                condition.append(self.condition_literal())
        return ChoiceElement(atom, tuple(condition))

    # -- bodies
    def body(self, acc):
        self.body_literal(acc)
        while self.accept(","):
            self.body_literal(acc)

    def body_literal(self, acc):
        pos, neg, aggs, cmps = acc
        if self.tok.kind == "ident" and self.tok.text == "not":
            self.advance()
            if self.tok.kind == "directive" or self.looks_like_left_guard():
                aggs.append(replace(self.aggregate(), negated=True))
            else:
                neg.append(self.classical_atom())
            return
        if self.tok.kind == "directive" or self.looks_like_left_guard():
            aggs.append(self.aggregate())
            return
        left = self.term()
        if self.tok.kind in COMPARATORS:
            op = COMPARATORS[self.advance().kind]
            cmps.append(ComparisonLiteral(op, left, self.term()))
            return
        pos.append(self.term_to_atom(left))

    def condition_literal(self):
        if self.tok.kind == "ident" and self.tok.text == "not":
            self.advance()
            return Literal(self.classical_atom(), True)
        left = self.term()
        if self.tok.kind in COMPARATORS:
            op = COMPARATORS[self.advance().kind]
            return ComparisonLiteral(op, left, self.term())
        return Literal(self.term_to_atom(left), False)

    def looks_like_left_guard(self) -> bool:
        """``term op #agg{...}``: scan to the comparator and check what follows."""
        save = self.pos
        try:
            self.term()
            if self.tok.kind in COMPARATORS:
                self.advance()
                return self.tok.kind == "directive"
            return False
        except ParseError:
            return False
        finally:
            self.pos = save

    def aggregate(self) -> AggregateAtom:
        guards = []
        if self.tok.kind != "directive":
            bound = self.term()
            op = COMPARATORS[self.advance().kind]
            guards.append((_FLIP[op], bound))
        tok = self.expect("directive")
        function = tok.text[1:]
        if function not in AGGREGATE_FUNCTIONS:
            raise self.error(f"unknown aggregate #{function}", tok)
        self.expect("{")
        elements = []
        if self.tok.kind != "}":
            elements.append(self.aggregate_element())
            while self.accept(";"):
                elements.append(self.aggregate_element())
        self.expect("}")
        while self.tok.kind in COMPARATORS:
            op = COMPARATORS[self.advance().kind]
            guards.append((op, self.term()))
        return AggregateAtom(function, tuple(elements), tuple(guards))

    def aggregate_element(self) -> AggregateElement:
        terms = []
        if self.tok.kind != ":":
            terms.append(self.term())
            while self.accept(","):
                terms.append(self.term())
        literals = []
        if self.accept(":"):
            literals.append(self.condition_literal())
            while self.accept(","):
                literals.append(self.condition_literal())
        return AggregateElement(tuple(terms), tuple(literals))

    # -- atoms
    def classical_atom(self) -> Atom:
        tok = self.tok
        return self.term_to_atom(self.term(), tok)

    def term_to_atom(self, term, tok=None) -> Atom:
        negative = False
        if (isinstance(term, BinaryOpTerm) and term.op == "-"
                and term.left == IntegerConstant(0)
                and isinstance(term.right, (SymbolicConstant, FunctionTerm))):
            negative, term = True, term.right
        prefix = "-" if negative else ""
        if isinstance(term, SymbolicConstant) and not term.name.startswith('"'):
            return Atom(prefix + term.name, ())
        if isinstance(term, FunctionTerm):
            return Atom(prefix + term.symbol, term.args)
        raise self.error(f"expected an atom, found term {term}", tok)

    # -- terms
    def term(self):
        low = self.additive()
        if self.accept(".."):
            return IntervalTerm(low, self.additive())
        return low

    def additive(self):
        left = self.multiplicative()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            left = BinaryOpTerm(op, left, self.multiplicative())
        return left

    def multiplicative(self):
        left = self.power()
        while self.tok.kind in ("*", "/", "\\"):
            op = self.advance().kind
            left = BinaryOpTerm(op, left, self.power())
        return left

    def power(self):
        base = self.unary()
        if self.accept("**"):
            return BinaryOpTerm("**", base, self.power())
        return base

    def unary(self):
        if self.accept("-"):
            if self.tok.kind == "number":
                return IntegerConstant(-int(self.advance().text))
            return BinaryOpTerm("-", IntegerConstant(0), self.unary())
        return self.primary()

    def primary(self):
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return IntegerConstant(int(tok.text))
        if tok.kind == "variable":
            self.advance()
            if tok.text == "_":
                return Variable(f"_{tok.line}_{tok.column}")
            return Variable(tok.text)
        if tok.kind == "string":
            self.advance()
            return SymbolicConstant(tok.text)
        if tok.kind == "ident":
            self.advance()
            if self.accept("("):
                args = self.pooled_arguments()
                self.expect(")")
                return FunctionTerm(tok.text, args) if args else SymbolicConstant(tok.text)
            return SymbolicConstant(tok.text)
        if tok.kind == "(":
            self.advance()
            args = self.pooled_arguments()
            self.expect(")")
            if len(args) != 1:
                raise self.error("tuple terms are not supported", tok)
            return args[0]
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")

    def pooled_arguments(self) -> tuple:
        if self.tok.kind == ")":
            return ()
        tuples = [self.argument_tuple()]
        while self.accept(";"):
            tuples.append(self.argument_tuple())
        if len(tuples) == 1:
            return tuple(tuples[0])
        if any(len(t) != 1 for t in tuples):
            raise self.error("tuple pools are not supported; pool single terms instead")
        return (PoolTerm(tuple(t[0] for t in tuples)),)

    def argument_tuple(self) -> list:
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        return args


def parse_program(text: str) -> list:
    """Parse program text into a list of :class:`RawRule`.

    Raises :class:`ParseError` on malformed input.  Using a predicate name with
    two arities emits an :class:`ArityConflict` warning; the two uses are kept
    as distinct predicates.
    """
    rules = _Parser(text).program()
    arities: dict = {}
    for rule in rules:
        for atom in _all_atoms(rule):
            arities.setdefault(atom.predicate, set()).add(atom.arity)
    for name in sorted(arities):
        if len(arities[name]) > 1:
            warnings.warn(f"predicate {name} used with arities {sorted(arities[name])}",
                          ArityConflict, stacklevel=2)
    return rules


def parse_term(text: str):
    p = _Parser(text)
    t = p.term()
    p.expect("eof")
    return t


def _all_atoms(rule: RawRule) -> Iterator[Atom]:
    yield from rule.atoms()
    for agg in rule.aggregates:
        for e in agg.elements:
            yield from (c.atom for c in e.literals if isinstance(c, Literal))


# ---------------------------------------------------------------- constants


@dataclass(frozen=True)
class ConstantTable:
    """Symbolic constant -> natural number codes.

    Codes are ``max_original_integer + position`` where position is the
    1-based index in the byte-wise sorted list of symbolic constants.
    """

    forward: dict
    inverse: dict
    max_original_integer: int = 0

    def decode(self, value: int) -> str:
        return self.inverse.get(value, str(value))


def _rule_terms(rule: RawRule) -> Iterator:
    """Every top-level term in a rule, including aggregate and choice internals."""
    h = rule.head
    for atom in rule.atoms():
        yield from atom.terms
    if isinstance(h, Choice):
        for b in (h.lower, h.upper):
            if b is not None:
                yield b
        for e in h.elements:
            for c in e.condition:
                if isinstance(c, ComparisonLiteral):
                    yield c.left
                    yield c.right
    for c in rule.comparisons:
        yield c.left
        yield c.right
    for agg in rule.aggregates:
        for _, bound in agg.guards:
            yield bound
        for e in agg.elements:
            yield from e.terms
            for lit in e.literals:
                if isinstance(lit, Literal):
                    yield from lit.atom.terms
                else:
                    yield lit.left
                    yield lit.right


def map_rule_terms(rule: RawRule, fn) -> RawRule:
    """Apply ``fn`` to every top-level term of the rule (aggregates and choices included)."""

    def atom(a):
        return Atom(a.predicate, tuple(fn(t) for t in a.terms))

    def cond(c):
        if isinstance(c, Literal):
            return Literal(atom(c.atom), c.negated)
        return ComparisonLiteral(c.op, fn(c.left), fn(c.right))

    h = rule.head
    if isinstance(h, Atom):
        h = atom(h)
    elif isinstance(h, Disjunction):
        h = Disjunction(tuple(map(atom, h.atoms)))
    elif isinstance(h, Choice):
        h = Choice(tuple(ChoiceElement(atom(e.atom), tuple(map(cond, e.condition)))
                         for e in h.elements),
                   None if h.lower is None else fn(h.lower),
                   None if h.upper is None else fn(h.upper))
    aggs = tuple(
        AggregateAtom(a.function,
                      tuple(AggregateElement(tuple(map(fn, e.terms)), tuple(map(cond, e.literals)))
                            for e in a.elements),
                      tuple((op, fn(t)) for op, t in a.guards), a.negated)
        for a in rule.aggregates)
    return replace(rule, head=h,
                   positive_body=tuple(map(atom, rule.positive_body)),
                   negative_body=tuple(map(atom, rule.negative_body)),
                   aggregates=aggs,
                   comparisons=tuple(cond(c) for c in rule.comparisons))


def normalize_constants(rules) -> tuple:
    """Replace symbolic constants by integers above the largest program integer.

    Returns ``(rules, table)``.  Integers already present are unchanged.
    """
    names = set()
    max_int = 0
    for rule in rules:
        for top in _rule_terms(rule):
            for t in iter_subterms(top):
                if isinstance(t, SymbolicConstant):
                    names.add(t.name)
                elif isinstance(t, IntegerConstant) and t.value > max_int:
                    max_int = t.value
    # byte-wise order, not locale or case-folded
    ordered = sorted(names, key=lambda s: s.encode("utf-8"))
    forward = {name: max_int + i for i, name in enumerate(ordered, start=1)}
    table = ConstantTable(forward, {v: k for k, v in forward.items()}, max_int)
    if not forward:
        return list(rules), table

    def swap(t):
        if isinstance(t, SymbolicConstant):
            return IntegerConstant(forward[t.name])
        return t

    return [map_rule_terms(r, lambda top: map_term(top, swap)) for r in rules], table
