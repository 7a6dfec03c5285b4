"""Formula language: AST, parser and printer.

The language is first-order logic in negation normal form extended with
team atoms (dependence, anonymity, inclusion, exclusion, independence),
the non-emptiness atom NE, Boolean negation and disjunction, a row
existence prefix `some`, the pointwise flattening operator F, and a
guarded disjunction `alpha => psi` whose guard must be first-order.

Concrete syntax (ASCII)::

    atoms       R(x,y)  !R(x)  x = y  x != y  TOP  BOT  NE
                dep(x; y)   const(y)      anon(x; y)   nonconst(y)
                inc(x; y)   exc(x, y; u, v)   ind(x; y; z)
    prefixes    F p | neg p | some p | ! p          (tightest)
    infix       p & q   p | q   a => p   p vv q     (tight to loose)
    quantifiers E x. p   A x. p                     (body extends right)

Identifiers in term position are variables; constants carry a leading
`#` (for example ``#c0``).  ``ind(c...; l...; r...)`` reads "l and r are
independent given c"; the conditioning tuple may be empty.  Classical
negation ``!`` of a composite first-order formula is accepted and pushed
to the literals immediately; applying it to a team atom is an error.

All nodes are frozen dataclasses: formulas are immutable, hashable and
safe to share between concurrent evaluations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Union


# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return "#" + self.name


Term = Union[Var, Const]


def term_vars(terms: Iterable[Term]) -> frozenset[str]:
    return frozenset(t.name for t in terms if isinstance(t, Var))


# ---------------------------------------------------------------------------
# formulas

class Formula:
    """Base class for all formula nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class RelAtom(Formula):
    name: str
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True)
class NegRelAtom(Formula):
    name: str
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True)
class Equal(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class NotEqual(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class NE(Formula):
    pass


@dataclass(frozen=True)
class Dep(Formula):
    """dep(prefix; target): the prefix values determine the target value."""

    prefix: tuple[Term, ...]
    target: Term

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))


@dataclass(frozen=True)
class Anon(Formula):
    """anon(prefix; target): every row has a mate agreeing on the prefix
    and differing on the target."""

    prefix: tuple[Term, ...]
    target: Term

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))


@dataclass(frozen=True)
class Incl(Formula):
    left: tuple[Term, ...]
    right: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        if not self.left or len(self.left) != len(self.right):
            raise ValueError("inclusion atom needs non-empty sides of equal length")


@dataclass(frozen=True)
class Excl(Formula):
    left: tuple[Term, ...]
    right: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        if not self.left or len(self.left) != len(self.right):
            raise ValueError("exclusion atom needs non-empty sides of equal length")


@dataclass(frozen=True)
class Ind(Formula):
    """ind(condition; left; right): left and right combine freely among
    rows sharing the condition values."""

    condition: tuple[Term, ...]
    left: tuple[Term, ...]
    right: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "condition", tuple(self.condition))
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        if not self.left or not self.right:
            raise ValueError("independence atom needs non-empty left and right tuples")


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Hook(Formula):
    """guard => body, shorthand for (!guard) | (guard & body)."""

    guard: Formula
    body: Formula

    def __post_init__(self):
        if not is_first_order(self.guard):
            raise ValueError("team atom inside hook guard")


@dataclass(frozen=True)
class BoolOr(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class BoolNeg(Formula):
    body: Formula


@dataclass(frozen=True)
class SomeRow(Formula):
    """some p: at least one row of the team satisfies p on its own."""

    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Flat(Formula):
    """F p: the team satisfies p pointwise, one singleton row at a time."""

    body: Formula


TOP = Top()
BOT = Bot()

LITERALS = (RelAtom, NegRelAtom, Equal, NotEqual, Top, Bot)
TEAM_ATOMS = (Dep, Anon, Incl, Excl, Ind)


def is_literal(phi: Formula) -> bool:
    return isinstance(phi, LITERALS)


def is_first_order(phi: Formula) -> bool:
    """True when phi uses only literals, And/Or and quantifiers."""
    if is_literal(phi):
        return True
    if isinstance(phi, (And, Or)):
        return is_first_order(phi.left) and is_first_order(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return is_first_order(phi.body)
    return False


def free_variables(phi: Formula) -> frozenset[str]:
    """Free variables; F, neg and some bind nothing, quantifiers bind one."""
    if isinstance(phi, (RelAtom, NegRelAtom)):
        return term_vars(phi.terms)
    if isinstance(phi, (Equal, NotEqual)):
        return term_vars((phi.left, phi.right))
    if isinstance(phi, (Top, Bot, NE)):
        return frozenset()
    if isinstance(phi, (Dep, Anon)):
        return term_vars(phi.prefix + (phi.target,))
    if isinstance(phi, (Incl, Excl)):
        return term_vars(phi.left + phi.right)
    if isinstance(phi, Ind):
        return term_vars(phi.condition + phi.left + phi.right)
    if isinstance(phi, (And, Or, BoolOr)):
        return free_variables(phi.left) | free_variables(phi.right)
    if isinstance(phi, Hook):
        return free_variables(phi.guard) | free_variables(phi.body)
    if isinstance(phi, (BoolNeg, SomeRow, Flat)):
        return free_variables(phi.body)
    if isinstance(phi, (Exists, Forall)):
        return free_variables(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def collect_relations(phi: Formula) -> dict[str, int]:
    """Relation symbols used in phi with their arities."""
    out: dict[str, int] = {}

    def walk(f: Formula) -> None:
        if isinstance(f, (RelAtom, NegRelAtom)):
            seen = out.get(f.name)
            if seen is not None and seen != len(f.terms):
                raise ValueError(f"relation {f.name!r} used with arities {seen} and {len(f.terms)}")
            out[f.name] = len(f.terms)
        elif isinstance(f, (And, Or, BoolOr)):
            walk(f.left), walk(f.right)
        elif isinstance(f, Hook):
            walk(f.guard), walk(f.body)
        elif isinstance(f, (BoolNeg, SomeRow, Flat, Exists, Forall)):
            walk(f.body)

    walk(phi)
    return out


def negate_fo(phi: Formula) -> Formula:
    """Classical negation of a first-order formula, pushed to the literals."""
    if isinstance(phi, RelAtom):
        return NegRelAtom(phi.name, phi.terms)
    if isinstance(phi, NegRelAtom):
        return RelAtom(phi.name, phi.terms)
    if isinstance(phi, Equal):
        return NotEqual(phi.left, phi.right)
    if isinstance(phi, NotEqual):
        return Equal(phi.left, phi.right)
    if isinstance(phi, Top):
        return Bot()
    if isinstance(phi, Bot):
        return Top()
    if isinstance(phi, And):
        return Or(negate_fo(phi.left), negate_fo(phi.right))
    if isinstance(phi, Or):
        return And(negate_fo(phi.left), negate_fo(phi.right))
    if isinstance(phi, Exists):
        return Forall(phi.var, negate_fo(phi.body))
    if isinstance(phi, Forall):
        return Exists(phi.var, negate_fo(phi.body))
    raise ValueError(f"cannot negate non-first-order formula: {render(phi)}")


def desugar_hook(phi: Formula) -> Formula:
    """Replace every guard => body with (!guard) | (guard & body)."""
    if isinstance(phi, Hook):
        return Or(negate_fo(phi.guard), And(phi.guard, desugar_hook(phi.body)))
    if isinstance(phi, And):
        return And(desugar_hook(phi.left), desugar_hook(phi.right))
    if isinstance(phi, Or):
        return Or(desugar_hook(phi.left), desugar_hook(phi.right))
    if isinstance(phi, BoolOr):
        return BoolOr(desugar_hook(phi.left), desugar_hook(phi.right))
    if isinstance(phi, BoolNeg):
        return BoolNeg(desugar_hook(phi.body))
    if isinstance(phi, SomeRow):
        return SomeRow(desugar_hook(phi.body))
    if isinstance(phi, Flat):
        return Flat(desugar_hook(phi.body))
    if isinstance(phi, Exists):
        return Exists(phi.var, desugar_hook(phi.body))
    if isinstance(phi, Forall):
        return Forall(phi.var, desugar_hook(phi.body))
    return phi


def substitute_rel_atoms(phi: Formula, rel: str,
                         build: Callable[[tuple[Term, ...]], Formula]) -> Formula:
    """Replace every atom of relation `rel` in a first-order formula.

    Positive occurrences R(t...) become build(t...); negated ones become
    the pushed-in classical negation of build(t...).  The builder must
    return a first-order formula.
    """
    if not is_first_order(phi):
        raise ValueError("substitution is defined for first-order formulas only")

    def walk(f: Formula) -> Formula:
        if isinstance(f, RelAtom) and f.name == rel:
            out = build(f.terms)
            if not is_first_order(out):
                raise ValueError("substitution builder produced a non-first-order formula")
            return out
        if isinstance(f, NegRelAtom) and f.name == rel:
            return negate_fo(build(f.terms))
        if isinstance(f, And):
            return And(walk(f.left), walk(f.right))
        if isinstance(f, Or):
            return Or(walk(f.left), walk(f.right))
        if isinstance(f, Exists):
            return Exists(f.var, walk(f.body))
        if isinstance(f, Forall):
            return Forall(f.var, walk(f.body))
        return f

    return walk(phi)


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_KEYWORDS = {"TOP", "BOT", "NE", "dep", "const", "anon", "nonconst",
             "inc", "exc", "ind", "vv", "F", "neg", "some"}


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | const | punct | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "#":
            m = _NAME_RE.match(text, i + 1)
            if not m:
                raise ParseError("expected a name after '#'", i)
            tokens.append(_Token("const", m.group(), i))
            i = m.end()
            continue
        m = _NAME_RE.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), i))
            i = m.end()
            continue
        if text.startswith("!=", i):
            tokens.append(_Token("punct", "!=", i))
            i += 2
            continue
        if text.startswith("=>", i):
            tokens.append(_Token("punct", "=>", i))
            i += 2
            continue
        if c in "()=,;.&|!":
            tokens.append(_Token("punct", c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0
        self.rel_arity: dict[str, int] = {}

    def peek(self, k: int = 0) -> _Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            raise ParseError(f"expected {text!r}", tok.pos)
        return self.advance()

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind != "end"

    # precedence ladder, loosest first
    def formula(self) -> Formula:
        left = self.hook()
        while self.peek().kind == "ident" and self.peek().text == "vv":
            self.advance()
            left = BoolOr(left, self.hook())
        return left

    def hook(self) -> Formula:
        left = self.disjunction()
        if self.at("=>"):
            tok = self.advance()
            right = self.hook()
            try:
                return Hook(left, right)
            except ValueError as exc:
                raise ParseError(str(exc), tok.pos) from None
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.at("|"):
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.at("&"):
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "F":
            self.advance()
            return Flat(self.unary())
        if tok.kind == "ident" and tok.text == "neg":
            self.advance()
            return BoolNeg(self.unary())
        if tok.kind == "ident" and tok.text == "some":
            self.advance()
            return SomeRow(self.unary())
        if tok.kind == "punct" and tok.text == "!":
            self.advance()
            inner = self.unary()
            try:
                return negate_fo(inner)
            except ValueError:
                raise ParseError("'!' applies to first-order formulas only", tok.pos) from None
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok.text == "(" and tok.kind == "punct":
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            name = tok.text
            if name in ("E", "A") and self.peek(1).kind == "ident" and self.peek(2).text == ".":
                self.advance()
                var = self.advance().text
                self.expect(".")
                body = self.formula()
                return Exists(var, body) if name == "E" else Forall(var, body)
            if name == "TOP":
                self.advance()
                return Top()
            if name == "BOT":
                self.advance()
                return Bot()
            if name == "NE":
                self.advance()
                return NE()
            if name in ("dep", "anon"):
                return self.prefixed_atom(name)
            if name in ("const", "nonconst"):
                self.advance()
                self.expect("(")
                t = self.term()
                self.expect(")")
                return Dep((), t) if name == "const" else Anon((), t)
            if name in ("inc", "exc"):
                return self.paired_atom(name)
            if name == "ind":
                return self.independence_atom()
            if name in _KEYWORDS:
                raise ParseError(f"misplaced keyword {name!r}", tok.pos)
            if self.peek(1).text == "(":
                return self.relation_atom()
            return self.equality_atom()
        if tok.kind == "const":
            return self.equality_atom()
        raise ParseError("expected a formula", tok.pos)

    def relation_atom(self) -> Formula:
        tok = self.advance()
        self.expect("(")
        terms = self.term_list(allow_empty=False)
        self.expect(")")
        seen = self.rel_arity.get(tok.text)
        if seen is not None and seen != len(terms):
            raise ParseError(
                f"relation {tok.text!r} used with arities {seen} and {len(terms)}", tok.pos)
        self.rel_arity[tok.text] = len(terms)
        return RelAtom(tok.text, tuple(terms))

    def equality_atom(self) -> Formula:
        left = self.term()
        tok = self.peek()
        if tok.text == "=":
            self.advance()
            return Equal(left, self.term())
        if tok.text == "!=":
            self.advance()
            return NotEqual(left, self.term())
        raise ParseError("expected '=' or '!=' after a term", tok.pos)

    def prefixed_atom(self, name: str) -> Formula:
        self.advance()
        self.expect("(")
        prefix = self.term_list(allow_empty=True)
        self.expect(";")
        target = self.term()
        self.expect(")")
        return Dep(tuple(prefix), target) if name == "dep" else Anon(tuple(prefix), target)

    def paired_atom(self, name: str) -> Formula:
        tok = self.advance()
        self.expect("(")
        left = self.term_list(allow_empty=False)
        self.expect(";")
        right = self.term_list(allow_empty=False)
        self.expect(")")
        if len(left) != len(right):
            raise ParseError(f"{name!r} sides must have equal length", tok.pos)
        cls = Incl if name == "inc" else Excl
        return cls(tuple(left), tuple(right))

    def independence_atom(self) -> Formula:
        tok = self.advance()
        self.expect("(")
        condition = self.term_list(allow_empty=True)
        self.expect(";")
        left = self.term_list(allow_empty=False)
        self.expect(";")
        right = self.term_list(allow_empty=False)
        self.expect(")")
        try:
            return Ind(tuple(condition), tuple(left), tuple(right))
        except ValueError as exc:
            raise ParseError(str(exc), tok.pos) from None

    def term_list(self, allow_empty: bool) -> list[Term]:
        if self.peek().text in (";", ")"):
            if not allow_empty:
                raise ParseError("expected at least one term", self.peek().pos)
            return []
        terms = [self.term()]
        while self.at(","):
            self.advance()
            terms.append(self.term())
        return terms

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind == "ident":
            if tok.text in _KEYWORDS:
                raise ParseError(f"keyword {tok.text!r} cannot be a term", tok.pos)
            self.advance()
            return Var(tok.text)
        if tok.kind == "const":
            self.advance()
            return Const(tok.text)
        raise ParseError("expected a term", tok.pos)


def parse(text: str) -> Formula:
    """Parse a formula; raises ParseError with a position on bad input."""
    parser = _Parser(_tokenize(text))
    phi = parser.formula()
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(f"unexpected trailing input {tail.text!r}", tail.pos)
    return phi


# ---------------------------------------------------------------------------
# printing

_ATOM = 6
_PREFIX = 5


def render(phi: Formula) -> str:
    """Print a formula so that parse(render(phi)) == phi."""
    return _render(phi, 0)


def _terms(ts: Iterable[Term]) -> str:
    return ",".join(str(t) for t in ts)


def _render(phi: Formula, ctx: int) -> str:
    if isinstance(phi, Exists):
        s, prec = f"E {phi.var}. {_render(phi.body, 0)}", 0
    elif isinstance(phi, Forall):
        s, prec = f"A {phi.var}. {_render(phi.body, 0)}", 0
    elif isinstance(phi, BoolOr):
        s, prec = f"{_render(phi.left, 1)} vv {_render(phi.right, 2)}", 1
    elif isinstance(phi, Hook):
        s, prec = f"{_render(phi.guard, 3)} => {_render(phi.body, 2)}", 2
    elif isinstance(phi, Or):
        s, prec = f"{_render(phi.left, 3)} | {_render(phi.right, 4)}", 3
    elif isinstance(phi, And):
        s, prec = f"{_render(phi.left, 4)} & {_render(phi.right, 5)}", 4
    elif isinstance(phi, Flat):
        s, prec = f"F {_render(phi.body, _PREFIX)}", _PREFIX
    elif isinstance(phi, BoolNeg):
        s, prec = f"neg {_render(phi.body, _PREFIX)}", _PREFIX
    elif isinstance(phi, SomeRow):
        s, prec = f"some {_render(phi.body, _PREFIX)}", _PREFIX
    else:
        s, prec = _render_atom(phi), _ATOM
    return f"({s})" if prec < ctx else s


def _render_atom(phi: Formula) -> str:
    if isinstance(phi, RelAtom):
        return f"{phi.name}({_terms(phi.terms)})"
    if isinstance(phi, NegRelAtom):
        return f"!{phi.name}({_terms(phi.terms)})"
    if isinstance(phi, Equal):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, NotEqual):
        return f"{phi.left} != {phi.right}"
    if isinstance(phi, Top):
        return "TOP"
    if isinstance(phi, Bot):
        return "BOT"
    if isinstance(phi, NE):
        return "NE"
    if isinstance(phi, Dep):
        if not phi.prefix:
            return f"const({phi.target})"
        return f"dep({_terms(phi.prefix)}; {phi.target})"
    if isinstance(phi, Anon):
        if not phi.prefix:
            return f"nonconst({phi.target})"
        return f"anon({_terms(phi.prefix)}; {phi.target})"
    if isinstance(phi, Incl):
        return f"inc({_terms(phi.left)}; {_terms(phi.right)})"
    if isinstance(phi, Excl):
        return f"exc({_terms(phi.left)}; {_terms(phi.right)})"
    if isinstance(phi, Ind):
        return f"ind({_terms(phi.condition)}; {_terms(phi.left)}; {_terms(phi.right)})"
    raise TypeError(f"not a formula: {phi!r}")
