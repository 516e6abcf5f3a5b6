"""Parser for ``.kss`` digit-system descriptions.

Grammar::

    spec   := "base" INT "dim" INT item*
    item   := "state" IDENT ["initial"]
            | "edge" IDENT "-(" INT ("," INT)* ")->" IDENT
            | "allow" "(" INT ("," INT)* ")"

``#`` starts a comment running to the end of the line.  ``allow`` declares a
single implicit initial state with a self-loop per line and cannot be mixed
with explicit ``state``/``edge`` items.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import MAX_BASE, MAX_DIM, SetAutomaton, trim
from .errors import (
    ArityMismatchError,
    DeadStateError,
    DigitRangeError,
    DuplicateStateError,
    EmptySetError,
    KssSyntaxError,
    MultipleInitialError,
    NoInitialError,
    UnknownStateError,
)

KEYWORDS = {"base", "dim", "state", "initial", "edge", "allow"}
IMPLICIT_STATE = "q"

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<int>[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<arrow>->)|(?P<sym>[-(),])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "kw", "sym", "eof"
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class StateDecl:
    name: str
    initial: bool
    line: int
    col: int


@dataclass(frozen=True)
class EdgeDecl:
    source: str
    digits: tuple
    target: str
    line: int
    col: int


@dataclass(frozen=True)
class AllowDecl:
    digits: tuple
    line: int
    col: int


@dataclass(frozen=True)
class DigitSystemSpec:
    k: int
    d: int
    declarations: tuple = ()
    name: str | None = field(default=None, compare=False)

    @property
    def is_sugar(self) -> bool:
        return any(isinstance(x, AllowDecl) for x in self.declarations)

    def initial_state(self) -> str:
        if self.is_sugar:
            return IMPLICIT_STATE
        return next(x.name for x in self.declarations if isinstance(x, StateDecl) and x.initial)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise KssSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "int":
            tokens.append(Token("int", value, line, col))
        elif kind == "ident":
            tokens.append(Token("kw" if value in KEYWORDS else "ident", value, line, col))
        elif kind in ("arrow", "sym"):
            tokens.append(Token("sym", value, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0
        self.edge_ends = []

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise KssSyntaxError(f"unexpected {found}", t.line, t.col, expected)

    def expect(self, kind, text=None, what=None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            self.fail([what or repr(text) or kind])
        self.i += 1
        return t

    def accept(self, kind, text) -> bool:
        if self.tok.kind == kind and self.tok.text == text:
            self.i += 1
            return True
        return False

    def tuple_body(self) -> list[Token]:
        # after "(": INT ("," INT)* ")"
        ints = [self.expect("int", what="INT")]
        while self.accept("sym", ","):
            ints.append(self.expect("int", what="INT"))
        self.expect("sym", ")")
        return ints

    def parse(self, name=None) -> DigitSystemSpec:
        self.expect("kw", "base")
        k_tok = self.expect("int", what="INT")
        self.expect("kw", "dim")
        d_tok = self.expect("int", what="INT")
        k, d = int(k_tok.text), int(d_tok.text)
        if not 2 <= k <= MAX_BASE:
            raise KssSyntaxError(f"base {k} outside supported range [2, {MAX_BASE}]", k_tok.line, k_tok.col)
        if not 1 <= d <= MAX_DIM:
            raise KssSyntaxError(f"dim {d} outside supported range [1, {MAX_DIM}]", d_tok.line, d_tok.col)

        def digits_of(ints):
            if len(ints) != d:
                raise ArityMismatchError(f"tuple has {len(ints)} entries, dim is {d}", ints[0].line, ints[0].col)
            for t in ints:
                if int(t.text) >= k:
                    raise DigitRangeError(f"digit {t.text} outside [0, {k})", t.line, t.col)
            return tuple(int(t.text) for t in ints)

        decls = []
        sugar = explicit = None
        states: dict[str, StateDecl] = {}
        initial = None
        while self.tok.kind != "eof":
            t = self.tok
            if self.accept("kw", "allow"):
                if explicit is not None:
                    raise KssSyntaxError("'allow' cannot be mixed with explicit states", t.line, t.col)
                sugar = t
                self.expect("sym", "(")
                decls.append(AllowDecl(digits_of(self.tuple_body()), t.line, t.col))
            elif self.accept("kw", "state"):
                if sugar is not None:
                    raise KssSyntaxError("'state' cannot be mixed with 'allow'", t.line, t.col)
                explicit = t
                name_tok = self.expect("ident", what="IDENT")
                is_init = self.accept("kw", "initial")
                if name_tok.text in states:
                    raise DuplicateStateError(f"state {name_tok.text!r} declared twice", name_tok.line, name_tok.col)
                if is_init:
                    if initial is not None:
                        raise MultipleInitialError(
                            f"second initial state {name_tok.text!r} (first: {initial.name!r})",
                            name_tok.line, name_tok.col,
                        )
                decl = StateDecl(name_tok.text, is_init, t.line, t.col)
                if is_init:
                    initial = decl
                states[decl.name] = decl
                decls.append(decl)
            elif self.accept("kw", "edge"):
                if sugar is not None:
                    raise KssSyntaxError("'edge' cannot be mixed with 'allow'", t.line, t.col)
                explicit = t
                src = self.expect("ident", what="IDENT")
                self.expect("sym", "-", what="'-('")
                self.expect("sym", "(", what="'-('")
                digits = digits_of(self.tuple_body())
                self.expect("sym", "->", what="')->'")
                dst = self.expect("ident", what="IDENT")
                decls.append(EdgeDecl(src.text, digits, dst.text, t.line, t.col))
                # endpoints checked once all states are known
                self.edge_ends.append((src, dst))
            else:
                self.fail(["'state'", "'edge'", "'allow'", "end of input"])

        for src, dst in self.edge_ends:
            for tok in (src, dst):
                if tok.text not in states:
                    raise UnknownStateError(f"state {tok.text!r} is not declared", tok.line, tok.col)
        if initial is None and sugar is None:
            t = self.tok
            raise NoInitialError("no initial state declared", t.line, t.col)
        return DigitSystemSpec(k, d, tuple(decls), name)


def parse_spec(text: str, name: str | None = None) -> DigitSystemSpec:
    return _Parser(text).parse(name)


def validate(spec: DigitSystemSpec) -> SetAutomaton:
    """Build the trim automaton; a declared state without an infinite continuation is an error."""
    if spec.is_sugar:
        edges = [(IMPLICIT_STATE, x.digits, IMPLICIT_STATE) for x in spec.declarations]
        a = SetAutomaton.from_edges(spec.k, spec.d, [IMPLICIT_STATE], [IMPLICIT_STATE], edges)
        return trim(a)

    state_decls = [x for x in spec.declarations if isinstance(x, StateDecl)]
    edges = [(x.source, x.digits, x.target) for x in spec.declarations if isinstance(x, EdgeDecl)]
    a = SetAutomaton.from_edges(
        spec.k, spec.d, [s.name for s in state_decls], [spec.initial_state()], edges
    )
    # liveness is checked on the whole automaton, reachability is not required
    everything = SetAutomaton(a.k, a.d, a.states, frozenset(a.states), a.transitions)
    try:
        live = set(trim(everything).states)
    except EmptySetError:
        live = set()
    for s in state_decls:
        if s.name not in live:
            raise DeadStateError(s.name, s.line, s.col)
    return trim(a)


def print_spec(spec: DigitSystemSpec) -> str:
    """Canonical text; ``print_spec(parse_spec(t)) == t`` for canonical ``t``."""
    lines = [f"base {spec.k}", f"dim {spec.d}"]
    for x in spec.declarations:
        if isinstance(x, AllowDecl):
            lines.append(f"allow ({','.join(map(str, x.digits))})")
        elif isinstance(x, StateDecl):
            lines.append(f"state {x.name}" + (" initial" if x.initial else ""))
        else:
            lines.append(f"edge {x.source} -({','.join(map(str, x.digits))})-> {x.target}")
    return "\n".join(lines) + "\n"


def load_spec(path) -> SetAutomaton:
    from pathlib import Path

    path = Path(path)
    return validate(parse_spec(path.read_text(encoding="utf-8"), name=path.stem))
