"""Parser, checker and pretty-printer for a small BC-style action language.

A domain file is a sequence of statements, each terminated by ``.``::

    % comments run to end of line
    sort dir = {e, s, w, n}.
    sort row = 1..20.
    sort cell = row * col.
    fluent pos : cell.            % multi-valued, written pos(X, Y)
    fluent dooropen.              % boolean, written dooropen / ~dooropen
    action move(dir).
    inertial pos.
    default ~dooropen.
    move(e) causes pos(X, Y+1) if pos(X, Y).
    nonexecutable move(e) if pos(X, 20).
    atdoor if pos(9, 9).

See ``docs/grammar.md`` for the EBNF.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union

KEYWORDS = frozenset({"sort", "fluent", "action", "causes", "if", "nonexecutable", "inertial", "default"})


class LawKind(str, Enum):
    STATIC = "static"
    DYNAMIC = "dynamic"
    NONEXECUTABLE = "nonexecutable"
    INERTIAL = "inertial"
    DEFAULT = "default"


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    offset: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(ValueError):
    """Raised when a domain file cannot be turned into an action description."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class Pos:
    line: int = 0
    column: int = 0
    offset: int = 0


NOPOS = Pos()


# -- terms --------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Union[int, str]

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Var:
    name: str
    offset: int = 0

    def __str__(self) -> str:
        if self.offset > 0:
            return f"{self.name}+{self.offset}"
        if self.offset < 0:
            return f"{self.name}-{-self.offset}"
        return self.name


Term = Union[Const, Var]
# A fluent value: a term, a tuple of terms (product sorts) or a boolean.
Value = Union[Const, Var, tuple, bool]


@dataclass(frozen=True)
class Atom:
    fluent: str
    args: tuple = ()
    value: Value = True
    pos: Pos = field(default=NOPOS, compare=False, repr=False)

    def variables(self) -> set[str]:
        out = {t.name for t in self.args if isinstance(t, Var)}
        if isinstance(self.value, Var):
            out.add(self.value.name)
        elif isinstance(self.value, tuple):
            out |= {t.name for t in self.value if isinstance(t, Var)}
        return out


@dataclass(frozen=True)
class ActionTerm:
    name: str
    args: tuple = ()
    pos: Pos = field(default=NOPOS, compare=False, repr=False)

    def variables(self) -> set[str]:
        return {t.name for t in self.args if isinstance(t, Var)}

    def __str__(self) -> str:
        return _call(self.name, self.args)


@dataclass(frozen=True)
class Law:
    kind: LawKind
    head: Atom | None = None
    body: tuple = ()
    action: ActionTerm | None = None
    fluent: str | None = None  # inertial laws only
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


# -- declarations -------------------------------------------------------------


@dataclass(frozen=True)
class SortDecl:
    name: str
    elements: tuple = ()
    components: tuple = ()  # non-empty for product sorts, elements then hold tuples
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class FluentDecl:
    name: str
    arg_sorts: tuple = ()
    value_sort: str | None = None  # None means boolean
    pos: Pos = field(default=NOPOS, compare=False, repr=False)

    @property
    def boolean(self) -> bool:
        return self.value_sort is None


@dataclass(frozen=True)
class ActionDecl:
    name: str
    arg_sorts: tuple = ()
    pos: Pos = field(default=NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class ActionDescription:
    sorts: tuple = ()
    fluents: tuple = ()
    actions: tuple = ()
    laws: tuple = ()

    def sort(self, name: str) -> SortDecl | None:
        return next((s for s in self.sorts if s.name == name), None)

    def fluent(self, name: str) -> FluentDecl | None:
        return next((f for f in self.fluents if f.name == name), None)

    def action(self, name: str) -> ActionDecl | None:
        return next((a for a in self.actions if a.name == name), None)


def product_arity(desc: ActionDescription, decl: FluentDecl) -> int:
    """Number of components if the fluent takes values in a product sort, else 0."""
    if decl.value_sort is None:
        return 0
    sort = desc.sort(decl.value_sort)
    return len(sort.components) if sort is not None else 0


def uses_shorthand(desc: ActionDescription, decl: FluentDecl) -> bool:
    """Zero-argument product-valued fluents are written ``f(v1, ..., vn)``."""
    return not decl.arg_sorts and product_arity(desc, decl) > 0


# -- lexer --------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<COMMENT>%[^\n]*)
  | (?P<NEWLINE>\n)
  | (?P<SKIP>[ \t\r]+)
  | (?P<RANGE>\.\.)
  | (?P<INT>\d+)
  | (?P<NAME>[a-z][A-Za-z0-9_]*)
  | (?P<VAR>[A-Z][A-Za-z0-9_]*)
  | (?P<PUNCT>[.,(){}=:*~+-])
  | (?P<MISMATCH>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: Pos


def tokenize(text: str) -> Iterator[Token]:
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        pos = Pos(line, m.start() - line_start + 1, m.start())
        if kind == "NEWLINE":
            line, line_start = line + 1, m.end()
            continue
        if kind in ("COMMENT", "SKIP"):
            continue
        if kind == "NAME" and m.group() in KEYWORDS:
            kind = "KEYWORD"
        elif kind == "PUNCT":
            kind = m.group()
        yield Token(kind, m.group(), pos)
    yield Token("EOF", "", Pos(line, len(text) - line_start + 1, len(text)))


# -- parser -------------------------------------------------------------------


class _Syntax(Exception):
    def __init__(self, token: Token, expected: str):
        self.token = token
        self.expected = expected


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.i = 0
        self.sorts: list[SortDecl] = []
        self.fluents: list[FluentDecl] = []
        self.actions: list[ActionDecl] = []
        self.laws: list[Law] = []
        self.diagnostics: list[Diagnostic] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i = min(self.i + 1, len(self.tokens) - 1)
        return t

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            return self.advance()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.accept(kind, text)
        if t is None:
            raise _Syntax(self.tok, repr(text) if text else kind)
        return t

    def error(self, pos: Pos, message: str) -> None:
        self.diagnostics.append(Diagnostic(pos.line, pos.column, pos.offset, message))

    def recover(self) -> None:
        while self.tok.kind not in (".", "EOF"):
            self.advance()
        self.accept(".")

    # grammar
    def parse(self) -> ActionDescription:
        while self.tok.kind != "EOF":
            start = self.i
            try:
                self.statement()
            except _Syntax as e:
                self.error(e.token.pos, f"syntax error: expected {e.expected}, found {e.token.text or 'end of input'!r}")
                if self.i == start:
                    self.advance()
                self.recover()
        return ActionDescription(tuple(self.sorts), tuple(self.fluents), tuple(self.actions), tuple(self.laws))

    def statement(self) -> None:
        t = self.tok
        if t.kind == "KEYWORD":
            handler = {
                "sort": self.sort_decl,
                "fluent": self.fluent_decl,
                "action": self.action_decl,
                "inertial": self.inertial_law,
                "default": self.default_law,
                "nonexecutable": self.nonexecutable_law,
            }.get(t.text)
            if handler is None:
                raise _Syntax(t, "statement")
            handler()
            return
        if t.kind == "NAME" and self.action_decl_named(t.text) is not None and self._is_dynamic():
            self.dynamic_law()
            return
        self.static_law()

    def _is_dynamic(self) -> bool:
        depth, j = 0, self.i + 1
        while j < len(self.tokens):
            k = self.tokens[j].kind
            if k == "(":
                depth += 1
            elif k == ")":
                depth -= 1
            elif depth == 0:
                return self.tokens[j].kind == "KEYWORD" and self.tokens[j].text == "causes"
            j += 1
        return False

    def action_decl_named(self, name: str) -> ActionDecl | None:
        return next((a for a in self.actions if a.name == name), None)

    def fluent_decl_named(self, name: str) -> FluentDecl | None:
        return next((f for f in self.fluents if f.name == name), None)

    def sort_decl_named(self, name: str) -> SortDecl | None:
        return next((s for s in self.sorts if s.name == name), None)

    def name_list(self) -> tuple:
        names = [self.expect("NAME").text]
        while self.accept(","):
            names.append(self.expect("NAME").text)
        return tuple(names)

    def sort_decl(self) -> None:
        kw = self.advance()
        name = self.expect("NAME").text
        self.expect("=")
        if self.accept("{"):
            elements = [self.constant()]
            while self.accept(","):
                elements.append(self.constant())
            self.expect("}")
            decl = SortDecl(name, tuple(elements), pos=kw.pos)
        elif self.tok.kind == "INT":
            lo = int(self.advance().text)
            self.expect("RANGE")
            hi = int(self.expect("INT").text)
            decl = SortDecl(name, tuple(range(lo, hi + 1)), pos=kw.pos)
        else:
            comps = [self.expect("NAME").text]
            self.expect("*")
            comps.append(self.expect("NAME").text)
            while self.accept("*"):
                comps.append(self.expect("NAME").text)
            elements = [()]
            for c in comps:
                sort = self.sort_decl_named(c)
                if sort is None:
                    self.error(kw.pos, f"undeclared symbol: sort {c!r}")
                    elements = []
                    break
                elements = [e + (v,) for e in elements for v in sort.elements]
            decl = SortDecl(name, tuple(elements), tuple(comps), pos=kw.pos)
        self.expect(".")
        self.sorts.append(decl)

    def constant(self) -> Union[int, str]:
        if self.tok.kind == "INT":
            return int(self.advance().text)
        if self.accept("-"):
            return -int(self.expect("INT").text)
        return self.expect("NAME").text

    def fluent_decl(self) -> None:
        kw = self.advance()
        name = self.expect("NAME").text
        args: tuple = ()
        if self.accept("("):
            args = self.name_list()
            self.expect(")")
        value_sort = None
        if self.accept(":"):
            value_sort = self.expect("NAME").text
        self.expect(".")
        self.fluents.append(FluentDecl(name, args, value_sort, pos=kw.pos))

    def action_decl(self) -> None:
        kw = self.advance()
        name = self.expect("NAME").text
        args: tuple = ()
        if self.accept("("):
            args = self.name_list()
            self.expect(")")
        self.expect(".")
        self.actions.append(ActionDecl(name, args, pos=kw.pos))

    def inertial_law(self) -> None:
        kw = self.advance()
        name = self.expect("NAME")
        self.expect(".")
        if self.fluent_decl_named(name.text) is None:
            self.error(name.pos, f"undeclared symbol: fluent {name.text!r}")
        self.laws.append(Law(LawKind.INERTIAL, fluent=name.text, pos=kw.pos))

    def default_law(self) -> None:
        kw = self.advance()
        head = self.atom()
        self.expect(".")
        self.laws.append(Law(LawKind.DEFAULT, head=head, pos=kw.pos))

    def nonexecutable_law(self) -> None:
        kw = self.advance()
        action = self.action_term()
        body = self.optional_body()
        self.expect(".")
        self.laws.append(Law(LawKind.NONEXECUTABLE, body=body, action=action, pos=kw.pos))

    def dynamic_law(self) -> None:
        start = self.tok.pos
        action = self.action_term()
        self.expect("KEYWORD", "causes")
        head = self.atom()
        body = self.optional_body()
        self.expect(".")
        self.laws.append(Law(LawKind.DYNAMIC, head=head, body=body, action=action, pos=start))

    def static_law(self) -> None:
        start = self.tok.pos
        head = self.atom()
        body = self.optional_body()
        self.expect(".")
        self.laws.append(Law(LawKind.STATIC, head=head, body=body, pos=start))

    def optional_body(self) -> tuple:
        if not self.accept("KEYWORD", "if"):
            return ()
        atoms = [self.atom()]
        while self.accept(","):
            atoms.append(self.atom())
        return tuple(atoms)

    def action_term(self) -> ActionTerm:
        name = self.expect("NAME")
        args = self.term_list() if self.tok.kind == "(" else ()
        decl = self.action_decl_named(name.text)
        if decl is None:
            self.error(name.pos, f"undeclared symbol: action {name.text!r}")
        elif len(decl.arg_sorts) != len(args):
            self.error(name.pos, f"arity mismatch: action {name.text!r} takes {len(decl.arg_sorts)} arguments, got {len(args)}")
        return ActionTerm(name.text, args, pos=name.pos)

    def term_list(self) -> tuple:
        self.expect("(")
        terms = [self.term()]
        while self.accept(","):
            terms.append(self.term())
        self.expect(")")
        return tuple(terms)

    def term(self) -> Term:
        if self.tok.kind == "VAR":
            name = self.advance().text
            if self.tok.kind in ("+", "-") and self.peek().kind == "INT":
                sign = 1 if self.advance().kind == "+" else -1
                return Var(name, sign * int(self.advance().text))
            return Var(name)
        return Const(self.constant())

    def atom(self) -> Atom:
        negated = self.accept("~") is not None
        name = self.expect("NAME")
        args = self.term_list() if self.tok.kind == "(" else ()
        value: Value = not negated
        explicit = False
        if self.accept("="):
            if negated:
                raise _Syntax(self.tok, "boolean atom after '~'")
            explicit = True
            value = self.term_list() if self.tok.kind == "(" else self.term()
        decl = self.fluent_decl_named(name.text)
        if decl is None:
            self.error(name.pos, f"undeclared symbol: fluent {name.text!r}")
            return Atom(name.text, args, value, pos=name.pos)
        desc = ActionDescription(tuple(self.sorts))
        if uses_shorthand(desc, decl) and not explicit and args:
            # pos(X, Y) abbreviates pos = (X, Y)
            if negated:
                self.error(name.pos, f"'~' applied to non-boolean fluent {name.text!r}")
            arity = product_arity(desc, decl)
            if len(args) != arity:
                self.error(name.pos, f"arity mismatch: fluent {name.text!r} takes {arity}-tuple values, got {len(args)}")
            return Atom(name.text, (), tuple(args), pos=name.pos)
        if len(args) != len(decl.arg_sorts):
            self.error(name.pos, f"arity mismatch: fluent {name.text!r} takes {len(decl.arg_sorts)} arguments, got {len(args)}")
        if decl.boolean and explicit:
            if isinstance(value, Const) and value.value in ("true", "false"):
                value = value.value == "true"
            else:
                self.error(name.pos, f"boolean fluent {name.text!r} compared with non-boolean value")
        elif not decl.boolean and not explicit:
            self.error(name.pos, f"fluent {name.text!r} is not boolean; write {name.text} = v")
        return Atom(name.text, args, value, pos=name.pos)


def parse_action_description(text: str) -> ActionDescription:
    """Parse a domain file; raises ParseError carrying positioned diagnostics."""
    parser = _Parser(text)
    desc = parser.parse()
    if parser.diagnostics:
        raise ParseError(parser.diagnostics)
    return desc


def parse_atoms(desc: ActionDescription, text: str) -> tuple:
    """Parse a comma-separated atom list such as ``pos(9,8), ~dooropen``."""
    parser = _Parser(text + " .")
    parser.sorts, parser.fluents, parser.actions = list(desc.sorts), list(desc.fluents), list(desc.actions)
    atoms = []
    try:
        if parser.tok.kind != ".":
            atoms.append(parser.atom())
            while parser.accept(","):
                atoms.append(parser.atom())
        parser.expect(".")
        parser.expect("EOF")
    except _Syntax as e:
        parser.error(e.token.pos, f"syntax error: expected {e.expected}, found {e.token.text or 'end of input'!r}")
    if parser.diagnostics:
        raise ParseError(parser.diagnostics)
    return tuple(atoms)


def parse_action_term(desc: ActionDescription, text: str) -> ActionTerm:
    parser = _Parser(text)
    parser.actions = list(desc.actions)
    try:
        term = parser.action_term()
        parser.expect("EOF")
    except _Syntax as e:
        parser.error(e.token.pos, f"syntax error: expected {e.expected}")
    if parser.diagnostics:
        raise ParseError(parser.diagnostics)
    return term


# -- validation ---------------------------------------------------------------


def _diag(pos: Pos, message: str) -> Diagnostic:
    return Diagnostic(pos.line, pos.column, pos.offset, message)


def validate(desc: ActionDescription) -> list[Diagnostic]:
    """Check declaration and law invariants, one diagnostic per violation."""
    out: list[Diagnostic] = []
    sort_names: set[str] = set()
    for s in desc.sorts:
        if s.name in sort_names:
            out.append(_diag(s.pos, f"duplicate sort {s.name!r}"))
        sort_names.add(s.name)
        if not s.elements:
            out.append(_diag(s.pos, f"sort {s.name!r} has an empty domain"))
        if len(set(s.elements)) != len(s.elements):
            out.append(_diag(s.pos, f"sort {s.name!r} has duplicate elements"))
        for c in s.components:
            if c not in sort_names:
                out.append(_diag(s.pos, f"undeclared symbol: sort {c!r}"))
    for decl in (*desc.fluents, *desc.actions):
        what = "fluent" if isinstance(decl, FluentDecl) else "action"
        for srt in decl.arg_sorts:
            if srt not in sort_names:
                out.append(_diag(decl.pos, f"undeclared symbol: sort {srt!r} in {what} {decl.name!r}"))
        if isinstance(decl, FluentDecl) and decl.value_sort is not None and decl.value_sort not in sort_names:
            out.append(_diag(decl.pos, f"undeclared symbol: sort {decl.value_sort!r} in fluent {decl.name!r}"))

    seen_defaults: dict[tuple, Law] = {}
    for law in desc.laws:
        out.extend(_check_law(desc, law))
        if law.kind is LawKind.DEFAULT and law.head is not None and not law.head.variables():
            key = (law.head.fluent, law.head.args)
            if key in seen_defaults:
                out.append(_diag(law.pos, f"duplicate default for {_call(law.head.fluent, law.head.args)}"))
            else:
                seen_defaults[key] = law
    return out


def _check_law(desc: ActionDescription, law: Law) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    if law.kind is LawKind.INERTIAL:
        if law.fluent is None or desc.fluent(law.fluent) is None:
            out.append(_diag(law.pos, f"undeclared symbol: fluent {law.fluent!r}"))
        if law.head is not None or law.body or law.action is not None:
            out.append(_diag(law.pos, "inertial law takes a fluent name only"))
        return out
    if law.kind in (LawKind.DYNAMIC, LawKind.NONEXECUTABLE):
        if law.action is None:
            out.append(_diag(law.pos, f"{law.kind.value} law needs exactly one action"))
        else:
            out.extend(_check_action(desc, law.action))
    elif law.action is not None:
        out.append(_diag(law.pos, f"{law.kind.value} law cannot mention an action"))
    if law.kind is LawKind.NONEXECUTABLE:
        if law.head is not None:
            out.append(_diag(law.pos, "nonexecutable law has no head"))
    elif law.head is None:
        out.append(_diag(law.pos, f"{law.kind.value} law needs a head atom"))
    else:
        out.extend(_check_atom(desc, law.head, law.pos))
    if law.kind is LawKind.DEFAULT and law.body:
        out.append(_diag(law.pos, "default law has no body"))
    for atom in law.body:
        out.extend(_check_atom(desc, atom, law.pos))

    bound: set[str] = set()
    for atom in law.body:
        bound |= {t.name for t in _plain_vars(atom)}
    if law.action is not None:
        bound |= {t.name for t in law.action.args if isinstance(t, Var) and t.offset == 0}
    used = set(law.head.variables()) if law.head is not None else set()
    for atom in law.body:
        used |= atom.variables()
    if law.action is not None:
        used |= law.action.variables()
    unsafe = sorted(used - bound)
    if unsafe:
        out.append(_diag(law.pos, f"unsafe variable(s) {', '.join(unsafe)}: not bound by the body or action"))
    return out


def _plain_vars(atom: Atom) -> list[Var]:
    terms = list(atom.args)
    if isinstance(atom.value, tuple):
        terms += list(atom.value)
    elif isinstance(atom.value, Var):
        terms.append(atom.value)
    return [t for t in terms if isinstance(t, Var) and t.offset == 0]


def _check_action(desc: ActionDescription, action: ActionTerm) -> list[Diagnostic]:
    decl = desc.action(action.name)
    pos = action.pos
    if decl is None:
        return [_diag(pos, f"undeclared symbol: action {action.name!r}")]
    if len(decl.arg_sorts) != len(action.args):
        return [_diag(pos, f"arity mismatch: action {action.name!r} takes {len(decl.arg_sorts)} arguments")]
    return [
        _diag(pos, f"constant {t.value!r} not in sort {srt!r}")
        for t, srt in zip(action.args, decl.arg_sorts)
        if isinstance(t, Const) and not _in_sort(desc, srt, t.value)
    ]


def _in_sort(desc: ActionDescription, sort_name: str, value) -> bool:
    sort = desc.sort(sort_name)
    return sort is not None and value in sort.elements


def _check_atom(desc: ActionDescription, atom: Atom, law_pos: Pos) -> list[Diagnostic]:
    pos = atom.pos if atom.pos != NOPOS else law_pos
    decl = desc.fluent(atom.fluent)
    if decl is None:
        return [_diag(pos, f"undeclared symbol: fluent {atom.fluent!r}")]
    out = []
    if len(decl.arg_sorts) != len(atom.args):
        return [_diag(pos, f"arity mismatch: fluent {atom.fluent!r} takes {len(decl.arg_sorts)} arguments")]
    for t, srt in zip(atom.args, decl.arg_sorts):
        if isinstance(t, Const) and not _in_sort(desc, srt, t.value):
            out.append(_diag(pos, f"constant {t.value!r} not in sort {srt!r}"))
    if decl.boolean:
        if not isinstance(atom.value, bool):
            out.append(_diag(pos, f"boolean fluent {atom.fluent!r} given a non-boolean value"))
        return out
    sort = desc.sort(decl.value_sort)
    if sort is None:
        return out
    if sort.components:
        if not isinstance(atom.value, tuple) or len(atom.value) != len(sort.components):
            out.append(_diag(pos, f"fluent {atom.fluent!r} takes {len(sort.components)}-tuple values"))
            return out
        for t, comp in zip(atom.value, sort.components):
            if isinstance(t, Const) and not _in_sort(desc, comp, t.value):
                out.append(_diag(pos, f"constant {t.value!r} not in sort {comp!r}"))
    elif isinstance(atom.value, (bool, tuple)):
        out.append(_diag(pos, f"fluent {atom.fluent!r} takes values in sort {decl.value_sort!r}"))
    elif isinstance(atom.value, Const) and atom.value.value not in sort.elements:
        out.append(_diag(pos, f"value {atom.value.value!r} not in sort {decl.value_sort!r}"))
    return out


# -- printing -----------------------------------------------------------------


def _call(name: str, args) -> str:
    if not args:
        return name
    return f"{name}({', '.join(str(a) for a in args)})"


def format_atom(desc: ActionDescription, atom: Atom) -> str:
    decl = desc.fluent(atom.fluent)
    if isinstance(atom.value, bool):
        text = _call(atom.fluent, atom.args)
        return text if atom.value else "~" + text
    if isinstance(atom.value, tuple):
        if decl is not None and uses_shorthand(desc, decl):
            return _call(atom.fluent, atom.value)
        return f"{_call(atom.fluent, atom.args)} = ({', '.join(str(v) for v in atom.value)})"
    return f"{_call(atom.fluent, atom.args)} = {atom.value}"


def _format_sort(s: SortDecl) -> str:
    if s.components:
        rhs = " * ".join(s.components)
    elif (
        len(s.elements) > 1
        and all(isinstance(e, int) and not isinstance(e, bool) for e in s.elements)
        and list(s.elements) == list(range(s.elements[0], s.elements[0] + len(s.elements)))
        and s.elements[0] >= 0
    ):
        rhs = f"{s.elements[0]}..{s.elements[-1]}"
    else:
        rhs = "{" + ", ".join(str(e) for e in s.elements) + "}"
    return f"sort {s.name} = {rhs}."


def format_law(desc: ActionDescription, law: Law) -> str:
    body = ""
    if law.body:
        body = " if " + ", ".join(format_atom(desc, a) for a in law.body)
    if law.kind is LawKind.INERTIAL:
        return f"inertial {law.fluent}."
    if law.kind is LawKind.DEFAULT:
        return f"default {format_atom(desc, law.head)}."
    if law.kind is LawKind.NONEXECUTABLE:
        return f"nonexecutable {law.action}{body}."
    if law.kind is LawKind.DYNAMIC:
        return f"{law.action} causes {format_atom(desc, law.head)}{body}."
    return f"{format_atom(desc, law.head)}{body}."


def pretty_print(desc: ActionDescription) -> str:
    lines = [_format_sort(s) for s in desc.sorts]
    for f in desc.fluents:
        value = f" : {f.value_sort}" if f.value_sort is not None else ""
        lines.append(f"fluent {_call(f.name, f.arg_sorts)}{value}.")
    lines += [f"action {_call(a.name, a.arg_sorts)}." for a in desc.actions]
    lines += [format_law(desc, law) for law in desc.laws]
    return "\n".join(lines) + "\n"
