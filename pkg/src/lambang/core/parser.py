"""Recursive-descent parser for the concrete syntax.

::

    value v ::= x | \\x. e | !e
    comp  e ::= a | return v | v v | let x = e in e | let !a = v in e | op(e, ..., e)
    type  t ::= X | !t | t -o t | mu X. t -o t | mu X. !t
    file    ::= (def name : type = term)*

An identifier is a linear variable in value position and a non-linear
variable in computation position.  ``name(`` with no space before the
parenthesis is an operation call when ``name`` is an operation symbol.
Comments run from ``#`` or ``--`` to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .terms import (
    Abs, App, Bang, CoSeq, Hole, LinVar, NonLinVar, Op, Return, Seq, Term, subst,
)
from .types import TBang, TLolli, TMuBang, TMuLolli, TVar, Type

KEYWORDS = {"let", "in", "return", "def", "mu"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>(\#|--)[^\n]*)
  | (?P<lolli>-o\b)
  | (?P<hole>\[-\])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[\\.!=(),:])
""", re.VERBOSE)

_OP_SHAPE = re.compile(r"choice|read|print_[A-Za-z0-9]")


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message, self.line, self.col = message, line, col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    end: int  # offset just past the token


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            t = m.group()
            if kind == "ident" and t in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, t, line, pos - line_start + 1, m.end()))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1, pos))
    return out


# Raw nodes keep identifiers unresolved until their syntactic class is known.
@dataclass(frozen=True)
class _Raw:
    tag: str
    args: tuple
    tok: Token


class _Parser:
    def __init__(self, text: str, ops: Mapping[str, int] | None):
        self.toks = tokenize(text)
        self.i = 0
        self.ops = ops

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("sym", "kw", "lolli", "hole")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.error(f"expected an identifier, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    # -- terms
    def expr(self) -> _Raw:
        t = self.tok
        if self.at("let"):
            self.advance()
            if self.at("!"):
                self.advance()
                var = self.ident().text
                self.expect("=")
                v = self.expr()
                self.expect("in")
                return _Raw("coseq", (v, var, self.expr()), t)
            var = self.ident().text
            self.expect("=")
            e = self.expr()
            self.expect("in")
            return _Raw("seq", (e, var, self.expr()), t)
        if self.at("return"):
            self.advance()
            arg = self.lam() if self.at("\\") else self.atom()
            return _Raw("return", (arg,), t)
        if self.at("\\"):
            return self.lam()
        head = self.atom()
        if self._atom_start():
            arg = self.lam() if self.at("\\") else self.atom()
            return _Raw("app", (head, arg), t)
        return head

    def lam(self) -> _Raw:
        t = self.expect("\\")
        var = self.ident().text
        self.expect(".")
        return _Raw("abs", (var, self.expr()), t)

    def _atom_start(self) -> bool:
        t = self.tok
        return t.kind in ("ident", "hole") or (t.kind == "sym" and t.text in ("!", "(", "\\"))

    def atom(self) -> _Raw:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            nxt = self.tok
            if nxt.text == "(" and nxt.kind == "sym" and nxt.end - 1 == t.end and self._is_op(t):
                return self.op_call(t)
            return _Raw("id", (t.text,), t)
        if t.kind == "hole":
            self.advance()
            return _Raw("hole", (), t)
        if self.at("!"):
            self.advance()
            return _Raw("bang", (self.atom(),), t)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    def _is_op(self, t: Token) -> bool:
        if self.ops is not None and t.text in self.ops:
            return True
        if _OP_SHAPE.fullmatch(t.text):
            if self.ops is None:
                return True
            raise self.error(f"unknown operation symbol {t.text!r} for the configured monad", t)
        return False

    def op_call(self, t: Token) -> _Raw:
        self.expect("(")
        args = [self.expr()]
        while self.at(","):
            self.advance()
            args.append(self.expr())
        self.expect(")")
        if self.ops is not None and self.ops[t.text] != len(args):
            raise self.error(f"operation {t.text} expects {self.ops[t.text]} arguments, got {len(args)}", t)
        return _Raw("op", (t.text, tuple(args)), t)

    # -- types
    def type_(self) -> Type:
        if self.at("mu"):
            t = self.advance()
            var = self.ident().text
            self.expect(".")
            body = self.type_()
            if isinstance(body, TLolli):
                return TMuLolli(var, body.arg, body.res)
            if isinstance(body, TBang):
                return TMuBang(var, body.body)
            raise self.error("the body of mu must be an arrow or a bang type", t)
        left = self.unary_type()
        if self.tok.kind == "lolli":
            self.advance()
            return TLolli(left, self.type_())
        return left

    def unary_type(self) -> Type:
        if self.at("!"):
            self.advance()
            return TBang(self.unary_type())
        if self.at("("):
            self.advance()
            t = self.type_()
            self.expect(")")
            return t
        return TVar(self.ident().text)

    def end(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r} after end of term")


def _resolve(r: _Raw, expect: str | None) -> Term:
    """Turn a raw node into a term; ``expect`` is 'value', 'comp' or None."""
    tag, a = r.tag, r.args

    def need(kind: str, term: Term) -> Term:
        if expect == "value" and kind != "value":
            raise ParseError("expected a value here, found a computation", r.tok.line, r.tok.col)
        if expect == "comp" and kind != "comp":
            raise ParseError("expected a computation here, found a value (use return)",
                             r.tok.line, r.tok.col)
        return term

    if tag == "id":
        return LinVar(a[0]) if expect == "value" else NonLinVar(a[0])
    if tag == "hole":
        return need("comp", Hole())
    if tag == "abs":
        return need("value", Abs(a[0], _resolve(a[1], "comp")))
    if tag == "bang":
        return need("value", Bang(_resolve(a[0], "comp")))
    if tag == "return":
        return need("comp", Return(_resolve(a[0], "value")))
    if tag == "app":
        return need("comp", App(_resolve(a[0], "value"), _resolve(a[1], "value")))
    if tag == "seq":
        return need("comp", Seq(_resolve(a[0], "comp"), a[1], _resolve(a[2], "comp")))
    if tag == "coseq":
        return need("comp", CoSeq(_resolve(a[0], "value"), a[1], _resolve(a[2], "comp")))
    if tag == "op":
        return need("comp", Op(a[0], tuple(_resolve(x, "comp") for x in a[1])))
    raise AssertionError(tag)


def parse_term(text: str, ops: Mapping[str, int] | None = None,
               expect: str | None = None) -> Term:
    """Parse one term.

    ``ops`` is the operation signature of the active monad; ``None`` accepts
    every built-in operation symbol.  A bare identifier at top level parses
    as a non-linear variable unless ``expect='value'``.
    """
    p = _Parser(text, ops)
    raw = p.expr()
    p.end()
    return _resolve(raw, expect)


def parse_type(text: str) -> Type:
    p = _Parser(text, None)
    t = p.type_()
    p.end()
    return t


@dataclass(frozen=True)
class Definition:
    name: str
    type: Type
    term: Term  # after expansion of earlier definitions
    line: int


def parse_program(text: str, ops: Mapping[str, int] | None = None) -> list[Definition]:
    """Parse ``def name : type = term`` definitions, expanding earlier names.

    A value definition used in computation position is read as ``return v``.
    """
    p = _Parser(text, ops)
    defs: list[Definition] = []
    known: dict[str, Term] = {}
    while p.tok.kind != "eof":
        start = p.expect("def")
        name = p.ident().text
        p.expect(":")
        ty = p.type_()
        p.expect("=")
        raw = p.expr()
        term = _resolve(raw, None)
        term = _expand(term, known, start)
        defs.append(Definition(name, ty, term, start.line))
        known[name] = term
    if not defs:
        raise ParseError("expected at least one definition", 1, 1)
    return defs


def _expand(term: Term, known: Mapping[str, Term], tok: Token) -> Term:
    lin = {}
    for x in term.free_lin & known.keys():
        if not known[x].is_value:
            raise ParseError(f"definition {x!r} is a computation but is used as a value",
                             tok.line, tok.col)
        lin[x] = known[x]
    nonlin = {}
    for a in term.free_nonlin & known.keys():
        nonlin[a] = known[a] if not known[a].is_value else Return(known[a])
    return subst(term, lin=lin, nonlin=nonlin)


def main_definition(defs: list[Definition]) -> Definition:
    """The definition named ``main`` if present, else the last one."""
    for d in defs:
        if d.name == "main":
            return d
    return defs[-1]
