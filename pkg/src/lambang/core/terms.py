"""Terms of the linear fine-grain call-by-value calculus.

Values are linear variables, abstractions and banged computations.
Computations are non-linear variables, ``return``, application of a value to
a value, the two sequencing forms and operation calls.  Linear and non-linear
variables live in separate namespaces: ``LinVar("x")`` and ``NonLinVar("x")``
are different variables and only binders of the matching kind capture them.

Terms are immutable and compared structurally.  Alpha-equivalence is decided
by comparing :func:`canonical` forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

HOLE = "[-]"
"""Key under which a context hole appears among the free linear names."""


class Term:
    is_value = False

    @cached_property
    def _hash(self) -> int:
        return hash((type(self).__name__,) + tuple(self.__dict__[f] for f in self._fields))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or hash(self) != hash(other):
            return False
        d, e = self.__dict__, other.__dict__
        return all(d[f] == e[f] for f in self._fields)

    @cached_property
    def size(self) -> int:
        """Number of AST nodes; variables and the hole count one each."""
        return 1 + sum(c.size for c in self.children())

    @cached_property
    def free_lin(self) -> frozenset[str]:
        out = frozenset().union(*(c.free_lin for c in self.children()))
        return out

    @cached_property
    def free_nonlin(self) -> frozenset[str]:
        return frozenset().union(*(c.free_nonlin for c in self.children()))

    @cached_property
    def hole_count(self) -> int:
        return sum(c.hole_count for c in self.children())

    @property
    def is_closed(self) -> bool:
        return not self.free_lin and not self.free_nonlin

    def children(self) -> tuple["Term", ...]:
        return ()

    def __str__(self) -> str:
        return show(self)


# -- values -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LinVar(Term):
    name: str
    _fields = ("name",)
    is_value = True

    @cached_property
    def free_lin(self) -> frozenset[str]:
        return frozenset((self.name,))


@dataclass(frozen=True, eq=False)
class Abs(Term):
    var: str
    body: Term
    _fields = ("var", "body")
    is_value = True

    def children(self):
        return (self.body,)

    @cached_property
    def free_lin(self) -> frozenset[str]:
        return self.body.free_lin - {self.var}


@dataclass(frozen=True, eq=False)
class Bang(Term):
    body: Term
    _fields = ("body",)
    is_value = True

    def children(self):
        return (self.body,)


# -- computations -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NonLinVar(Term):
    name: str
    _fields = ("name",)

    @cached_property
    def free_nonlin(self) -> frozenset[str]:
        return frozenset((self.name,))


@dataclass(frozen=True, eq=False)
class Hole(Term):
    """The placeholder ``[-]`` of a context; a computation."""

    _fields = ()

    @cached_property
    def free_lin(self) -> frozenset[str]:
        return frozenset((HOLE,))

    @cached_property
    def hole_count(self) -> int:
        return 1


@dataclass(frozen=True, eq=False)
class Return(Term):
    value: Term
    _fields = ("value",)

    def children(self):
        return (self.value,)


@dataclass(frozen=True, eq=False)
class App(Term):
    fn: Term
    arg: Term
    _fields = ("fn", "arg")

    def children(self):
        return (self.fn, self.arg)


@dataclass(frozen=True, eq=False)
class Seq(Term):
    """``let var = first in body`` with ``var`` linear."""

    first: Term
    var: str
    body: Term
    _fields = ("first", "var", "body")

    def children(self):
        return (self.first, self.body)

    @cached_property
    def free_lin(self) -> frozenset[str]:
        return self.first.free_lin | (self.body.free_lin - {self.var})


@dataclass(frozen=True, eq=False)
class CoSeq(Term):
    """``let !var = value in body`` with ``var`` non-linear."""

    value: Term
    var: str
    body: Term
    _fields = ("value", "var", "body")

    def children(self):
        return (self.value, self.body)

    @cached_property
    def free_nonlin(self) -> frozenset[str]:
        return self.value.free_nonlin | (self.body.free_nonlin - {self.var})


@dataclass(frozen=True, eq=False)
class Op(Term):
    name: str
    args: tuple[Term, ...]
    _fields = ("name", "args")

    def children(self):
        return self.args


# -- substitution -------------------------------------------------------------


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    name = base
    while name in avoid:
        name += "'"
    return name


def subst(t: Term, lin: Mapping[str, Term] | None = None,
          nonlin: Mapping[str, Term] | None = None) -> Term:
    """Simultaneous capture-avoiding substitution.

    ``lin`` maps linear names to values, ``nonlin`` maps non-linear names to
    computations.  Bound variables are renamed only when they would capture a
    free variable of a substituted term.
    """
    lin = {k: v for k, v in (lin or {}).items() if k in t.free_lin}
    nonlin = {k: v for k, v in (nonlin or {}).items() if k in t.free_nonlin}
    if not lin and not nonlin:
        return t
    repl = list(lin.values()) + list(nonlin.values())
    lin_fv = frozenset().union(*(r.free_lin for r in repl))
    nonlin_fv = frozenset().union(*(r.free_nonlin for r in repl))
    return _subst(t, lin, nonlin, lin_fv, nonlin_fv)


def _touches(t, lin, nonlin) -> bool:
    return bool((lin and not lin.keys().isdisjoint(t.free_lin))
                or (nonlin and not nonlin.keys().isdisjoint(t.free_nonlin)))


def _subst(t, lin, nonlin, lin_fv, nonlin_fv):
    if not _touches(t, lin, nonlin):
        return t
    if isinstance(t, LinVar):
        return lin.get(t.name, t)
    if isinstance(t, NonLinVar):
        return nonlin.get(t.name, t)
    if isinstance(t, Bang):
        return Bang(_subst(t.body, lin, nonlin, lin_fv, nonlin_fv))
    if isinstance(t, Return):
        return Return(_subst(t.value, lin, nonlin, lin_fv, nonlin_fv))
    if isinstance(t, App):
        return App(_subst(t.fn, lin, nonlin, lin_fv, nonlin_fv),
                   _subst(t.arg, lin, nonlin, lin_fv, nonlin_fv))
    if isinstance(t, Op):
        return Op(t.name, tuple(_subst(a, lin, nonlin, lin_fv, nonlin_fv) for a in t.args))
    if isinstance(t, Abs):
        var, body, lin2 = _enter_lin(t.var, t.body, lin, nonlin, lin_fv)
        return Abs(var, _subst(body, lin2, nonlin, lin_fv, nonlin_fv))
    if isinstance(t, Seq):
        first = _subst(t.first, lin, nonlin, lin_fv, nonlin_fv)
        var, body, lin2 = _enter_lin(t.var, t.body, lin, nonlin, lin_fv)
        return Seq(first, var, _subst(body, lin2, nonlin, lin_fv, nonlin_fv))
    if isinstance(t, CoSeq):
        value = _subst(t.value, lin, nonlin, lin_fv, nonlin_fv)
        var, body = t.var, t.body
        nonlin2 = {k: v for k, v in nonlin.items() if k != var}
        if var in nonlin_fv and _touches(body, lin, nonlin2):
            new = fresh_name(var, nonlin_fv | body.free_nonlin)
            body = subst(body, nonlin={var: NonLinVar(new)})
            var = new
        return CoSeq(value, var, _subst(body, lin, nonlin2, lin_fv, nonlin_fv))
    if isinstance(t, Hole):
        return t
    raise TypeError(f"not a term: {t!r}")


def _enter_lin(var, body, lin, nonlin, lin_fv):
    lin2 = {k: v for k, v in lin.items() if k != var}
    if var in lin_fv and _touches(body, lin2, nonlin):
        new = fresh_name(var, lin_fv | body.free_lin)
        body = subst(body, lin={var: LinVar(new)})
        var = new
    return var, body, lin2


def subst_value(t: Term, x: str, v: Term) -> Term:
    """``t[x := v]`` for a linear variable ``x`` and a value ``v``."""
    if not v.is_value:
        raise ValueError(f"substituting a non-value for linear variable {x}: {show(v)}")
    return subst(t, lin={x: v})


def subst_comp(t: Term, a: str, e: Term) -> Term:
    """``t[a := e]`` for a non-linear variable ``a`` and a computation ``e``."""
    if e.is_value:
        raise ValueError(f"substituting a value for non-linear variable {a}: {show(e)}")
    return subst(t, nonlin={a: e})


def fill(context: Term, e: Term) -> Term:
    """Plug ``e`` into every hole of ``context`` (no renaming: contexts capture)."""
    if context.hole_count == 0:
        return context
    if isinstance(context, Hole):
        return e
    if isinstance(context, Abs):
        return Abs(context.var, fill(context.body, e))
    if isinstance(context, Bang):
        return Bang(fill(context.body, e))
    if isinstance(context, Return):
        return Return(fill(context.value, e))
    if isinstance(context, App):
        return App(fill(context.fn, e), fill(context.arg, e))
    if isinstance(context, Seq):
        return Seq(fill(context.first, e), context.var, fill(context.body, e))
    if isinstance(context, CoSeq):
        return CoSeq(fill(context.value, e), context.var, fill(context.body, e))
    if isinstance(context, Op):
        return Op(context.name, tuple(fill(a, e) for a in context.args))
    raise TypeError(f"not a term: {context!r}")


# -- alpha-equivalence ----------------------------------------------------------


def canonical(t: Term) -> Term:
    """Rename every bound variable by binding depth (``x0, x1, ..`` / ``a0, ..``).

    Two terms are alpha-equivalent iff their canonical forms are equal.
    """
    taken_lin, taken_nonlin = t.free_lin, t.free_nonlin
    return _canon(t, {}, {}, 0, 0, taken_lin, taken_nonlin)


def _pick(prefix: str, depth: int, taken: frozenset[str]) -> str:
    return fresh_name(f"{prefix}{depth}", taken)


def _canon(t, lren, nren, ld, nd, tl, tn):
    if isinstance(t, LinVar):
        return LinVar(lren.get(t.name, t.name))
    if isinstance(t, NonLinVar):
        return NonLinVar(nren.get(t.name, t.name))
    if isinstance(t, Hole):
        return t
    if isinstance(t, Abs):
        new = _pick("x", ld, tl)
        return Abs(new, _canon(t.body, {**lren, t.var: new}, nren, ld + 1, nd, tl, tn))
    if isinstance(t, Bang):
        return Bang(_canon(t.body, lren, nren, ld, nd, tl, tn))
    if isinstance(t, Return):
        return Return(_canon(t.value, lren, nren, ld, nd, tl, tn))
    if isinstance(t, App):
        return App(_canon(t.fn, lren, nren, ld, nd, tl, tn),
                   _canon(t.arg, lren, nren, ld, nd, tl, tn))
    if isinstance(t, Seq):
        new = _pick("x", ld, tl)
        return Seq(_canon(t.first, lren, nren, ld, nd, tl, tn), new,
                   _canon(t.body, {**lren, t.var: new}, nren, ld + 1, nd, tl, tn))
    if isinstance(t, CoSeq):
        new = _pick("a", nd, tn)
        return CoSeq(_canon(t.value, lren, nren, ld, nd, tl, tn), new,
                     _canon(t.body, lren, {**nren, t.var: new}, ld, nd + 1, tl, tn))
    if isinstance(t, Op):
        return Op(t.name, tuple(_canon(a, lren, nren, ld, nd, tl, tn) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def alpha_eq(s: Term, t: Term) -> bool:
    return s == t or canonical(s) == canonical(t)


# -- printing -------------------------------------------------------------------


def _value_atom(v: Term) -> str:
    if isinstance(v, (LinVar, Bang)):
        return show(v)
    return f"({show(v)})"


def _comp_atom(e: Term) -> str:
    if isinstance(e, (NonLinVar, Op, Hole)):
        return show(e)
    return f"({show(e)})"


def show(t: Term) -> str:
    """Concrete syntax accepted by :func:`lambang.core.parser.parse_term`."""
    if isinstance(t, (LinVar, NonLinVar)):
        return t.name
    if isinstance(t, Hole):
        return HOLE
    if isinstance(t, Abs):
        return f"\\{t.var}. {show(t.body)}"
    if isinstance(t, Bang):
        return "!" + _comp_atom(t.body)
    if isinstance(t, Return):
        v = t.value
        return "return " + (show(v) if isinstance(v, Abs) else _value_atom(v))
    if isinstance(t, App):
        return f"{_value_atom(t.fn)} {_value_atom(t.arg)}"
    if isinstance(t, Seq):
        first = show(t.first)
        if isinstance(t.first, (Seq, CoSeq)):
            first = f"({first})"
        return f"let {t.var} = {first} in {show(t.body)}"
    if isinstance(t, CoSeq):
        return f"let !{t.var} = {_value_atom(t.value)} in {show(t.body)}"
    if isinstance(t, Op):
        return f"{t.name}({', '.join(show(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")
