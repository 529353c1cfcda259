"""Linear types with bang, linear arrow and the two equi-recursive forms.

Types are compared up to the equi-recursive equality generated by the two
unfolding equations and the coinduction rule.  The decision procedure is the
usual assume-and-unfold one: a pair already under examination is assumed
equal, every other pair is unfolded to head normal form and compared by
constructor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator


class Type:
    """Base class of type syntax trees."""

    __slots__ = ()

    @cached_property
    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True)
class TVar(Type):
    name: str

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return frozenset((self.name,))


@dataclass(frozen=True)
class TBang(Type):
    body: Type

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return self.body.free_vars


@dataclass(frozen=True)
class TLolli(Type):
    arg: Type
    res: Type

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return self.arg.free_vars | self.res.free_vars


@dataclass(frozen=True)
class TMuLolli(Type):
    """``mu var. arg -o res``"""

    var: str
    arg: Type
    res: Type

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return (self.arg.free_vars | self.res.free_vars) - {self.var}


@dataclass(frozen=True)
class TMuBang(Type):
    """``mu var. !body``"""

    var: str
    body: Type

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return self.body.free_vars - {self.var}


def _fresh_tvar(base: str, avoid: frozenset[str] | set[str]) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def tsubst(t: Type, name: str, s: Type) -> Type:
    """Capture-avoiding ``t[s/name]``."""
    if name not in t.free_vars:
        return t
    if isinstance(t, TVar):
        return s
    if isinstance(t, TBang):
        return TBang(tsubst(t.body, name, s))
    if isinstance(t, TLolli):
        return TLolli(tsubst(t.arg, name, s), tsubst(t.res, name, s))
    if isinstance(t, (TMuLolli, TMuBang)):
        var = t.var
        if var in s.free_vars:
            fresh = _fresh_tvar(var, s.free_vars | t.free_vars | {name})
            t = _rename_binder(t, fresh)
            var = fresh
        if isinstance(t, TMuLolli):
            return TMuLolli(var, tsubst(t.arg, name, s), tsubst(t.res, name, s))
        return TMuBang(var, tsubst(t.body, name, s))
    raise TypeError(f"not a type: {t!r}")


def _rename_binder(t: TMuLolli | TMuBang, fresh: str) -> TMuLolli | TMuBang:
    v = TVar(fresh)
    if isinstance(t, TMuLolli):
        return TMuLolli(fresh, tsubst(t.arg, t.var, v), tsubst(t.res, t.var, v))
    return TMuBang(fresh, tsubst(t.body, t.var, v))


def unfold(t: Type) -> Type:
    """Head normal form: one unfolding of a top-level recursive type.

    The result is always a ``TVar``, ``TBang`` or ``TLolli``.
    """
    if isinstance(t, TMuLolli):
        return TLolli(tsubst(t.arg, t.var, t), tsubst(t.res, t.var, t))
    if isinstance(t, TMuBang):
        return TBang(tsubst(t.body, t.var, t))
    return t


def type_eq(s: Type, t: Type) -> bool:
    """Decide equi-recursive equality of two types.

    Free type variables are treated as opaque base types.
    """
    assumed: set[tuple[Type, Type]] = set()
    todo = [(s, t)]
    while todo:
        a, b = todo.pop()
        if a == b or (a, b) in assumed:
            continue
        assumed.add((a, b))
        ha, hb = unfold(a), unfold(b)
        if isinstance(ha, TVar):
            if not (isinstance(hb, TVar) and ha.name == hb.name):
                return False
        elif isinstance(ha, TBang):
            if not isinstance(hb, TBang):
                return False
            todo.append((ha.body, hb.body))
        elif isinstance(ha, TLolli):
            if not isinstance(hb, TLolli):
                return False
            todo.append((ha.res, hb.res))
            todo.append((ha.arg, hb.arg))
        else:  # pragma: no cover - unfold never returns a mu form
            raise AssertionError(ha)
    return True


def components(t: Type) -> tuple[Type, ...]:
    h = unfold(t)
    if isinstance(h, TBang):
        return (h.body,)
    if isinstance(h, TLolli):
        return (h.arg, h.res)
    return ()


def closure(types: Iterable[Type]) -> list[Type]:
    """All types reachable by unfolding and taking components.

    The result is deduplicated up to ``type_eq`` and keeps discovery order,
    so it is deterministic for a given input sequence.
    """
    out: list[Type] = []
    todo = list(types)
    todo.reverse()
    while todo:
        t = todo.pop()
        if any(type_eq(t, u) for u in out):
            continue
        out.append(t)
        todo.extend(reversed(components(t)))
    return out


class TypeTable:
    """Interns types up to ``type_eq`` so they can be used as dictionary keys."""

    def __init__(self, types: Iterable[Type] = ()):
        self.reps: list[Type] = []
        self._ids: dict[Type, int] = {}
        for t in types:
            self.id_of(t)

    def id_of(self, t: Type) -> int:
        found = self._ids.get(t)
        if found is not None:
            return found
        for i, r in enumerate(self.reps):
            if type_eq(r, t):
                self._ids[t] = i
                return i
        self.reps.append(t)
        self._ids[t] = len(self.reps) - 1
        return len(self.reps) - 1

    def __iter__(self) -> Iterator[Type]:
        return iter(self.reps)


def _atom(t: Type) -> str:
    s = show_type(t)
    return s if isinstance(t, (TVar, TBang)) else f"({s})"


def show_type(t: Type) -> str:
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, TBang):
        return "!" + _atom(t.body)
    if isinstance(t, TLolli):
        left = show_type(t.arg)
        if isinstance(t.arg, (TLolli, TMuLolli, TMuBang)):
            left = f"({left})"
        return f"{left} -o {show_type(t.res)}"
    if isinstance(t, TMuLolli):
        return f"mu {t.var}. {show_type(TLolli(t.arg, t.res))}"
    if isinstance(t, TMuBang):
        return f"mu {t.var}. {show_type(TBang(t.body))}"
    raise TypeError(f"not a type: {t!r}")
