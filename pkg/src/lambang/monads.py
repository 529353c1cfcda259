"""Finitely presented elements of four Sigma-continuous monads.

Each monad is a Kleisli triple (``unit``, ``bind``) with algebraic operations,
a least element, an order, and the observation map into ``T(1)``.  Elements
are immutable and hashable; probabilities are exact ``Fraction`` values.

=========  ==============================  ===================
monad      element                         operations
=========  ==============================  ===================
maybe      ``Conv(x)`` or ``DIV``          none
dist       ``Dist({x: p})``, mass <= 1     ``choice`` (binary)
output     ``Out(prefix, Conv(x) | DIV)``  ``print_c`` (unary)
input      ``Leaf``/``DIV_LEAF``/``Read``  ``read`` (binary)
=========  ==============================  ===================
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

STAR = "*"  # the element of the one-point set


class MonadError(Exception):
    pass


# -- element representations -------------------------------------------------

@dataclass(frozen=True)
class Conv:
    value: Hashable


class _Div:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "DIV"

    def __reduce__(self):
        return (_Div, ())


DIV = _Div()


class Dist:
    """A finite subdistribution; zero entries are never stored."""

    __slots__ = ("_m", "_hash")

    def __init__(self, entries: Mapping[Hashable, Fraction] | Iterable[tuple[Hashable, Fraction]] = ()):
        m: dict = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for x, p in items:
            p = Fraction(p)
            if p < 0:
                raise MonadError(f"negative probability {p}")
            if p:
                m[x] = m.get(x, Fraction(0)) + p
        if sum(m.values(), Fraction(0)) > 1:
            raise MonadError("total mass exceeds 1")
        self._m = m
        self._hash = None

    def __getitem__(self, x) -> Fraction:
        return self._m.get(x, Fraction(0))

    def items(self):
        return self._m.items()

    def support(self) -> list:
        return list(self._m)

    @property
    def mass(self) -> Fraction:
        return sum(self._m.values(), Fraction(0))

    def __len__(self) -> int:
        return len(self._m)

    def __eq__(self, other) -> bool:
        return isinstance(other, Dist) and self._m == other._m

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._m.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{x!s}: {p}" for x, p in self._m.items())
        return f"Dist({{{inner}}})"


@dataclass(frozen=True)
class Out:
    prefix: str
    tail: Conv | _Div


@dataclass(frozen=True)
class Leaf:
    value: Hashable


class _DivLeaf:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "DIV_LEAF"

    def __reduce__(self):
        return (_DivLeaf, ())


DIV_LEAF = _DivLeaf()


@dataclass(frozen=True)
class Read:
    left: Any
    right: Any


# -- monads ------------------------------------------------------------------

class Monad:
    """Interface shared by the four monads."""

    name: str = ""
    signature: Mapping[str, int] = {}

    def unit(self, x):
        raise NotImplementedError

    def bind(self, m, f: Callable):
        raise NotImplementedError

    def apply_op(self, op: str, args: list):
        self._check_op(op, args)
        return self._op(op, args)

    def _op(self, op, args):
        raise NotImplementedError

    def bottom(self):
        raise NotImplementedError

    def leq(self, m1, m2) -> bool:
        raise NotImplementedError

    def support(self, m) -> list:
        raise NotImplementedError

    def fmap(self, m, f: Callable):
        return self.bind(m, lambda x: self.unit(f(x)))

    def obs(self, m):
        return self.fmap(m, lambda _: STAR)

    def mval_eq(self, m1, m2) -> bool:
        return m1 == m2

    def _check_op(self, op: str, args: list) -> None:
        if op not in self.signature:
            raise MonadError(f"unknown operation {op!r} for the {self.name} monad")
        if len(args) != self.signature[op]:
            raise MonadError(f"{op} takes {self.signature[op]} arguments, got {len(args)}")

    # JSON
    def to_json(self, m, show: Callable = str) -> dict:
        raise NotImplementedError

    def from_json(self, data: dict, parse: Callable = lambda s: s):
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<monad {self.name}>"


def _tail_json(t, show):
    return "div" if t is DIV else {"conv": show(t.value)}


def _tail_from(d, parse):
    return DIV if d == "div" else Conv(parse(d["conv"]))


class MaybeMonad(Monad):
    name = "maybe"
    signature: Mapping[str, int] = {}

    def unit(self, x):
        return Conv(x)

    def bind(self, m, f):
        return DIV if m is DIV else f(m.value)

    def bottom(self):
        return DIV

    def leq(self, m1, m2):
        return m1 is DIV or m1 == m2

    def support(self, m):
        return [] if m is DIV else [m.value]

    def to_json(self, m, show=str):
        return {"monad": self.name, "result": _tail_json(m, show)}

    def from_json(self, data, parse=lambda s: s):
        return _tail_from(data["result"], parse)


class DistMonad(Monad):
    name = "dist"
    signature = {"choice": 2}

    def unit(self, x):
        return Dist({x: Fraction(1)})

    def bind(self, m, f):
        acc: dict = {}
        for x, p in m.items():
            for y, q in f(x).items():
                acc[y] = acc.get(y, Fraction(0)) + p * q
        return Dist(acc)

    def _op(self, op, args):
        mu, nu = args
        half = Fraction(1, 2)
        acc: dict = {}
        for x, p in mu.items():
            acc[x] = acc.get(x, Fraction(0)) + half * p
        for x, p in nu.items():
            acc[x] = acc.get(x, Fraction(0)) + half * p
        return Dist(acc)

    def bottom(self):
        return Dist()

    def leq(self, m1, m2):
        return all(p <= m2[x] for x, p in m1.items())

    def support(self, m):
        return m.support()

    def to_json(self, m, show=str):
        entries = sorted(((show(x), p) for x, p in m.items()), key=lambda e: e[0])
        return {"monad": self.name,
                "entries": [{"value": v, "prob": f"{p.numerator}/{p.denominator}"} for v, p in entries]}

    def from_json(self, data, parse=lambda s: s):
        return Dist({parse(e["value"]): Fraction(e["prob"]) for e in data["entries"]})


class OutputMonad(Monad):
    name = "output"

    def __init__(self, alphabet: str = string.ascii_lowercase):
        self.alphabet = alphabet
        self.signature = {f"print_{c}": 1 for c in alphabet}

    def unit(self, x):
        return Out("", Conv(x))

    def bind(self, m, f):
        if m.tail is DIV:
            return m
        r = f(m.tail.value)
        return Out(m.prefix + r.prefix, r.tail)

    def _op(self, op, args):
        (m,) = args
        return Out(op[len("print_"):] + m.prefix, m.tail)

    def bottom(self):
        return Out("", DIV)

    def leq(self, m1, m2):
        if m1.tail is DIV:
            return m2.prefix.startswith(m1.prefix)
        return m1 == m2

    def support(self, m):
        return [] if m.tail is DIV else [m.tail.value]

    def to_json(self, m, show=str):
        return {"monad": self.name, "prefix": m.prefix, "tail": _tail_json(m.tail, show)}

    def from_json(self, data, parse=lambda s: s):
        return Out(data["prefix"], _tail_from(data["tail"], parse))


class InputMonad(Monad):
    name = "input"
    signature = {"read": 2}

    def unit(self, x):
        return Leaf(x)

    def bind(self, m, f):
        if isinstance(m, Leaf):
            return f(m.value)
        if m is DIV_LEAF:
            return m
        return Read(self.bind(m.left, f), self.bind(m.right, f))

    def _op(self, op, args):
        return Read(args[0], args[1])

    def bottom(self):
        return DIV_LEAF

    def leq(self, m1, m2):
        if m1 is DIV_LEAF:
            return True
        if isinstance(m1, Read):
            return isinstance(m2, Read) and self.leq(m1.left, m2.left) and self.leq(m1.right, m2.right)
        return m1 == m2

    def support(self, m):
        out: list = []
        stack = [m]
        while stack:
            t = stack.pop()
            if isinstance(t, Leaf):
                if t.value not in out:
                    out.append(t.value)
            elif isinstance(t, Read):
                stack.extend((t.right, t.left))
        return out

    def to_json(self, m, show=str):
        def go(t):
            if isinstance(t, Leaf):
                return {"leaf": show(t.value)}
            if t is DIV_LEAF:
                return "div"
            return {"read": [go(t.left), go(t.right)]}
        return {"monad": self.name, "tree": go(m)}

    def from_json(self, data, parse=lambda s: s):
        def go(d):
            if d == "div":
                return DIV_LEAF
            if "leaf" in d:
                return Leaf(parse(d["leaf"]))
            return Read(go(d["read"][0]), go(d["read"][1]))
        return go(data["tree"])


MAYBE = MaybeMonad()
DIST = DistMonad()
OUTPUT = OutputMonad()
INPUT = InputMonad()

MONADS: dict[str, Monad] = {m.name: m for m in (MAYBE, DIST, OUTPUT, INPUT)}


def get_monad(name: str) -> Monad:
    try:
        return MONADS[name]
    except KeyError:
        raise MonadError(f"unknown monad {name!r}; choose one of {', '.join(MONADS)}") from None


def all_op_symbols() -> dict[str, int]:
    out: dict[str, int] = {}
    for m in MONADS.values():
        out.update(m.signature)
    return out


def show_mval(monad: Monad, m, show: Callable = str) -> str:
    """Human-readable rendering used by the CLI."""
    if monad is DIST:
        if not len(m):
            return "{}"
        return "{" + ", ".join(f"{show(x)} |-> {p}" for x, p in sorted(
            m.items(), key=lambda e: show(e[0]))) + "}"
    if monad is MAYBE:
        return "Div" if m is DIV else f"Conv({show(m.value)})"
    if monad.name == "output":
        tail = "Div" if m.tail is DIV else f"Conv({show(m.tail.value)})"
        return f"({m.prefix!r}, {tail})"

    def tree(t) -> str:
        if isinstance(t, Leaf):
            return f"Leaf({show(t.value)})"
        if t is DIV_LEAF:
            return "DivLeaf"
        return f"Read({tree(t.left)}, {tree(t.right)})"
    return tree(m)


def iter_monads() -> Iterator[Monad]:
    return iter(MONADS.values())
