"""Type-directed enumeration of well-typed terms by AST size.

Terms are produced size by size, and within one size in a fixed constructor
order.  Intermediate types (the argument type of an application, the type
bound by a ``let``) range over the finite universe of types reachable from
the target type, the environment and any hints, so the enumeration is
complete relative to that universe.  Bound variables are named ``x<depth>``
and ``a<depth>``; results are deduplicated up to alpha-equivalence.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Mapping

from .terms import (
    HOLE, Abs, App, Bang, CoSeq, Hole, LinVar, NonLinVar, Op, Return, Seq, Term, canonical,
)
from .types import TBang, TLolli, Type, TypeTable, closure, unfold
from .typing import TypeEnv, type_eq

Env = tuple[tuple[str, int], ...]  # (name, type id), sorted by name


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways of writing ``total`` as ``parts`` positive integers."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _splits(omega: Env) -> Iterator[tuple[Env, Env]]:
    for mask in product((0, 1), repeat=len(omega)):
        yield (tuple(p for p, m in zip(omega, mask) if not m),
               tuple(p for p, m in zip(omega, mask) if m))


class Enumerator:
    """Memoised generator of the well-typed terms of one exact size."""

    def __init__(self, universe: Iterable[Type], ops: Mapping[str, int] | None = None):
        self.table = TypeTable()
        self.universe = [self.table.id_of(t) for t in closure(universe)]
        self.ops = dict(ops or {})
        self.memo: dict = {}

    def tid(self, t: Type) -> int:
        return self.table.id_of(t)

    def ty(self, i: int) -> Type:
        return self.table.reps[i]

    @staticmethod
    def _fresh(base: str, depth: int, taken: Iterable[str]) -> str:
        name = f"{base}{depth}"
        taken = set(taken)
        while name in taken:
            name += "'"
        return name

    def gen(self, kind: str, tau: int, sigma: Env, omega: Env, n: int, depth: int) -> list[Term]:
        """Terms of class ``kind`` ('value' or 'comp'), type ``tau``, size exactly ``n``."""
        if n < 1 or len(omega) > n:
            return []
        key = (kind, tau, sigma, omega, n, depth)
        got = self.memo.get(key)
        if got is None:
            out: list[Term] = []
            seen: set[Term] = set()
            producer = self._values if kind == "value" else self._comps
            for t in producer(tau, sigma, omega, n, depth):
                c = canonical(t)
                if c not in seen:
                    seen.add(c)
                    out.append(t)
            got = self.memo[key] = out
        return got

    def _names(self, sigma: Env, omega: Env) -> set[str]:
        return {x for x, _ in sigma} | {x for x, _ in omega}

    def _values(self, tau: int, sigma: Env, omega: Env, n: int, depth: int) -> Iterator[Term]:
        t = self.ty(tau)
        if n == 1:
            if len(omega) == 1 and omega[0][0] != HOLE and type_eq(self.ty(omega[0][1]), t):
                yield LinVar(omega[0][0])
            return
        h = unfold(t)
        if isinstance(h, TLolli) and n >= 3:
            x = self._fresh("x", depth, self._names(sigma, omega))
            inner = tuple(sorted(omega + ((x, self.tid(h.arg)),)))
            for body in self.gen("comp", self.tid(h.res), sigma, inner, n - 1, depth + 1):
                yield Abs(x, body)
        if isinstance(h, TBang) and not omega:
            for body in self.gen("comp", self.tid(h.body), sigma, (), n - 1, depth):
                yield Bang(body)

    def _comps(self, tau: int, sigma: Env, omega: Env, n: int, depth: int) -> Iterator[Term]:
        t = self.ty(tau)
        if n == 1:
            if not omega:
                for a, s in sigma:
                    if type_eq(self.ty(s), t):
                        yield NonLinVar(a)
            elif len(omega) == 1 and omega[0][0] == HOLE and type_eq(self.ty(omega[0][1]), t):
                yield Hole()
            return
        yield from (Return(v) for v in self.gen("value", tau, sigma, omega, n - 1, depth))
        rest = n - 1
        # application v w : tau with v : s -o tau, w : s
        for s in self.universe:
            fn_ty = self.tid(TLolli(self.ty(s), t))
            for n1 in range(1, rest):
                for o1, o2 in _splits(omega):
                    fns = self.gen("value", fn_ty, sigma, o1, n1, depth)
                    if not fns:
                        continue
                    args = self.gen("value", s, sigma, o2, rest - n1, depth)
                    for f in fns:
                        for w in args:
                            yield App(f, w)
        # let x = e in f
        x = self._fresh("x", depth, self._names(sigma, omega))
        for s in self.universe:
            for n1 in range(1, rest):
                for o1, o2 in _splits(omega):
                    firsts = self.gen("comp", s, sigma, o1, n1, depth)
                    if not firsts:
                        continue
                    inner = tuple(sorted(o2 + ((x, s),)))
                    bodies = self.gen("comp", tau, sigma, inner, rest - n1, depth + 1)
                    for e in firsts:
                        for f in bodies:
                            yield Seq(e, x, f)
        # let !a = v in f
        a = self._fresh("a", depth, self._names(sigma, omega))
        for s in self.universe:
            bang = self.tid(TBang(self.ty(s)))
            inner_sigma = tuple(sorted(tuple(p for p in sigma if p[0] != a) + ((a, s),)))
            for n1 in range(1, rest):
                for o1, o2 in _splits(omega):
                    vals = self.gen("value", bang, sigma, o1, n1, depth)
                    if not vals:
                        continue
                    bodies = self.gen("comp", tau, inner_sigma, o2, rest - n1, depth + 1)
                    for v in vals:
                        for f in bodies:
                            yield CoSeq(v, a, f)
        # operations share the linear environment, so the hole may only sit
        # under a unary one
        holed = any(x == HOLE for x, _ in omega)
        for op, arity in self.ops.items():
            if holed and arity != 1:
                continue
            for parts in _compositions(rest, arity):
                pools = [self.gen("comp", tau, sigma, omega, k, depth) for k in parts]
                for args in product(*pools):
                    yield Op(op, tuple(args))


def _env_key(en: Enumerator, pairs) -> Env:
    return tuple(sorted((x, en.tid(t)) for x, t in pairs))


def enumerate_terms(env: TypeEnv, tau: Type, budget: int, kind: str = "any",
                    ops: Mapping[str, int] | None = None,
                    hints: Iterable[Type] = ()) -> Iterator[Term]:
    """Well-typed terms of type ``tau`` under ``env`` with at most ``budget`` nodes.

    ``kind`` selects values, computations ('comp') or both ('any'); ``ops`` is
    the operation signature available to computations.
    """
    en = Enumerator([tau, *env.types(), *hints], ops)
    sigma, omega = _env_key(en, env.nonlinear), _env_key(en, env.linear)
    kinds = ("value", "comp") if kind == "any" else (kind,)
    target = en.tid(tau)
    for n in range(1, budget + 1):
        for k in kinds:
            yield from en.gen(k, target, sigma, omega, n, 0)


def enumerate_contexts(hole_type: Type, result_type: Type, budget: int,
                       ops: Mapping[str, int] | None = None,
                       env: TypeEnv = TypeEnv(), hints: Iterable[Type] = ()) -> Iterator[Term]:
    """Single-hole computation contexts ``C`` with ``C[- : hole_type] : result_type``.

    The hole is typed as a linear variable, so it occurs exactly once and
    never under a bang; it only appears under unary operations, since the
    arguments of an operation share its linear environment.
    """
    en = Enumerator([hole_type, result_type, *env.types(), *hints], ops)
    sigma = _env_key(en, env.nonlinear)
    omega = tuple(sorted(_env_key(en, env.linear) + ((HOLE, en.tid(hole_type)),)))
    target = en.tid(result_type)
    for n in range(1, budget + 1):
        yield from en.gen("comp", target, sigma, omega, n, 0)
