"""Step-indexed monadic evaluation.

``eval_fuel(e, k)`` computes the k-th approximant of the meaning of a closed
computation: fuel 0 gives the least element, and every clause evaluates its
immediate sub-computations with the same decremented fuel.  The sequence of
approximants is an increasing chain whose supremum is the meaning of ``e``.
Values are put into canonical alpha-form before being returned, so
alpha-equivalent results coincide in the monad.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Any

from .core.terms import (
    Abs, App, Bang, CoSeq, NonLinVar, Op, Return, Seq, Term, canonical, subst,
)
from .monads import Monad, get_monad


class EvalError(Exception):
    """An ill-formed redex or an open term reached the evaluator."""


@dataclass(frozen=True)
class EvalResult:
    value: Any
    fuel_used: int
    stabilized: bool


def _monad(monad: Monad | str) -> Monad:
    return get_monad(monad) if isinstance(monad, str) else monad


class _Eval:
    def __init__(self, monad: Monad):
        self.m = monad
        self.memo: dict[tuple[Term, int], Any] = {}

    def run(self, e: Term, k: int):
        if k == 0:
            return self.m.bottom()
        key = (e, k)
        got = self.memo.get(key)
        if got is None:
            got = self.memo[key] = self._step(e, k - 1)
        return got

    def _step(self, e: Term, k: int):
        m = self.m
        if isinstance(e, Return):
            if e.value.free_lin or e.value.free_nonlin:
                raise EvalError(f"open term: {e}")
            return m.unit(canonical(e.value))
        if isinstance(e, App):
            if not isinstance(e.fn, Abs):
                raise EvalError(f"ill-formed redex: {e}")
            return self.run(subst(e.fn.body, lin={e.fn.var: e.arg}), k)
        if isinstance(e, Seq):
            return m.bind(self.run(e.first, k),
                          lambda v: self.run(subst(e.body, lin={e.var: v}), k))
        if isinstance(e, CoSeq):
            if not isinstance(e.value, Bang):
                raise EvalError(f"ill-formed redex: {e}")
            return self.run(subst(e.body, nonlin={e.var: e.value.body}), k)
        if isinstance(e, Op):
            return m.apply_op(e.name, [self.run(a, k) for a in e.args])
        if isinstance(e, NonLinVar):
            raise EvalError(f"open term: free non-linear variable {e.name!r}")
        raise EvalError(f"not a computation: {e}")


def _with_stack(fn, *args):
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)
    return fn(*args)


def eval_fuel(e: Term, k: int, monad: Monad | str = "dist"):
    """The k-th approximant of the meaning of the closed computation ``e``."""
    if k < 0:
        raise ValueError("fuel must be non-negative")
    if e.is_value:
        raise EvalError(f"not a computation: {e}")
    return _with_stack(_Eval(_monad(monad)).run, e, k)


def approximants(e: Term, kmax: int, monad: Monad | str = "dist") -> list:
    """``[eval_fuel(e, k) for k in 0..kmax]`` sharing one memo table."""
    if e.is_value:
        raise EvalError(f"not a computation: {e}")
    ev = _Eval(_monad(monad))
    return [_with_stack(ev.run, e, k) for k in range(kmax + 1)]


def evaluate(e: Term, budget: int, monad: Monad | str = "dist") -> EvalResult:
    """``eval_fuel`` at ``budget`` plus an advisory stabilisation flag.

    The flag compares fuel ``budget`` with ``budget + 1``; agreement does not
    prove that the supremum has been reached.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    mon = _monad(monad)
    ev = _Eval(mon)
    now = _with_stack(ev.run, e, budget)
    nxt = _with_stack(ev.run, e, budget + 1)
    return EvalResult(now, budget, mon.mval_eq(now, nxt))


eval = evaluate  # noqa: A001 - public name used by the command line
