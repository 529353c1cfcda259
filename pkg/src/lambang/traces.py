"""Traces, the trace functional ``st`` and bounded trace equivalence.

``st(K, t)`` threads the monadic transitions of ``K`` along the trace ``t``
and observes the result in ``T(1)``.  Trace equivalence compares ``st`` on
every trace; since enabling is decided by configuration types, two
configurations have the same traces exactly when their types agree.

The checker explores the determinised system: a state is a monadic value
over configurations of one type, stepped with ``step_star``.  Exploration is
breadth-first by trace length and then by action order, so the first
difference found is the canonical witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .core.terms import Term
from .core.types import Type
from .monads import STAR, Monad, get_monad, show_mval
from .rts import (
    Action, ActionError, ConfigType, Configuration, b, config_type, enabled_actions, step,
)

Trace = tuple[Action, ...]

EQUIVALENT = "equivalent-up-to-bounds"
DISTINGUISHED = "distinguished"


def _m(monad: Monad | str) -> Monad:
    return get_monad(monad) if isinstance(monad, str) else monad


def show_trace(t: Sequence[Action]) -> str:
    return " . ".join(str(a) for a in t) if t else "(empty)"


def trace_set(alpha: ConfigType, depth: int, ctx_size: int,
              ops: Mapping[str, int] | None = None) -> Iterator[Trace]:
    """Traces of length at most ``depth`` enabled from type ``alpha``, shortest first."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    level: list[tuple[Trace, ConfigType]] = [((), alpha)]
    for n in range(depth + 1):
        nxt: list[tuple[Trace, ConfigType]] = []
        for t, a in level:
            yield t
            if n < depth:
                for act in enabled_actions(a, ctx_size, ops):
                    nxt.append((t + (act,), b(a, act)))
        level = nxt


class _Stepper:
    """Memoises ``step`` for one exploration (fixed monad and fuel)."""

    def __init__(self, monad: Monad, fuel: int):
        self.m, self.fuel = monad, fuel
        self.cache: dict[tuple[Configuration, Action], object] = {}

    def step(self, k: Configuration, act: Action):
        key = (k, act)
        got = self.cache.get(key)
        if got is None:
            got = self.cache[key] = step(k, act, self.fuel, self.m)
        return got

    def step_star(self, kappa, act: Action):
        _same_shape(self.m, kappa)
        return self.m.bind(kappa, lambda k: self.step(k, act))


def _same_shape(m: Monad, kappa) -> None:
    shapes = {(len(k.gamma), len(k.theta), k.is_comp) for k in m.support(kappa)}
    if len(shapes) > 1:
        raise ActionError("configurations in the support have different types")


def st(k: Configuration, t: Sequence[Action], fuel: int, monad: Monad | str = "dist"):
    """The trace functional: ``st(K, e) = unit(*)``, ``st(K, a.u) = step(K, a) >>= st(-, u)``."""
    m = _m(monad)
    s = _Stepper(m, fuel)
    t = tuple(t)
    memo: dict[tuple[Configuration, int], object] = {}

    def go(c: Configuration, pos: int):
        if pos == len(t):
            return m.unit(STAR)
        key = (c, pos)
        got = memo.get(key)
        if got is None:
            got = memo[key] = m.bind(s.step(c, t[pos]), lambda c2: go(c2, pos + 1))
        return got

    return go(k, 0)


def step_star(kappa, action: Action, fuel: int, monad: Monad | str = "dist"):
    """The determinised transition: ``kappa >>= (K -> step(K, action))``."""
    return _Stepper(_m(monad), fuel).step_star(kappa, action)


def st_star(kappa, t: Sequence[Action], fuel: int, monad: Monad | str = "dist"):
    """``st_star(kappa, e) = obs(kappa)``, ``st_star(kappa, a.u) = st_star(step_star(kappa, a), u)``."""
    m = _m(monad)
    s = _Stepper(m, fuel)
    for act in t:
        kappa = s.step_star(kappa, act)
    return m.obs(kappa)


@dataclass(frozen=True)
class Witness:
    trace: Trace
    lhs_obs: object
    rhs_obs: object
    reason: str = ""  # set for a type mismatch, where no trace is run


@dataclass(frozen=True)
class TraceReport:
    verdict: str
    witness: Witness | None
    bounds: dict = field(default_factory=dict)
    traces_checked: int = 0

    @property
    def equivalent(self) -> bool:
        return self.verdict == EQUIVALENT

    def to_json(self, monad: Monad | str) -> dict:
        m = _m(monad)
        out: dict = {"verdict": self.verdict, "bounds": dict(self.bounds),
                     "traces_checked": self.traces_checked, "witness": None}
        if self.witness is not None:
            w = self.witness
            out["witness"] = {
                "trace": [str(a) for a in w.trace],
                "lhs_obs": None if w.lhs_obs is None else m.to_json(w.lhs_obs),
                "rhs_obs": None if w.rhs_obs is None else m.to_json(w.rhs_obs),
            }
            if w.reason:
                out["witness"]["reason"] = w.reason
        return out

    def describe(self, monad: Monad | str) -> str:
        m = _m(monad)
        b_ = ", ".join(f"{k}={v}" for k, v in self.bounds.items())
        lines = [f"{self.verdict} ({b_}; {self.traces_checked} traces)"]
        if self.witness is not None:
            w = self.witness
            if w.reason:
                lines.append(f"  {w.reason}")
            else:
                lines.append(f"  trace: {show_trace(w.trace)}")
                lines.append(f"  lhs:   {show_mval(m, w.lhs_obs)}")
                lines.append(f"  rhs:   {show_mval(m, w.rhs_obs)}")
        return "\n".join(lines)


def _as_config(x: Configuration | Term) -> Configuration:
    return x if isinstance(x, Configuration) else Configuration.of_term(x)


def trace_equiv(k: Configuration | Term, l: Configuration | Term, depth: int, ctx_size: int,  # noqa: E741
                fuel: int, monad: Monad | str = "dist", alpha: ConfigType | None = None,
                beta: ConfigType | None = None, hints: Iterable[Type] = ()) -> TraceReport:
    """Compare ``st`` on every trace within the bounds; report the first difference.

    A computation is compared as the configuration holding just that
    computation.  ``alpha``/``beta`` give the configuration types when they
    cannot be synthesised from the terms.
    """
    m = _m(monad)
    k, l = _as_config(k), _as_config(l)
    hints = list(hints)
    alpha = alpha or config_type(k, hints)
    beta = beta or config_type(l, hints)
    bounds = {"depth": depth, "ctx_size": ctx_size, "fuel": fuel}
    if not alpha.equals(beta):
        return TraceReport(DISTINGUISHED, Witness((), None, None,
                           f"configuration types differ: {alpha} vs {beta}"), bounds, 0)
    s = _Stepper(m, fuel)
    checked = 1  # the empty trace: both sides observe unit(*)
    level = [((), alpha, m.unit(k), m.unit(l))]
    for _ in range(depth):
        nxt = []
        for t, a, kk, ll in level:
            for act in enabled_actions(a, ctx_size, m.signature):
                kk2, ll2 = s.step_star(kk, act), s.step_star(ll, act)
                o1, o2 = m.obs(kk2), m.obs(ll2)
                checked += 1
                if not m.mval_eq(o1, o2):
                    return TraceReport(DISTINGUISHED, Witness(t + (act,), o1, o2), bounds, checked)
                # identical states, or both at the bottom, agree on every extension
                if kk2 == ll2 or (not m.support(kk2) and not m.support(ll2)):
                    continue
                nxt.append((t + (act,), b(a, act, m.signature), kk2, ll2))
        level = nxt
        if not level:
            break
    return TraceReport(EQUIVALENT, None, bounds, checked)
