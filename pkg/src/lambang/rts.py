"""The resource transition system: configurations, actions and transitions.

A configuration ``<Gamma | Theta>`` holds copyable closed computations in
``Gamma`` and linear closed values in ``Theta``; in a computation state the
last element of ``Theta`` is a closed computation still to be run.  Actions:

* ``eval`` runs the pending computation and appends its value;
* ``?l`` takes the banged value at position ``l`` of ``Theta`` and moves its
  body to the end of ``Gamma``;
* ``!l`` copies the ``l``-th resource of ``Gamma`` to a pending computation;
* ``app(i, j, l, t)`` applies the abstraction at position ``l`` of ``Theta``
  to the value context ``t`` filled with ``Gamma_i`` and linear values
  ``j`` (indexed after removing ``l``).

Whether an action is enabled depends only on the configuration type, which
is computed by ``b``.  Indices are 1-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence, TypeVar

from .core.enumerate import Enumerator, _env_key
from .core.terms import Abs, Bang, NonLinVar, Op, Term, canonical, show, subst
from .core.types import TBang, TLolli, Type, closure, show_type, unfold
from .core.typing import (
    CannotInfer, TypeCheckError, TypeEnv, infer_type, type_eq, typecheck, well_typed,
)
from .evaluator import eval_fuel
from .monads import Monad, get_monad

T = TypeVar("T")


class ActionError(Exception):
    """The action is not enabled at the configuration."""


# -- sequence utilities --------------------------------------------------------

def valid(indices: Sequence[int], length: int) -> bool:
    """Strictly increasing and within ``1..length``."""
    return all(1 <= i <= length for i in indices) and all(
        a < b for a, b in zip(indices, indices[1:]))


def seq_insert(s: Sequence[T], x: T, i: int) -> tuple[T, ...]:
    if not 1 <= i <= len(s) + 1:
        raise IndexError(f"insert position {i} out of range for length {len(s)}")
    return tuple(s[: i - 1]) + (x,) + tuple(s[i - 1:])


def seq_remove(s: Sequence[T], idx: Sequence[int] | int) -> tuple[T, ...]:
    idx = (idx,) if isinstance(idx, int) else tuple(idx)
    if not valid(idx, len(s)):
        raise IndexError(f"invalid index sequence {list(idx)} for length {len(s)}")
    drop = set(idx)
    return tuple(x for p, x in enumerate(s, 1) if p not in drop)


def seq_select(s: Sequence[T], idx: Sequence[int]) -> tuple[T, ...]:
    if not all(1 <= i <= len(s) for i in idx):
        raise IndexError(f"index out of range in {list(idx)} for length {len(s)}")
    return tuple(s[i - 1] for i in idx)


# -- configurations --------------------------------------------------------------

@dataclass(frozen=True)
class Configuration:
    gamma: tuple[Term, ...]
    theta: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(self.gamma))
        object.__setattr__(self, "theta", tuple(self.theta))
        for t in self.gamma:
            if t.is_value:
                raise ValueError(f"Gamma holds computations, got value {t}")
        for t in self.theta[:-1]:
            if not t.is_value:
                raise ValueError(f"only the last element of Theta may be a computation: {t}")

    @property
    def is_comp(self) -> bool:
        return bool(self.theta) and not self.theta[-1].is_value

    @classmethod
    def of_term(cls, e: Term) -> Configuration:
        """A computation regarded as the configuration ``<  |  ; e>``."""
        return cls((), (e,))

    def canonical(self) -> Configuration:
        return Configuration(tuple(canonical(t) for t in self.gamma),
                             tuple(canonical(t) for t in self.theta))

    def __str__(self) -> str:
        g = ", ".join(show(t) for t in self.gamma)
        if self.is_comp:
            d = ", ".join(show(t) for t in self.theta[:-1])
            return f"<{g} | {d} ; {show(self.theta[-1])}>"
        return f"<{g} | {', '.join(show(t) for t in self.theta)}>"


@dataclass(frozen=True)
class ConfigType:
    gamma: tuple[Type, ...]
    theta: tuple[Type, ...]
    comp: bool  # the last theta type labels a pending computation

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(self.gamma))
        object.__setattr__(self, "theta", tuple(self.theta))
        if self.comp and not self.theta:
            raise ValueError("a computation state needs a pending computation type")

    def equals(self, other: ConfigType) -> bool:
        """Equality up to equi-recursive type equality."""
        return (self.comp == other.comp and len(self.gamma) == len(other.gamma)
                and len(self.theta) == len(other.theta)
                and all(type_eq(a, b) for a, b in zip(self.gamma, other.gamma))
                and all(type_eq(a, b) for a, b in zip(self.theta, other.theta)))

    def __str__(self) -> str:
        g = ", ".join(show_type(t) for t in self.gamma)
        if self.comp:
            d = ", ".join(show_type(t) for t in self.theta[:-1])
            return f"<{g} | {d} ; {show_type(self.theta[-1])}>"
        return f"<{g} | {', '.join(show_type(t) for t in self.theta)}>"


def config_type(k: Configuration, hints: Iterable[Type] = ()) -> ConfigType:
    """The type of a configuration.

    Each component's type is synthesised when the term determines it;
    otherwise the first type reachable from ``hints`` that the term checks
    against is taken.  Raises ``CannotInfer`` when neither works; supply the
    type and use ``check_config`` instead.
    """
    hints = list(hints)
    candidates = closure(hints)

    def type_of(t: Term) -> Type:
        try:
            return infer_type(TypeEnv(), t, hints)
        except CannotInfer:
            for ty in candidates:
                if well_typed(TypeEnv(), t, ty, hints):
                    return ty
            raise CannotInfer(f"cannot determine the type of {t}; give a hint") from None
        except TypeCheckError as err:
            raise TypeCheckError(f"ill-typed configuration {k}: {err}") from None

    return ConfigType(tuple(map(type_of, k.gamma)), tuple(map(type_of, k.theta)), k.is_comp)


def check_config(k: Configuration, alpha: ConfigType, hints: Iterable[Type] = ()) -> None:
    """Raise ``TypeCheckError`` unless ``k`` has type ``alpha``."""
    if k.is_comp != alpha.comp or len(k.gamma) != len(alpha.gamma) or len(k.theta) != len(alpha.theta):
        raise TypeCheckError(f"configuration {k} does not have the shape of {alpha}")
    hints = list(hints)
    for t, ty in zip(k.gamma + k.theta, alpha.gamma + alpha.theta):
        typecheck(TypeEnv(), t, ty, hints)


# -- actions ---------------------------------------------------------------------

class Action:
    __slots__ = ()


@dataclass(frozen=True)
class Eval(Action):
    def __str__(self) -> str:
        return "eval"


@dataclass(frozen=True)
class Unbang(Action):
    l: int  # noqa: E741 - index names follow the rule schemata

    def __str__(self) -> str:
        return f"?{self.l}"


@dataclass(frozen=True)
class Dup(Action):
    l: int  # noqa: E741

    def __str__(self) -> str:
        return f"!{self.l}"


@dataclass(frozen=True)
class AppAction(Action):
    """Apply ``Theta_l`` to ``t`` filled with ``Gamma_i`` (as ``g1..``) and
    ``(Theta - l)_j`` (as ``d1..``)."""

    i: tuple[int, ...]
    j: tuple[int, ...]
    l: int  # noqa: E741
    t: Term

    def __str__(self) -> str:
        return (f"app(i=[{','.join(map(str, self.i))}],j=[{','.join(map(str, self.j))}],"
                f"l={self.l},t={show(self.t)})")


EVAL = Eval()


def gamma_param(p: int) -> str:
    return f"g{p}"


def theta_param(q: int) -> str:
    return f"d{q}"


def b(alpha: ConfigType, action: Action, ops: Mapping[str, int] | None = None) -> ConfigType | None:
    """The successor type of ``alpha`` under ``action``, or ``None`` if disabled."""
    g, d = alpha.gamma, alpha.theta
    if isinstance(action, Eval):
        return ConfigType(g, d, False) if alpha.comp else None
    if alpha.comp:
        return None
    if isinstance(action, Unbang):
        if not 1 <= action.l <= len(d):
            return None
        h = unfold(d[action.l - 1])
        if not isinstance(h, TBang):
            return None
        return ConfigType(g + (h.body,), seq_remove(d, action.l), False)
    if isinstance(action, Dup):
        if not 1 <= action.l <= len(g):
            return None
        return ConfigType(g, d + (g[action.l - 1],), True)
    if isinstance(action, AppAction):
        if not 1 <= action.l <= len(d):
            return None
        h = unfold(d[action.l - 1])
        rest = seq_remove(d, action.l)
        if not isinstance(h, TLolli) or not valid(action.i, len(g)) or not valid(action.j, len(rest)):
            return None
        if action.t.free_lin != {theta_param(q) for q in range(1, len(action.j) + 1)}:
            return None
        env = TypeEnv(
            tuple((gamma_param(p), ty) for p, ty in enumerate(seq_select(g, action.i), 1)),
            tuple((theta_param(q), ty) for q, ty in enumerate(seq_select(rest, action.j), 1)))
        if not action.t.is_value:
            return None
        try:
            typecheck(env, action.t, h.arg)
        except TypeCheckError:
            return None
        if ops is not None and any(op not in ops for op in _ops_in(action.t)):
            return None
        return ConfigType(g, seq_remove(rest, action.j) + (h.res,), True)
    return None


def _ops_in(t: Term) -> set[str]:
    out = {t.name} if isinstance(t, Op) else set()
    for c in t.children():
        out |= _ops_in(c)
    return out


def step(k: Configuration, action: Action, fuel: int, monad: Monad | str = "dist"):
    """One transition from ``k``: a monadic value over successor configurations."""
    m = get_monad(monad) if isinstance(monad, str) else monad
    g, d = k.gamma, k.theta
    if isinstance(action, Eval):
        if not k.is_comp:
            raise ActionError(f"eval is not enabled at {k}")
        return m.bind(eval_fuel(d[-1], fuel, m),
                      lambda v: m.unit(Configuration(g, d[:-1] + (v,))))
    if k.is_comp:
        raise ActionError(f"{action} is not enabled at the computation state {k}")
    if isinstance(action, Unbang):
        if not 1 <= action.l <= len(d) or not _is_bang(d[action.l - 1]):
            raise ActionError(f"{action} is not enabled at {k}")
        return m.unit(Configuration(g + (d[action.l - 1].body,), seq_remove(d, action.l)))
    if isinstance(action, Dup):
        if not 1 <= action.l <= len(g):
            raise ActionError(f"{action} is not enabled at {k}")
        return m.unit(Configuration(g, d + (g[action.l - 1],)))
    if isinstance(action, AppAction):
        if not 1 <= action.l <= len(d) or not isinstance(d[action.l - 1], Abs):
            raise ActionError(f"{action} is not enabled at {k}")
        fn = d[action.l - 1]
        rest = seq_remove(d, action.l)
        try:
            resources = seq_select(g, action.i)
            linear = seq_select(rest, action.j)
            remaining = seq_remove(rest, action.j)
        except IndexError as err:
            raise ActionError(f"{action} is not enabled at {k}: {err}") from None
        arg = subst(action.t,
                    lin={theta_param(q): v for q, v in enumerate(linear, 1)},
                    nonlin={gamma_param(p): e for p, e in enumerate(resources, 1)})
        body = subst(fn.body, lin={fn.var: arg})
        return m.unit(Configuration(g, remaining + (canonical(body),)))
    raise ActionError(f"unknown action {action!r}")


def _is_bang(t: Term) -> bool:
    return isinstance(t, Bang)


def enabled_actions(alpha: ConfigType, ctx_size: int, ops: Mapping[str, int] | None = None,
                    hints: Iterable[Type] = ()) -> list[Action]:
    """Every action enabled at ``alpha``, with application contexts of at most
    ``ctx_size`` nodes, in a fixed order."""
    return list(_enabled(alpha, ctx_size, tuple(sorted((ops or {}).items())), tuple(hints)))


@lru_cache(maxsize=4096)
def _enabled(alpha: ConfigType, ctx_size: int, ops: tuple, hints: tuple) -> tuple[Action, ...]:
    if alpha.comp:
        return (EVAL,)
    g, d = alpha.gamma, alpha.theta
    out: list[Action] = [Unbang(l) for l in range(1, len(d) + 1) if isinstance(unfold(d[l - 1]), TBang)]
    out += [Dup(l) for l in range(1, len(g) + 1)]
    if ctx_size < 1:
        return tuple(out)
    en = Enumerator(list(g) + list(d) + list(hints), dict(ops))
    all_g = tuple((gamma_param(p), ty) for p, ty in enumerate(g, 1))
    sigma = _env_key(en, all_g)
    for l in range(1, len(d) + 1):
        h = unfold(d[l - 1])
        if not isinstance(h, TLolli):
            continue
        rest = seq_remove(d, l)
        target = en.tid(h.arg)
        for size_j in range(len(rest) + 1):
            for j in combinations(range(1, len(rest) + 1), size_j):
                omega = _env_key(en, ((theta_param(q), rest[jj - 1]) for q, jj in enumerate(j, 1)))
                for n in range(1, ctx_size + 1):
                    for t in en.gen("value", target, sigma, omega, n, 0):
                        used = sorted(int(a[1:]) for a in t.free_nonlin)
                        local = subst(t, nonlin={gamma_param(p): _nl(gamma_param(q))
                                                 for q, p in enumerate(used, 1)})
                        out.append(AppAction(tuple(used), j, l, local))
    return tuple(out)


def _nl(name: str) -> Term:
    return NonLinVar(name)
