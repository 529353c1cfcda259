"""The linear type system.

Judgements are ``Sigma | Omega |- t : tau`` with ``Sigma`` non-linear (weakening
allowed) and ``Omega`` linear (every variable used exactly once).  The
checker works in checking mode against a given type.  When an intermediate
type cannot be synthesised (an abstraction in function position applied to
another abstraction, say) it falls back to the finite universe of types
reachable from the target, the environment and caller-supplied hints.

The hole ``[-]`` is handled as a linear variable named ``HOLE``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .terms import (
    HOLE, Abs, App, Bang, CoSeq, Hole, LinVar, NonLinVar, Op, Return, Seq, Term,
)
from .types import TBang, TLolli, Type, TypeTable, closure, show_type, type_eq as _type_eq, unfold


class TypeCheckError(Exception):
    """The term is not derivable at the requested type."""


class CannotInfer(Exception):
    """Synthesis failed; the caller should check against a candidate."""


@lru_cache(maxsize=65536)
def type_eq(s: Type, t: Type) -> bool:
    return _type_eq(s, t)


@dataclass(frozen=True)
class TypeEnv:
    """Non-linear and linear typing environments, without repeated names."""

    nonlinear: tuple[tuple[str, Type], ...] = ()
    linear: tuple[tuple[str, Type], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nonlinear", tuple(self.nonlinear))
        object.__setattr__(self, "linear", tuple(self.linear))
        for part, label in ((self.nonlinear, "non-linear"), (self.linear, "linear")):
            names = [n for n, _ in part]
            if len(set(names)) != len(names):
                raise ValueError(f"repeated name in {label} environment: {names}")

    @classmethod
    def of(cls, nonlinear: Mapping[str, Type] | None = None,
           linear: Mapping[str, Type] | None = None) -> TypeEnv:
        return cls(tuple((nonlinear or {}).items()), tuple((linear or {}).items()))

    def types(self) -> list[Type]:
        return [t for _, t in self.nonlinear] + [t for _, t in self.linear]


EMPTY_ENV = TypeEnv()


def _show_env(omega: Mapping[str, Type]) -> str:
    return ", ".join(f"{x}:{show_type(t)}" for x, t in omega.items()) or "empty"


@dataclass
class _Checker:
    universe: list[Type]
    table: TypeTable = field(default_factory=TypeTable)
    memo: dict = field(default_factory=dict)

    # -- environment bookkeeping
    def _lin(self, t: Term, omega: Mapping[str, Type]) -> None:
        fv = t.free_lin
        for x in fv:
            if x not in omega:
                what = "the hole" if x == HOLE else f"linear variable {x!r}"
                raise TypeCheckError(f"{what} is not available in {t} (used twice or unbound)")
        for x in omega:
            if x not in fv:
                what = "the hole" if x == HOLE else f"linear variable {x!r}"
                raise TypeCheckError(f"{what} is unused in {t}")

    @staticmethod
    def _part(omega: Mapping[str, Type], t: Term) -> dict[str, Type]:
        return {x: ty for x, ty in omega.items() if x in t.free_lin}

    def _disjoint(self, a: Term, b: Term, whole: Term) -> None:
        both = a.free_lin & b.free_lin
        if both:
            names = ", ".join(sorted("the hole" if x == HOLE else repr(x) for x in both))
            raise TypeCheckError(f"linear {names} used twice in {whole}")

    def _key(self, sigma, omega, t, tau):
        return (tuple(sorted((a, self.table.id_of(s)) for a, s in sigma.items())),
                tuple(sorted((x, self.table.id_of(s)) for x, s in omega.items())),
                t, None if tau is None else self.table.id_of(tau))

    # -- checking
    def check(self, sigma: Mapping[str, Type], omega: Mapping[str, Type], t: Term, tau: Type) -> None:
        key = self._key(sigma, omega, t, tau)
        hit = self.memo.get(key)
        if hit is True:
            return
        if isinstance(hit, TypeCheckError):
            raise hit
        try:
            self._check(sigma, omega, t, tau)
        except TypeCheckError as err:
            self.memo[key] = err
            raise
        self.memo[key] = True

    def _mismatch(self, t: Term, expected: Type, found: Type | str) -> TypeCheckError:
        found_s = found if isinstance(found, str) else show_type(found)
        return TypeCheckError(f"{t} has type {found_s}, expected {show_type(expected)}")

    def _check(self, sigma, omega, t: Term, tau: Type) -> None:
        self._lin(t, omega)
        if isinstance(t, (LinVar, Hole)):
            have = omega[t.name if isinstance(t, LinVar) else HOLE]
            if not type_eq(have, tau):
                raise self._mismatch(t, tau, have)
        elif isinstance(t, NonLinVar):
            if t.name not in sigma:
                raise TypeCheckError(f"unbound non-linear variable {t.name!r}")
            if not type_eq(sigma[t.name], tau):
                raise self._mismatch(t, tau, sigma[t.name])
        elif isinstance(t, Abs):
            h = unfold(tau)
            if not isinstance(h, TLolli):
                raise self._mismatch(t, tau, "an arrow type")
            if t.var not in t.body.free_lin:
                raise TypeCheckError(f"linear variable {t.var!r} is unused in {t}")
            self.check(sigma, {**omega, t.var: h.arg}, t.body, h.res)
        elif isinstance(t, Bang):
            h = unfold(tau)
            if not isinstance(h, TBang):
                raise self._mismatch(t, tau, "a bang type")
            if omega:
                raise TypeCheckError(f"bang under a linear context ({_show_env(omega)}) in {t}")
            self.check(sigma, {}, t.body, h.body)
        elif isinstance(t, Return):
            self.check(sigma, omega, t.value, tau)
        elif isinstance(t, App):
            self._disjoint(t.fn, t.arg, t)
            o1, o2 = self._part(omega, t.fn), self._part(omega, t.arg)
            fn_ty = self._try_infer(sigma, o1, t.fn)
            if fn_ty is not None:
                h = unfold(fn_ty)
                if not isinstance(h, TLolli):
                    raise TypeCheckError(f"{t.fn} of type {show_type(fn_ty)} is applied but is not a function")
                if not type_eq(h.res, tau):
                    raise self._mismatch(t, tau, h.res)
                self.check(sigma, o2, t.arg, h.arg)
                return
            if isinstance(t.fn, Bang):
                raise TypeCheckError(f"{t.fn} is a bang value and cannot be applied")
            arg_ty = self._try_infer(sigma, o2, t.arg)
            if arg_ty is not None:
                self.check(sigma, o1, t.fn, TLolli(arg_ty, tau))
                return
            self._search(lambda s: (self.check(sigma, o2, t.arg, s),
                                    self.check(sigma, o1, t.fn, TLolli(s, tau))), t)
        elif isinstance(t, Seq):
            self._disjoint(t.first, t.body, t)
            if t.var not in t.body.free_lin:
                raise TypeCheckError(f"linear variable {t.var!r} is unused in {t}")
            o1, o2 = self._part(omega, t.first), self._part(omega, t.body)
            o2.pop(t.var, None)
            first_ty = self._try_infer(sigma, o1, t.first)
            if first_ty is not None:
                self.check(sigma, {**o2, t.var: first_ty}, t.body, tau)
                return
            self._search(lambda s: (self.check(sigma, o1, t.first, s),
                                    self.check(sigma, {**o2, t.var: s}, t.body, tau)), t)
        elif isinstance(t, CoSeq):
            self._disjoint(t.value, t.body, t)
            o1, o2 = self._part(omega, t.value), self._part(omega, t.body)
            v_ty = self._try_infer(sigma, o1, t.value)
            if v_ty is not None:
                h = unfold(v_ty)
                if not isinstance(h, TBang):
                    raise TypeCheckError(f"{t.value} of type {show_type(v_ty)} is not a bang value")
                self.check({**sigma, t.var: h.body}, o2, t.body, tau)
                return
            self._search(lambda s: (self.check(sigma, o1, t.value, TBang(s)),
                                    self.check({**sigma, t.var: s}, o2, t.body, tau)), t)
        elif isinstance(t, Op):
            for arg in t.args:
                self.check(sigma, omega, arg, tau)
        else:
            raise TypeCheckError(f"not a term: {t!r}")

    def _search(self, attempt, t: Term) -> None:
        first: TypeCheckError | None = None
        for s in self.universe:
            try:
                attempt(s)
                return
            except TypeCheckError as err:
                first = first or err
        detail = f": {first}" if first else ""
        raise TypeCheckError(f"no type in the search universe fits {t}{detail}")

    # -- synthesis
    def _try_infer(self, sigma, omega, t: Term) -> Type | None:
        try:
            return self.infer(sigma, omega, t)
        except CannotInfer:
            return None

    def infer(self, sigma, omega, t: Term) -> Type:
        self._lin(t, omega)
        if isinstance(t, LinVar):
            return omega[t.name]
        if isinstance(t, Hole):
            return omega[HOLE]
        if isinstance(t, NonLinVar):
            if t.name not in sigma:
                raise TypeCheckError(f"unbound non-linear variable {t.name!r}")
            return sigma[t.name]
        if isinstance(t, Bang):
            if omega:
                raise TypeCheckError(f"bang under a linear context ({_show_env(omega)}) in {t}")
            return TBang(self.infer(sigma, {}, t.body))
        if isinstance(t, Return):
            return self.infer(sigma, omega, t.value)
        if isinstance(t, App):
            self._disjoint(t.fn, t.arg, t)
            o1, o2 = self._part(omega, t.fn), self._part(omega, t.arg)
            fn_ty = self._try_infer(sigma, o1, t.fn)
            if fn_ty is not None:
                h = unfold(fn_ty)
                if not isinstance(h, TLolli):
                    raise TypeCheckError(f"{t.fn} of type {show_type(fn_ty)} is applied but is not a function")
                self.check(sigma, o2, t.arg, h.arg)
                return h.res
            if isinstance(t.fn, Abs):
                arg_ty = self.infer(sigma, o2, t.arg)
                return self.infer(sigma, {**o1, t.fn.var: arg_ty}, t.fn.body)
            raise CannotInfer(t)
        if isinstance(t, Seq):
            self._disjoint(t.first, t.body, t)
            o1, o2 = self._part(omega, t.first), self._part(omega, t.body)
            o2.pop(t.var, None)
            if t.var not in t.body.free_lin:
                raise TypeCheckError(f"linear variable {t.var!r} is unused in {t}")
            first_ty = self.infer(sigma, o1, t.first)
            return self.infer(sigma, {**o2, t.var: first_ty}, t.body)
        if isinstance(t, CoSeq):
            self._disjoint(t.value, t.body, t)
            o1, o2 = self._part(omega, t.value), self._part(omega, t.body)
            h = unfold(self.infer(sigma, o1, t.value))
            if not isinstance(h, TBang):
                raise TypeCheckError(f"{t.value} is not a bang value")
            return self.infer({**sigma, t.var: h.body}, o2, t.body)
        if isinstance(t, Op):
            for i, arg in enumerate(t.args):
                ty = self._try_infer(sigma, omega, arg)
                if ty is not None:
                    for j, other in enumerate(t.args):
                        if j != i:
                            self.check(sigma, omega, other, ty)
                    return ty
            raise CannotInfer(t)
        raise CannotInfer(t)


def _checker(env: TypeEnv, tau: Type | None, hints: Iterable[Type]) -> _Checker:
    seeds = ([tau] if tau is not None else []) + env.types() + list(hints)
    return _Checker(closure(seeds))


def _check_class(t: Term, want_value: bool) -> None:
    if t.is_value != want_value:
        kind = "value" if want_value else "computation"
        raise TypeCheckError(f"{t} is not a {kind}")


def typecheck(env: TypeEnv, t: Term, tau: Type, hints: Iterable[Type] = ()) -> None:
    """Raise ``TypeCheckError`` unless ``env |- t : tau`` is derivable."""
    c = _checker(env, tau, hints)
    c.check(dict(env.nonlinear), dict(env.linear), t, tau)


def typecheck_value(env: TypeEnv, v: Term, tau: Type, hints: Iterable[Type] = ()) -> None:
    _check_class(v, True)
    typecheck(env, v, tau, hints)


def typecheck_comp(env: TypeEnv, e: Term, tau: Type, hints: Iterable[Type] = ()) -> None:
    _check_class(e, False)
    typecheck(env, e, tau, hints)


def well_typed(env: TypeEnv, t: Term, tau: Type, hints: Iterable[Type] = ()) -> bool:
    try:
        typecheck(env, t, tau, hints)
        return True
    except TypeCheckError:
        return False


def infer_type(env: TypeEnv, t: Term, hints: Iterable[Type] = ()) -> Type:
    """Synthesise the type of ``t`` when it is determined by the term.

    Raises ``CannotInfer`` for terms such as a bare abstraction whose type
    has to be supplied, and ``TypeCheckError`` for ill-typed terms.
    """
    c = _checker(env, None, hints)
    return c.infer(dict(env.nonlinear), dict(env.linear), t)
