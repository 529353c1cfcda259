"""Bounded contextual equivalence by exhaustive context enumeration.

This is the ground truth the trace checker is compared against: two closed
computations are distinguished when some single-hole context ``C`` of
bounded size gives different observations ``obs(eval_fuel(C[e]))``.  The
oracle shares nothing with the transition system beyond the evaluator.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .core.enumerate import Enumerator, enumerate_contexts, enumerate_terms
from .core.terms import HOLE, Return, Term, canonical, fill, show, subst
from .core.types import TBang, Type, closure
from .core.typing import TypeCheckError, TypeEnv, infer_type, type_eq, typecheck
from .evaluator import eval_fuel
from .monads import Monad, get_monad, show_mval
from .prelude import IDENTITY, U, Pair, omega
from .rts import ConfigType
from .traces import DISTINGUISHED, EQUIVALENT, TraceReport, trace_equiv

__all__ = ["enumerate_contexts", "contexts_by_size", "ctx_equiv", "CtxReport", "cross_check",
           "CrossCheckReport", "random_pairs", "default_seed"]


def _m(monad: Monad | str) -> Monad:
    return get_monad(monad) if isinstance(monad, str) else monad


def contexts_by_size(hole_type: Type, budget: int, ops: Mapping[str, int] | None = None,
                     result_types: Sequence[Type] | None = None) -> Iterator[Term]:
    """Contexts for ``hole_type`` at every result type, size-major, alpha-distinct.

    Result types default to the types reachable from the hole type.
    """
    results = list(result_types) if result_types is not None else closure([hole_type])
    en = Enumerator([hole_type, *results], ops)
    omega_ = ((HOLE, en.tid(hole_type)),)
    seen: set[Term] = set()
    for n in range(1, budget + 1):
        for r in results:
            for c in en.gen("comp", en.tid(r), (), omega_, n, 0):
                key = canonical(c)
                if key not in seen:
                    seen.add(key)
                    yield c


@dataclass(frozen=True)
class CtxReport:
    verdict: str
    context: Term | None
    lhs_obs: object = None
    rhs_obs: object = None
    bounds: dict = field(default_factory=dict)
    contexts_checked: int = 0

    @property
    def equivalent(self) -> bool:
        return self.verdict == EQUIVALENT

    def to_json(self, monad: Monad | str) -> dict:
        m = _m(monad)
        out: dict = {"verdict": self.verdict, "bounds": dict(self.bounds),
                     "contexts_checked": self.contexts_checked, "witness": None}
        if self.context is not None:
            out["witness"] = {"context": show(self.context),
                              "lhs_obs": m.to_json(self.lhs_obs),
                              "rhs_obs": m.to_json(self.rhs_obs)}
        return out

    def describe(self, monad: Monad | str) -> str:
        m = _m(monad)
        b_ = ", ".join(f"{k}={v}" for k, v in self.bounds.items())
        lines = [f"{self.verdict} ({b_}; {self.contexts_checked} contexts)"]
        if self.context is not None:
            lines.append(f"  context: {show(self.context)}")
            lines.append(f"  lhs:     {show_mval(m, self.lhs_obs)}")
            lines.append(f"  rhs:     {show_mval(m, self.rhs_obs)}")
        return "\n".join(lines)


def _type_of(e: Term, tau: Type | None, hints: list[Type]) -> Type:
    if tau is not None:
        typecheck(TypeEnv(), e, tau, hints)
        return tau
    return infer_type(TypeEnv(), e, hints)


def ctx_equiv(e: Term, f: Term, ctx_size: int, fuel: int, monad: Monad | str = "dist",
              tau: Type | None = None, hints: Iterable[Type] = ()) -> CtxReport:
    """Compare observations of ``C[e]`` and ``C[f]`` over all contexts within the bound."""
    m = _m(monad)
    hints = list(hints)
    te, tf = _type_of(e, tau, hints), _type_of(f, tau, hints)
    if not type_eq(te, tf):
        raise TypeCheckError(f"the two computations have different types: {te} and {tf}")
    bounds = {"ctx_size": ctx_size, "fuel": fuel}
    checked = 0
    for c in contexts_by_size(te, ctx_size, m.signature):
        checked += 1
        o1 = m.obs(eval_fuel(fill(c, e), fuel, m))
        o2 = m.obs(eval_fuel(fill(c, f), fuel, m))
        if not m.mval_eq(o1, o2):
            return CtxReport(DISTINGUISHED, c, o1, o2, bounds, checked)
    return CtxReport(EQUIVALENT, None, bounds=bounds, contexts_checked=checked)


# -- random corpus -----------------------------------------------------------------

#: Non-linear names available to generated terms, and what they stand for.
PRELUDE_TYPES: dict[str, Type] = {"i": U, "o": U}


def _prelude_terms() -> dict[str, Term]:
    om, _ = omega(U)
    return {"i": Return(IDENTITY), "o": om}


def default_seed() -> int:
    return int(os.environ.get("LAMBANG_SEED", "0"))


def random_pairs(count: int, seed: int | None = None, max_size: int = 6,
                 types: Sequence[Type] | None = None,
                 ops: Mapping[str, int] | None = None) -> list[Pair]:
    """Seeded pairs of closed computations of a common type.

    Terms are enumerated with at most ``max_size`` nodes over the non-linear
    names ``i`` (the identity) and ``o`` (a divergent term), then closed by
    substituting those names.
    """
    rng = random.Random(default_seed() if seed is None else seed)
    types = list(types) if types is not None else [U, TBang(U)]
    env = TypeEnv.of(nonlinear=PRELUDE_TYPES)
    sub = _prelude_terms()
    _, hints = omega(U)
    pools = []
    for ty in types:
        pool = [subst(t, nonlin=sub) for t in enumerate_terms(
            env, ty, max_size, kind="comp", ops=dict(ops if ops is not None else {"choice": 2}))]
        if pool:
            pools.append((ty, pool))
    out = []
    for n in range(count):
        ty, pool = pools[rng.randrange(len(pools))]
        e, f = rng.choice(pool), rng.choice(pool)
        out.append(Pair(f"random-{n}", e, f, ty, tuple(hints)))
    return out


# -- cross check ---------------------------------------------------------------------

@dataclass(frozen=True)
class PairResult:
    pair: Pair
    trace: TraceReport
    ctx: CtxReport
    enlarged: TraceReport | None = None  # rerun at larger bounds when needed


@dataclass(frozen=True)
class CrossCheckReport:
    results: tuple[PairResult, ...]

    @property
    def violations(self) -> list[PairResult]:
        """Trace-equivalent within bounds yet context-distinguished."""
        return [r for r in self.results if r.trace.equivalent and not r.ctx.equivalent]

    @property
    def trace_only(self) -> list[PairResult]:
        """Trace-distinguished but not context-distinguished within bounds."""
        return [r for r in self.results if not r.trace.equivalent and r.ctx.equivalent]

    @property
    def unresolved(self) -> list[PairResult]:
        """Violations the enlarged trace bounds still fail to separate."""
        return [r for r in self.violations if r.enlarged is None or r.enlarged.equivalent]

    def summary(self) -> dict:
        both = sum(1 for r in self.results if not r.trace.equivalent and not r.ctx.equivalent)
        return {"pairs": len(self.results), "soundness_violations": len(self.violations),
                "unresolved_after_enlarging": len(self.unresolved),
                "distinguished_by_both": both, "trace_only": len(self.trace_only),
                "equivalent_by_both": sum(1 for r in self.results
                                          if r.trace.equivalent and r.ctx.equivalent)}


def cross_check(pairs: Iterable[Pair], depth: int, ctx_size: int, oracle_size: int, fuel: int,
                monad: Monad | str = "dist", enlarge: tuple[int, int] = (2, 2)) -> CrossCheckReport:
    """Run both checkers on every pair with the same fuel.

    A pair that is trace-equivalent within bounds but context-distinguished
    is re-checked with depth and context size grown by ``enlarge`` and the
    result recorded.
    """
    m = _m(monad)
    results = []
    for p in pairs:
        alpha = ConfigType((), (p.type,), True)
        tr = trace_equiv(p.lhs, p.rhs, depth, ctx_size, fuel, m, alpha=alpha, beta=alpha)
        cx = ctx_equiv(p.lhs, p.rhs, oracle_size, fuel, m, tau=p.type, hints=p.hints)
        bigger = None
        if tr.equivalent and not cx.equivalent:
            bigger = trace_equiv(p.lhs, p.rhs, depth + enlarge[0], ctx_size + enlarge[1],
                                 fuel, m, alpha=alpha, beta=alpha)
        results.append(PairResult(p, tr, cx, bigger))
    return CrossCheckReport(tuple(results))
