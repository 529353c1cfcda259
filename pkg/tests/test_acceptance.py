"""Acceptance criteria, each run at its stated bounds and tolerance.

The terminal summary prints one ``criterion N: PASS|FAIL`` line per
criterion (see ``conftest.py``).
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from lambang.core.terms import canonical, fill, show
from lambang.core.parser import parse_term
from lambang.evaluator import approximants, eval_fuel
from lambang.monads import DIST, INPUT, MONADS, OUTPUT, STAR, Conv, Dist, Leaf, Out, Read
from lambang.oracle import cross_check, ctx_equiv, random_pairs
from lambang.prelude import IDENTITY, U, bang_dist_pair, lambda_dist_pair
from lambang.rts import ConfigType, Configuration
from lambang.traces import DISTINGUISHED, EQUIVALENT, st, st_star, trace_equiv, trace_set

from gen import closed_pool, random_kleisli, random_mval, random_op

QUARTER = Dist({STAR: Fraction(1, 4)})
HALF = Dist({STAR: Fraction(1, 2)})


class Clock:
    def __init__(self, limit: float):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


def _traces(p, depth, ctx, fuel):
    alpha = ConfigType((), (p.type,), True)
    return trace_equiv(p.lhs, p.rhs, depth, ctx, fuel, "dist", alpha=alpha, beta=alpha)


@pytest.mark.criterion(1, "lambda-dist pair equivalent up to bounds (traces and contexts)")
def test_criterion_1_lambda_dist():
    p = lambda_dist_pair()
    with Clock(300):
        tr = _traces(p, 6, 3, 50)
        cx = ctx_equiv(p.lhs, p.rhs, 7, 50, "dist", tau=p.type, hints=p.hints)
    print(tr.describe("dist"))
    print(cx.describe("dist"))
    assert tr.verdict == EQUIVALENT
    assert cx.verdict == EQUIVALENT


@pytest.mark.criterion(2, "bang-dist pair separated 1/4 vs 1/2 by a trace and by a context of size <= 9")
def test_criterion_2_bang_dist():
    p = bang_dist_pair()
    with Clock(600):
        tr = _traces(p, 6, 3, 50)
        cx = ctx_equiv(p.lhs, p.rhs, 9, 50, "dist", tau=p.type, hints=p.hints)
    print(tr.describe("dist"))
    print(cx.describe("dist"))
    assert tr.verdict == DISTINGUISHED
    assert (tr.witness.lhs_obs, tr.witness.rhs_obs) == (QUARTER, HALF)
    # Fails as stated: the smallest linearly typed separating context has 11
    # nodes; see test_bang_dist_context_witness_at_size_11.
    assert cx.verdict == DISTINGUISHED, f"no separating context among {cx.contexts_checked}"
    assert (cx.lhs_obs, cx.rhs_obs) == (QUARTER, HALF)


def test_bang_dist_trace_witness_replays():
    p = bang_dist_pair()
    tr = _traces(p, 6, 3, 50)
    assert tr.verdict == DISTINGUISHED
    t = tr.witness.trace
    assert st(Configuration.of_term(p.lhs), t, 50) == QUARTER
    assert st(Configuration.of_term(p.rhs), t, 50) == HALF


def test_bang_dist_context_witness_at_size_11():
    p = bang_dist_pair()
    cx = ctx_equiv(p.lhs, p.rhs, 11, 50, "dist", tau=p.type, hints=p.hints)
    assert cx.verdict == DISTINGUISHED
    assert cx.context.size == 11
    assert (cx.lhs_obs, cx.rhs_obs) == (QUARTER, HALF)
    assert DIST.obs(eval_fuel(fill(cx.context, p.lhs), 50)) == QUARTER
    assert show(cx.context) == "let x0 = [-] in let !a1 = x0 in let x2 = a1 in let x3 = a1 in x2 x3"


@pytest.mark.criterion(3, "Kleisli laws and algebraicity on 1000 values per monad")
def test_criterion_3_monad_laws():
    with Clock(60):
        for m in MONADS.values():
            rng = random.Random(f"laws-{m.name}")
            for _ in range(1000):
                x = rng.randrange(4)
                mv = random_mval(m, rng)
                f, g = random_kleisli(m, rng), random_kleisli(m, rng)
                assert m.mval_eq(m.bind(m.unit(x), f), f(x))
                assert m.mval_eq(m.bind(mv, m.unit), mv)
                assert m.mval_eq(m.bind(m.bind(mv, f), g), m.bind(mv, lambda y: m.bind(f(y), g)))
                op = random_op(m, rng)
                if op is None:
                    continue
                args = [random_mval(m, rng) for _ in range(m.signature[op])]
                assert m.mval_eq(m.bind(m.apply_op(op, args), f),
                                 m.apply_op(op, [m.bind(a, f) for a in args]))


# pool size per monad chosen so every monad has at least 200 distinct terms
POOL = {"maybe": ({}, 9), "dist": (DIST.signature, 8), "output": ({"print_a": 1, "print_b": 1}, 7),
        "input": (INPUT.signature, 8)}


@pytest.mark.criterion(4, "fuel approximants form an increasing chain up to k = 30")
def test_criterion_4_fuel_chain():
    with Clock(120):
        for name, m in MONADS.items():
            ops, size = POOL[name]
            pool = sorted({t for t, _ in closed_pool(dict(ops), size)}, key=show)
            rng = random.Random(f"chain-{name}")
            terms = rng.sample(pool, min(250, len(pool)))
            assert len(terms) >= 200
            for e in terms:
                chain = approximants(e, 31, m)
                assert chain[0] == m.bottom()
                for k in range(31):
                    assert m.leq(chain[k], chain[k + 1]), (name, show(e), k)


@pytest.mark.criterion(5, "st_star equals binding through st on 500 (kappa, trace) pairs")
def test_criterion_5_pointwise_st():
    checked = 0
    with Clock(120):
        for name, m in MONADS.items():
            ops = dict(POOL[name][0])
            rng = random.Random(f"st-{name}")
            for ty in (U, bang_dist_pair().type):
                configs = sorted({Configuration.of_term(t) for t, _ in closed_pool(ops, 6, (ty,))}, key=str)
                traces = list(trace_set(ConfigType((), (ty,), True), 4, 3, ops))
                for _ in range(70):
                    kappa = random_mval(m, rng, elems=rng.sample(configs, min(4, len(configs))))
                    t = rng.choice(traces)
                    lhs = st_star(kappa, t, 20, m)
                    rhs = m.bind(kappa, lambda k: st(k, t, 20, m))
                    assert m.mval_eq(lhs, rhs), (name, [str(k) for k in m.support(kappa)], t)
                    checked += 1
    assert checked >= 500


@pytest.mark.criterion(6, "cross-check of 200 random pairs has no soundness violations")
def test_criterion_6_cross_check():
    pairs = random_pairs(200, seed=0, max_size=6)
    with Clock(1800):
        rep = cross_check(pairs, depth=5, ctx_size=3, oracle_size=6, fuel=40, monad="dist")
    summary = rep.summary()
    print(summary)
    # completeness is reported, not asserted: trace-only pairs need a larger oracle
    for r in rep.trace_only:
        print(f"trace-only: {show(r.pair.lhs)}  vs  {show(r.pair.rhs)}")
    assert summary["pairs"] == 200
    assert rep.violations == []


@pytest.mark.criterion(7, "output and input monads evaluate the print and read examples")
def test_criterion_7_output_input():
    v = u = IDENTITY
    w = parse_term(r"\x. let y = return x in return y")
    with Clock(1):
        out = eval_fuel(parse_term(r"print_a(print_b(return \x. return x))", OUTPUT.signature), 5, OUTPUT)
        tree = eval_fuel(parse_term(r"read(return \x. return x, return \x. let y = return x in return y)",
                                    INPUT.signature), 5, INPUT)
    assert out == Out("ab", Conv(canonical(v)))
    assert tree == Read(Leaf(canonical(u)), Leaf(canonical(w)))
