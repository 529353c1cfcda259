from __future__ import annotations

import random
from fractions import Fraction

import pytest

from lambang.core.parser import parse_term
from lambang.core.terms import Return, canonical
from lambang.core.typing import EMPTY_ENV, typecheck
from lambang.evaluator import EvalError, approximants, eval_fuel, evaluate
from lambang.monads import DIST, DIV, INPUT, MAYBE, MONADS, OUTPUT, Conv, Dist, Leaf, Out, Read
from lambang.prelude import IDENTITY, U, omega

from gen import closed_pool

I = canonical(IDENTITY)
OM, HINTS = omega(U)


def P(s):
    return parse_term(s)


def test_return_at_fuel_one():
    assert eval_fuel(Return(IDENTITY), 1, DIST) == DIST.unit(I)


def test_fuel_zero_is_bottom():
    for m in MONADS.values():
        assert eval_fuel(Return(IDENTITY), 0, m) == m.bottom()


def test_choice_with_divergence():
    # by hand: omega contributes no mass at any fuel
    e = parse_term(f"choice(return \\x. return x, {OM})")
    assert eval_fuel(e, 50, DIST) == Dist({I: Fraction(1, 2)})


def test_evaluate_examples():
    r = evaluate(Return(IDENTITY), 5, DIST)
    assert r.value == DIST.unit(I) and r.stabilized and r.fuel_used == 5
    r = evaluate(OM, 100, MAYBE)
    assert r.value is DIV and r.stabilized
    r = evaluate(P(r"print_a(print_b(return \x. return x))"), 10, OUTPUT)
    assert r.value == Out("ab", Conv(I))


def test_omega_is_bottom_at_every_fuel():
    for m in MONADS.values():
        assert all(a == m.bottom() for a in approximants(OM, 101, m))


def test_simultaneous_decrement():
    # return needs one unit of fuel, an enclosing op needs another
    e = P(r"choice(return \x. return x, return \x. return x)")
    assert eval_fuel(e, 1, DIST) == Dist()
    assert eval_fuel(e, 2, DIST) == DIST.unit(I)
    # a let needs one unit for itself; both halves then run at the same fuel
    e = P(r"let y = return \x. return x in return y")
    assert eval_fuel(e, 1, DIST) == Dist()
    assert eval_fuel(e, 2, DIST) == DIST.unit(I)


def test_values_are_canonical():
    e = P(r"choice(return \x. return x, return \y. return y)")
    assert eval_fuel(e, 5, DIST) == DIST.unit(I)


def test_input_tree():
    e = P(r"read(return \x. return x, let y = return \x. return x in return y)")
    assert eval_fuel(e, 3, INPUT) == Read(Leaf(I), Leaf(I))
    assert eval_fuel(e, 2, INPUT) == Read(Leaf(I), INPUT.bottom())


def test_errors():
    with pytest.raises(EvalError):
        eval_fuel(P("a"), 3)
    with pytest.raises(EvalError):
        eval_fuel(P(r"let !a = \x. return x in a"), 3)
    with pytest.raises(EvalError):
        eval_fuel(P("(!a) v"), 3)
    with pytest.raises(ValueError):
        evaluate(Return(IDENTITY), 0)


@pytest.mark.parametrize("monad", list(MONADS.values()), ids=list(MONADS))
def test_fuel_monotone_and_type_preserving(monad):
    ops = {"print_a": 1, "print_b": 1} if monad is OUTPUT else monad.signature
    pool = closed_pool(ops, 7)
    rng = random.Random(1)
    for e, ty in rng.sample(pool, min(60, len(pool))):
        chain = approximants(e, 12, monad)
        for a, b in zip(chain, chain[1:]):
            assert monad.leq(a, b)
        for v in monad.support(chain[-1]):
            typecheck(EMPTY_ENV, v, ty, HINTS)
        if monad is DIST:
            masses = [a.mass for a in chain]
            assert masses == sorted(masses) and masses[-1] <= 1


def test_deterministic():
    e = parse_term(f"choice(return \\x. return x, let g = {OM} in return g)")
    assert eval_fuel(e, 20, DIST) == eval_fuel(e, 20, DIST)
