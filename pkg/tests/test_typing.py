from __future__ import annotations

import pytest

from lambang.core.enumerate import enumerate_terms
from lambang.core.parser import parse_term, parse_type
from lambang.core.terms import subst_comp, subst_value
from lambang.core.types import TBang, TLolli, TVar
from lambang.core.typing import (
    EMPTY_ENV, CannotInfer, TypeCheckError, TypeEnv, infer_type, typecheck, typecheck_comp,
    typecheck_value, well_typed,
)
from lambang.prelude import U, bang_dist_pair, lambda_dist_pair, omega

T = TVar("t")
TT = TLolli(T, T)


def P(s, **kw):
    return parse_term(s, **kw)


def test_spec_examples():
    typecheck_value(EMPTY_ENV, P(r"\x. return x", expect="value"), TT)
    with pytest.raises(TypeCheckError):
        typecheck_comp(TypeEnv.of(nonlinear={"e": T}, linear={"v": T}), P("(!e) v"), T)
    with pytest.raises(TypeCheckError, match="used twice"):
        typecheck_value(EMPTY_ENV, P(r"\x. let y = return x in let z = return x in return z",
                                     expect="value"), TT)


def test_linearity_errors():
    with pytest.raises(TypeCheckError, match="unused"):
        typecheck_value(EMPTY_ENV, P(r"\x. return \y. return y", expect="value"),
                        TLolli(T, TT))
    with pytest.raises(TypeCheckError, match="unused"):
        typecheck_comp(TypeEnv.of(linear={"x": T}), P(r"return \y. return y"), TT)
    with pytest.raises(TypeCheckError, match="used twice"):
        typecheck_comp(TypeEnv.of(linear={"f": TLolli(T, TT), "x": T}), P("let g = f x in g x"), T)


def test_bang_requires_empty_linear_context():
    with pytest.raises(TypeCheckError, match="bang under a linear context"):
        typecheck_value(TypeEnv.of(linear={"x": T}), P("!(return x)", expect="value"), TBang(T))
    typecheck_value(TypeEnv.of(nonlinear={"a": T}), P("!a", expect="value"), TBang(T))


def test_nonlinear_weakening_and_contraction():
    env = TypeEnv.of(nonlinear={"a": U, "b": T})
    typecheck_comp(env, P("let f = a in let g = a in f g"), U)


def test_operations_share_the_linear_context():
    env = TypeEnv.of(linear={"x": T})
    typecheck_comp(env, P("choice(return x, return x)"), T)
    with pytest.raises(TypeCheckError):
        typecheck_comp(env, P("choice(return x, a)"), T)


def test_wrong_class_rejected():
    with pytest.raises(TypeCheckError, match="not a value"):
        typecheck_value(EMPTY_ENV, P(r"return \x. return x"), TT)
    with pytest.raises(TypeCheckError, match="not a computation"):
        typecheck_comp(EMPTY_ENV, P(r"\x. return x", expect="value"), TT)


def test_type_mismatch():
    with pytest.raises(TypeCheckError):
        typecheck_value(EMPTY_ENV, P(r"\x. return x", expect="value"), TBang(T))
    with pytest.raises(TypeCheckError):
        typecheck_comp(TypeEnv.of(nonlinear={"a": T}), P("a"), TT)


def test_equirecursive_types_are_used():
    i = P(r"\x. return x", expect="value")
    typecheck_value(EMPTY_ENV, i, U)
    typecheck_comp(EMPTY_ENV, P(r"(\x. return x) \y. return y"), U)
    typecheck_value(EMPTY_ENV, i, parse_type("(mu X. X -o X) -o mu Y. Y -o Y"))


def test_running_examples_typecheck():
    om, hints = omega(U)
    typecheck_comp(EMPTY_ENV, om, U, hints)
    with pytest.raises(TypeCheckError):
        typecheck_comp(EMPTY_ENV, om, U)  # the self-application type must be hinted
    for p in (lambda_dist_pair(), bang_dist_pair()):
        typecheck_comp(EMPTY_ENV, p.lhs, p.type, p.hints)
        typecheck_comp(EMPTY_ENV, p.rhs, p.type, p.hints)


def test_inference():
    assert infer_type(TypeEnv.of(linear={"x": T}), P("return x")) == T
    assert infer_type(TypeEnv.of(nonlinear={"a": T}), P("return !a")) == TBang(T)
    with pytest.raises(CannotInfer):
        infer_type(EMPTY_ENV, P(r"return \x. return x"))


def test_type_env_rejects_repetitions():
    with pytest.raises(ValueError):
        TypeEnv((("a", T), ("a", T)), ())


def test_substitution_lemma_on_enumerated_instances():
    """Typing survives substituting well-typed terms for variables."""
    body_env = TypeEnv.of(nonlinear={"a": U}, linear={"x": U})
    bodies = list(enumerate_terms(body_env, U, 7, kind="comp", ops={"choice": 2}))
    values = list(enumerate_terms(EMPTY_ENV, U, 5, kind="value"))
    comps = list(enumerate_terms(EMPTY_ENV, U, 5, kind="comp", ops={"choice": 2}))
    assert bodies and values and comps
    for body in bodies:
        for v in values:
            once = subst_value(body, "x", v)
            assert well_typed(TypeEnv.of(nonlinear={"a": U}), once, U)
            for e in comps:
                assert well_typed(EMPTY_ENV, subst_comp(once, "a", e), U)


def test_shadowing_binder_leaves_outer_variable_unused():
    # the inner binder shadows, so the outer x is unused
    with pytest.raises(TypeCheckError):
        typecheck_value(EMPTY_ENV, P(r"\x. return \x. return x", expect="value"), TLolli(T, TT))
