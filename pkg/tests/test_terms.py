from __future__ import annotations

from lambang.core.parser import parse_term
from lambang.core.terms import (
    Abs, App, Bang, CoSeq, Hole, LinVar, NonLinVar, Return, Seq, alpha_eq, canonical, fill,
    subst, subst_comp, subst_value,
)

import pytest


def P(s, **kw):
    return parse_term(s, **kw)


def test_subst_value_examples():
    ident = P(r"\y. return y", expect="value")
    assert subst_value(P("return x"), "x", ident) == Return(ident)
    assert subst_value(P("return z"), "x", ident) == P("return z")
    f = P(r"\y. g y", expect="value")
    got = subst_value(P("let w = x v' in return w"), "x", f)
    assert got == Seq(App(f, LinVar("v'")), "w", Return(LinVar("w")))


def test_subst_comp_examples():
    e = P("choice(return u, return u')")
    body = P("let z1 = a in let z2 = a in return v")
    got = subst_comp(body, "a", e)
    assert got == Seq(e, "z1", Seq(e, "z2", Return(LinVar("v"))))
    assert subst_comp(P("return v"), "a", e) == P("return v")
    assert subst_comp(P("return !a"), "a", e) == Return(Bang(e))


def test_subst_rejects_wrong_class():
    with pytest.raises(ValueError):
        subst_value(P("return x"), "x", P("return y"))
    with pytest.raises(ValueError):
        subst_comp(P("a"), "a", P(r"\x. return x", expect="value"))


def test_capture_avoidance():
    t = P(r"return \y. (\z. return x) y")
    got = subst_value(t, "x", LinVar("y"))
    inner = got.value
    assert inner.var != "y"
    assert LinVar("y") in (inner.body.fn.body.value,)
    t2 = P("let !b = v in a")
    got2 = subst_comp(t2, "a", NonLinVar("b"))
    assert got2.var != "b" and got2.body == NonLinVar("b")


def test_namespaces_are_separate():
    t = P(r"\a. let !a = a in a")
    assert t.free_lin == frozenset() and t.free_nonlin == frozenset()
    assert subst_comp(P("let !a = x in a"), "a", P("return v")) == P("let !a = x in a")


def test_alpha_equivalence():
    assert alpha_eq(P(r"\x. return x", expect="value"), P(r"\y. return y", expect="value"))
    assert not alpha_eq(P(r"\x. return y", expect="value"), P(r"\y. return y", expect="value"))
    assert alpha_eq(P("let !a = v in a"), P("let !b = v in b"))
    assert canonical(P(r"\q. return q", expect="value")) == canonical(P(r"\r. return r", expect="value"))


def test_size_counts_every_node():
    assert P(r"\x. return x", expect="value").size == 3
    assert P("x", expect="value").size == 1
    assert Hole().size == 1
    assert P("let y = [-] in let !a = y in let z1 = a in let z2 = a in z1 z2").size == 11


def test_fill_captures():
    ctx = P("let y = [-] in return y")
    assert fill(ctx, P("return v")) == Seq(Return(LinVar("v")), "y", Return(LinVar("y")))
    assert fill(P(r"return \x. [-]"), P("return x")) == Return(Abs("x", Return(LinVar("x"))))


def test_hash_consistent_with_equality():
    a, b = P("let !a = !(return v) in a"), CoSeq(Bang(Return(LinVar("v"))), "a", NonLinVar("a"))
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1
