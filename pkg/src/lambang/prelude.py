"""Standard closed terms: the identity, a divergent term, the running pairs.

The divergent term is built from a recursive type.  With
``S = mu Y. !Y -o tau`` the value ``w = \\x. let !a = x in let z = a in z (!a)``
has type ``S`` and ``omega = w (!(return w))`` loops at type ``tau``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core.terms import Abs, App, Bang, CoSeq, Hole, LinVar, NonLinVar, Op, Return, Seq, Term
from .core.types import TBang, TMuLolli, TVar, Type, show_type

#: ``U = U -o U``, the type of the untyped-style identity.
U = TMuLolli("X", TVar("X"), TVar("X"))
#: ``\x. return x : U``
IDENTITY = Abs("x", Return(LinVar("x")))


def self_app_type(tau: Type) -> Type:
    """``mu Y. !Y -o tau`` with ``Y`` chosen fresh for ``tau``."""
    y = "Y"
    while y in tau.free_vars:
        y += "'"
    return TMuLolli(y, TBang(TVar(y)), tau)


W = Abs("x", CoSeq(LinVar("x"), "a",
                   Seq(NonLinVar("a"), "z", App(LinVar("z"), Bang(NonLinVar("a"))))))


def omega(tau: Type = U) -> tuple[Term, list[Type]]:
    """A closed computation of type ``tau`` that never returns.

    Returns the term together with the type hint the typechecker needs for
    its self-application.
    """
    return App(W, Bang(Return(W))), [self_app_type(tau)]


@dataclass(frozen=True)
class Pair:
    """Two closed computations of one type, with their typing hints."""

    name: str
    lhs: Term
    rhs: Term
    type: Type
    hints: tuple[Type, ...]


def lambda_dist_pair() -> Pair:
    """``return \\x.(e + f)`` against ``(return \\x.e) + (return \\x.f)``.

    Here ``e = return x`` and ``f = let g = omega in g x``, both using ``x``.
    """
    om, hints = omega(U)
    e = Return(LinVar("x"))
    f = Seq(om, "g", App(LinVar("g"), LinVar("x")))
    lhs = Return(Abs("x", Op("choice", (e, f))))
    rhs = Op("choice", (Return(Abs("x", e)), Return(Abs("x", f))))
    return Pair("lambda-dist", lhs, rhs, U, tuple(hints))


def bang_dist_pair() -> Pair:
    """``return !(e + f)`` against ``(return !e) + (return !f)``.

    Here ``e = return (\\x. return x)`` and ``f = omega``.
    """
    om, hints = omega(U)
    e = Return(IDENTITY)
    lhs = Return(Bang(Op("choice", (e, om))))
    rhs = Op("choice", (Return(Bang(e)), Return(Bang(om))))
    return Pair("bang-dist", lhs, rhs, TBang(U), tuple(hints))


def copy_twice_context() -> Term:
    """Force a banged computation twice and apply one result to the other."""
    return Seq(Hole(), "y", CoSeq(LinVar("y"), "a",
               Seq(NonLinVar("a"), "z1", Seq(NonLinVar("a"), "z2",
                   App(LinVar("z1"), LinVar("z2"))))))


def prelude_source(tau: Type = U) -> str:
    """The divergent term as ``.lam`` definitions."""
    return (f"def w : {show_type(self_app_type(tau))} = "
            "\\x. let !a = x in let z = a in z (!a)\n"
            f"def omega : {show_type(tau)} = w (!(return w))\n")


__all__ = ["U", "IDENTITY", "W", "omega", "self_app_type", "Pair", "lambda_dist_pair",
           "bang_dist_pair", "copy_twice_context", "prelude_source"]
