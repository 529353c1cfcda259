"""Seeded generators shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from lambang.core.enumerate import enumerate_terms
from lambang.core.terms import subst
from lambang.core.types import TBang, TLolli, TMuBang, TMuLolli, TVar, Type
from lambang.core.typing import TypeEnv
from lambang.monads import DIST, DIV, DIV_LEAF, INPUT, MAYBE, Conv, Dist, Leaf, Out, Read
from lambang.oracle import PRELUDE_TYPES, _prelude_terms
from lambang.prelude import U

ELEMS = range(4)


def random_mval(monad, rng: random.Random, elems=ELEMS, depth: int = 3):
    """A random element of ``monad`` over ``elems``."""
    elems = list(elems)
    if monad is MAYBE:
        return DIV if rng.random() < 0.3 else Conv(rng.choice(elems))
    if monad is DIST:
        chosen = rng.sample(elems, rng.randint(0, min(3, len(elems))))
        weights = [rng.randint(1, 6) for _ in chosen]
        total = rng.randint(sum(weights), 2 * sum(weights)) if weights else 1
        return Dist({x: Fraction(w) / total for x, w in zip(chosen, weights)})
    if monad is INPUT:
        def tree(d):
            r = rng.random()
            if d == 0 or r < 0.35:
                return Leaf(rng.choice(elems))
            if r < 0.5:
                return DIV_LEAF
            return Read(tree(d - 1), tree(d - 1))
        return tree(depth)
    prefix = "".join(rng.choice("ab") for _ in range(rng.randint(0, 3)))
    return Out(prefix, DIV if rng.random() < 0.3 else Conv(rng.choice(elems)))


def random_kleisli(monad, rng: random.Random, elems=ELEMS):
    table = {x: random_mval(monad, rng, elems) for x in ELEMS}
    return table.__getitem__


def random_op(monad, rng: random.Random) -> str | None:
    ops = sorted(monad.signature)
    if monad.name == "output":
        ops = ["print_a", "print_b", "print_z"]
    return rng.choice(ops) if ops else None


def closed_pool(ops, max_size: int, types=(U, TBang(U))) -> list:
    """Closed well-typed computations over the prelude names ``i`` and ``o``."""
    env = TypeEnv.of(nonlinear=PRELUDE_TYPES)
    sub = _prelude_terms()
    out = []
    for ty in types:
        for t in enumerate_terms(env, ty, max_size, kind="comp", ops=ops):
            out.append((subst(t, nonlin=sub), ty))
    return out


# -- hypothesis strategies for types -------------------------------------------------

def types_strategy(max_leaves: int = 6) -> st.SearchStrategy[Type]:
    """Closed types over the base types ``s`` and ``t`` and binders ``X``, ``Y``."""
    def extend(children):
        return st.one_of(
            st.builds(TBang, children),
            st.builds(TLolli, children, children),
            st.builds(TMuLolli, st.sampled_from("XY"), children, children),
            st.builds(TMuBang, st.sampled_from("XY"), children),
        )
    leaves = st.sampled_from([TVar("s"), TVar("t"), TVar("X"), TVar("Y")])
    return st.recursive(leaves, extend, max_leaves=max_leaves).filter(
        lambda t: t.free_vars <= {"s", "t"})
