"""Walk through the two probabilistic running examples.

Run with ``python demos/running_example.py``.
"""

from __future__ import annotations

from lambang.core.terms import show
from lambang.oracle import ctx_equiv
from lambang.prelude import bang_dist_pair, lambda_dist_pair
from lambang.rts import ConfigType
from lambang.traces import trace_equiv


def main() -> None:
    for pair, ctx_size in ((lambda_dist_pair(), 7), (bang_dist_pair(), 11)):
        print(f"== {pair.name}")
        print(f"  lhs: {show(pair.lhs)}")
        print(f"  rhs: {show(pair.rhs)}")
        alpha = ConfigType((), (pair.type,), True)
        tr = trace_equiv(pair.lhs, pair.rhs, 6, 3, 50, "dist", alpha=alpha, beta=alpha)
        print("traces:", tr.describe("dist"))
        cx = ctx_equiv(pair.lhs, pair.rhs, ctx_size, 50, "dist", tau=pair.type, hints=pair.hints)
        print("contexts:", cx.describe("dist"))


if __name__ == "__main__":
    main()
