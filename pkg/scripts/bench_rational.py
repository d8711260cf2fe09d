#!/usr/bin/env python3
"""Compare the rational-arithmetic backends on representative workloads.

Run twice, once per backend:

    python scripts/bench_rational.py
    WEYLGPD_RATIONAL=fractions python scripts/bench_rational.py
"""

from __future__ import annotations

import time


def main() -> None:
    from weylgpd._rational import BACKEND
    from weylgpd.arrangement import check_additive, check_crystallographic
    from weylgpd.builtins import affine_a1_table, builtin_graph, builtin_table
    from weylgpd.realization import roundtrip_check

    print(f"backend: {BACKEND}")
    workloads = [
        ("b3 chamber BFS + additive", lambda: check_additive(builtin_table("b3"))),
        ("rescaled affine crystallographic", lambda: check_crystallographic(affine_a1_table(8, rescaled=True))),
        ("a3 roundtrip", lambda: roundtrip_check(builtin_graph("a3"), depth=16)),
        ("affine roundtrip depth 10", lambda: roundtrip_check(builtin_graph("aff-a1"), depth=10)),
    ]
    for label, thunk in workloads:
        best = min(_timed(thunk) for _ in range(3))
        print(f"{label:38s} {best * 1000:9.1f} ms")


def _timed(thunk) -> float:
    start = time.perf_counter()
    thunk()
    return time.perf_counter() - start


if __name__ == "__main__":
    main()
