"""Reproduce the worked examples on the bundled tables.

    python scripts/run_examples.py            # everything (J1 takes a few minutes)
    python scripts/run_examples.py A7 150_5   # selected groups

For each group the HeLP verdicts are printed per order, followed by what the
extra filters (defect-1 block inequalities, p-adic hypotheses) remove.
"""

from __future__ import annotations

import argparse
import time

from helpcore.blocks import block_inequality, block_post_filter
from helpcore.cli import format_verdict, overall
from helpcore.constraints import CharRef, multiplicities
from helpcore.ctbl import load_table
from helpcore.filters import Justification, PadicHypothesis, padic_post_filter
from helpcore.solver import SolverOptions, solve_extended, verify_zc
from helpcore.units import Distribution, Status


def show(table, verdicts, quiet_trivial=True):
    for v in verdicts:
        if quiet_trivial and v.status in (Status.NO_SOLUTIONS, Status.ALL_TRIVIAL) and not v.removed:
            continue
        for line in format_verdict(table, v):
            print("  " + line)
    print("  =>", overall(verdicts)[1])


def run_a5():
    t = load_table("A5")
    print("A5: HeLP over all orders")
    show(t, verify_zc(t))
    sols = solve_extended(t, 6, 30)
    print(f"A5 order 6 with coefficients in Z[zeta_30]: {sum(s.nonrational() for s in sols)} non-rational solutions")


def run_a6():
    t = load_table("A6")
    print("A6: HeLP at order 6")
    show(t, verify_zc(t, [6]))
    for nested in ([[1], [0, 1], [-2, 2, 1]], [[1], [1, 0], [-2, 1, 2]]):
        d = Distribution.from_nested(t, 6, nested)
        for chi in (1, 2):
            mu = multiplicities(t, CharRef(chi), d)
            spectrum = [f"z6^{ell}" for ell, x in enumerate(mu) for _ in range(int(x))]
            print(f"  chi{chi + 1} on {d.format(t)}: {', '.join(spectrum)}")


def run_a7():
    t = load_table("A7")
    print("A7: HeLP only")
    show(t, verify_zc(t))
    print("A7: HeLP without the power congruences, order 12")
    show(t, verify_zc(t, [12], SolverOptions(congruences=False)))
    print("A7: with block inequalities")
    show(t, verify_zc(t, post_filters=[block_post_filter]))
    s = Distribution.from_nested(t, 6, [[1], [0, 1], [2, -1, 1, -1]])
    leaf = next(b for b in t.blocks if b.prime == 3 and b.characters[0] == 1)
    print(f"  {leaf.label} on {s.format(t)} at xi=-1: {block_inequality(t, leaf, s, 1)}")


def run_j1():
    t = load_table("J1")
    u = Distribution.from_nested(t, 6, [[1], [1], [-2, 3, 0]])
    leaf = t.blocks[0]
    mu6, mu4 = multiplicities(t, CharRef(5), u), multiplicities(t, CharRef(3), u)
    print(f"J1: mu(zeta, chi6) = {mu6[2]}, mu(zeta, chi4) = {mu4[2]}, {leaf.label} at xi=1: {block_inequality(t, leaf, u, 0)}")
    t0 = time.perf_counter()
    print("J1: HeLP at order 30 (no block inequalities)")
    vs = verify_zc(t, [30])
    show(t, vs)
    fifth = {d.power(5).format(t) for d in vs[-1].critical}
    print(f"  fifth powers of the order-30 criticals: {sorted(fifth)}")
    print("J1: all orders with block inequalities")
    show(t, verify_zc(t, post_filters=[block_post_filter]))
    print(f"  [{time.perf_counter() - t0:.0f}s]")


def run_150_5():
    t = load_table("150_5")
    print("[150,5]: HeLP at order 10")
    show(t, verify_zc(t, [10]))
    print("[150,5]: with the 5-part hypothesis (normal 5-subgroup kernel)")
    hyp = PadicHypothesis(5, None, Justification.NORMAL_P_SUBGROUP_KERNEL)
    show(t, verify_zc(t, [10], post_filters=[padic_post_filter(hyp)]))


RUNS = {"A5": run_a5, "A6": run_a6, "A7": run_a7, "J1": run_j1, "150_5": run_150_5}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("groups", nargs="*", choices=[[], *RUNS], default=list(RUNS))
    args = ap.parse_args()
    for g in args.groups or RUNS:
        RUNS[g]()
        print()


if __name__ == "__main__":
    main()
