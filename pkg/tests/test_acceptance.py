"""Acceptance criteria 1-8, one PASS/FAIL line each.

Run with pytest (lines appear in the terminal summary) or directly:
    python tests/test_acceptance.py
"""

import subprocess
import sys
from pathlib import Path

from helpcore.blocks import block_filter, block_inequality, block_post_filter
from helpcore.cli import overall
from helpcore.constraints import (
    CharRef,
    build_extended_system,
    build_noncyclic_system,
    build_system,
    cyclic_assignment,
    multiplicities,
)
from helpcore.ctbl import abelian_table, load_table
from helpcore.filters import Justification, PadicHypothesis, padic_filter, padic_post_filter
from helpcore.solver import SolutionSet, SolverOptions, solve_order, verify_zc
from helpcore.units import Distribution, Status, admissible_classes

RESULTS: dict[int, tuple[bool, str]] = {}
TITLES = {
    1: "A5 full verification",
    2: "A6 order-6 HeLP criticals",
    3: "A7 HeLP regression suite",
    4: "A7 multiplicities and block inequality",
    5: "J1 order 6 and no order-30 units",
    6: "[150,5] order-10 p-adic removal",
    7: "property suites",
    8: "non-cyclic and extended system sanity",
}
HERE = Path(__file__).resolve().parent


def line(k):
    ok, why = RESULTS[k]
    return f"criterion {k} ({TITLES[k]}): {'PASS' if ok else 'FAIL'}" + ("" if ok else f" - {why}")


def criterion(k):
    def wrap(fn):
        def test():
            try:
                fn()
            except BaseException as exc:
                RESULTS[k] = (False, f"{type(exc).__name__}: {exc}")
                print(line(k))
                raise
            RESULTS[k] = (True, "")
            print(line(k))

        test.__name__ = fn.__name__
        return test

    return wrap


def by_order(verdicts):
    return {v.order: v for v in verdicts}


def tops(table, dists, n):
    cls = admissible_classes(table, n)
    return {tuple(d.top[c] for c in cls) for d in dists}


@criterion(1)
def test_criterion_1_a5():
    t = load_table("A5")
    verdicts = verify_zc(t, post_filters=[block_post_filter])
    assert [v.order for v in verdicts] == [2, 3, 5, 6, 10, 15, 30]
    assert all(v.status in (Status.NO_SOLUTIONS, Status.ALL_TRIVIAL) for v in verdicts)
    assert overall(verdicts) == (0, "ZC1 verified")
    # HeLP alone already suffices
    assert overall(verify_zc(t)) == (0, "ZC1 verified")


@criterion(2)
def test_criterion_2_a6():
    t = load_table("A6")
    v = by_order(verify_zc(t, [6]))[6]
    assert v.status is Status.CRITICAL
    assert t.class_names(admissible_classes(t, 6)) == ["2a", "3a", "3b"]
    assert tops(t, v.critical, 6) == {(-2, 2, 1), (-2, 1, 2)}


@criterion(3)
def test_criterion_3_a7():
    t = load_table("A7")
    vs = by_order(verify_zc(t))
    for n, name in ((2, "2a"), (5, "5a")):
        assert t.class_names(admissible_classes(t, n)) == [name]
        assert vs[n].status is Status.ALL_TRIVIAL
    assert tops(t, vs[3].survivors, 3) == {(0, 1), (1, 0)}
    assert vs[7].status is Status.ALL_TRIVIAL
    assert tops(t, vs[4].critical, 4) == {(2, -1)}
    assert t.class_names(admissible_classes(t, 6)) == ["2a", "3a", "3b", "6a"]
    branch = {"3a": set(), "3b": set()}
    for d in vs[6].critical:
        u2 = d.vector(2)
        cls = [c for c, x in enumerate(u2) if x]
        assert len(cls) == 1 and u2[cls[0]] == 1
        branch[t.classes[cls[0]].name].add(tuple(d.top[c] for c in admissible_classes(t, 6)))
    assert branch["3a"] == {(-2, 1, 2, 0), (2, 0, 0, -1)}
    assert branch["3b"] == {(-2, 2, 1, 0), (0, 1, -1, 1), (2, -1, 1, -1)}
    assert vs[12].status is Status.NO_SOLUTIONS
    loose = by_order(verify_zc(t, [12], SolverOptions(congruences=False)))[12]
    assert [[1], [1, 0], [0, 1], [0, 0, 0, 1], [1, 0, 0, 1, -1]] in [d.to_nested(t) for d in loose.critical]
    for n in (10, 14, 15, 21, 35):
        assert vs[n].status is Status.NO_SOLUTIONS, n


@criterion(4)
def test_criterion_4_a7_block():
    t = load_table("A7")
    s = Distribution.from_nested(t, 6, [[1], [0, 1], [2, -1, 1, -1]])
    mu = {i: multiplicities(t, CharRef(i - 1), s) for i in (2, 7, 8)}
    # -1 = z6^3; -zeta for the two primitive cube roots zeta are z6^5 and z6^1
    assert mu[2][3] == 0
    for ell in (1, 5):
        assert (mu[2][ell], mu[7][ell], mu[8][ell]) == (1, 2, 4)
    leaf = next(b for b in t.blocks if b.prime == 3 and b.characters[0] == 1)
    assert block_inequality(t, leaf, s, xi=1) == -1  # xi = z2^1 = -1
    out = block_filter(t, t.blocks, SolutionSet(6, [s]))
    assert out.solutions == [] and out.removed[0][0] == s


@criterion(5)
def test_criterion_5_j1():
    t = load_table("J1")
    # the package-style tuple [2,-3,0] has augmentation -1; the unit meant is (-2,3,0)
    assert Distribution.from_nested(t, 6, [[1], [1], [2, -3, 0]]).check(t) == ["augmentation of u^1 is -1"]
    u = Distribution.from_nested(t, 6, [[1], [1], [-2, 3, 0]])
    assert u.check(t) == []
    mu6 = multiplicities(t, CharRef(5), u)
    mu4 = multiplicities(t, CharRef(3), u)
    for ell in (2, 4):  # primitive cube roots of unity
        assert (mu6[ell], mu4[ell]) == (16, 14)
    leaf = next(b for b in t.blocks if b.prime == 3 and b.characters[0] == 0)
    assert t.blocks[0] is leaf and leaf.exceptional == (3,)
    assert block_inequality(t, leaf, u, xi=0) == -1

    # proof chain: HeLP at order 30 only needs to exclude u^5 = u ...
    cache = {}
    for n in (2, 3, 5, 6, 10, 15):
        cache[n] = solve_order(t, n, cache)
    assert u in cache[6].solutions
    cache[6] = SolutionSet(6, [d for d in cache[6].solutions if d != u])
    assert len(solve_order(t, 30, cache)) == 0
    # ... and the block inequality removes it, so there are no units of order 30
    vs = by_order(verify_zc(t, [30], post_filters=[block_post_filter]))
    assert u in [d for d, _ in vs[6].removed]
    assert vs[30].status is Status.NO_SOLUTIONS


@criterion(6)
def test_criterion_6_150_5():
    t = load_table("150_5")
    v = by_order(verify_zc(t, [10]))[10]
    ten = [c for c in admissible_classes(t, 10) if t.classes[c].order == 10]
    split = [d for d in v.critical if sum(1 for c in ten if d.top[c]) >= 2]
    assert split
    hyp = PadicHypothesis(5, None, Justification.NORMAL_P_SUBGROUP_KERNEL)
    out = padic_filter(t, hyp, SolutionSet(10, list(v.critical)))
    assert not any(d in out.solutions for d in split)
    assert {d for d, _ in out.removed} >= set(split)
    # the normal Sylow 5-subgroup justifies the hypothesis for every order, which settles the group
    assert overall(verify_zc(t, post_filters=[padic_post_filter(hyp)])) == (0, "ZC1 verified")


@criterion(7)
def test_criterion_7_properties():
    selection = [
        "test_cyclo.py::test_trace_matches_embedding_sum",
        "test_cyclo.py::test_monomial_traces_are_ramanujan_sums",
        "test_ctbl.py::test_row_orthogonality_exact",
        "test_ctbl.py::test_orthogonality_numeric",
        "test_constraints.py::test_multiplicities_sum_to_degree",
        "test_constraints.py::test_group_elements_satisfy_their_systems",
        "test_blocks_filters.py::test_group_elements_satisfy_block_inequalities",
        "test_solver.py::test_enumeration_matches_brute_force",
        "test_solver.py::test_helps_systems_match_brute_force",
        "test_blocks_filters.py::test_block_filter_is_idempotent",
        "test_blocks_filters.py::test_padic_filter_is_idempotent_and_removes_split_order10",
    ]
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *[str(HERE / s) for s in selection]],
        cwd=HERE.parent,
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stdout[-2000:]


@criterion(8)
def test_criterion_8_systems():
    for name, n, nested in (("A7", 6, [[1], [0, 1]]), ("A7", 12, [[1], [1, 0], [0, 1], [0, 0, 0, 1]]), ("A5", 6, [[1], [1]])):
        t = load_table(name)
        powers = Distribution.powers_from_nested(t, n, nested)
        chars = [CharRef(i) for i in range(len(t.irreducibles))]
        classic = build_system(t, n, powers, chars, congruences=False)
        names, assignment = cyclic_assignment(t, n, powers)
        nonc = build_noncyclic_system(t, abelian_table(n), names, assignment, chars)
        assert nonc.variables == classic.variables
        assert [(f.coeffs, f.const) for f in nonc.functionals] == [(f.coeffs, f.const) for f in classic.functionals]
        ext = build_extended_system(t, n, 1, powers, chars)
        assert ext.variables == classic.variables
        assert [(e.coeffs, e.const) for e in ext.equalities] == [(e.coeffs, e.const) for e in classic.equalities]
        assert [(f.coeffs, f.const) for f in ext.functionals] == [(f.coeffs, f.const) for f in classic.functionals]


if __name__ == "__main__":
    tests = [obj for key, obj in sorted(globals().items()) if key.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except BaseException:
            failed += 1
    sys.exit(1 if failed else 0)
