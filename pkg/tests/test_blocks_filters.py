import cmath
from dataclasses import replace

import pytest

from conftest import BUNDLED
from helpcore.blocks import (
    BlockPrimeClash,
    OrderMismatch,
    applicable,
    block_filter,
    block_inequality,
    evaluate_block,
)
from helpcore.constraints import CharRef, multiplicities
from helpcore.filters import Justification, PadicHypothesis, kp_classify, padic_compatible, padic_filter
from helpcore.solver import SolutionSet, verify_zc
from helpcore.units import Distribution, trivial_distribution


def position(n, value):
    """Index l with zeta_n^l equal to the complex number `value`."""
    for ell in range(n):
        if abs(cmath.exp(2j * cmath.pi * ell / n) - value) < 1e-9:
            return ell
    raise AssertionError("not an n-th root of unity")


def block_value_by_hand(table, block, dist, k, j):
    n, p = dist.order, block.prime
    m = n // p
    xi = cmath.exp(2j * cmath.pi * k / m)
    zeta = cmath.exp(2j * cmath.pi * j / p)
    a, b = position(n, xi), position(n, xi * zeta)

    def mu(c, ell):
        return multiplicities(table, CharRef(c), dist)[ell]

    v = mu(block.characters[0], a)
    v += block.exceptional_sign * sum(mu(c, b) for c in block.exceptional)
    v += block.multiplicity * sum(s * mu(c, b) for c, s in zip(block.characters, block.signs))
    return v


@pytest.mark.parametrize("name", BUNDLED)
def test_group_elements_satisfy_block_inequalities(get_table, name):
    t = get_table(name)
    for c, cls in enumerate(t.classes):
        if cls.order == 1:
            continue
        dist = trivial_distribution(t, c)
        for b in t.blocks:
            if applicable(b, cls.order):
                assert all(inst.value >= 0 for inst in evaluate_block(t, b, dist)), (name, cls.name, b.label)


def test_instances_agree_with_hand_evaluation(get_table):
    t = get_table("A7")
    dists = [
        Distribution.from_nested(t, 6, nested)
        for nested in (
            [[1], [0, 1], [2, -1, 1, -1]],
            [[1], [1, 0], [-2, 1, 2, 0]],
            [[1], [0, 1], [0, 1, -1, 1]],
            [[1], [1, 0], [0, 0, 0, 1]],
        )
    ]
    for b in t.blocks:
        for d in dists:
            if not applicable(b, 6):
                continue
            for inst in evaluate_block(t, b, d):
                assert inst.value == block_value_by_hand(t, b, d, inst.xi, inst.zeta)


def test_order_and_prime_errors(get_table):
    t = get_table("A7")
    b3 = t.blocks[0]
    with pytest.raises(OrderMismatch):
        block_inequality(t, b3, Distribution.from_nested(t, 4, [[1], [2, -1]]), 0)
    two = replace(b3, prime=2)
    with pytest.raises(BlockPrimeClash):
        block_inequality(t, two, Distribution.from_nested(t, 6, [[1], [0, 1], [0, 0, 0, 1]]), 0)
    with pytest.raises(ValueError):
        block_inequality(t, b3, Distribution.from_nested(t, 6, [[1], [0, 1], [0, 0, 0, 1]]), 0, zeta=3)


def test_a7_order6_removals_are_witnessed(get_table):
    t = get_table("A7")
    d = Distribution.from_nested(t, 6, [[1], [1, 0], [-2, 1, 2, 0]])
    leaf2 = next(b for b in t.blocks if b.prime == 3 and b.characters[0] == 1)
    assert block_inequality(t, leaf2, d, 0) == -1
    sols = SolutionSet(6, [d])
    out = block_filter(t, t.blocks, sols)
    assert out.solutions == []
    assert "block inequality" in out.removed[0][1]


def order_sets(table, n, **kw):
    return [v for v in verify_zc(table, [n], **kw) if v.order == n][0]


def test_block_filter_is_idempotent(get_table):
    t = get_table("A7")
    v = order_sets(t, 6)
    sols = SolutionSet(6, v.survivors)
    once = block_filter(t, t.blocks, sols)
    twice = block_filter(t, t.blocks, once)
    assert once.solutions == twice.solutions
    assert len(once.solutions) < len(sols.solutions)
    assert len(twice.removed) == len(once.removed)


def test_padic_filter_is_idempotent_and_removes_split_order10(get_table):
    t = get_table("150_5")
    v = order_sets(t, 10)
    sols = SolutionSet(10, v.survivors)
    hyp = PadicHypothesis(5, None, Justification.NORMAL_P_SUBGROUP_KERNEL)
    once = padic_filter(t, hyp, sols)
    assert padic_filter(t, hyp, once).solutions == once.solutions
    assert all(padic_compatible(t, hyp, d) for d in once.solutions)
    assert len(once.solutions) < len(sols.solutions)


def test_padic_hypothesis_checks_anchor_and_order(get_table):
    t = get_table("A7")
    with pytest.raises(ValueError):
        PadicHypothesis(2, (t.class_index("6a"),)).check(t)
    h = PadicHypothesis(2, (t.class_index("2a"),))
    assert not h.applies(3)
    assert h.applies(4)
    d = Distribution.from_nested(t, 4, [[1], [2, -1]])
    assert not padic_compatible(t, h, d)  # 2a and 4a have different 2-parts
    assert padic_compatible(t, PadicHypothesis(2, (t.class_index("4a"),)), Distribution.from_nested(t, 4, [[1], [0, 1]]))


def test_padic_anchor_restricts_support(get_table):
    t = get_table("A7")
    d = Distribution.from_nested(t, 6, [[1], [1, 0], [0, 0, 0, 1]])
    assert padic_compatible(t, PadicHypothesis(3, (t.class_index("3a"),)), d)
    assert not padic_compatible(t, PadicHypothesis(3, (t.class_index("3b"),)), d)


def test_kp_classification(get_table):
    t = get_table("A7")
    crit = Distribution.from_nested(t, 4, [[1], [2, -1]])
    triv = Distribution.from_nested(t, 4, [[1], [0, 1]])
    assert kp_classify(t, [crit, triv]) == {crit: False, triv: True}


@pytest.mark.parametrize("name,n", [("A7", 6), ("A6", 10), ("J1", 6), ("A5", 6)])
def test_block_values_integral_on_helps_solutions(get_table, name, n):
    t = get_table(name)
    v = order_sets(t, n)
    dists = v.survivors
    for b in t.blocks:
        if not applicable(b, n):
            continue
        for d in dists:
            assert all(inst.value.denominator == 1 for inst in evaluate_block(t, b, d))


def test_empty_solution_set_passes_through(get_table):
    t = get_table("A7")
    assert block_filter(t, t.blocks, SolutionSet(6)).solutions == []
