import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpcore.constraints import AffineFunctional, Congruence, ConstraintSystem, build_system
from helpcore.solver import (
    EnumerationStats,
    ProjectionTooLarge,
    SolverOptions,
    Unbounded,
    derive_bounds,
    enumerate_points,
    orders_to_check,
    solve_order,
    verify_zc,
)
from helpcore.units import Distribution, Status

BOX = 6


def brute(system, box=BOX):
    n = len(system.variables)
    return sorted(x for x in itertools.product(range(-box, box + 1), repeat=n) if system.satisfied(x))


def box_rows(n, box=BOX):
    rows = []
    for i in range(n):
        e = tuple(Fraction(int(j == i)) for j in range(n))
        rows.append(AffineFunctional(e, Fraction(box), f"x{i}>=-{box}"))
        rows.append(AffineFunctional(tuple(-c for c in e), Fraction(box), f"x{i}<={box}"))
    return rows


small_frac = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def systems(draw):
    n = draw(st.integers(1, 3))
    funcs = []
    for _ in range(draw(st.integers(0, 5))):
        coeffs = tuple(draw(small_frac) for _ in range(n))
        funcs.append(AffineFunctional(coeffs, draw(small_frac), "f", draw(st.one_of(st.none(), st.integers(0, 8)))))
    eqs = []
    if draw(st.booleans()):
        eqs.append(AffineFunctional(tuple(Fraction(1) for _ in range(n)), Fraction(-1), "augmentation"))
    congs = []
    if draw(st.booleans()):
        congs.append(Congruence(tuple(draw(st.integers(-2, 2)) for _ in range(n)), draw(st.integers(-3, 3)), draw(st.sampled_from([2, 3, 5]))))
    return ConstraintSystem("T", 1, tuple(f"x{i}" for i in range(n)), None, eqs, box_rows(n) + funcs, congs)


@settings(max_examples=250, deadline=None)
@given(systems())
def test_enumeration_matches_brute_force(system):
    assert enumerate_points(system) == brute(system)


@settings(max_examples=60, deadline=None)
@given(systems())
def test_lp_fallback_matches_projection(system):
    stats = EnumerationStats()
    lp = enumerate_points(system, cap=0, stats=stats)
    assert lp == enumerate_points(system)


@settings(max_examples=100, deadline=None)
@given(systems())
def test_derived_bounds_contain_every_solution(system):
    pts = brute(system)
    try:
        bounds = derive_bounds(system)
    except Unbounded:
        return
    for i, b in enumerate(bounds):
        if b is None:
            assert not pts
            continue
        assert all(b[0] <= x[i] <= b[1] for x in pts)


def test_unbounded_system_raises():
    system = ConstraintSystem("T", 1, ("x", "y"), None, [], [AffineFunctional((Fraction(1), Fraction(0)), Fraction(0))])
    with pytest.raises(Unbounded):
        enumerate_points(system)


def test_cap_zero_really_uses_lp():
    system = ConstraintSystem("T", 1, ("x", "y"), None, [], box_rows(2))
    stats = EnumerationStats()
    pts = enumerate_points(system, cap=0, stats=stats)
    assert stats.lp
    assert len(pts) == (2 * BOX + 1) ** 2


@pytest.mark.parametrize(
    "name,n,powers",
    [("A7", 3, []), ("A7", 4, [[1]]), ("A5", 6, [[1], [1]]), ("A6", 6, [[1], [0, 1]]), ("A6", 6, [[1], [1, 0]])],
)
def test_helps_systems_match_brute_force(get_table, name, n, powers):
    t = get_table(name)
    system = build_system(t, n, Distribution.powers_from_nested(t, n, powers))
    assert len(system.variables) <= 4
    pts = enumerate_points(system)
    assert all(max(map(abs, p)) <= 8 for p in pts)
    assert pts == brute(system, box=8)


def test_lp_fallback_on_real_system(get_table):
    t = get_table("A7")
    powers = Distribution.powers_from_nested(t, 6, [[1], [0, 1]])
    system = build_system(t, 6, powers)
    stats = EnumerationStats()
    assert enumerate_points(system, cap=1, stats=stats) == enumerate_points(system)
    assert stats.lp


def test_solve_order_requires_lower_orders(get_table):
    t = get_table("A7")
    with pytest.raises(KeyError):
        solve_order(t, 6, {})


def test_orders_to_check_adds_divisors_and_rejects_non_divisors(get_table):
    t = get_table("A7")
    assert orders_to_check(t, [12]) == [2, 3, 4, 6, 12]
    with pytest.raises(ValueError, match="exponent"):
        orders_to_check(t, [8])


def test_verify_cyclic_group_is_trivial():
    from helpcore.ctbl import abelian_table

    verdicts = verify_zc(abelian_table(6))
    assert all(v.status is Status.ALL_TRIVIAL for v in verdicts)


def test_no_brauer_is_weaker(get_table):
    t = get_table("A7")
    strict = {v.order: len(v.survivors) for v in verify_zc(t, [3])}
    loose = {v.order: len(v.survivors) for v in verify_zc(t, [3], SolverOptions(brauer=False))}
    assert loose[3] >= strict[3] == 2
