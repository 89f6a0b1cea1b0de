import cmath
import random
from fractions import Fraction

import pytest

from conftest import BUNDLED
from helpcore.constraints import (
    CharRef,
    build_extended_system,
    build_noncyclic_system,
    build_system,
    congruence_constraints,
    cyclic_assignment,
    default_characters,
    multiplicities,
)
from helpcore.ctbl import abelian_table, power_class
from helpcore.cyclo import divisors
from helpcore.units import Distribution, admissible_classes, trivial_distribution


def random_distribution(table, n, rng, spread=3):
    vectors = {}
    for d in divisors(n)[:-1]:
        adm = admissible_classes(table, n // d)
        vec = [0] * table.nclasses
        for c in adm:
            vec[c] = rng.randint(-spread, spread)
        vec[adm[0]] += 1 - sum(vec)
        vectors[d] = tuple(vec)
    return Distribution.from_map(n, vectors)


def element_orders(table):
    return sorted({c.order for c in table.classes if c.order > 1})


@pytest.mark.parametrize("name", BUNDLED)
def test_multiplicities_sum_to_degree(get_table, name):
    t = get_table(name)
    rng = random.Random(name)
    orders = element_orders(t)
    for _ in range(100):
        n = rng.choice(orders)
        dist = random_distribution(t, n, rng)
        refs = default_characters(t, n)
        ref = rng.choice(refs)
        mu = multiplicities(t, ref, dist)
        row_deg = t.degree(ref.index) if ref.prime is None else t.brauer[ref.prime].irreducibles[ref.index][0]
        assert len(mu) == n
        assert sum(mu) == row_deg


def dft_multiplicities(table, chi, c):
    """Oracle: eigenvalue multiplicities of a group element from the values on its powers."""
    n = table.classes[c].order
    vals = []
    for k in range(n):
        v = table.irreducibles[chi][power_class(table, c, k)]
        vals.append(sum(complex(x) * cmath.exp(2j * cmath.pi * i / v.n) for i, x in enumerate(v.coeffs)))
    return [sum(vals[k] * cmath.exp(-2j * cmath.pi * k * ell / n) for k in range(n)) / n for ell in range(n)]


@pytest.mark.parametrize("name", ["A5", "A6", "A7", "150_5"])
def test_trivial_multiplicities_match_dft(get_table, name):
    t = get_table(name)
    for c, cls in enumerate(t.classes):
        if cls.order == 1:
            continue
        dist = trivial_distribution(t, c)
        for chi in range(len(t.irreducibles)):
            mu = multiplicities(t, CharRef(chi), dist)
            oracle = dft_multiplicities(t, chi, c)
            assert all(abs(float(a) - b) < 1e-9 for a, b in zip(mu, oracle))


@pytest.mark.parametrize("name", BUNDLED)
def test_group_elements_satisfy_their_systems(get_table, name):
    t = get_table(name)
    for c, cls in enumerate(t.classes):
        if cls.order == 1:
            continue
        n = cls.order
        dist = trivial_distribution(t, c)
        system = build_system(t, n, dist)
        x = [dist.top[k] for k in system.var_classes]
        assert system.violations(x) == [], (name, cls.name)
        for cong in congruence_constraints(t, n, dist.as_map()):
            assert cong.holds(x)


def test_identity_like_distribution_has_degree_at_one(get_table):
    t = get_table("A7")
    dist = trivial_distribution(t, t.class_index("2a"))
    mu = multiplicities(t, CharRef(1), dist)
    # chi2 (degree 6) on a double transposition: trace 2, so eigenvalues 1^4, (-1)^2
    assert mu == [4, 2]


def test_a7_order3_brauer_formulas(get_table):
    # 7-modular character of degree 5 with values 2, -1 on 3a, 3b gives
    # mu(1) = 1 + 2 eps_3a and mu(zeta) = 2 - eps_3a
    t = get_table("A7")
    bt = t.brauer[7]
    i3a, i3b = t.class_index("3a"), t.class_index("3b")
    idx = [
        i
        for i in range(len(bt.irreducibles))
        if bt.full_row(i, t.nclasses)[t.identity_class] == 5
        and bt.full_row(i, t.nclasses)[i3a] == 2
        and bt.full_row(i, t.nclasses)[i3b] == -1
    ]
    assert idx
    for e in range(-3, 4):
        dist = Distribution.from_nested(t, 3, [[e, 1 - e]])
        mu = multiplicities(t, CharRef(idx[0], 7), dist)
        assert mu[0] == 1 + 2 * e
        assert mu[1] == mu[2] == 2 - e


def test_a7_order3_two_modular_formulas(get_table):
    t = get_table("A7")
    bt = t.brauer[2]
    i3a, i3b = t.class_index("3a"), t.class_index("3b")
    idx = [
        i
        for i in range(len(bt.irreducibles))
        if bt.full_row(i, t.nclasses)[t.identity_class] == 4
        and bt.full_row(i, t.nclasses)[i3a] == -2
        and bt.full_row(i, t.nclasses)[i3b] == 1
    ]
    assert idx
    for e in range(-3, 4):
        mu = multiplicities(t, CharRef(idx[0], 2), Distribution.from_nested(t, 3, [[e, 1 - e]]))
        assert mu[0] == 2 - 2 * e
        assert mu[1] == 1 + e


def test_a7_order12_congruence_kills_documented_tuple(get_table):
    # u^2 in 6a, u^3 in 4a and top (1,0,0,1,-1): HeLP alone admits it, the p^j = 2 congruence at 3a does not
    t = get_table("A7")
    powers = Distribution.powers_from_nested(t, 12, [[1], [1, 0], [0, 1], [0, 0, 0, 1]])
    x = [1, 0, 0, 1, -1]
    loose = build_system(t, 12, powers, congruences=False)
    assert loose.satisfied(x)
    strict = build_system(t, 12, powers)
    assert not strict.satisfied(x)
    assert any("D=3a" in msg for msg in strict.violations(x))


def random_powers(t, n, rng):
    return {d: v for d, v in random_distribution(t, n, rng).eps if d > 1}


@pytest.mark.parametrize("name,n", [("A5", 6), ("A6", 6), ("A7", 6), ("A7", 12), ("A7", 10)])
def test_noncyclic_matches_cyclic(get_table, name, n):
    t = get_table(name)
    rng = random.Random(n)
    for _ in range(3):
        powers = random_powers(t, n, rng)
        chars = [CharRef(i) for i in range(len(t.irreducibles))]
        classic = build_system(t, n, powers, chars, congruences=False)
        names, assignment = cyclic_assignment(t, n, powers)
        nonc = build_noncyclic_system(t, abelian_table(n), names, assignment, chars)
        assert len(classic.functionals) == len(nonc.functionals)
        for f, g in zip(classic.functionals, nonc.functionals):
            assert (f.coeffs, f.const, f.upper) == (g.coeffs, g.const, g.upper)


def test_noncyclic_klein_four_in_cyclic_group_is_infeasible():
    # C4 has a single involution, so three involutions forming C2 x C2 cannot exist
    G = abelian_table(4)
    U = abelian_table(2, 2)
    inv = G.class_index("2a")
    assignment = {}
    for K in range(U.nclasses):
        if K == U.identity_class:
            continue
        forms = [((), 0)] * G.nclasses
        forms[inv] = ((), 1)
        assignment[K] = forms
    system = build_noncyclic_system(G, U, (), assignment)
    assert not system.satisfied(())
    assert any(f(()) < 0 for f in system.functionals)


def test_noncyclic_klein_four_in_a5_is_feasible(get_table):
    t = get_table("A5")
    U = abelian_table(2, 2)
    inv = t.class_index("2a")
    assignment = {}
    for K in range(U.nclasses):
        if K != U.identity_class:
            forms = [((), 0)] * t.nclasses
            forms[inv] = ((), 1)
            assignment[K] = forms
    assert build_noncyclic_system(t, U, (), assignment).satisfied(())


@pytest.mark.parametrize("name,n", [("A5", 6), ("A6", 4), ("A7", 6), ("A7", 12)])
def test_extended_m1_is_classical(get_table, name, n):
    t = get_table(name)
    rng = random.Random(name)
    powers = random_powers(t, n, rng)
    classic = build_system(t, n, powers, congruences=False)
    ext = build_extended_system(t, n, 1, powers)
    assert ext.variables == classic.variables
    assert [(e.coeffs, e.const) for e in ext.equalities] == [(e.coeffs, e.const) for e in classic.equalities]
    assert [(f.coeffs, f.const, f.upper) for f in ext.functionals] == [
        (f.coeffs, f.const, f.upper) for f in classic.functionals
    ]


def test_brauer_characters_skip_divisible_orders(get_table):
    t = get_table("A7")
    refs = default_characters(t, 6)
    assert {r.prime for r in refs} == {None, 5, 7}


def test_export_lists_every_row(get_table):
    t = get_table("A7")
    powers = Distribution.powers_from_nested(t, 4, [[1]])
    text = build_system(t, 4, powers).export()
    assert text.count("\nint ") == len(build_system(t, 4, powers).functionals)
    assert "variables 2a 4a" in text
    assert Fraction(1) in build_system(t, 4, powers).equalities[0].coeffs
