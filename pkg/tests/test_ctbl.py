import cmath
import json

import pytest

from conftest import BUNDLED, SMALL
from helpcore.ctbl import (
    TableSyntaxError,
    ValidationError,
    abelian_table,
    lint,
    p_part_class,
    parse_table,
    power_class,
    serialize_table,
    table_to_json,
)
from helpcore.cyclo import CycNum


def cnum(v: CycNum) -> complex:
    return sum(complex(c) * cmath.exp(2j * cmath.pi * k / v.n) for k, c in enumerate(v.coeffs))


@pytest.mark.parametrize("name", BUNDLED)
def test_orthogonality_numeric(get_table, name):
    t = get_table(name)
    X = [[cnum(v) for v in row] for row in t.irreducibles]
    sizes = [c.size for c in t.classes]
    r = t.nclasses
    for i in range(r):
        for j in range(r):
            s = sum(sizes[k] * X[i][k] * X[j][k].conjugate() for k in range(r))
            assert abs(s - (t.group_order if i == j else 0)) < 1e-6 * t.group_order
    # second orthogonality: column k has norm |C_G(g_k)|
    for k in range(r):
        s = sum(abs(X[i][k]) ** 2 for i in range(r))
        assert abs(s - t.group_order / sizes[k]) < 1e-6 * t.group_order


@pytest.mark.parametrize("name", SMALL)
def test_row_orthogonality_exact(get_table, name):
    t = get_table(name)
    for i, a in enumerate(t.irreducibles):
        for j, b in enumerate(t.irreducibles):
            s = CycNum.rational(0)
            for c, x, y in zip(t.classes, a, b):
                s = s + x * y.conj() * c.size
            assert s == (t.group_order if i == j else 0)


@pytest.mark.parametrize("name", BUNDLED)
def test_brauer_decomposition_restricts_ordinary_characters(get_table, name):
    t = get_table(name)
    for p, bt in t.brauer.items():
        if bt.decomposition is None:
            continue
        phis = [[cnum(v) for v in row] for row in bt.irreducibles]
        for i, drow in enumerate(bt.decomposition):
            chi = [cnum(t.irreducibles[i][k]) for k in bt.regular_classes]
            rebuilt = [sum(d * phi[k] for d, phi in zip(drow, phis)) for k in range(len(chi))]
            assert all(abs(a - b) < 1e-6 for a, b in zip(chi, rebuilt)), (name, p, i)


@pytest.mark.parametrize("name", BUNDLED)
def test_serialize_roundtrip(get_table, name):
    t = get_table(name)
    again = parse_table(serialize_table(t))
    assert table_to_json(again) == table_to_json(t)


def test_lint_detects_broken_character(get_table):
    doc = table_to_json(get_table("A5"))
    doc["characters"][1][1] = {"n": 1, "terms": [[2, 1, 0]]}
    with pytest.raises(ValidationError):
        parse_table(json.dumps(doc))
    assert lint(parse_table(json.dumps(doc), check=False))


def test_lint_detects_bad_power_map(get_table):
    doc = table_to_json(get_table("A5"))
    pm = doc["powermaps"]["2"]
    pm[1], pm[2] = pm[2], pm[1]
    with pytest.raises(ValidationError):
        parse_table(json.dumps(doc))


def test_syntax_errors_carry_location():
    with pytest.raises(TableSyntaxError):
        parse_table("{not json")
    with pytest.raises(TableSyntaxError):
        parse_table(json.dumps({"format": "helpcore-table/1"}))


def test_power_maps_and_p_parts(get_table):
    t = get_table("A7")
    i6 = t.class_index("6a")
    assert t.classes[power_class(t, i6, 2)].name == "3a"
    assert t.classes[power_class(t, i6, 3)].name == "2a"
    assert t.classes[p_part_class(t, i6, 3)].name == "3a"
    assert t.classes[p_part_class(t, i6, 2)].name == "2a"
    assert power_class(t, i6, 6) == t.identity_class


@pytest.mark.parametrize("orders", [(2, 2), (6,), (2, 4), (3, 3)])
def test_abelian_tables_are_valid(orders):
    t = abelian_table(*orders)
    assert lint(t) == []
    assert t.group_order == len(t.classes)


def test_exponents(get_table):
    assert get_table("A5").exponent == 30
    assert get_table("A7").exponent == 420
    assert get_table("J1").exponent == 43890


def test_a7_principal_3_block_data(get_table):
    # part of the A7 table and its 3-decomposition for chi1, chi5, chi6 (library numbering)
    t = get_table("A7")
    cols = [t.class_index(n) for n in ("1a", "2a", "3a", "3b", "6a")]
    rows = {i: [t.irreducibles[i - 1][c] for c in cols] for i in (1, 5, 6)}
    assert rows == {1: [1, 1, 1, 1, 1], 5: [14, 2, 2, -1, 2], 6: [14, 2, -1, 2, -1]}
    dec = t.brauer[3].decomposition
    psi1 = [r[0] for r in dec]
    assert (psi1[0], psi1[4], psi1[5]) == (1, 1, 1)
    shared = [j for j in range(1, len(dec[0])) if dec[4][j] and dec[5][j]]
    assert len(shared) == 1 and dec[0][shared[0]] == 0


def test_defect_one_trees(get_table):
    a7 = get_table("A7")
    leaf = next(b for b in a7.blocks if b.prime == 3 and b.characters[0] == 1)
    # chi2 - chi8 - chi7, read from chi2, no exceptional vertex
    assert (leaf.characters, leaf.signs, leaf.exceptional, leaf.multiplicity) == ((1, 7), (1, -1), (6,), 1)
    j1 = get_table("J1")
    b = j1.blocks[0]
    # chi1 - chi6 - chi4 for J1
    assert (b.prime, b.characters, b.signs, b.exceptional, b.exceptional_sign) == (3, (0, 5), (1, -1), (3,), 1)
