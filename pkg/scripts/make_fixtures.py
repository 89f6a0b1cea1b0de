"""Regenerate the bundled character-table fixtures in src/helpcore/data.

    python scripts/make_fixtures.py [A5 A6 A7 J1 150_5]

Each table is computed from explicit generators (see tablegen.py), put into the
conventional class/character numbering, validated by the engine's own loader
and written as JSON.  Brauer tables are computed for the alternating groups
only; J1 carries its principal 3-block, and the order-150 group needs none.

The bundled J1.json is not this script's raw output: it was afterwards passed
through ``import_ctbllib.py --attach J1``, which renumbers classes and
characters as in the GAP library and adds every Brauer table and defect-1
block record.  Regenerating J1 here must be followed by that step.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from itertools import combinations
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))

from tablegen import (  # noqa: E402
    ExtField,
    Group,
    MatOps,
    PermOps,
    alternating_group,
    brauer_character,
    class_coefficients,
    class_data,
    class_power,
    decomposition_matrix,
    defect_one_blocks,
    dixon_table,
    meataxe_chop,
    perm_from_cycles,
    splitting_degree,
    tree_block_data,
)

from helpcore.ctbl import BlockData, BrauerTable, CharacterTable, ClassInfo, parse_table, serialize_table  # noqa: E402
from helpcore.cyclo import CycNum, factorize, primes_dividing  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "helpcore" / "data"


def log(msg):
    print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# ordering conventions


def value_key(v: CycNum):
    """Deterministic ordering key for character values."""
    q = v.as_rational()
    if q is not None:
        return (0, float(q), ())
    return (1, 0.0, tuple(float(c) for c in v.embed(v.n).coeffs))


def sort_characters(chars, first=()):
    """Sort by degree; within a degree, characters satisfying the earlier
    predicate in `first` come first, then a deterministic value order."""

    def key(row):
        rank = next((i for i, pred in enumerate(first) if pred(row)), len(first))
        return (row[0].as_rational(), rank, [value_key(v) for v in row])

    return sorted(chars, key=key)


def element_index(G: Group, perm) -> int:
    return int(G.index.lookup(np.asarray(perm, dtype=np.int64)[None, :])[0])


def power_maps(cd, nclasses):
    maxo = max(cd.orders)
    primes = [p for p in range(2, maxo + 1) if len(factorize(p)) == 1 and factorize(p)[0][1] == 1]
    return {p: tuple(class_power(cd, i, p) for i in range(nclasses)) for p in primes}


# ---------------------------------------------------------------------------
# Brauer tables


def subset_perms(G: Group, k: int):
    n = G.ops.degree
    subsets = list(combinations(range(n), k))
    pos = {s: i for i, s in enumerate(subsets)}
    out = []
    for g in G.gens:
        out.append(np.array([pos[tuple(sorted(g[list(s)]))] for s in subsets], dtype=np.int64))
    return out


def perm_matrix(img):
    d = len(img)
    m = np.zeros((d, d), dtype=np.int64)
    m[np.arange(d), img] = 1
    return m


def word_matrix(gens, word, p):
    m = np.eye(gens[0].shape[0], dtype=np.int64)
    for gi in word:
        m = m @ gens[gi] % p
    return m


def brauer_table(G: Group, cd, ordinary, p: int, seed: int = 5):
    """Irreducible Brauer characters mod p of a permutation group."""
    rng = random.Random(seed)
    regular = [i for i, o in enumerate(cd.orders) if o % p]
    orders = [cd.orders[i] for i in regular]
    words = [G.word(cd.reps[i]) for i in regular]
    F = ExtField(p, splitting_degree(p, orders))
    group_p = 1
    while G.size % (group_p * p) == 0:
        group_p *= p
    found: list[list[CycNum]] = []
    modules = []

    def add(values):
        if values not in found:
            found.append(values)
            return True
        return False

    # defect-zero characters stay irreducible mod p
    for row in ordinary:
        if int(row[0].as_rational()) % group_p == 0:
            add([row[i] for i in regular])

    def absorb(gens):
        for mod in meataxe_chop(gens, p, rng):
            mats = [word_matrix(mod.gens, w, p) for w in words]
            beta = brauer_character(mod, mats, orders, F)
            new = False
            for i in range(mod.endo_dim):
                conj = [v.galois(pow(p, i, v.n)) if v.n > 2 else v for v in beta]
                new |= add(conj)
            if new:
                modules.append(mod)

    sources = [[perm_matrix(g) % p for g in G.gens]]
    for k in (2, 3):
        if k < G.ops.degree - 1:
            sources.append([perm_matrix(g) % p for g in subset_perms(G, k)])
    for gens in sources:
        absorb(gens)
        if len(found) == len(regular):
            break
    tried = set()
    while len(found) < len(regular):
        pairs = [
            (a, b)
            for a in range(len(modules))
            for b in range(a, len(modules))
            if (a, b) not in tried and modules[a].dim * modules[b].dim <= 160
        ]
        if not pairs:
            raise RuntimeError(f"could not find all Brauer characters mod {p}: {len(found)} of {len(regular)}")
        a, b = min(pairs, key=lambda ab: modules[ab[0]].dim * modules[ab[1]].dim)
        tried.add((a, b))
        ma, mb = modules[a], modules[b]
        if ma.endo_dim > 1 or mb.endo_dim > 1:
            continue
        absorb([np.kron(x, y) % p for x, y in zip(ma.gens, mb.gens)])
    found.sort(key=lambda row: (row[0].as_rational(), [value_key(v) for v in row]))
    return regular, found


def attach_brauer(table: CharacterTable, G, cd, primes):
    for p in primes:
        t = time.time()
        regular, chars = brauer_table(G, cd, table.irreducibles, p)
        D = decomposition_matrix(table.irreducibles, chars, regular)
        table.brauer[p] = BrauerTable(p, tuple(regular), chars, D)
        log(f"  {table.group_name} mod {p}: degrees {[int(r[0].as_rational()) for r in chars]} ({time.time() - t:.1f}s)")
        if p > 2:
            for tree in defect_one_blocks(cd, table.irreducibles, D, p, table.group_order):
                for rec in tree_block_data(tree):
                    table.blocks.append(block_from_record(rec, table))


def block_from_record(rec, table) -> BlockData:
    chars = tuple(i - 1 for i in rec["non_exceptional"])
    exc = tuple(i - 1 for i in rec["exceptional"])
    designated = rec["multiplicity"] == 1 and len(exc) == 1
    label = f"{rec['prime']}-block leaf chi{chars[0] + 1}"
    return BlockData(
        prime=rec["prime"],
        characters=chars,
        signs=tuple(rec["signs"]),
        exceptional=exc,
        exceptional_sign=rec["exceptional_sign"],
        multiplicity=rec["multiplicity"],
        designated=designated,
        label=label,
    )


# ---------------------------------------------------------------------------
# groups


def build_table(name, G, cd, chars, notes):
    classes = [ClassInfo(n, o, s) for n, o, s in zip(cd.names, cd.orders, cd.sizes)]
    return CharacterTable(
        group_name=name,
        group_order=G.size,
        classes=classes,
        power_maps=power_maps(cd, len(classes)),
        irreducibles=chars,
        notes=notes,
    )


def make_alternating(n: int, brauer_primes):
    G = alternating_group(n)
    five = element_index(G, perm_from_cycles(n, [[1, 2, 3, 4, 5]]))
    three = element_index(G, perm_from_cycles(n, [[1, 2, 3]]))
    prefer = {3: [three], 5: [five]}
    if n >= 7:
        prefer[7] = [element_index(G, perm_from_cycles(n, [list(range(1, 8))]))]
    cd = class_data(G, prefer)
    chars = dixon_table(G, cd, class_coefficients(G, cd))
    cls = {nm: i for i, nm in enumerate(cd.names)}
    first = []
    notes = [f"A{n} as permutations of 1..{n}."]
    if n == 6:
        first = [lambda r: r[cls["3a"]] == 2]
        notes.append("3a contains (1,2,3); 5a contains (1,2,3,4,5); 5b = 5a^2.")
        notes.append("chi2 is the degree-5 character with value 2 on 3a (deleted permutation character).")
    if n == 7:
        b7 = CycNum(7, {1: 1, 2: 1, 4: 1})
        first = [lambda r: r[cls["3a"]] == 2, lambda r: r[cls["7a"]] == b7]
        notes.append("3a contains (1,2,3), 3b contains (1,2,3)(4,5,6); 7a contains (1,...,7); 7b = 7a^3.")
        notes.append("chi3 is the degree-10 character with value z7+z7^2+z7^4 on 7a; chi5 is the degree-14 character with value 2 on 3a.")
    if n == 5:
        notes.append("5a contains (1,2,3,4,5); 5b = 5a^2.")
    notes.append("Characters are sorted by degree; ties as stated, otherwise by their values.")
    chars = sort_characters(chars, first)
    table = build_table(f"A{n}", G, cd, chars, " ".join(notes))
    attach_brauer(table, G, cd, brauer_primes)
    return table


J1_Y = np.roll(np.eye(7, dtype=np.int64), 1, axis=1)
J1_Z = (
    np.array(
        [
            [-3, 2, -1, -1, -3, -1, -3],
            [-2, 1, 1, 3, 1, 3, 3],
            [-1, -1, -3, -1, -3, -3, 2],
            [-1, -3, -1, -3, -3, 2, -1],
            [-3, -1, -3, -3, 2, -1, -1],
            [1, 3, 3, -2, 1, 1, 3],
            [3, 3, -2, 1, 1, 3, 1],
        ]
    )
    % 11
)


def make_j1():
    G = Group(MatOps(7, 11), [J1_Y.reshape(-1), J1_Z.reshape(-1)]).enumerate()
    assert G.size == 175560, G.size
    cd = class_data(G)
    chars = dixon_table(G, cd, class_coefficients(G, cd))
    three_regular = [i for i, o in enumerate(cd.orders) if o % 3]
    one = next(r for r in chars if r[0] == 1)

    # principal 3-block: chi1 - chi(77) + chi(76) vanishes on 3-regular classes
    deg = lambda r: int(r[0].as_rational())  # noqa: E731
    cands = []
    for a in (r for r in chars if deg(r) == 77):
        for b in (r for r in chars if deg(r) == 76):
            if all(one[k] - a[k] + b[k] == 0 for k in three_regular):
                cands.append((a, b))
    assert len(cands) == 1, f"principal 3-block not identified uniquely: {len(cands)}"
    c77, c76 = cands[0]
    chars = sort_characters(chars, [lambda r: r is c77 or r is c76])
    notes = (
        "J1 as the subgroup of GL(7,11) generated by the 7-cycle permutation matrix and Janko's matrix of order 5. "
        "Classes sorted by element order and size; algebraically conjugate classes follow their leader by power "
        "(5b = 5a^2, 19b = 19a^2, 19c = 19a^4 etc). Characters sorted by degree; chi4 (76) and chi6 (77) are the "
        "members of the principal 3-block, otherwise ties are ordered by values."
    )
    table = build_table("J1", G, cd, chars, notes)
    i1 = next(i for i, r in enumerate(table.irreducibles) if r is one)
    i77 = next(i for i, r in enumerate(table.irreducibles) if r is c77)
    i76 = next(i for i, r in enumerate(table.irreducibles) if r is c76)
    # tree chi1 - chi77 - chi76 without exceptional vertex; one record per leaf
    table.blocks.append(BlockData(3, (i1, i77), (1, -1), (i76,), 1, 1, True, "principal 3-block leaf chi1"))
    table.blocks.append(BlockData(3, (i76, i77), (1, -1), (i1,), 1, 1, True, "principal 3-block leaf chi4"))
    return table


def make_150_5():
    """Affine group F_5^2 : S_3 with S_3 acting through GL(2,5)."""
    pts = [(x, y) for x in range(5) for y in range(5)]
    pos = {p: i for i, p in enumerate(pts)}

    def affine(mat, shift):
        (a, b), (c, d) = mat
        return np.array(
            [pos[((a * x + b * y + shift[0]) % 5, (c * x + d * y + shift[1]) % 5)] for x, y in pts], dtype=np.int64
        )

    gens = [affine(((1, 0), (0, 1)), (1, 0)), affine(((-1, -1), (1, 0)), (0, 0)), affine(((0, 1), (1, 0)), (0, 0))]
    G = Group(PermOps(25), gens).enumerate()
    assert G.size == 150
    cd = class_data(G)
    chars = sort_characters(dixon_table(G, cd, class_coefficients(G, cd)))
    notes = (
        "Order-150 group (F_5)^2 : S_3, S_3 acting faithfully and irreducibly through GL(2,5) "
        "(3-cycle [[-1,-1],[1,0]], transposition [[0,1],[1,0]]), as affine permutations of the 25 points."
    )
    return build_table("150_5", G, cd, chars, notes)


BUILDERS = {
    "A5": lambda: make_alternating(5, [2, 3, 5]),
    "A6": lambda: make_alternating(6, [2, 3, 5]),
    "A7": lambda: make_alternating(7, [2, 3, 5, 7]),
    "J1": make_j1,
    "150_5": make_150_5,
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", default=list(BUILDERS))
    ap.add_argument("--out", type=Path, default=DATA)
    args = ap.parse_args(argv)
    for name in args.names:
        t = time.time()
        table = BUILDERS[name]()
        text = serialize_table(table)
        parse_table(text)  # full validation through the engine's loader
        (args.out / f"{name}.json").write_text(text)
        log(f"{name}: {table.nclasses} classes, {len(table.blocks)} block records ({time.time() - t:.1f}s)")


if __name__ == "__main__":
    main()
