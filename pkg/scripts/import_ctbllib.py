"""Import Brauer tables from the GAP character table library data files.

    python scripts/import_ctbllib.py DATA_DIR --check A5 A6 A7 --attach J1

DATA_DIR is the ``data`` directory of the ctbllib package (the plain-text
``*.tbl`` files).  For every named table the ordinary table is parsed and
matched against the bundled fixture up to a permutation of classes and
characters.  ``--check`` compares the library's Brauer characters with the
ones already stored in the fixture; ``--attach`` replaces the fixture's Brauer
tables and defect-1 block records by the imported ones and rewrites the JSON.

Only the subset of the GAP syntax that occurs in these files is understood:
lists with holes, integers, ``E(n)`` arithmetic, permutations and the
``GALOIS`` / ``TENSOR`` compression of irreducibles.
"""

from __future__ import annotations

import argparse
import cmath
import itertools
import re
import sys
from math import lcm
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))

from make_fixtures import block_from_record  # noqa: E402
from tablegen import defect_one_blocks, solve_rational, tree_block_data  # noqa: E402

from helpcore.ctbl import BrauerTable, CharacterTable, ClassInfo, _letters, load_table, serialize_table, validate  # noqa: E402
from helpcore.cyclo import CycNum  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "src" / "helpcore" / "data"

# ---------------------------------------------------------------------------
# a small reader for GAP literals

_TOKEN = re.compile(r'\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|("(?:[^"\\]|\\.)*")|(.))', re.S)


class Hole:
    def __repr__(self):
        return "Hole"


HOLE = Hole()


class Perm(tuple):
    pass


class GapReader:
    def __init__(self, text: str):
        self.toks = []
        for m in _TOKEN.finditer(text):
            if m.group(1):
                self.toks.append(("int", int(m.group(1))))
            elif m.group(2):
                self.toks.append(("id", m.group(2)))
            elif m.group(3):
                self.toks.append(("str", m.group(3)[1:-1]))
            elif m.group(4) and not m.group(4).isspace():
                self.toks.append(("op", m.group(4)))
        self.i = 0

    def peek(self, k=0):
        return self.toks[self.i + k] if self.i + k < len(self.toks) else ("eof", None)

    def take(self, op=None):
        tok = self.peek()
        if op is not None and tok != ("op", op):
            raise SyntaxError(f"expected {op!r}, got {tok!r}")
        self.i += 1
        return tok

    def element(self):
        tok = self.peek()
        if tok == ("op", "["):
            return self.list_()
        if tok == ("op", "(") and self.peek(1)[0] == "int" and self.peek(2) in (("op", ","), ("op", ")")):
            return self.perm()
        if tok[0] == "int" and self.peek(1) in (("op", ","), ("op", "]")):
            self.take()
            return tok[1]
        if tok[0] == "str":
            self.take()
            while self.peek() == ("op", "\\"):
                self.take()
            return tok[1]
        if tok[0] == "id" and tok[1] not in ("E",):
            self.take()
            return tok[1]
        return self.expr()

    def list_(self):
        self.take("[")
        out = []
        if self.peek() == ("op", "]"):
            self.take()
            return out
        while True:
            if self.peek() in (("op", ","), ("op", "]")):
                out.append(HOLE)
            else:
                out.append(self.element())
            tok = self.take()
            if tok == ("op", "]"):
                return out
            if tok != ("op", ","):
                raise SyntaxError(f"bad list separator {tok!r}")

    def perm(self):
        cycles = []
        while self.peek() == ("op", "(") and self.peek(1)[0] == "int":
            self.take("(")
            cyc = [self.take()[1]]
            while self.peek() == ("op", ","):
                self.take()
                cyc.append(self.take()[1])
            self.take(")")
            cycles.append(tuple(cyc))
        return Perm(cycles)

    # arithmetic over cyclotomics
    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        val = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            val = val + t if op == "+" else val - t
        return val

    def term(self):
        val = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            f = self.power()
            val = val * f if op == "*" else val / f
        return val

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = self.peek() == ("op", "-")
            if neg:
                self.take()
            k = self.take()[1]
            out = CycNum.rational(1)
            for _ in range(k):
                out = out * base
            base = CycNum.rational(1) / out if neg else out
        return base

    def atom(self):
        tok = self.take()
        if tok[0] == "int":
            return CycNum.rational(tok[1])
        if tok == ("op", "("):
            v = self.expr()
            self.take(")")
            return v
        if tok == ("id", "E"):
            self.take("(")
            n = self.take()[1]
            self.take(")")
            return CycNum.zeta(n)
        raise SyntaxError(f"unsupported token {tok!r}")


def _call_args(text: str, head: str) -> list:
    """Arguments of the first call starting with ``head`` (e.g. 'MOT("J1",')."""
    start = text.find(head)
    if start < 0:
        raise KeyError(head)
    i = start + len(head) - 1
    assert text[i] == ","
    depth, j, in_str = 1, i + 1, False
    while depth:
        c = text[j]
        if in_str:
            if c == "\\":
                j += 1
            elif c == '"':
                in_str = False
        elif c == '"':
            in_str = True
        elif c in "([":
            depth += 1
        elif c in ")]":
            depth -= 1
        j += 1
    body = text[start + head.index("(") + 1 : j - 1]
    return GapReader("[" + body + "]").list_()


def _find(data_dir: Path, head: str) -> list:
    for path in sorted(data_dir.glob("*.tbl")):
        text = path.read_text(encoding="latin-1")
        if head in text:
            return _call_args(text, head)
    raise KeyError(f"{head} not found in {data_dir}")


# ---------------------------------------------------------------------------
# ordinary and Brauer tables


def read_ordinary(data_dir: Path, name: str):
    args = _find(data_dir, f'MOT("{name}",')
    centralizers = args[2]
    powermaps = {p: m for p, m in enumerate(args[3], start=1) if m is not HOLE}
    rows: list = []
    for entry in args[4]:
        if isinstance(entry, list) and entry and entry[0] == "GALOIS":
            i, k = entry[1]
            rows.append([v.galois(k) for v in rows[i - 1]])
        elif isinstance(entry, list) and entry and entry[0] == "TENSOR":
            i, j = entry[1]
            rows.append([a * b for a, b in zip(rows[i - 1], rows[j - 1])])
        else:
            rows.append([v if isinstance(v, CycNum) else CycNum.rational(v) for v in entry])
    return centralizers, powermaps, rows


def brauer_characters(data_dir: Path, name: str, p: int, ordinary, regular):
    """Irreducible p-modular Brauer characters in library order, values on ``regular``."""
    args = _find(data_dir, f'MBT("{name}",{p},')
    block_of_brauer, defects, basicset, trees, decinv = args[3:8]
    nblocks = len(defects)
    blocks = ordinary_blocks(ordinary, regular, p)
    if len(blocks) != nblocks:
        raise AssertionError(f"{name} mod {p}: {len(blocks)} blocks computed, {nblocks} in the library")
    restricted = [[row[k] for k in regular] for row in ordinary]
    per_block: list[list] = []
    for b in range(nblocks):
        members = blocks[b]
        tree = trees[b] if b < len(trees) else HOLE
        if isinstance(tree, int):
            # shared shape: same tree as block `tree`, in block-local numbering
            tree = trees[tree - 1]
        if defects[b] == 0:
            phis = [restricted[members[0]]]
        elif isinstance(tree, list):
            phis = _from_tree(tree, members, restricted)
        else:
            basis = basicset[b] if b < len(basicset) else HOLE
            inv = decinv[b] if b < len(decinv) else HOLE
            if basis is HOLE or inv is HOLE:
                raise AssertionError(f"{name} mod {p}: block {b + 1} has neither tree nor basic set")
            phis = []
            for coeffs in inv:
                phi = [CycNum.rational(0)] * len(regular)
                for c, i in zip(coeffs, basis):
                    if c:
                        phi = [a + c * v for a, v in zip(phi, restricted[i - 1])]
                phis.append(phi)
        per_block.append(phis)
    out = []
    seen = [0] * nblocks
    for b in block_of_brauer:
        out.append(per_block[b - 1][seen[b - 1]])
        seen[b - 1] += 1
    if seen != [len(x) for x in per_block]:
        raise AssertionError(f"{name} mod {p}: Brauer character count mismatch")
    return out


def _from_tree(edges, members, restricted):
    # every edge lists the ordinary characters (block-local numbering) of a
    # projective indecomposable; d(chi, edge) = 1 exactly when chi is listed
    D = [[1 if (k + 1) in e else 0 for e in edges] for k in range(len(members))]
    width = len(restricted[0])
    # solve chi^0 = sum_e d(chi, e) phi_e column by column
    phis = [[None] * width for _ in edges]
    for col in range(width):
        cond = 1
        for i in members:
            cond = lcm(cond, restricted[i][col].n)
        dim = len(restricted[members[0]][col].embed(cond).coeffs)
        vecs = [list(restricted[i][col].embed(cond).coeffs) for i in members]
        for t in range(dim):
            rhs = [v[t] for v in vecs]
            x = _least_squares_exact(D, rhs)
            for e in range(len(edges)):
                if phis[e][col] is None:
                    phis[e][col] = [Fraction(0)] * dim
                phis[e][col][t] = x[e]
        for e in range(len(edges)):
            phis[e][col] = CycNum(cond, phis[e][col])
    return phis


def _least_squares_exact(D, rhs):
    # D has full column rank and the system is consistent
    cols = list(map(list, zip(*D)))
    return solve_rational(cols, rhs)


def _complex(v: CycNum) -> complex:
    return sum(float(c) * cmath.exp(2j * cmath.pi * k / v.n) for k, c in enumerate(v.coeffs) if c)


def decomposition(ordinary, phis, regular):
    """Decomposition matrix: least squares in floating point, then checked exactly."""
    B = np.array([[_complex(v) for v in row] for row in phis]).T
    D = []
    for chi in ordinary:
        target = [chi[k] for k in regular]
        x, *_ = np.linalg.lstsq(B, np.array([_complex(v) for v in target]), rcond=None)
        d = [int(round(v.real)) for v in x]
        recon = [sum((phi[c] * k for k, phi in zip(d, phis) if k), CycNum.rational(0)) for c in range(len(regular))]
        if recon != target or min(d) < 0:
            raise AssertionError(f"restriction of a character is not a non-negative combination: {d}")
        D.append(d)
    return D


def ordinary_blocks(ordinary, regular, p):
    """p-blocks as lists of character indices, numbered by first occurrence.

    Two irreducibles are linked when their inner product over the p-regular
    classes is nonzero; blocks are the connected components.
    """
    n = len(ordinary)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # the linkage sum is a rational integer, so complex evaluation and rounding is exact
    num = [[_complex(v) for v in row] for row in ordinary]
    for a, b in itertools.combinations(range(n), 2):
        s = sum(num[a][k] * num[b][k].conjugate() * w for k, w in regular.items())
        if round(s.real) != 0:
            parent[find(b)] = find(a)
    comps: dict[int, list[int]] = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values(), key=lambda m: m[0])


# ---------------------------------------------------------------------------
# matching the library table to a fixture


def match_classes(table, rows, centralizers):
    """Permutation pi with library class j = fixture class pi[j], and character map."""
    n = table.nclasses
    if len(rows[0]) != n:
        raise AssertionError("class count differs")
    fix_cent = [table.group_order // c.size for c in table.classes]
    groups: dict[int, list[int]] = {}
    for j, c in enumerate(centralizers):
        groups.setdefault(c, []).append(j)
    keys = sorted(groups)
    fixture_rows = {tuple(r): i for i, r in enumerate(table.irreducibles)}
    choices = []
    for c in keys:
        lib = groups[c]
        fix = [i for i in range(n) if fix_cent[i] == c]
        if len(fix) != len(lib):
            raise AssertionError(f"centraliser {c}: class counts differ")
        choices.append([list(zip(lib, perm)) for perm in itertools.permutations(fix)])
    for combo in itertools.product(*choices):
        pi = [0] * n
        for pairs in combo:
            for j, i in pairs:
                pi[j] = i
        chars = []
        for r in rows:
            moved = [None] * n
            for j, v in enumerate(r):
                moved[pi[j]] = v
            idx = fixture_rows.get(tuple(moved))
            if idx is None:
                break
            chars.append(idx)
        else:
            return pi, chars
    raise AssertionError(f"{table.group_name}: library table does not match the fixture")


def reorder(table, pi, chars, notes):
    """Put ``table`` into library order: class j is old class pi[j], character i is old chars[i]."""
    inv = {old: new for new, old in enumerate(pi)}
    classes = [table.classes[old] for old in pi]
    seen: dict[int, int] = {}
    renamed = []
    for c in classes:
        k = seen.get(c.order, 0)
        seen[c.order] = k + 1
        renamed.append(ClassInfo(f"{c.order}{_letters(k)}", c.order, c.size))
    return CharacterTable(
        group_name=table.group_name,
        group_order=table.group_order,
        classes=renamed,
        power_maps={p: tuple(inv[m[old]] for old in pi) for p, m in table.power_maps.items()},
        irreducibles=[[row[old] for old in pi] for row in (table.irreducibles[i] for i in chars)],
        notes=notes,
    )


def imported_brauer(data_dir: Path, table, primes=None):
    name = table.group_name
    cents, _, rows = read_ordinary(data_dir, name)
    pi, chars = match_classes(table, rows, cents)
    order = table.group_order
    # fixture-ordered ordinary table; library character i is fixture character chars[i]
    lib_rows = [table.irreducibles[chars[i]] for i in range(len(rows))]
    out = {}
    for p in primes or sorted({q for c in table.classes for q in _primes(c.order)} | set(_primes(order))):
        regular = [k for k, c in enumerate(table.classes) if c.order % p]
        weights = {k: table.classes[k].size for k in regular}
        try:
            phis = brauer_characters(data_dir, name, p, lib_rows, weights)
        except KeyError:
            continue
        out[p] = (regular, phis)
    return out, chars


def _primes(n):
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            if d not in out:
                out.append(d)
            n //= d
        d += 1
    if n > 1 and n not in out:
        out.append(n)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("data", type=Path)
    ap.add_argument("--check", nargs="*", default=[])
    ap.add_argument("--attach", nargs="*", default=[])
    args = ap.parse_args(argv)
    status = 0
    for name in args.check:
        table = load_table(name)
        got, _ = imported_brauer(args.data, table, sorted(table.brauer))
        for p, (regular, phis) in got.items():
            mine = table.brauer[p]
            if list(mine.regular_classes) != regular:
                print(f"{name} mod {p}: regular classes differ")
                status = 1
                continue
            same = sorted(map(tuple, phis), key=repr) == sorted(map(tuple, mine.irreducibles), key=repr)
            print(f"{name} mod {p}: {len(phis)} Brauer characters, {'agree' if same else 'DISAGREE'}")
            status |= not same
    for name in args.attach:
        table = load_table(name)
        cents, _, rows = read_ordinary(args.data, name)
        pi, chars = match_classes(table, rows, cents)
        notes = (
            f"{name} in the class and character numbering of the GAP character table library; "
            "Brauer tables and defect-1 block records imported from its data files "
            "(scripts/import_ctbllib.py). Ordinary table computed from generators (scripts/make_fixtures.py)."
        )
        table = reorder(table, pi, chars, notes)
        got, _ = imported_brauer(args.data, table)
        table.brauer = {}
        table.blocks = []
        for p, (regular, phis) in sorted(got.items()):
            D = decomposition(table.irreducibles, phis, regular)
            table.brauer[p] = BrauerTable(p, tuple(regular), phis, D)
            print(f"{name} mod {p}: degrees {[int(r[0].as_rational()) for r in phis]}")
            if p > 2:
                for tree in defect_one_blocks(None, table.irreducibles, D, p, table.group_order):
                    for rec in tree_block_data(tree):
                        table.blocks.append(block_from_record(rec, table))
        validate(table)
        path = DATA / f"{name}.json"
        path.write_text(serialize_table(table))
        print(f"wrote {path} ({len(table.blocks)} block records)")
    return status


if __name__ == "__main__":
    sys.exit(main())
