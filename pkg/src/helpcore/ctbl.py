"""Character tables: data model, JSON format and validation.

The on-disk format is a single JSON document described by
``data/table.schema.json``.  Class and character indices in files are 1-based;
in Python everything is 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from math import gcd
from pathlib import Path

import jsonschema
import numpy as np

from .cyclo import CycNum, factorize, lcm, primes_dividing, totient

__all__ = [
    "BlockData",
    "abelian_table",
    "BrauerTable",
    "CharacterTable",
    "ClassInfo",
    "TableSyntaxError",
    "ValidationError",
    "bundled_tables",
    "load_table",
    "p_part_class",
    "parse_table",
    "power_class",
    "serialize_table",
    "validate",
]

FORMAT = "helpcore-table/1"


class TableSyntaxError(ValueError):
    """Malformed table document; `position` is 'line:col' or a JSON path."""

    def __init__(self, message: str, position: str = ""):
        super().__init__(f"{position}: {message}" if position else message)
        self.position = position


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class ClassInfo:
    name: str
    order: int
    size: int


@dataclass(frozen=True)
class BrauerTable:
    prime: int
    regular_classes: tuple[int, ...]
    irreducibles: list  # list of rows, one CycNum per regular class
    decomposition: list | None = None

    def full_row(self, i: int, nclasses: int) -> list:
        """Brauer character i as a class function, None off the regular classes."""
        row = [None] * nclasses
        for k, v in zip(self.regular_classes, self.irreducibles[i]):
            row[k] = v
        return row


@dataclass(frozen=True)
class BlockData:
    """A defect-1 block read as a Brauer tree from leaf `characters[0]`.

    `exceptional` lists the exceptional characters (multiplicity t); when the
    tree has no exceptional vertex, `designated` is set and `exceptional`
    holds the single character playing that role with t = 1.
    """

    prime: int
    characters: tuple[int, ...]
    signs: tuple[int, ...]
    exceptional: tuple[int, ...]
    exceptional_sign: int
    multiplicity: int = 1
    designated: bool = False
    label: str = ""


@dataclass
class CharacterTable:
    group_name: str
    group_order: int
    classes: list[ClassInfo]
    power_maps: dict[int, tuple[int, ...]]
    irreducibles: list[list[CycNum]]
    brauer: dict[int, BrauerTable] = field(default_factory=dict)
    blocks: list[BlockData] = field(default_factory=list)
    notes: str = ""

    # -- derived data ---------------------------------------------------------

    @property
    def nclasses(self) -> int:
        return len(self.classes)

    @cached_property
    def exponent(self) -> int:
        e = 1
        for c in self.classes:
            e = lcm(e, c.order)
        return e

    @cached_property
    def identity_class(self) -> int:
        return next(i for i, c in enumerate(self.classes) if c.order == 1)

    @cached_property
    def central_classes(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.classes) if c.size == 1)

    def class_index(self, name: str) -> int:
        for i, c in enumerate(self.classes):
            if c.name == name:
                return i
        raise KeyError(f"no class named {name!r} in {self.group_name}")

    def class_names(self, indices) -> list[str]:
        return [self.classes[i].name for i in indices]

    def degree(self, chi: int) -> int:
        return int(self.irreducibles[chi][self.identity_class].as_rational())

    def power_class(self, c: int, k: int) -> int:
        return power_class(self, c, k)

    def p_part_class(self, c: int, p: int) -> int:
        return p_part_class(self, c, p)

    def __repr__(self):
        extra = f", brauer={sorted(self.brauer)}" if self.brauer else ""
        return f"<CharacterTable {self.group_name} order={self.group_order} classes={self.nclasses}{extra}>"


# ---------------------------------------------------------------------------
# power maps


def power_class(table: CharacterTable, c: int, k: int) -> int:
    """Class of g^k for g in class c, composed from the prime power maps."""
    if k < 0:
        raise ValueError("power must be non-negative")
    o = table.classes[c].order
    k %= o
    if k == 0:
        return table.identity_class
    # g^k only depends on k mod o; pick a representative built from stored primes
    for kk in range(k, k + 64 * o, o):
        fac = factorize(kk)
        if all(p in table.power_maps for p, _ in fac):
            for p, e in fac:
                for _ in range(e):
                    c = table.power_maps[p][c]
            return c
    raise KeyError(f"power {k} of class {table.classes[c].name} not reachable from the stored power maps")


def p_part_class(table: CharacterTable, c: int, p: int) -> int:
    """Class of the p-part g_p of g in class c."""
    o = table.classes[c].order
    pa = 1
    while o % (pa * p) == 0:
        pa *= p
    m = o // pa
    if pa == 1:
        return table.identity_class
    # t = 0 mod m and t = 1 mod p^a
    t = m * pow(m, -1, pa) % o
    return power_class(table, c, t)


# ---------------------------------------------------------------------------
# validation


def validate(table: CharacterTable) -> None:
    issues = lint(table)
    if issues:
        raise ValidationError("; ".join(issues))


def lint(table: CharacterTable) -> list[str]:
    """All violated invariants, as human-readable strings (empty if valid)."""
    issues: list[str] = []
    order = table.group_order
    cls = table.classes
    r = len(cls)

    ids = [i for i, c in enumerate(cls) if c.order == 1]
    if len(ids) != 1:
        issues.append(f"expected exactly one identity class, found {len(ids)}")
    elif cls[ids[0]].size != 1:
        issues.append("identity class must have size 1")
    for c in cls:
        if order % c.order or order % c.size:
            issues.append(f"class {c.name}: order and size must divide the group order")
    if sum(c.size for c in cls) != order:
        issues.append("class sizes do not sum to the group order")
    if len({c.name for c in cls}) != r:
        issues.append("class names are not unique")
    if issues:
        return issues

    exponent = table.exponent
    for p in primes_dividing(exponent):
        if p not in table.power_maps:
            issues.append(f"missing power map for prime {p}")
    for p, pm in table.power_maps.items():
        if len(pm) != r or any(not 0 <= x < r for x in pm):
            issues.append(f"power map {p} has wrong shape")
            continue
        for i, c in enumerate(cls):
            want = c.order // p if c.order % p == 0 else c.order
            if cls[pm[i]].order != want:
                issues.append(f"power map {p}: order of {c.name}^{p} should be {want}")
    if issues:
        return issues

    chars = table.irreducibles
    for i, row in enumerate(chars):
        if len(row) != r:
            issues.append(f"character {i + 1} has {len(row)} values, expected {r}")
    if issues:
        return issues
    for i, row in enumerate(chars):
        d = row[table.identity_class].as_rational()
        if d is None or d.denominator != 1 or d <= 0:
            issues.append(f"degree of character {i + 1} is not a positive integer")
        if any(c.denominator != 1 for v in row for c in v.coeffs):
            issues.append(f"character {i + 1} has non-integral values")
    if issues:
        return issues
    if sum(table.degree(i) ** 2 for i in range(len(chars))) != order:
        issues.append("sum of squared degrees differs from the group order")
    if len(chars) != r:
        issues.append(f"{len(chars)} irreducibles for {r} classes")
    issues += _check_orthogonality(table)

    for p, bt in table.brauer.items():
        issues += _check_brauer(table, bt)
    for b in table.blocks:
        issues += _check_block(table, b)
    return issues


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _root_of_unity_mod(N: int, q: int) -> int:
    """A primitive N-th root of unity modulo the prime q (requires N | q-1)."""
    fac = [p for p, _ in factorize(q - 1)]
    g = 2
    while any(pow(g, (q - 1) // p, q) == 1 for p in fac):
        g += 1
    return pow(g, (q - 1) // N, q)


def _embedding_primes(N: int, bound: int) -> list[int]:
    primes = []
    prod = 1
    k = (1 << 30) // N
    while prod <= bound:
        k += 1
        q = k * N + 1
        if q >= 1 << 31:
            raise ValidationError("conductor too large for the orthogonality check")
        if _is_prime(q):
            primes.append(q)
            prod *= q
    return primes


def _embed_values(values: list[CycNum], N: int, q: int, w: int) -> np.ndarray:
    """Images of the values under every embedding z_N -> w^j, gcd(j, N) = 1."""
    js = np.array([j for j in range(N) if gcd(j, N) == 1], dtype=np.int64)
    wpow = np.empty(N, dtype=np.int64)
    acc = 1
    for e in range(N):
        wpow[e] = acc
        acc = acc * w % q
    out = np.zeros((len(values), len(js)), dtype=np.int64)
    for i, v in enumerate(values):
        s = N // v.n
        for k, c in enumerate(v.coeffs):
            if c:
                out[i] = (out[i] + (int(c) % q) * wpow[(s * k * js) % N]) % q
    return out


def _l1(v: CycNum) -> int:
    return int(sum(abs(c) for c in v.coeffs))


def _check_orthogonality(table: CharacterTable) -> list[str]:
    """Exact row orthogonality via embeddings modulo several primes.

    A cyclotomic integer whose images vanish under all embeddings modulo primes
    q_1..q_s (each q_i = 1 mod N) is divisible by q_1...q_s; if its absolute
    values are bounded by B < q_1...q_s, it is zero.
    """
    chars = table.irreducibles
    r = table.nclasses
    sizes = [c.size for c in table.classes]
    N = 1
    for row in chars:
        for v in row:
            N = lcm(N, v.n)
    l1 = [[_l1(v) for v in row] for row in chars]
    bound = max(
        sum(sizes[k] * l1[a][k] * l1[b][k] for k in range(r)) for a in range(len(chars)) for b in range(len(chars))
    )
    bound += table.group_order
    flat = [v for row in chars for v in row]
    flat_conj = [v.conj() for v in flat]
    bad = None
    for q in _embedding_primes(N, bound):
        w = _root_of_unity_mod(N, q)
        X = _embed_values(flat, N, q, w).reshape(len(chars), r, -1)
        Xc = _embed_values(flat_conj, N, q, w).reshape(len(chars), r, -1)
        gram = np.zeros((len(chars), len(chars), X.shape[2]), dtype=np.int64)
        for k in range(r):
            A = (X[:, k, :] * sizes[k]) % q
            gram = (gram + (A[:, None, :] * Xc[None, :, k, :]) % q) % q
        target = (np.eye(len(chars), dtype=np.int64) * (table.group_order % q))[:, :, None]
        mismatch = np.argwhere((gram != target).any(axis=2))
        if len(mismatch):
            bad = mismatch[0]
            break
    if bad is not None:
        a, b = (int(x) + 1 for x in bad)
        return [f"row orthogonality failed for (chi{a}, chi{b})"]
    return []


def _check_brauer(table: CharacterTable, bt: BrauerTable) -> list[str]:
    p = bt.prime
    issues = []
    regular = [i for i, c in enumerate(table.classes) if c.order % p]
    if list(bt.regular_classes) != regular:
        issues.append(f"Brauer table mod {p}: classes must be exactly the {p}-regular classes in table order")
        return issues
    for i, row in enumerate(bt.irreducibles):
        if len(row) != len(regular):
            issues.append(f"Brauer character {i + 1} mod {p} has wrong length")
    if issues:
        return issues
    if bt.decomposition is not None:
        D = bt.decomposition
        if len(D) != len(table.irreducibles) or any(len(row) != len(bt.irreducibles) for row in D):
            return [f"decomposition matrix mod {p} has wrong shape"]
        for i, chi in enumerate(table.irreducibles):
            for pos, k in enumerate(regular):
                s = CycNum.rational(0)
                for j, dij in enumerate(D[i]):
                    if dij:
                        s = s + bt.irreducibles[j][pos] * dij
                if s != chi[k]:
                    issues.append(
                        f"decomposition mod {p}: restriction of chi{i + 1} differs at class {table.classes[k].name}"
                    )
                    break
    return issues


def _check_block(table: CharacterTable, b: BlockData) -> list[str]:
    nchar = len(table.irreducibles)
    tag = f"block {b.label or b.prime}"
    issues = []
    if len(b.characters) != len(b.signs):
        issues.append(f"{tag}: one sign per character required")
    if b.signs and b.signs[0] != 1:
        issues.append(f"{tag}: the leaf character must have sign +1")
    if any(s not in (1, -1) for s in (*b.signs, b.exceptional_sign)):
        issues.append(f"{tag}: signs must be +1 or -1")
    if b.multiplicity < 1 or not b.exceptional:
        issues.append(f"{tag}: exceptional data missing")
    if b.designated and (b.multiplicity != 1 or len(b.exceptional) != 1):
        issues.append(f"{tag}: a designated character stands alone with t = 1")
    if not b.designated and len(b.exceptional) != b.multiplicity:
        issues.append(f"{tag}: number of exceptional characters must equal the multiplicity")
    idx = (*b.characters, *b.exceptional)
    if any(not 0 <= i < nchar for i in idx) or len(set(idx)) != len(idx):
        issues.append(f"{tag}: invalid character indices")
    if issues:
        return issues
    # the signed sum of the tree's vertices vanishes on p-regular classes
    for k, c in enumerate(table.classes):
        if c.order % b.prime == 0:
            continue
        s = CycNum.rational(0)
        for i, sg in zip(b.characters, b.signs):
            s = s + table.irreducibles[i][k] * sg
        exc = CycNum.rational(0)
        for i in b.exceptional:
            exc = exc + table.irreducibles[i][k]
        s = s + exc * Fraction(b.exceptional_sign, b.multiplicity)
        if s != 0:
            issues.append(f"{tag}: signs inconsistent with the characters at class {c.name}")
            break
    return issues


# ---------------------------------------------------------------------------
# parsing and serialization


def _schema() -> dict:
    return json.loads(resources.files("helpcore.data").joinpath("table.schema.json").read_text())


def _cyc_from_json(obj) -> CycNum:
    return CycNum.from_terms(obj["n"], obj["terms"])


def _cyc_to_json(v: CycNum) -> dict:
    return {"n": v.n, "terms": v.to_terms()}


def parse_table(text, check: bool = True) -> CharacterTable:
    """Parse a table document (str or bytes) and validate it."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableSyntaxError(exc.msg, f"{exc.lineno}:{exc.colno}") from None
    try:
        jsonschema.validate(doc, _schema())
    except jsonschema.ValidationError as exc:
        path = "$" + "".join(f"[{p!r}]" if isinstance(p, str) else f"[{p}]" for p in exc.absolute_path)
        raise TableSyntaxError(exc.message, path) from None

    classes = [ClassInfo(c["name"], c["order"], c["size"]) for c in doc["classes"]]
    names = {c.name: i for i, c in enumerate(classes)}
    power_maps = {int(p): tuple(x - 1 for x in pm) for p, pm in doc["powermaps"].items()}
    chars = [[_cyc_from_json(v) for v in row] for row in doc["characters"]]
    brauer = {}
    for bt in doc.get("brauer", []):
        try:
            regular = tuple(names[n] for n in bt["classes"])
        except KeyError as exc:
            raise TableSyntaxError(f"unknown class {exc.args[0]!r}", f"$['brauer'][prime {bt['prime']}]") from None
        if bt["prime"] in brauer:
            raise TableSyntaxError(f"duplicate Brauer table for prime {bt['prime']}", "$['brauer']")
        brauer[bt["prime"]] = BrauerTable(
            bt["prime"],
            regular,
            [[_cyc_from_json(v) for v in row] for row in bt["characters"]],
            bt.get("decomposition"),
        )
    blocks = [
        BlockData(
            prime=b["prime"],
            characters=tuple(i - 1 for i in b["characters"]),
            signs=tuple(b["signs"]),
            exceptional=tuple(i - 1 for i in b["exceptional"]),
            exceptional_sign=b["exceptional_sign"],
            multiplicity=b["multiplicity"],
            designated=b.get("designated", False),
            label=b.get("label", ""),
        )
        for b in doc.get("blocks", [])
    ]
    table = CharacterTable(
        group_name=doc["group"]["name"],
        group_order=doc["group"]["order"],
        classes=classes,
        power_maps=power_maps,
        irreducibles=chars,
        brauer=brauer,
        blocks=blocks,
        notes=doc["group"].get("notes", ""),
    )
    if check:
        validate(table)
    return table


def table_to_json(table: CharacterTable) -> dict:
    group = {"name": table.group_name, "order": table.group_order}
    if table.notes:
        group["notes"] = table.notes
    doc = {
        "format": FORMAT,
        "group": group,
        "classes": [{"name": c.name, "order": c.order, "size": c.size} for c in table.classes],
        "powermaps": {str(p): [x + 1 for x in pm] for p, pm in sorted(table.power_maps.items())},
        "characters": [[_cyc_to_json(v) for v in row] for row in table.irreducibles],
    }
    if table.brauer:
        doc["brauer"] = []
        for p, bt in sorted(table.brauer.items()):
            entry = {
                "prime": p,
                "classes": table.class_names(bt.regular_classes),
                "characters": [[_cyc_to_json(v) for v in row] for row in bt.irreducibles],
            }
            if bt.decomposition is not None:
                entry["decomposition"] = [list(row) for row in bt.decomposition]
            doc["brauer"].append(entry)
    if table.blocks:
        doc["blocks"] = []
        for b in table.blocks:
            entry = {
                "prime": b.prime,
                "characters": [i + 1 for i in b.characters],
                "signs": list(b.signs),
                "exceptional": [i + 1 for i in b.exceptional],
                "exceptional_sign": b.exceptional_sign,
                "multiplicity": b.multiplicity,
            }
            if b.designated:
                entry["designated"] = True
            if b.label:
                entry["label"] = b.label
            doc["blocks"].append(entry)
    return doc


def serialize_table(table: CharacterTable) -> str:
    """Compact but line-oriented JSON: one class / character row per line."""
    doc = table_to_json(table)
    lines = ["{"]
    keys = list(doc)
    for ki, key in enumerate(keys):
        val = doc[key]
        comma = "," if ki < len(keys) - 1 else ""
        if isinstance(val, list):
            lines.append(f"  {json.dumps(key)}: [")
            for i, item in enumerate(val):
                sep = "," if i < len(val) - 1 else ""
                lines.append(f"    {json.dumps(item, separators=(',', ':'))}{sep}")
            lines.append(f"  ]{comma}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(val)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def bundled_tables() -> list[str]:
    files = resources.files("helpcore.data")
    return sorted(p.name[: -len(".json")] for p in files.iterdir() if p.name.endswith(".json") and "schema" not in p.name)


def load_table(source, check: bool = True) -> CharacterTable:
    """Load a table from a path, a bundled name (e.g. "A7"), or '-' for stdin."""
    if source == "-":
        import sys

        return parse_table(sys.stdin.read(), check)
    path = Path(source)
    if path.exists():
        return parse_table(path.read_bytes(), check)
    res = resources.files("helpcore.data").joinpath(f"{source}.json")
    if res.is_file():
        return parse_table(res.read_bytes(), check)
    raise FileNotFoundError(f"no table file or bundled table named {source!r} (bundled: {', '.join(bundled_tables())})")


def abelian_table(*orders: int) -> CharacterTable:
    """Character table of C_{n1} x ... x C_{nk}.

    Classes are the elements in lexicographic order of their exponent tuples,
    and character a sends x to zeta_N^(sum a_i x_i N/n_i); for a cyclic group
    class i is u^i and character l is u^i -> zeta_n^(i l).
    """
    from itertools import product

    N = 1
    for n in orders:
        N = lcm(N, n)
    elems = list(product(*(range(n) for n in orders)))
    pos = {e: i for i, e in enumerate(elems)}

    def elem_order(e):
        o = 1
        for x, n in zip(e, orders):
            o = lcm(o, n // gcd(x, n))
        return o

    eorders = [elem_order(e) for e in elems]
    counts: dict[int, int] = {}
    classes = []
    for o in eorders:
        classes.append(ClassInfo(f"{o}{_letters(counts.get(o, 0))}", o, 1))
        counts[o] = counts.get(o, 0) + 1
    chars = []
    for a in elems:
        row = []
        for e in elems:
            k = sum(ai * xi * (N // n) for ai, xi, n in zip(a, e, orders)) % N
            row.append(CycNum.zeta(N, k) if k else CycNum.rational(1))
        chars.append(row)
    power_maps = {}
    for p in range(2, max(eorders) + 1):
        if len(factorize(p)) == 1 and factorize(p)[0][1] == 1:
            power_maps[p] = tuple(pos[tuple(p * x % n for x, n in zip(e, orders))] for e in elems)
    name = " x ".join(f"C{n}" for n in orders)
    return CharacterTable(name, len(elems), classes, power_maps, chars)


def _letters(i: int) -> str:
    out = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        out = chr(ord("a") + r) + out
    return out
