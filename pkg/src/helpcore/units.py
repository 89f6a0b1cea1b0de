"""Partial-augmentation distributions of hypothetical torsion units.

A `Distribution` of order n stores, for every proper divisor d of n, the vector
(eps_C(u^d))_C over all classes of the table; u^d has order n/d.

The nested-list form used in reports (`to_nested`) lists one vector per
divisor k > 1 of n in ascending k, where the k-th vector belongs to the power of
order k, i.e. u^(n/k), and only covers the classes admissible for order k in
table order.  The last vector is therefore the one of u itself, e.g. for A7 and
n = 6: [[eps_2a(u^3)], [eps_3a(u^2), eps_3b(u^2)], [eps_2a(u), eps_3a(u),
eps_3b(u), eps_6a(u)]].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .ctbl import CharacterTable, power_class
from .cyclo import divisors

__all__ = [
    "Distribution",
    "Status",
    "Verdict",
    "admissible_classes",
    "classify",
    "is_rationally_trivial",
    "kp_check",
    "trivial_distribution",
]


def admissible_classes(table: CharacterTable, n: int) -> tuple[int, ...]:
    """Classes that may carry a non-zero partial augmentation for order n > 1.

    Element order must divide n; a central class {z} only counts if z itself
    has order n (so the identity class never does).
    """
    if n < 2:
        raise ValueError("admissible classes are defined for n > 1")
    out = []
    for i, c in enumerate(table.classes):
        if n % c.order:
            continue
        if i in table.central_classes and c.order != n:
            continue
        out.append(i)
    return tuple(out)


@dataclass(frozen=True)
class Distribution:
    order: int
    eps: tuple[tuple[int, tuple[int, ...]], ...]  # ((d, vector), ...) for d | n, d < n, ascending d

    @classmethod
    def from_map(cls, n: int, vectors: dict[int, tuple[int, ...]]) -> Distribution:
        want = [d for d in divisors(n) if d < n]
        if sorted(vectors) != want:
            raise ValueError(f"need vectors for divisors {want}, got {sorted(vectors)}")
        return cls(n, tuple((d, tuple(int(x) for x in vectors[d])) for d in want))

    def vector(self, d: int) -> tuple[int, ...]:
        """Partial augmentations of u^d (d = n gives the identity, handled by callers)."""
        for dd, v in self.eps:
            if dd == d:
                return v
        raise KeyError(f"{d} is not a proper divisor of {self.order}")

    @property
    def top(self) -> tuple[int, ...]:
        return self.vector(1)

    def as_map(self) -> dict[int, tuple[int, ...]]:
        return dict(self.eps)

    def power(self, k: int) -> Distribution:
        """The distribution of u^k for a divisor k of n."""
        n = self.order
        if n % k:
            raise ValueError(f"{k} does not divide {n}")
        m = n // k
        if m == 1:
            raise ValueError("u^n is the identity")
        return Distribution(m, tuple((d, self.vector(k * d)) for d in divisors(m) if d < m))

    # -- nested list form --------------------------------------------------------

    def to_nested(self, table: CharacterTable) -> list[list[int]]:
        n = self.order
        out = []
        for k in divisors(n)[1:]:
            vec = self.vector(n // k)
            out.append([vec[c] for c in admissible_classes(table, k)])
        return out

    @classmethod
    def from_nested(cls, table: CharacterTable, n: int, nested) -> Distribution:
        ks = divisors(n)[1:]
        if len(nested) != len(ks):
            raise ValueError(f"order {n} needs {len(ks)} vectors (one per divisor > 1), got {len(nested)}")
        vectors = {}
        for k, row in zip(ks, nested):
            adm = admissible_classes(table, k)
            if len(row) != len(adm):
                names = ", ".join(table.class_names(adm))
                raise ValueError(f"the order-{k} vector needs {len(adm)} entries ({names}), got {len(row)}")
            vec = [0] * table.nclasses
            for c, x in zip(adm, row):
                vec[c] = int(x)
            vectors[n // k] = tuple(vec)
        return cls.from_map(n, vectors)

    @classmethod
    def powers_from_nested(cls, table: CharacterTable, n: int, nested) -> dict[int, tuple[int, ...]]:
        """Power vectors {d: eps(u^d)} from the nested form without its last (top) vector."""
        if n in (1,) or len(nested) != len(divisors(n)) - 2:
            raise ValueError(f"order {n} needs {len(divisors(n)) - 2} power vectors, got {len(nested)}")
        # borrow the parser with a dummy top vector
        dummy = [0] * len(admissible_classes(table, n))
        return {d: v for d, v in cls.from_nested(table, n, [*nested, dummy]).eps if d > 1}

    def format(self, table: CharacterTable) -> str:
        return str(self.to_nested(table)).replace(" ", "")

    def check(self, table: CharacterTable) -> list[str]:
        """Violations of augmentation and support conditions."""
        issues = []
        for d, vec in self.eps:
            k = self.order // d
            adm = set(admissible_classes(table, k))
            if sum(vec) != 1:
                issues.append(f"augmentation of u^{d} is {sum(vec)}")
            bad = [table.classes[c].name for c, x in enumerate(vec) if x and c not in adm]
            if bad:
                issues.append(f"u^{d} has support on non-admissible classes {bad}")
        return issues


def trivial_distribution(table: CharacterTable, c: int) -> Distribution:
    """The distribution of a group element in class c."""
    n = table.classes[c].order
    if n < 2:
        raise ValueError("the identity has no proper powers to record")
    vectors = {}
    for d in divisors(n)[:-1]:
        vec = [0] * table.nclasses
        vec[power_class(table, c, d)] = 1
        vectors[d] = tuple(vec)
    return Distribution.from_map(n, vectors)


def is_rationally_trivial(dist: Distribution) -> bool:
    return all(x >= 0 for _, vec in dist.eps for x in vec)


def kp_check(table: CharacterTable, dist: Distribution) -> bool:
    """For each power u^d, coefficient sums over classes of any order other
    than that of u^d vanish."""
    for d, vec in dist.eps:
        k = dist.order // d
        sums: dict[int, int] = {}
        for c, x in enumerate(vec):
            if x:
                o = table.classes[c].order
                sums[o] = sums.get(o, 0) + x
        if any(s for o, s in sums.items() if o != k):
            return False
    return True


class Status(Enum):
    NO_SOLUTIONS = "no units"
    ALL_TRIVIAL = "all trivial"
    CRITICAL = "critical"
    ERROR = "error"


@dataclass
class Verdict:
    order: int
    status: Status
    critical: list[Distribution] = field(default_factory=list)
    trivial: list[Distribution] = field(default_factory=list)
    removed: list[tuple[Distribution, str]] = field(default_factory=list)
    kp: dict[Distribution, bool] = field(default_factory=dict)
    message: str = ""
    seconds: float = 0.0

    @property
    def survivors(self) -> list[Distribution]:
        return self.trivial + self.critical


def classify(order: int, solutions, removed=()) -> Verdict:
    sols = list(solutions)
    trivial = [s for s in sols if is_rationally_trivial(s)]
    critical = [s for s in sols if not is_rationally_trivial(s)]
    if not sols:
        status = Status.NO_SOLUTIONS
    elif critical:
        status = Status.CRITICAL
    else:
        status = Status.ALL_TRIVIAL
    return Verdict(order, status, critical, trivial, list(removed))
