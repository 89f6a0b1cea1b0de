"""HeLP constraint systems.

For a unit u of order n and a character chi, the multiplicity of zeta_n^l as an
eigenvalue of a representation affording chi is

    mu(l) = 1/n * sum_{d | n} Tr_{Q(zeta_n^d)/Q}( chi(u^d) * zeta_n^(-d l) ),

with chi(u^d) = sum_C eps_C(u^d) chi(C) and chi(u^n) = chi(1).  With the
powers u^d (d > 1) fixed, each mu(l) is an affine function of the partial
augmentations of u and must be a non-negative integer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .ctbl import CharacterTable, power_class
from .cyclo import CycNum, _monomial_trace, divisors, factorize, lcm, totient
from .units import Distribution, admissible_classes

__all__ = [
    "AffineFunctional",
    "BrauerOrderClash",
    "CharRef",
    "Congruence",
    "ConstraintSystem",
    "build_extended_system",
    "build_noncyclic_system",
    "build_system",
    "char_value",
    "character_row",
    "congruence_constraints",
    "cyclic_assignment",
    "default_characters",
    "multiplicities",
    "multiplicity",
]


class BrauerOrderClash(ValueError):
    pass


@dataclass(frozen=True)
class CharRef:
    """An ordinary irreducible (prime None) or a p-Brauer irreducible, 0-based."""

    index: int
    prime: int | None = None

    def label(self) -> str:
        if self.prime is None:
            return f"chi{self.index + 1}"
        return f"phi{self.index + 1}(mod {self.prime})"


def character_row(table: CharacterTable, ref) -> list:
    """Values of a character on all classes (None off the p-regular classes)."""
    if isinstance(ref, int):
        ref = CharRef(ref)
    if ref.prime is None:
        return table.irreducibles[ref.index]
    return table.brauer[ref.prime].full_row(ref.index, table.nclasses)


def default_characters(table: CharacterTable, n: int, brauer: bool = True) -> list[CharRef]:
    refs = [CharRef(i) for i in range(len(table.irreducibles))]
    if brauer:
        for p in sorted(table.brauer):
            if n % p:
                refs += [CharRef(i, p) for i in range(len(table.brauer[p].irreducibles))]
    return refs


def char_value(row, eps) -> CycNum:
    """sum_C eps_C chi(C) for an integer vector eps over the classes."""
    total = CycNum.rational(0)
    for c, x in enumerate(eps):
        if x:
            v = row[c]
            if v is None:
                raise BrauerOrderClash("partial augmentation on a p-singular class for a Brauer character")
            total = total + v * x
    return total


# ---------------------------------------------------------------------------
# traces


@lru_cache(maxsize=None)
def _traces(N: int) -> tuple[int, ...]:
    return tuple(_monomial_trace(N, j) for j in range(N))


@lru_cache(maxsize=200_000)
def trace_row(v: CycNum, n: int) -> tuple[Fraction, ...]:
    """(Tr_{Q(zeta_n)/Q}(v * zeta_n^-l) for l in 0..n-1), v in Q(zeta_n)."""
    N = lcm(n, v.n)
    if N > 2 * n:
        raise ValueError(f"value with conductor {v.n} does not lie in Q(zeta_{n})")
    w = v.embed(N)
    T = _traces(N)
    step = N // n
    out = []
    for ell in range(n):
        s = Fraction(0)
        shift = ell * step
        for k, c in enumerate(w.coeffs):
            if c:
                s += c * T[(k - shift) % N]
        out.append(s * totient(n) / totient(N))
    return tuple(out)


def _rational_part(v: CycNum) -> Fraction:
    return v.trace() / totient(v.n)


# ---------------------------------------------------------------------------
# system containers


@dataclass(frozen=True)
class AffineFunctional:
    coeffs: tuple[Fraction, ...]
    const: Fraction
    label: str = ""
    upper: Fraction | None = None

    def __call__(self, x) -> Fraction:
        return self.const + sum((c * v for c, v in zip(self.coeffs, x) if c), Fraction(0))

    def text(self, names) -> str:
        parts = [f"{_q(c)}*{nm}" for c, nm in zip(self.coeffs, names) if c]
        if self.const or not parts:
            parts.append(_q(self.const))
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class Congruence:
    """sum coeffs * x + const = 0 (mod modulus)."""

    coeffs: tuple[int, ...]
    const: int
    modulus: int
    label: str = ""

    def holds(self, x) -> bool:
        return (sum(c * v for c, v in zip(self.coeffs, x)) + self.const) % self.modulus == 0


def _q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class ConstraintSystem:
    group_name: str
    order: int
    variables: tuple[str, ...]
    var_classes: tuple[int, ...] | None
    equalities: list[AffineFunctional] = field(default_factory=list)
    functionals: list[AffineFunctional] = field(default_factory=list)
    congruences: list[Congruence] = field(default_factory=list)

    @property
    def bounds_meta(self) -> list[tuple[str, Fraction | None]]:
        return [(f.label, f.upper) for f in self.functionals]

    def violations(self, x) -> list[str]:
        out = []
        for e in self.equalities:
            if e(x) != 0:
                out.append(f"equality {e.label} fails")
        for f in self.functionals:
            v = f(x)
            if v.denominator != 1 or v < 0 or (f.upper is not None and v > f.upper):
                out.append(f"{f.label} = {v}")
        for c in self.congruences:
            if not c.holds(x):
                out.append(f"congruence {c.label} fails")
        return out

    def satisfied(self, x) -> bool:
        return not self.violations(x)

    def export(self) -> str:
        """Plain-text form for external lattice-point solvers."""
        lines = [
            "# helpcore constraint system",
            f"group {self.group_name}",
            f"order {self.order}",
            "variables " + " ".join(self.variables),
            "# equality: coefficients | constant   (sum = 0)",
        ]
        for e in self.equalities:
            lines.append("eq " + " ".join(_q(c) for c in e.coeffs) + " | " + _q(e.const) + f"  # {e.label}")
        lines.append("# functional: coefficients | constant | upper   (value integral, 0 <= value <= upper)")
        for f in self.functionals:
            up = "-" if f.upper is None else _q(f.upper)
            lines.append("int " + " ".join(_q(c) for c in f.coeffs) + f" | {_q(f.const)} | {up}  # {f.label}")
        lines.append("# congruence: coefficients | constant | modulus   (sum = 0 mod modulus)")
        for c in self.congruences:
            lines.append("mod " + " ".join(str(a) for a in c.coeffs) + f" | {c.const} | {c.modulus}  # {c.label}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# multiplicities


def _power_value(row, vec) -> CycNum:
    return char_value(row, vec)


def _check_brauer(ref, n):
    if isinstance(ref, CharRef) and ref.prime is not None and n % ref.prime == 0:
        raise BrauerOrderClash(f"{ref.prime}-Brauer characters do not apply to units of order {n}")


def _constant_terms(table, row, n, powers) -> list[Fraction]:
    """Contribution of the divisors d > 1 for every l (times n)."""
    const = [Fraction(0)] * n
    deg = row[table.identity_class]
    d1 = deg.as_rational()
    for d in divisors(n)[1:]:
        if d == n:
            for ell in range(n):
                const[ell] += d1
            continue
        value = _power_value(row, powers[d])
        tr = trace_row(value, n // d)
        for ell in range(n):
            const[ell] += tr[ell % (n // d)]
    return const


def _powers_of(dist: Distribution) -> dict[int, tuple[int, ...]]:
    return {d: v for d, v in dist.eps if d > 1}


def multiplicities(table: CharacterTable, ref, dist: Distribution) -> list[Fraction]:
    """mu(zeta_n^l, u, chi) for l = 0..n-1 on a concrete distribution."""
    n = dist.order
    _check_brauer(ref, n)
    row = character_row(table, ref)
    const = _constant_terms(table, row, n, _powers_of(dist))
    top = trace_row(_power_value(row, dist.top), n)
    return [(const[ell] + top[ell]) / n for ell in range(n)]


def multiplicity(table: CharacterTable, ref, dist: Distribution, ell: int) -> Fraction:
    return multiplicities(table, ref, dist)[ell % dist.order]


def _functionals(table, ref, n, var_classes, powers) -> list[AffineFunctional]:
    _check_brauer(ref, n)
    row = character_row(table, ref)
    if isinstance(ref, int):
        ref = CharRef(ref)
    const = _constant_terms(table, row, n, powers)
    rows = [trace_row(row[c], n) for c in var_classes]
    deg = row[table.identity_class].as_rational()
    return [
        AffineFunctional(
            tuple(r[ell] / n for r in rows),
            const[ell] / n,
            f"{ref.label()} l={ell}",
            deg,
        )
        for ell in range(n)
    ]


def _augmentation(nvars: int) -> AffineFunctional:
    return AffineFunctional(tuple([Fraction(1)] * nvars), Fraction(-1), "augmentation")


def congruence_constraints(table: CharacterTable, n: int, powers: dict[int, tuple[int, ...]], var_classes=None):
    """For p^j | n and each class D: sum_{C^(p^j) = D} eps_C(u) = eps_D(u^(p^j)) mod p."""
    if var_classes is None:
        var_classes = admissible_classes(table, n)
    out = []
    for p, e in factorize(n):
        for j in range(1, e + 1):
            q = p**j
            images = [power_class(table, c, q) for c in var_classes]
            if q == n:
                rhs = [0] * table.nclasses
                rhs[table.identity_class] = 1
            else:
                rhs = powers[q]
            targets = sorted(set(images) | {D for D, x in enumerate(rhs) if x % p})
            for D in targets:
                coeffs = tuple(1 if im == D else 0 for im in images)
                const = -rhs[D]
                if not any(coeffs) and const % p == 0:
                    continue
                out.append(Congruence(coeffs, const, p, f"p^j={q} D={table.classes[D].name}"))
    return out


def _normalize_powers(n, powers):
    if isinstance(powers, Distribution):
        return _powers_of(powers)
    want = [d for d in divisors(n) if 1 < d < n]
    powers = dict(powers or {})
    missing = [d for d in want if d not in powers]
    if missing:
        raise ValueError(f"missing power vectors for divisors {missing}")
    return powers


def build_system(
    table: CharacterTable,
    n: int,
    powers=None,
    characters=None,
    congruences: bool = True,
) -> ConstraintSystem:
    """HeLP system for the partial augmentations of u, the powers u^d (1 < d < n) fixed.

    `powers` maps each such d to the class vector of u^d (or is a Distribution
    whose top vector is ignored).  `characters` defaults to all ordinary and all
    p-Brauer irreducibles with p not dividing n.
    """
    powers = _normalize_powers(n, powers)
    var_classes = admissible_classes(table, n)
    if characters is None:
        characters = default_characters(table, n)
    system = ConstraintSystem(
        table.group_name, n, tuple(table.class_names(var_classes)), var_classes, [_augmentation(len(var_classes))]
    )
    for ref in characters:
        system.functionals += _functionals(table, ref, n, var_classes, powers)
    if congruences:
        system.congruences = congruence_constraints(table, n, powers, var_classes)
    return system


# ---------------------------------------------------------------------------
# non-cyclic variation


def build_noncyclic_system(
    table: CharacterTable,
    U: CharacterTable,
    variables,
    assignment,
    characters=None,
) -> ConstraintSystem:
    """Constraints from a finite subgroup U of units.

    `assignment[K]` gives, for each non-identity class K of U, the partial
    augmentations of its elements as one affine form per class of G: a pair
    (coefficients over `variables`, constant).  For each chi of G and each
    irreducible xi of U, (1/|U|) sum_{v in U} chi(v) conj(xi(v)) must be a
    non-negative integer.  Coefficients are projected to their rational part,
    which is exact whenever the assignment is closed under Galois conjugation.
    """
    nvars = len(variables)
    if characters is None:
        characters = [CharRef(i) for i in range(len(table.irreducibles))]
    system = ConstraintSystem(table.group_name, U.exponent, tuple(variables), None)
    one = U.identity_class
    for ref in characters:
        if isinstance(ref, int):
            ref = CharRef(ref)
        row = character_row(table, ref)
        deg = row[table.identity_class]
        # chi(v) for each class of U as affine forms with CycNum coefficients
        images = {}
        for K in range(U.nclasses):
            if K == one:
                continue
            coeffs = [CycNum.rational(0)] * nvars
            const = CycNum.rational(0)
            for D, (a, b) in enumerate(assignment[K]):
                if not any(a) and not b:
                    continue
                v = row[D]
                if v is None:
                    raise BrauerOrderClash("Brauer character evaluated on a p-singular class")
                for i, ai in enumerate(a):
                    if ai:
                        coeffs[i] = coeffs[i] + v * ai
                if b:
                    const = const + v * b
            images[K] = (coeffs, const)
        for x, xi in enumerate(U.irreducibles):
            coeffs = [CycNum.rational(0)] * nvars
            const = deg * xi[one].conj()
            for K, (ca, cb) in images.items():
                w = xi[K].conj() * U.classes[K].size
                for i in range(nvars):
                    if ca[i]:
                        coeffs[i] = coeffs[i] + ca[i] * w
                const = const + cb * w
            system.functionals.append(
                AffineFunctional(
                    tuple(_rational_part(c) / U.group_order for c in coeffs),
                    _rational_part(const) / U.group_order,
                    f"{ref.label()} xi{x + 1}",
                    deg.as_rational(),
                )
            )
    return system


def cyclic_assignment(table: CharacterTable, n: int, powers):
    """Variables and assignment realising a cyclic U = <u> of order n.

    Class i of `abelian_table(n)` is u^i; with d = gcd(i, n) and i = d j, the
    element u^i gets the Galois image under j of the vector of u^d.
    """
    powers = _normalize_powers(n, powers)
    var_classes = admissible_classes(table, n)
    nv = len(var_classes)
    assignment = {}
    for i in range(1, n):
        d = gcd(i, n)
        j = i // d
        forms = [([0] * nv, 0) for _ in range(table.nclasses)]
        if d == 1:
            for pos, C in enumerate(var_classes):
                D = power_class(table, C, j)
                forms[D][0][pos] += 1
        else:
            for C, x in enumerate(powers[d]):
                if x:
                    D = power_class(table, C, j)
                    a, b = forms[D]
                    forms[D] = (a, b + x)
        assignment[i] = [(tuple(a), b) for a, b in forms]
    return tuple(table.class_names(var_classes)), assignment


# ---------------------------------------------------------------------------
# extended coefficients


def coefficient_conductor(m: int, n: int) -> int:
    """g with Z[zeta_g] = Z[zeta_m] and Z[zeta_n] intersected, g not 2 mod 4."""
    g = gcd(m, n)
    if g % 4 == 2:
        g //= 2
    return g


def build_extended_system(
    table: CharacterTable,
    n: int,
    m: int,
    powers=None,
    characters=None,
) -> ConstraintSystem:
    """HeLP system with partial augmentations of u in the integers of Q(zeta_m).

    eps_C(u) = sum_j alpha_{C,j} zeta_g^j over the power basis of Z[zeta_g]
    (g from `coefficient_conductor`), with integer unknowns alpha_{C,j}.  The
    augmentation becomes sum_C alpha_{C,0} = 1 and sum_C alpha_{C,j} = 0 for
    j > 0.  The powers u^d (d > 1) keep rational partial augmentations.
    Congruences are not generated for this variant.
    """
    powers = _normalize_powers(n, powers)
    g = coefficient_conductor(m, n)
    basis = range(totient(g))
    var_classes = admissible_classes(table, n)
    names = []
    for c in var_classes:
        for j in basis:
            nm = table.classes[c].name
            names.append(nm if g == 1 else (nm if j == 0 else f"{nm}*z{g}^{j}"))
    if characters is None:
        characters = default_characters(table, n)
    nb = len(basis)
    equalities = []
    for j in basis:
        coeffs = tuple(Fraction(1) if k % nb == j else Fraction(0) for k in range(len(names)))
        equalities.append(AffineFunctional(coeffs, Fraction(-1 if j == 0 else 0), "augmentation" if j == 0 else f"augmentation z{g}^{j}"))
    system = ConstraintSystem(table.group_name, n, tuple(names), None, equalities)
    step = n // g
    for ref in characters:
        _check_brauer(ref, n)
        row = character_row(table, ref)
        if isinstance(ref, int):
            ref = CharRef(ref)
        const = _constant_terms(table, row, n, powers)
        rows = [trace_row(row[c], n) for c in var_classes]
        deg = row[table.identity_class].as_rational()
        for ell in range(n):
            coeffs = tuple(r[(ell - j * step) % n] / n for r in rows for j in basis)
            system.functionals.append(AffineFunctional(coeffs, const[ell] / n, f"{ref.label()} l={ell}", deg))
    return system
