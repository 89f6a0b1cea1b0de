"""Exact enumeration of the integer points of a HeLP system.

The augmentation equalities are removed by substituting unit pivots, so the
free variables stay integral.  Every functional f = (A.y + B)/D then carries
two requirements: A.y + B >= 0 (Chvatal-Gomory rounded to an integer
inequality) and A.y + B = 0 mod D.  Congruences only contribute the second.

Bounds come from a Fourier-Motzkin chain: P_k is the full inequality set over
y_1..y_k, and P_{j-1} is obtained from P_j by eliminating y_j (Chernikov's
ancestor rule keeps this irredundant enough).  A depth-first search then
fixes y_1, y_2, ... reading the admissible interval of y_j off P_j, and prunes
by residues: once y_1..y_j are fixed, A_1 y_1 + ... + A_j y_j + B must vanish
modulo gcd(D, A_{j+1}, ..., A_k).  Leaves are re-checked against the original
system in exact arithmetic.

When a projection outgrows the cap, each level's interval is instead found by
an exact rational simplex over the remaining variables (slower per node, but
immune to the intermediate growth of the elimination).
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .constraints import ConstraintSystem, build_system
from .ctbl import CharacterTable
from .cyclo import divisors, primes_dividing
from .units import Distribution, Status, Verdict, admissible_classes, classify

log = logging.getLogger(__name__)

__all__ = [
    "ExtendedSolution",
    "ProjectionTooLarge",
    "SolutionSet",
    "SolverOptions",
    "Unbounded",
    "derive_bounds",
    "enumerate_points",
    "orders_to_check",
    "solve_extended",
    "solve_order",
    "verify_zc",
]


class Unbounded(RuntimeError):
    """The selected characters do not bound the partial augmentations."""


class ProjectionTooLarge(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# reduction to free variables


def _as_int_row(coeffs, const) -> tuple[tuple[int, ...], int, int]:
    """(A, B, D) with coeffs.y + const = (A.y + B)/D, D > 0, gcd(A, B, D) = 1."""
    den = 1
    for c in (*coeffs, const):
        den = lcm(den, Fraction(c).denominator)
    A = [int(Fraction(c) * den) for c in coeffs]
    B = int(Fraction(const) * den)
    g = gcd(*A, B, den)
    return tuple(a // g for a in A), B // g, den // g


@dataclass
class _Reduced:
    nvars: int  # free variables
    free: tuple[int, ...]  # original index of each free variable
    forms: list[tuple[tuple[int, ...], int]]  # original x_i = forms[i][0].y + forms[i][1]
    inequalities: list[tuple[tuple[int, ...], int]]  # A.y >= r
    residues: list[tuple[tuple[int, ...], int, int]]  # A.y + B = 0 mod D
    infeasible: bool = False


def _compose(coeffs, const, forms, k):
    out = [Fraction(0)] * k
    c0 = Fraction(const)
    for a, (row, b) in zip(coeffs, forms):
        if a:
            for j, r in enumerate(row):
                if r:
                    out[j] += a * r
            c0 += a * b
    return out, c0


def _reduce(system: ConstraintSystem, order: list[int] | None = None) -> _Reduced:
    nx = len(system.variables)
    # forms over the original variables, then pivots are removed
    forms = [([Fraction(int(i == j)) for j in range(nx)], Fraction(0)) for i in range(nx)]
    pivots = []
    for eq in system.equalities:
        coeffs, const = _compose(eq.coeffs, eq.const, forms, nx)
        cands = [j for j in range(nx) if abs(coeffs[j]) == 1 and j not in pivots]
        if order is not None:
            cands.sort(key=order.index)
        if not cands:
            if any(coeffs):
                raise ValueError(f"equality {eq.label} has no unit pivot")
            if const:
                return _Reduced(0, (), [], [], [], infeasible=True)
            continue
        p = cands[-1]
        s = coeffs[p]
        # x_p = -(const + sum_{j != p} coeffs_j x_j) / s
        sub = [-c / s if j != p else Fraction(0) for j, c in enumerate(coeffs)]
        subc = -const / s
        new = []
        for row, b in forms:
            a = row[p]
            if a:
                row = [r + a * t for r, t in zip(row, sub)]
                row[p] = Fraction(0)
                b = b + a * subc
            new.append((row, b))
        forms = new
        pivots.append(p)
    free = [j for j in range(nx) if j not in pivots]
    if order is not None:
        free.sort(key=order.index)
    k = len(free)
    iforms = []
    for row, b in forms:
        r = tuple(row[j] for j in free)
        if any(x.denominator != 1 for x in r) or b.denominator != 1:
            raise ValueError("pivot substitution left fractional coefficients")
        iforms.append((tuple(int(x) for x in r), int(b)))

    ineqs: dict[tuple[int, ...], int] = {}
    residues = set()
    infeasible = False
    fforms = [(tuple(Fraction(x) for x in r), Fraction(b)) for r, b in iforms]
    for f in system.functionals:
        coeffs, const = _compose(f.coeffs, f.const, fforms, k)
        A, B, D = _as_int_row(coeffs, const)
        if D > 1:
            residues.add((A, B, D))
        if not _add_ineq(ineqs, A, -B):
            infeasible = True
    for c in system.congruences:
        coeffs, const = _compose(c.coeffs, c.const, fforms, k)
        A = tuple(int(x) for x in coeffs)
        B = int(const)
        g = gcd(*A, B, c.modulus)
        if c.modulus // g > 1:
            residues.add((tuple(a // g for a in A), B // g, c.modulus // g))
    return _Reduced(
        k,
        tuple(free),
        iforms,
        sorted(ineqs.items()),
        sorted(residues),
        infeasible,
    )


def _add_ineq(store: dict, A, r) -> bool:
    """Insert A.y >= r after rounding; False if it is a violated constant."""
    g = gcd(*A)
    if g == 0:
        return r <= 0
    A = tuple(a // g for a in A)
    r = -((-r) // g)  # ceil
    if store.get(A, r - 1) < r:
        store[A] = r
    return True


# ---------------------------------------------------------------------------
# Fourier-Motzkin chain


def _eliminate(rows, j, depth, cap):
    """Eliminate variable j from rows [(A, r, ancestors)]."""
    zero, pos, neg = [], [], []
    for row in rows:
        a = row[0][j]
        (pos if a > 0 else neg if a < 0 else zero).append(row)
    if len(pos) * len(neg) > cap * 50:
        raise ProjectionTooLarge(f"{len(pos)} x {len(neg)} combinations")
    store: dict[tuple[int, ...], tuple[int, frozenset]] = {}
    for A, r, anc in zero:
        _keep(store, A, r, anc)
    for Ap, rp, ap in pos:
        cp = Ap[j]
        for An, rn, an in neg:
            anc = ap | an
            if len(anc) > depth + 1:
                continue
            cn = -An[j]
            A = tuple(cn * x + cp * y for x, y in zip(Ap, An))
            r = cn * rp + cp * rn
            g = gcd(*A)
            if g == 0:
                if r > 0:
                    return None
                continue
            A = tuple(a // g for a in A)
            _keep(store, A, -((-r) // g), anc)
        if len(store) > cap:
            raise ProjectionTooLarge(f"more than {cap} inequalities")
    return [(A, r, anc) for A, (r, anc) in store.items()]


def _keep(store, A, r, anc):
    old = store.get(A)
    if old is None or old[0] < r or (old[0] == r and len(anc) < len(old[1])):
        store[A] = (r, anc)


@dataclass
class _Chain:
    levels: list[list[tuple[tuple[int, ...], int]]]  # level j: rows of P_{j+1} involving y_j
    infeasible: bool = False


def _fm_chain(red: _Reduced, cap: int) -> _Chain:
    k = red.nvars
    rows = [(A, r, frozenset([i])) for i, (A, r) in enumerate(red.inequalities)]
    levels: list[list] = [None] * k  # type: ignore[list-item]
    for j in range(k - 1, -1, -1):
        levels[j] = [(A, r) for A, r, _ in rows if A[j]]
        if j == 0:
            break
        out = _eliminate(rows, j, k - j, cap)
        if out is None:
            return _Chain(levels, infeasible=True)
        rows = out
    for j, lv in enumerate(levels):
        if not any(A[j] > 0 for A, _ in lv) or not any(A[j] < 0 for A, _ in lv):
            raise Unbounded(f"variable {j + 1} of {k} has no finite bound")
    if k and any(not any(A) and r > 0 for A, r, _ in rows):
        return _Chain(levels, infeasible=True)
    return _Chain(levels)


# ---------------------------------------------------------------------------
# exact linear programming (fallback when the projection grows too large)


def _simplex(M, c, d):
    """min d.w subject to M w = c, w >= 0, in exact arithmetic (Bland's rule).

    Returns ("optimal", value), ("infeasible", None) or ("unbounded", None).
    """
    q, m = len(M), len(d)
    rows = []
    for i in range(q):
        row = [Fraction(x) for x in M[i]] + [Fraction(int(t == i)) for t in range(q)] + [Fraction(c[i])]
        if row[-1] < 0:
            row = [-x for x in row[:m]] + row[m:-1] + [-row[-1]]
        rows.append(row)
    basis = [m + i for i in range(q)]
    width = m + q

    def run(cost, allowed):
        # reduced-cost row: cost - c_B B^-1 A, last entry -objective
        z = list(cost) + [Fraction(0)]
        for i, b in enumerate(basis):
            if z[b]:
                f = z[b]
                z = [u - f * v for u, v in zip(z, rows[i])]
        while True:
            enter = next((j for j in range(allowed) if z[j] < 0), None)
            if enter is None:
                return "optimal", -z[-1]
            best = None
            for i, row in enumerate(rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded", None
            i = best[1]
            piv = rows[i][enter]
            rows[i] = [v / piv for v in rows[i]]
            for t in range(len(rows)):
                if t != i and rows[t][enter]:
                    f = rows[t][enter]
                    rows[t] = [u - f * v for u, v in zip(rows[t], rows[i])]
            if z[enter]:
                f = z[enter]
                z = [u - f * v for u, v in zip(z, rows[i])]
            basis[i] = enter

    phase1 = [Fraction(0)] * m + [Fraction(1)] * q
    _, val = run(phase1, width)
    if val > 0:
        return "infeasible", None
    # drive remaining artificial variables out of the basis
    i = 0
    while i < len(rows):
        if basis[i] >= m:
            j = next((j for j in range(m) if rows[i][j]), None)
            if j is None:
                del rows[i], basis[i]
                continue
            piv = rows[i][j]
            rows[i] = [v / piv for v in rows[i]]
            for t in range(len(rows)):
                if t != i and rows[t][j]:
                    f = rows[t][j]
                    rows[t] = [u - f * v for u, v in zip(rows[t], rows[i])]
            basis[i] = j
        i += 1
    return run([Fraction(x) for x in d] + [Fraction(0)] * q, m)


def _lp_range(rows, j, prefix, k):
    """Real interval of y_j over {A.y >= r} with y_0..y_{j-1} = prefix; None if empty.

    Solved through the dual: max/min y_j = min h.w over G^T w = +-e_j, w >= 0,
    where G y <= h is the system with the prefix substituted.
    """
    G, h = [], []
    for A, r in rows:
        rest = r - sum(a * v for a, v in zip(A[:j], prefix))
        if not any(A[j:]):
            if rest > 0:
                return None
            continue
        G.append([-a for a in A[j:]])
        h.append(-rest)
    q = k - j
    if not G:
        raise Unbounded(f"variable {j + 1} unbounded")
    Mt = [[G[i][t] for i in range(len(G))] for t in range(q)]
    out = []
    for sign in (1, -1):
        c = [sign if t == 0 else 0 for t in range(q)]
        status, val = _simplex(Mt, c, h)
        if status == "unbounded":
            return None  # dual unbounded: the primal is infeasible
        if status == "infeasible":
            status0, _ = _simplex(Mt, [0] * q, h)
            if status0 == "unbounded":
                return None
            raise Unbounded(f"variable {j + 1} of {k} has no finite bound")
        out.append(val if sign == 1 else -val)
    hi, lo = out
    return lo, hi


# ---------------------------------------------------------------------------
# public API


def derive_bounds(system: ConstraintSystem, cap: int = 20000) -> list[tuple[int, int] | None]:
    """Integer interval of every variable from the projected inequalities.

    Each interval is valid for all integer solutions; None means the system has
    no solution at all.  Raises Unbounded if some variable has no finite bound.
    """
    nx = len(system.variables)
    out: list[tuple[int, int] | None] = []
    for i in range(nx):
        # x_i first in the elimination order, pivot on one of the others
        red = _reduce(system, order=[i] + [j for j in range(nx) if j != i])
        if red.infeasible:
            out.append(None)
            continue
        if not red.free or red.free[0] != i:
            row, b = red.forms[i]
            if any(row):
                raise Unbounded(f"cannot isolate {system.variables[i]}")
            out.append((b, b))
            continue
        try:
            chain = _fm_chain(red, cap)
        except ProjectionTooLarge:
            rng = _lp_range(red.inequalities, 0, (), red.nvars)
            if rng is None:
                out.append(None)
            else:
                lo, hi = -((-rng[0].numerator) // rng[0].denominator), rng[1].numerator // rng[1].denominator
                out.append(None if lo > hi else (lo, hi))
            continue
        if chain.infeasible:
            out.append(None)
            continue
        lo, hi = _interval(chain.levels[0], 0, ())
        out.append(None if lo > hi else (lo, hi))
    return out


def _interval(rows, j, prefix):
    lo = hi = None
    for A, r in rows:
        rest = r - sum(a * v for a, v in zip(A[:j], prefix))
        a = A[j]
        if a > 0:
            v = -((-rest) // a)
            if lo is None or v > lo:
                lo = v
        else:
            v = (-rest) // (-a)
            if hi is None or v < hi:
                hi = v
    if lo is None or hi is None:
        raise Unbounded(f"variable {j + 1} unbounded")
    return lo, hi


@dataclass
class EnumerationStats:
    nodes: int = 0
    leaves: int = 0
    inequalities: int = 0
    residues: int = 0
    lp: bool = False  # levels bounded by linear programming instead of projection


def enumerate_points(system: ConstraintSystem, cap: int = 20000, stats: EnumerationStats | None = None) -> list[tuple[int, ...]]:
    """All integer points of the system, in lexicographic order of the variables."""
    red = _reduce(system)
    if red.infeasible:
        return []
    k = red.nvars
    if stats is not None:
        stats.inequalities = len(red.inequalities)
        stats.residues = len(red.residues)

    def point(y):
        return tuple(sum(a * v for a, v in zip(row, y)) + b for row, b in red.forms)

    if k == 0:
        x = point(())
        return [x] if system.satisfied(x) else []
    try:
        chain = _fm_chain(red, cap)
        if chain.infeasible:
            return []

        def interval(j):
            return _interval(chain.levels[j], j, y)

    except ProjectionTooLarge as exc:
        log.info("projection too large (%s); bounding each level by exact LP", exc)
        if stats is not None:
            stats.lp = True

        def interval(j):
            rng = _lp_range(red.inequalities, j, y[:j], k)
            if rng is None:
                return 1, 0
            lo, hi = rng
            return -((-lo.numerator) // lo.denominator), hi.numerator // hi.denominator

    # residue checks that become decidable after fixing y_0..y_j
    checks: list[list[tuple[tuple[int, ...], int, int]]] = [[] for _ in range(k)]
    for A, B, D in red.residues:
        for j in range(k):
            g = gcd(D, *A[j + 1 :])
            if g > 1:
                checks[j].append((A[: j + 1], B, g))

    found = []
    y = [0] * k

    def dfs(j):
        if stats is not None:
            stats.nodes += 1
        lo, hi = interval(j)
        for v in range(lo, hi + 1):
            y[j] = v
            if any((sum(a * t for a, t in zip(A, y)) + B) % g for A, B, g in checks[j]):
                continue
            if j + 1 < k:
                dfs(j + 1)
            else:
                if stats is not None:
                    stats.leaves += 1
                x = point(y)
                if system.satisfied(x):
                    found.append(x)

    dfs(0)
    return sorted(set(found))


# ---------------------------------------------------------------------------
# per-order orchestration


@dataclass
class SolverOptions:
    congruences: bool = True
    brauer: bool = True
    characters: list | None = None  # explicit CharRef list overrides `brauer`
    cap: int = 20000


@dataclass
class SolutionSet:
    order: int
    solutions: list[Distribution] = field(default_factory=list)
    exhausted: bool = True
    systems: int = 0
    seconds: float = 0.0
    removed: list = field(default_factory=list)  # (Distribution, reason) from post-filters

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)


def _characters(table, n, options: SolverOptions):
    from .constraints import default_characters

    if options.characters is not None:
        return [c for c in options.characters if getattr(c, "prime", None) is None or n % c.prime]
    return default_characters(table, n, brauer=options.brauer)


def power_combinations(table: CharacterTable, n: int, cache: dict[int, SolutionSet]):
    """Coherent choices of distributions for u^p (p | n prime), as maps d -> vector."""
    primes = primes_dividing(n)
    choices = []
    for p in primes:
        m = n // p
        if m == 1:
            continue
        if m not in cache:
            raise KeyError(f"order {m} must be solved before order {n}")
        choices.append((p, cache[m].solutions))
    if not choices:
        yield {}
        return
    for combo in itertools.product(*[c for _, c in choices]):
        vectors: dict[int, tuple[int, ...]] = {}
        ok = True
        for (p, _), dist in zip(choices, combo):
            for d, vec in dist.eps:
                key = p * d
                old = vectors.get(key)
                if old is None:
                    vectors[key] = vec
                elif old != vec:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield vectors


def solve_order(
    table: CharacterTable,
    n: int,
    cache: dict[int, SolutionSet],
    options: SolverOptions | None = None,
) -> SolutionSet:
    """All HeLP distributions of order n built on the cached lower orders."""
    options = options or SolverOptions()
    t0 = time.perf_counter()
    out = SolutionSet(n)
    if not admissible_classes(table, n):
        out.seconds = time.perf_counter() - t0
        return out
    chars = _characters(table, n, options)
    var_classes = admissible_classes(table, n)
    seen = set()
    for powers in power_combinations(table, n, cache):
        system = build_system(table, n, powers, chars, congruences=options.congruences)
        out.systems += 1
        for x in enumerate_points(system, cap=options.cap):
            top = [0] * table.nclasses
            for c, v in zip(var_classes, x):
                top[c] = v
            vectors = dict(powers)
            vectors[1] = tuple(top)
            dist = Distribution.from_map(n, vectors)
            if dist not in seen:
                seen.add(dist)
                out.solutions.append(dist)
    out.solutions.sort(key=lambda d: _sort_key(table, d))
    out.seconds = time.perf_counter() - t0
    return out


@dataclass
class ExtendedSolution:
    powers: dict  # d -> rational class vector of u^d, d > 1
    variables: tuple[str, ...]
    values: tuple[int, ...]

    def nonrational(self) -> bool:
        """Some coefficient outside the rational basis element is nonzero."""
        return any(v for name, v in zip(self.variables, self.values) if "*z" in name)


def solve_extended(
    table: CharacterTable,
    n: int,
    m: int,
    cache: dict[int, SolutionSet] | None = None,
    options: SolverOptions | None = None,
) -> list[ExtendedSolution]:
    """Integer points of the extended-coefficient system over every coherent
    choice of (classically solved) powers of u."""
    from .constraints import build_extended_system

    options = options or SolverOptions()
    cache = {} if cache is None else cache
    for d in orders_to_check(table, [n]):
        if d != n and d not in cache:
            cache[d] = solve_order(table, d, cache, options)
    chars = _characters(table, n, options)
    out = []
    for powers in power_combinations(table, n, cache):
        system = build_extended_system(table, n, m, powers, chars)
        for x in enumerate_points(system, cap=options.cap):
            out.append(ExtendedSolution(dict(powers), system.variables, x))
    return out


def _sort_key(table, dist):
    return [tuple(v) for v in dist.to_nested(table)]


def orders_to_check(table: CharacterTable, orders=None) -> list[int]:
    """Requested orders plus every divisor needed to build them, ascending."""
    exp = table.exponent
    if orders is None:
        return [d for d in divisors(exp) if d > 1]
    need = set()
    for n in orders:
        if exp % n:
            raise ValueError(f"order {n} does not divide the exponent {exp}; no torsion unit of that order exists")
        need.update(d for d in divisors(n) if d > 1)
    return sorted(need)


def verify_zc(
    table: CharacterTable,
    orders=None,
    options: SolverOptions | None = None,
    post_filters=(),
    progress=None,
) -> list[Verdict]:
    """HeLP for every order (default: all divisors > 1 of the exponent).

    `post_filters` are callables (table, SolutionSet) -> SolutionSet that
    record what they drop in `removed`; they run before an order's survivors
    are cached for higher orders.
    """
    from .units import kp_check

    options = options or SolverOptions()
    cache: dict[int, SolutionSet] = {}
    verdicts = []
    for n in orders_to_check(table, orders):
        t0 = time.perf_counter()
        try:
            sols = solve_order(table, n, cache, options)
        except (Unbounded, ProjectionTooLarge) as exc:
            cache[n] = SolutionSet(n, exhausted=False)
            verdicts.append(Verdict(n, Status.ERROR, message=str(exc), seconds=time.perf_counter() - t0))
            log.warning("order %d: %s", n, exc)
            continue
        for filt in post_filters:
            sols = filt(table, sols)
        cache[n] = sols
        v = classify(n, sols.solutions, sols.removed)
        v.kp = {d: kp_check(table, d) for d in v.critical}
        v.seconds = time.perf_counter() - t0
        verdicts.append(v)
        if progress is not None:
            progress(v)
    return verdicts
