"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Every value is stored in the power basis 1, z, ..., z^(phi(n)-1) of Q(zeta_n),
which is an integral basis of Z[zeta_n]; reduction modulo the n-th cyclotomic
polynomial makes that representation canonical for a fixed conductor.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

__all__ = [
    "CycNum",
    "IncompatibleConductor",
    "NonCoprimeExponent",
    "as_rational",
    "cyclotomic_poly",
    "divisors",
    "embed",
    "factorize",
    "galois",
    "lcm",
    "mobius",
    "totient",
    "trace_to_Q",
    "zeta",
]


class NonCoprimeExponent(ValueError):
    pass


class IncompatibleConductor(ValueError):
    pass


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of n > 0 as ((p, e), ...), p ascending."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def primes_dividing(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return tuple(sorted(ds))


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    dq = len(den) - 1
    quot = [0] * (len(num) - dq)
    for k in range(len(num) - 1, dq - 1, -1):
        c = num[k]  # den is monic
        if c:
            quot[k - dq] = c
            for i, d in enumerate(den):
                num[k - dq + i] -= c * d
    if any(num[:dq]):
        raise ArithmeticError("non-exact polynomial division")
    return quot


def _reduce(n: int, raw: dict[int, Fraction]) -> tuple[Fraction, ...]:
    """Reduce sum raw[k] z_n^k to power-basis coordinates."""
    phi = totient(n)
    full = [Fraction(0)] * n
    for k, c in raw.items():
        full[k % n] += c
    cp = cyclotomic_poly(n)
    for k in range(n - 1, phi - 1, -1):
        c = full[k]
        if c:
            shift = k - phi
            for i, a in enumerate(cp):
                if a:
                    full[shift + i] -= c * a
    return tuple(full[:phi])


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class CycNum:
    """An element of Q(zeta_n) held in the power basis of its conductor n.

    The stored conductor need not be minimal.  Equality and hashing are
    independent of the conductor used for storage.
    """

    __slots__ = ("n", "coeffs", "_hash")

    def __init__(self, n: int, terms=None):
        if n < 1:
            raise ValueError("conductor must be positive")
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = dict(enumerate(terms))
        self.n = n
        self.coeffs = _reduce(n, {k: _as_fraction(v) for k, v in terms.items()})
        self._hash = None

    @classmethod
    def _raw(cls, n: int, coeffs: tuple[Fraction, ...]) -> CycNum:
        obj = cls.__new__(cls)
        obj.n = n
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q) -> CycNum:
        return cls._raw(1, (_as_fraction(q),))

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> CycNum:
        return cls(n, {k % n: 1})

    @classmethod
    def from_terms(cls, n: int, terms) -> CycNum:
        """Build from (numerator, denominator, exponent) triples."""
        raw: dict[int, Fraction] = {}
        for num, den, k in terms:
            if den == 0:
                raise ZeroDivisionError("zero denominator in CycNum term")
            raw[k % n] = raw.get(k % n, Fraction(0)) + Fraction(num, den)
        return cls(n, raw)

    def to_terms(self) -> list[list[int]]:
        return [[c.numerator, c.denominator, k] for k, c in enumerate(self.coeffs) if c]

    # -- conversions -------------------------------------------------------

    def embed(self, m: int) -> CycNum:
        if m % self.n:
            raise IncompatibleConductor(f"conductor {self.n} does not divide {m}")
        if m == self.n:
            return self
        s = m // self.n
        return CycNum(m, {k * s: c for k, c in enumerate(self.coeffs) if c})

    def as_rational(self) -> Fraction | None:
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # -- field operations ----------------------------------------------------

    def _common(self, other: CycNum) -> tuple[CycNum, CycNum]:
        if self.n == other.n:
            return self, other
        m = lcm(self.n, other.n)
        return self.embed(m), other.embed(m)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return CycNum._raw(a.n, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self.n, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycNum._raw(self.n, tuple(x * q for x in self.coeffs))
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        raw: dict[int, Fraction] = {}
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    raw[i + j] = raw.get(i + j, Fraction(0)) + x * y
        return CycNum(a.n, raw)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycNum._raw(self.n, tuple(x / q for x in self.coeffs))
        return NotImplemented

    def galois(self, j: int) -> CycNum:
        if gcd(j, self.n) != 1:
            raise NonCoprimeExponent(f"gcd({j}, {self.n}) != 1")
        if self.n <= 2:
            return self
        return CycNum(self.n, {(k * j) % self.n: c for k, c in enumerate(self.coeffs) if c})

    def conj(self) -> CycNum:
        return self.galois(-1)

    def trace(self, m: int | None = None) -> Fraction:
        """Trace from Q(zeta_m) to Q (m defaults to the stored conductor)."""
        n = self.n
        if m is None:
            m = n
        elif m % n:
            raise IncompatibleConductor(f"conductor {n} does not divide {m}")
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c:
                total += c * _monomial_trace(n, k)
        return total * (totient(m) // totient(n))

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            q = self.as_rational()
            if q is not None:
                self._hash = hash(q)
            else:
                phi = totient(self.n)
                self._hash = hash((self.trace() / phi, (self * self.conj()).trace() / phi))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycNum({self.n}, {self.to_terms()})"

    def __str__(self):
        q = self.as_rational()
        if q is not None:
            return str(q)
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else (f"z{self.n}" if k == 1 else f"z{self.n}^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@lru_cache(maxsize=None)
def _monomial_trace(n: int, k: int) -> int:
    """Tr_{Q(zeta_n)/Q}(zeta_n^k) = mu(o) phi(n) / phi(o), o the order of zeta_n^k."""
    o = n // gcd(n, k)
    return mobius(o) * (totient(n) // totient(o))


def _coerce(x) -> CycNum | None:
    if isinstance(x, CycNum):
        return x
    if isinstance(x, (int, Fraction)):
        return CycNum.rational(x)
    return None


def zeta(n: int, k: int = 1) -> CycNum:
    return CycNum.zeta(n, k)


def galois(a: CycNum, j: int) -> CycNum:
    return a.galois(j)


def trace_to_Q(a: CycNum, m: int | None = None) -> Fraction:
    return a.trace(m)


def embed(a: CycNum, m: int) -> CycNum:
    return a.embed(m)


def as_rational(a: CycNum) -> Fraction | None:
    return a.as_rational()
