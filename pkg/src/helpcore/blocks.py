"""Defect-1 block inequalities as a filter on HeLP solutions.

A p-block of defect 1 with Brauer tree read from a leaf chi_1 gives, for a
unit u of order p*m with p odd and p not dividing m, every m-th root of unity
xi and a primitive p-th root of unity zeta,

    0 <= mu(xi, chi_1) + d_{e+1} mu(xi*zeta, chi_{e+1})
              + t * sum_{i=1..e} d_i mu(xi*zeta, chi_i),

where d_i are the alternating tree signs (d_1 = 1), chi_{e+1} is the sum of
the t exceptional characters (or the designated character, t = 1, when the
tree has no exceptional vertex) and chi_1..chi_e are the non-exceptional ones.

Roots of unity are given by exponents: xi = zeta_m^k and zeta = zeta_p^j,
so xi lies at position k*p and xi*zeta at k*p + j*m among the eigenvalue
positions l of zeta_n^l.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction

from .constraints import CharRef, multiplicities
from .ctbl import BlockData, CharacterTable
from .units import Distribution

__all__ = [
    "BlockInequalityInstance",
    "BlockPrimeClash",
    "OrderMismatch",
    "applicable",
    "block_filter",
    "block_inequality",
    "block_post_filter",
    "evaluate_block",
]

log = logging.getLogger(__name__)


class OrderMismatch(ValueError):
    """The unit order is not p*m with p the block prime and p not dividing m."""


class BlockPrimeClash(ValueError):
    """The block's prime cannot be used (p = 2, or the leaf sign is not +1)."""


@dataclass(frozen=True)
class BlockInequalityInstance:
    block: BlockData
    order: int
    xi: int  # xi = zeta_m^xi
    zeta: int  # zeta = zeta_p^zeta
    value: Fraction

    @property
    def m(self) -> int:
        return self.order // self.block.prime

    def describe(self) -> str:
        p, m = self.block.prime, self.m
        xi = "1" if self.xi == 0 else f"z{m}^{self.xi}"
        return f"{self.block.label or f'{p}-block'}: xi={xi}, zeta=z{p}^{self.zeta}, value {self.value}"


def applicable(block: BlockData, n: int) -> bool:
    p = block.prime
    return p != 2 and n % p == 0 and (n // p) % p != 0


def _check(block: BlockData, n: int) -> int:
    p = block.prime
    if p == 2:
        raise BlockPrimeClash("the block inequality is only available for odd primes")
    if not block.signs or block.signs[0] != 1:
        raise BlockPrimeClash("the tree must be read from a leaf with sign +1")
    if n % p or (n // p) % p == 0:
        raise OrderMismatch(f"unit order {n} is not {p}*m with {p} not dividing m")
    return n // p


class _Mu:
    """Cached multiplicity lists for one distribution."""

    def __init__(self, table, dist):
        self.table = table
        self.dist = dist
        self.cache: dict[int, list[Fraction]] = {}

    def __call__(self, chi: int) -> list[Fraction]:
        if chi not in self.cache:
            self.cache[chi] = multiplicities(self.table, CharRef(chi), self.dist)
        return self.cache[chi]


def _value(block: BlockData, mu: _Mu, n: int, m: int, xi: int, zeta: int) -> Fraction:
    p = block.prime
    at_xi = (xi * p) % n
    at_xizeta = (xi * p + zeta * m) % n
    value = mu(block.characters[0])[at_xi]
    value += block.exceptional_sign * sum(mu(c)[at_xizeta] for c in block.exceptional)
    value += block.multiplicity * sum(s * mu(c)[at_xizeta] for c, s in zip(block.characters, block.signs))
    return value


def block_inequality(table: CharacterTable, block: BlockData, dist: Distribution, xi: int, zeta: int = 1) -> Fraction:
    """Right-hand side of the block inequality; negative means u cannot exist."""
    n = dist.order
    m = _check(block, n)
    if zeta % block.prime == 0:
        raise ValueError("zeta must be a primitive p-th root of unity")
    return _value(block, _Mu(table, dist), n, m, xi % m, zeta % block.prime)


def evaluate_block(table: CharacterTable, block: BlockData, dist: Distribution) -> list[BlockInequalityInstance]:
    """All (xi, zeta) instances for one distribution."""
    n = dist.order
    m = _check(block, n)
    mu = _Mu(table, dist)
    return [
        BlockInequalityInstance(block, n, k, j, _value(block, mu, n, m, k, j))
        for k in range(m)
        for j in range(1, block.prime)
    ]


def block_filter(table: CharacterTable, blocks, solutions):
    """Drop every distribution violating some block inequality.

    Returns a copy of `solutions`; each removal is appended to `removed` as
    (distribution, witness text).  Blocks that do not apply to the order are
    skipped.
    """
    n = solutions.order
    usable = []
    for b in blocks:
        if applicable(b, n):
            usable.append(b)
        else:
            log.debug("order %d: block %s not applicable", n, b.label or b.prime)
    kept, removed = [], list(getattr(solutions, "removed", []))
    for dist in solutions.solutions:
        witness = None
        mu = _Mu(table, dist)
        for b in usable:
            m = n // b.prime
            for k in range(m):
                for j in range(1, b.prime):
                    v = _value(b, mu, n, m, k, j)
                    if v < 0:
                        witness = BlockInequalityInstance(b, n, k, j, v)
                        break
                if witness:
                    break
            if witness:
                break
        if witness is None:
            kept.append(dist)
        else:
            removed.append((dist, f"block inequality, {witness.describe()}"))
    return replace(solutions, solutions=kept, removed=removed)


def block_post_filter(table: CharacterTable, solutions):
    """Post-filter hook for solver.verify_zc using the table's own blocks."""
    return block_filter(table, table.blocks, solutions)
