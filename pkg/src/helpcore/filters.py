"""Post-solver filters: p-part conjugacy and the (KP) classification.

If the p-part of a unit u is conjugate (over the p-adic integers) to a group
element h, then every class C with eps_C(u) != 0 has p-part conjugate to h.
The hypothesis is supplied by the caller together with its justification;
nothing here verifies the group-theoretic premises.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .ctbl import CharacterTable, p_part_class
from .units import Distribution, kp_check

__all__ = [
    "Justification",
    "PadicHypothesis",
    "kp_classify",
    "padic_compatible",
    "padic_filter",
    "padic_post_filter",
]


class Justification(Enum):
    # u maps to 1 modulo a normal p-subgroup, whence its p-part is conjugate to a group element
    NORMAL_P_SUBGROUP_KERNEL = "normal-p-subgroup-kernel"
    USER_ASSERTED = "user-asserted"


@dataclass(frozen=True)
class PadicHypothesis:
    """The p-part of u is p-adically conjugate to an element of one anchor class.

    `anchors` None means "to some group element", i.e. any class.  With several
    anchors a distribution survives if it is compatible with at least one of
    them.  `orders` restricts the hypothesis to the listed unit orders.
    """

    prime: int
    anchors: tuple[int, ...] | None = None
    justification: Justification = Justification.USER_ASSERTED
    orders: tuple[int, ...] | None = None

    def check(self, table: CharacterTable) -> None:
        for h in self.anchors or ():
            o = table.classes[h].order
            while o % self.prime == 0:
                o //= self.prime
            if o != 1:
                raise ValueError(f"anchor {table.classes[h].name} is not a {self.prime}-element")

    def applies(self, n: int) -> bool:
        if n % self.prime:
            return False  # the p-part is trivial
        return self.orders is None or n in self.orders

    def describe(self, table: CharacterTable) -> str:
        where = "some class" if self.anchors is None else "/".join(table.class_names(self.anchors))
        return f"{self.prime}-part conjugate to {where} ({self.justification.value})"


def padic_compatible(table: CharacterTable, hyp: PadicHypothesis, dist: Distribution) -> bool:
    parts = {p_part_class(table, c, hyp.prime) for c, x in enumerate(dist.top) if x}
    if len(parts) > 1:
        return False
    return hyp.anchors is None or not parts or parts <= set(hyp.anchors)


def padic_filter(table: CharacterTable, hyp: PadicHypothesis, solutions):
    """Remove distributions whose support has p-parts incompatible with every anchor."""
    hyp.check(table)
    if not hyp.applies(solutions.order):
        return solutions
    kept, removed = [], list(solutions.removed)
    for dist in solutions.solutions:
        if padic_compatible(table, hyp, dist):
            kept.append(dist)
        else:
            removed.append((dist, f"p-adic filter: {hyp.describe(table)}"))
    return replace(solutions, solutions=kept, removed=removed)


def padic_post_filter(*hyps: PadicHypothesis):
    """Post-filter hook for solver.verify_zc applying the given hypotheses in turn."""

    def run(table, solutions):
        for h in hyps:
            solutions = padic_filter(table, h, solutions)
        return solutions

    return run


def kp_classify(table: CharacterTable, solutions) -> dict[Distribution, bool]:
    """(KP) verdict for every distribution; nothing is removed."""
    return {d: kp_check(table, d) for d in solutions}
