"""Exact HeLP computations for torsion units in integral group rings."""

from .cyclo import CycNum, zeta
from .ctbl import CharacterTable, load_table, parse_table
from .units import Distribution, Status, Verdict

__version__ = "0.1.0"

__all__ = [
    "CharacterTable",
    "CycNum",
    "Distribution",
    "Status",
    "Verdict",
    "load_table",
    "parse_table",
    "zeta",
]
