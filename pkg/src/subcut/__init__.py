"""subcut: expressibility of Boolean submodular cost functions by binary ones,
quadratic gadget compilation, and exact minimisation via s-t min-cut."""

from .rational import INF, Cost, Infinity
from .pb_core import CostTable, PseudoBooleanFunction

__all__ = ["INF", "Cost", "Infinity", "CostTable", "PseudoBooleanFunction"]

__version__ = "0.1.0"
