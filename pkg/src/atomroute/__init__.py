"""Routing schedules and lower bounds for reconfigurable atom arrays.

Permutations map each site to the destination of the atom sitting there.  A
schedule is a list of steps of one movement model (riffle shuffles, in-order
swaps on a chain, rectangle swaps on a grid, or masked rectangle swaps) whose
composition is the permutation.
"""

from .core import (
    Coord, GridShape, InOrderSwap1D, InvalidStepError, MaskedRectSwap, Model,
    Permutation, Rectangle, RectSwap, RiffleShuffle, Schedule, apply_schedule,
    compose, identity, invert, random_permutation, reversal, validate_schedule,
    validate_step,
)
from .route1d import reversal_thirds_schedule, route_riffle, route_swap1d
from .hypercube import hypercube_route
from .lowering import lower_schedule
from .sparse import sparse_route
from .bounds import (
    audit_schedule, counting_bound_preset, counting_lower_bound,
    monotone_lower_bound, reversal2d_set, reversal_set,
)
from .oracle import exact_routing_number, routing_number_table

__all__ = [
    "Coord", "GridShape", "InOrderSwap1D", "InvalidStepError", "MaskedRectSwap",
    "Model", "Permutation", "Rectangle", "RectSwap", "RiffleShuffle", "Schedule",
    "apply_schedule", "compose", "identity", "invert", "random_permutation", "reversal",
    "validate_schedule", "validate_step", "reversal_thirds_schedule", "route_riffle",
    "route_swap1d", "hypercube_route", "lower_schedule", "sparse_route",
    "audit_schedule", "counting_bound_preset", "counting_lower_bound",
    "monotone_lower_bound", "reversal2d_set", "reversal_set", "exact_routing_number",
    "routing_number_table",
]

__version__ = "0.1.0"
