"""Exact towers for commuting circle endomorphisms, equation-free sets on
the circle, difference-avoiding lattice sets and small-graph parameters."""
from .circle import CircleEndo, CircleSet, format_rational, parse_rational
from .config import Settings, limits
from .errors import (CommTowerError, DepthCapExceeded, IntervalBudgetExceeded, InvalidInput,
                     ResourceExhausted, TimeBudgetExceeded)
from .freeness import check_free
from .freesets import EquationFamily, family_free_set, free_set_pair, verify_free
from .graphs import (FiniteGraph, chromatic_number, circular_chromatic, clique_number,
                     coloring_base, fractional_chromatic, is_star_extremal, sigma_bounds)
from .lattice import (DifferenceSet, GridWitness, LatticeGraph, brute_force_max, difference_set,
                      max_admissible, motzkin_bounds, periodic_search, sandwich)
from .separation import separate
from .towers import (ActionSpec, TowerCertificate, build_tower, doubling_reduce, grow_admissible,
                     merge_step, seed_admissible, separate_pair, verify_tower)

__version__ = "0.1.0"
