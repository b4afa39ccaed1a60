"""Knapsack equations over hyperbolic groups and their free products / products with Z."""
from .groups import parse_group
from .knapsack import decide, parse_expression, solve, solve_system
from .oracle import brute_solve, verify
from .semilinear import SemilinearSet, enumerate_box

__version__ = "0.1.0"
