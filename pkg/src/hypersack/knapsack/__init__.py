from .expression import (
    ExponentExpression, ExpressionSyntaxError, KnapsackExpression, RepeatedVariable, parse_expression,
)
from .formula import Congruence, Conjunct, Link, SolutionFormula, eval_formula
from .normalize import normalize_powers, quasigeodesify, reduce_torsion
from .polygon import split_polygon
from .solver import (
    BoundRequired, Decision, HyperbolicSolver, decide, positivity_split, solve, solve_depth1, solve_depth2,
    solve_system, supports_solve,
)
