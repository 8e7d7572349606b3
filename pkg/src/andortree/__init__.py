"""Optimal query algorithms for AND-OR trees under independent leaf distributions."""
from .cost import (
    DecisionTree,
    Query,
    Terminal,
    expected_cost,
    is_depth_first,
    is_directional,
    validate,
)
from .oracle import all_optimal_first_probes, optimal_cost, optimal_depth_first_cost
from .solve import build_solve_d, gate_order, gate_summary, restrict_and_solve, solve_d_cost
from .tree import (
    AND,
    OR,
    IndependentDistribution,
    KnowledgeState,
    TreeShape,
    build_shape,
    relevant_leaves,
    resolve,
)
from .treefile import format_decision_tree, format_tree, parse_decision_tree, parse_tree

__all__ = [
    "AND",
    "OR",
    "DecisionTree",
    "IndependentDistribution",
    "KnowledgeState",
    "Query",
    "Terminal",
    "TreeShape",
    "all_optimal_first_probes",
    "build_shape",
    "build_solve_d",
    "expected_cost",
    "format_decision_tree",
    "format_tree",
    "gate_order",
    "gate_summary",
    "is_depth_first",
    "is_directional",
    "optimal_cost",
    "optimal_depth_first_cost",
    "parse_decision_tree",
    "parse_tree",
    "relevant_leaves",
    "resolve",
    "restrict_and_solve",
    "solve_d_cost",
    "validate",
]
