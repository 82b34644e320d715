from .flow import Arc, FlowNetwork, FlowSolution, flow_conserved, min_cost_flow
from .lp import Constraint, LinearProgram, LPResult, lp_solve

__all__ = [
    "Arc",
    "Constraint",
    "FlowNetwork",
    "FlowSolution",
    "LPResult",
    "LinearProgram",
    "flow_conserved",
    "lp_solve",
    "min_cost_flow",
]
