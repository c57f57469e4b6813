from ._core import (
    CostMatrix,
    Error,
    Graph,
    RunResult,
    attach_baseline,
    cost,
    expand_eigendifference,
    generate_geometric,
    laplacian,
    laplacian_spectrum,
    quartic_spread_cost,
    run,
)

__all__ = [
    "CostMatrix",
    "Error",
    "Graph",
    "RunResult",
    "attach_baseline",
    "cost",
    "expand_eigendifference",
    "generate_geometric",
    "laplacian",
    "laplacian_spectrum",
    "quartic_spread_cost",
    "run",
]
