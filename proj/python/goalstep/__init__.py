"""Goal-oriented and classic local-error-based adaptive time integration."""

from ._goalstep import (
    ControllerConfig,
    RunReport,
    adaptive_solve,
    check,
    deadbeat_next_step,
    dwr_loop,
    fit_observed_order,
    initial_step,
    lipschitz_seminorm,
    order_conditions,
    seminorm,
    sweep,
    toy_exact_qoi,
)

__all__ = [
    "ControllerConfig",
    "RunReport",
    "adaptive_solve",
    "check",
    "deadbeat_next_step",
    "dwr_loop",
    "fit_observed_order",
    "initial_step",
    "lipschitz_seminorm",
    "order_conditions",
    "seminorm",
    "sweep",
    "toy_exact_qoi",
]
