"""Entanglement sudden birth and death of two distant atoms coupled through a lens."""

from .closed_form import both_excited_solution, evolve_closed_form, one_excited_solution
from .entanglement import (
    EntanglementEvents,
    concurrence_closed_both_excited,
    concurrence_closed_one_excited,
    concurrence_general,
    concurrence_x,
    detect_events,
    signed_concurrence_x,
)
from .geometry import kappa_cone_analytic, kappa_from_cone
from .numeric import IntegrationError, IntegratorConfig, collective_rhs, integrate, lindblad_rhs_bare
from .params import CollectiveRates, SystemParams, collective_energies, collective_rates
from .scenarios import FIGURES, Scenario, SweepGrid, run_scenario, run_sweep
from .states import (
    StateError,
    Trajectory,
    XState,
    bare_to_collective,
    both_excited_initial,
    collective_to_bare,
    one_excited_initial,
)

__all__ = [
    "CollectiveRates",
    "EntanglementEvents",
    "FIGURES",
    "IntegrationError",
    "IntegratorConfig",
    "Scenario",
    "StateError",
    "SweepGrid",
    "SystemParams",
    "Trajectory",
    "XState",
    "bare_to_collective",
    "both_excited_initial",
    "both_excited_solution",
    "collective_energies",
    "collective_rates",
    "collective_rhs",
    "collective_to_bare",
    "concurrence_closed_both_excited",
    "concurrence_closed_one_excited",
    "concurrence_general",
    "concurrence_x",
    "detect_events",
    "evolve_closed_form",
    "integrate",
    "kappa_cone_analytic",
    "kappa_from_cone",
    "lindblad_rhs_bare",
    "one_excited_initial",
    "one_excited_solution",
    "run_scenario",
    "run_sweep",
    "signed_concurrence_x",
]

__version__ = "0.1.0"
