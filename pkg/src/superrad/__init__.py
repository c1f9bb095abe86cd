"""Two-frequency-pumped superradiant scattering from an elongated condensate."""
from .analysis import (
    FitError,
    GratingDiagnostics,
    PhaseFit,
    backward_rate_eq4,
    fit_phase_response,
    grating_diagnostics,
    population,
)
from .model import (
    ConfigError,
    ModeField,
    PumpConfig,
    SimConfig,
    SpatialGrid,
    SystemState,
    make_default_config,
    pump_beat,
    seeded_initial_state,
    thomas_fermi_profile,
)
from .reduced import LogisticParams, eq6_prediction, logistic_closed_form
from .solver import (
    EndfireField,
    NumericalBlowupError,
    Trajectory,
    compute_endfire,
    rhs,
    simulate,
    step_rk4,
)

__version__ = "0.1.0"
