"""Active disturbance rejection control for fractional-order plants.

Three SISO control structures built around extended state observers — an
integer-order observer, a fully fractional one, and an improved hybrid that
adds an order-mismatch correction channel — together with Grunwald-Letnikov
fractional calculus, a simulated fractional plant, sector-based stability
analysis, and closed-form disturbance-estimation error curves.
"""

from .control import (AdrcConfig, AdrcVariant, SimulationDiverged, Trajectory,
                      control_law, loop_gain_variants, run_closed_loop)
from .experiments import (DEFAULT_PARAMS, EXPERIMENT_IDS, ExperimentSpec,
                          UnstableConfigError, run_experiment, step_metrics,
                          summarize)
from .fracops import (GLOperator, OustaloupFilter, frac_pow,
                      gl_coefficients, gl_differintegral, oustaloup_design)
from .freqdom import (FreqCurve, bode, delta, g_ifio, g_io, ieso_transfer,
                      ifeso_transfer, ifio_evaluator, io_evaluator, log_grid,
                      mse_ifio, mse_io)
from .observers import (EsoVariant, Feso, Ieso, Ifeso, ObserverGains,
                        bandwidth_gains, make_observer)
from .plant import DisturbanceSignal, FracPlant, reconstruct_disturbances
from .stability import (CharPoly, StabilityReport, build_char_poly,
                        critical_gain, ifeso_gain_check, poly_roots,
                        rationalize_order, sector_test)

__version__ = "0.1.0"

__all__ = [
    "AdrcConfig", "AdrcVariant", "SimulationDiverged", "Trajectory",
    "control_law", "loop_gain_variants", "run_closed_loop",
    "DEFAULT_PARAMS", "EXPERIMENT_IDS", "ExperimentSpec",
    "UnstableConfigError", "run_experiment", "step_metrics", "summarize",
    "GLOperator", "OustaloupFilter", "frac_pow", "gl_coefficients",
    "gl_differintegral", "oustaloup_design",
    "FreqCurve", "bode", "delta", "g_ifio", "g_io", "ieso_transfer",
    "ifeso_transfer", "ifio_evaluator", "io_evaluator", "log_grid",
    "mse_ifio", "mse_io",
    "EsoVariant", "Feso", "Ieso", "Ifeso", "ObserverGains",
    "bandwidth_gains", "make_observer",
    "DisturbanceSignal", "FracPlant", "reconstruct_disturbances",
    "CharPoly", "StabilityReport", "build_char_poly", "critical_gain",
    "ifeso_gain_check", "poly_roots", "rationalize_order", "sector_test",
    "__version__",
]
