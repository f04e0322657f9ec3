"""Anisotropic polyharmonic curve flow in a Minkowski plane.

Closed plane curves move with anisotropic-normal speed given by even
arclength derivatives of the anisotropic curvature; the package simulates the
flow, monitors its conserved and monotone quantities, and property-tests the
periodic inequalities those monitors rely on.
"""

from ._backend import BACKEND
from .curve import (CurveState, FrameData, compute_frame, enclosed_area,
                    minkowski_length, resample_uniform, sigma_derivative)
from .errors import (ConfigError, DegenerateTangent, InsufficientData,
                     InvalidInitialCurve, MinkflowError, NoZero, NonConvex,
                     NonPositiveRadius, OddHarmonic)
from .flow import FlowParams, Termination, Trajectory, run, stable_dt, step_rk4, velocity
from .indicatrix import (Indicatrix, IndicatrixSpec, anisotropy_Q, build_indicatrix,
                         circle_indicatrix, euclidean_indicatrix, isoperimetrix_area,
                         isoperimetrix_point, support_h)
from .inequalities import (PeriodicSample, epsilon_interpolation_check,
                           interpolation_check, poincare_check, sup_bound_check,
                           wirtinger_check)
from .monitors import (MonitorRecord, compute_monitors, decay_rate_fit,
                       kosc_apriori_bound, waiting_time_bound)
from .scenario import (ScenarioConfig, build_indicatrix_from_config,
                       build_initial_curve, parse_config, render_config, run_scenario)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConfigError", "CurveState", "DegenerateTangent", "FlowParams",
    "FrameData", "Indicatrix", "IndicatrixSpec", "InsufficientData",
    "InvalidInitialCurve", "MinkflowError", "MonitorRecord", "NoZero", "NonConvex",
    "NonPositiveRadius", "OddHarmonic", "PeriodicSample", "ScenarioConfig",
    "Termination", "Trajectory", "anisotropy_Q", "build_indicatrix",
    "build_indicatrix_from_config", "build_initial_curve", "circle_indicatrix",
    "compute_frame", "compute_monitors", "decay_rate_fit", "enclosed_area",
    "epsilon_interpolation_check", "euclidean_indicatrix", "interpolation_check",
    "isoperimetrix_area", "isoperimetrix_point", "kosc_apriori_bound",
    "minkowski_length", "parse_config", "poincare_check", "render_config",
    "resample_uniform", "run", "run_scenario", "sigma_derivative", "stable_dt",
    "step_rk4", "sup_bound_check", "support_h", "velocity", "waiting_time_bound",
    "wirtinger_check",
]
