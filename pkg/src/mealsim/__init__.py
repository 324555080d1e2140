"""Simulation of meal-glucose models: compartment ODEs, a stomach/intestine
reactor model with finite-volume and spectral Galerkin discretizations, delay
approximations and linearity-in-meal-size tooling."""
from .engine import (ImpulseRecord, IntegratorOptions, LinearModel, LinearRealization, MealContext,
                     MealEvent, MealSchedule, ModelInstance, PiecewiseConstant, Trajectory, integrate,
                     linear_step, simulate, simulate_impulse_meals, simulate_step_meals, steady_state)
from .integrator import IntegrationError, NonFiniteError, StepSizeUnderflow, dopri5
from .models import CATALOG, build_model

__version__ = "0.1.0"

__all__ = [
    "ImpulseRecord", "IntegratorOptions", "LinearModel", "LinearRealization", "MealContext",
    "MealEvent", "MealSchedule", "ModelInstance", "PiecewiseConstant", "Trajectory", "integrate",
    "linear_step", "simulate", "simulate_impulse_meals", "simulate_step_meals", "steady_state",
    "IntegrationError", "NonFiniteError", "StepSizeUnderflow", "dopri5",
    "CATALOG", "build_model", "__version__",
]
