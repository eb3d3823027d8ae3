"""Steady states, transition dynamics and A/B experiment bias in an inflow/churn model."""

from churnflow.dynamics import (
    MetricReport,
    PopulationState,
    QualityProfile,
    Snapshot,
    TypeSpace,
    UserType,
    arq,
    churn_rate,
    convergence_time,
    first_period_below,
    hazard,
    simulate,
    steady_state,
    step,
)
from churnflow.instance import AlphaModel, Treatment

__version__ = "0.1.0"
