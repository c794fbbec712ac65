"""Reaction-diffusion fronts, their travelling waves, and Hamilton-Jacobi blow-down limits."""

from .nonlinearity import NonlinearitySpec, check_hypotheses, evaluate, evaluate_derivative, integral
from .wave1d import WaveProfile, compute_wave, minimal_speed, profile_inverse, shoot, tail_rates
from .rd_solver import Field, Grid, SimulationConfig, SnapshotSeries, simulate, step
from .levelset import LevelGraph, extract_graph_space, extract_graph_time, lipschitz_estimate
from .hamilton_jacobi import (HJParams, Planar, Sampled, SupportSet, hopf_lax_backward,
                              hopf_lax_forward, local_hopf_lax_step, trace_characteristic, tw_value)

__version__ = "0.1.0"
