"""Monte Carlo capacity of ZF/MMSE MIMO receivers over correlated Nakagami-m fading."""

__version__ = "0.1.0"

from .channel import build_channel, draw_realization, exp_correlation
from .config import ChannelKind, PowerSplit, ScenarioConfig
from .montecarlo import (empirical_cdf, empirical_pdf, ergodic_capacity, quantile_at_cdf,
                         run_scenario, sweep_rho, sweep_snr, table1_search)
from .receivers import (SnrSpec, capacity_gap, mmse_corr_delta, mmse_highsnr_capacity,
                        mmse_stream_capacities, zf_corr_ratio, zf_stream_capacities)

__all__ = [
    "build_channel", "draw_realization", "exp_correlation",
    "ChannelKind", "PowerSplit", "ScenarioConfig",
    "empirical_cdf", "empirical_pdf", "ergodic_capacity", "quantile_at_cdf",
    "run_scenario", "sweep_rho", "sweep_snr", "table1_search",
    "SnrSpec", "capacity_gap", "mmse_corr_delta", "mmse_highsnr_capacity",
    "mmse_stream_capacities", "zf_corr_ratio", "zf_stream_capacities",
]
