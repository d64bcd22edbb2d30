"""Ambient backscatter communication over OFDM carriers.

Link-level simulator and analysis library for a backscatter tag riding a
legacy OFDM signal: matched-filter (CAMF) and impulse-filter (CUIF) tag
transmit filters, an EM-based joint channel-estimation-and-detection
receiver, genie and energy-detector baselines, closed-form BER analysis,
and a deterministic Monte Carlo sweep harness with a CLI.
"""

from .config import E_X, EmConfig, Scheme, SimParams
from .channel import (ChannelRealization, CirProfile, cir_to_freq,
                      sample_cir, sample_realization)
from .ofdm import Constellation, gen_frame, qam4, qam_detect
from .bd import (BdBits, backscatter_component, backscatter_frame,
                 camf_waveform, cuif_waveform, sample_bits)
from .receiver import (DetectionResult, EmState, ReceivedSlot, em_e_step,
                       em_m_step_unconstrained, em_run, energy_detect,
                       genie_detect, project_common_phase, receive,
                       threshold_sweep)
from .analysis import (LinkBudget, ber_camf_conditional, ber_cuif_chiani,
                       ber_cuif_closed, ber_cuif_conditional,
                       ber_unknown_symbols, q_function, snr_db_to_gamma_x,
                       theorem1_gap)
from .montecarlo import (BerCurve, BerPoint, compare_curves, run_slot,
                         slot_rng, sweep, trend_verdict)

__version__ = "0.1.0"
