"""Variational polaron treatment of qubits ultrastrongly coupled to a
finite-band cavity-array waveguide: ground states, single-excitation bound
states, spontaneous emission, and bound-state-mediated state transfer, with
rotating-wave and exact-diagonalization baselines."""

__version__ = "0.1.0"

from .bound_states import (BoundState, effective_hamiltonian_single,
                           effective_hamiltonian_two, find_bound_state_single,
                           find_bound_states_two, bound_photon_numbers_two,
                           sebs_localization_length, sebs_photon_numbers,
                           upper_bound_state_possible, variational_gs_residual)
from .ed import EdConfig, EdResult, build_hamiltonian, lowest_states, \
    suggested_truncation
from .emission import (EmissionResult, evolve_emission, markov_rates,
                       markov_sigma_z, stationary_magnetization)
from .errors import (ConfigError, ConvergenceError, NoBoundStateError,
                     SolverError, WqedError)
from .model import (ModelParams, MomentumGrid, coupling_strength, dispersion,
                    momentum_to_site, spectral_density)
from .polaron1q import (SingleQubitPolaron, excited_probability,
                        gs_localization_length, gs_photon_numbers,
                        sigma_z_gs, solve_single_qubit)
from .polaron2q import (TwoQubitPolaron, excited_probability_two,
                        gs_photon_numbers_two, solve_two_qubit)
from .rwa import rwa_bound_states, rwa_gs_photons, rwa_hamiltonian
from .transfer import (ProtocolSchedule, Segment, TightBinding,
                       adiabaticity_check, default_schedule, rabi_period,
                       simulate_protocol, tb_transfer_fidelity,
                       extract_tight_binding)
