"""Two-time quantum correlations described as channels.

A temporal correlation is modelled as a channel ``Phi`` acting between two
instants; its strength is the entanglement of formation of the Choi state
that an ancilla protocol prepares from it.
"""
__version__ = "0.1.0"

from .channels import (ChoiState, CPTPVerdict, KrausChannel, amplitude_damping, apply, coherence_destroying,
                       dephasing, depolarized_unitary, from_choi, identity_channel, is_cptp, random_channel,
                       to_choi, unitary_channel)
from .entanglement import (concurrence_2q, diamond_lower, distance_to_separable_upper, eof, eof_2q,
                           eof_upper_bound, is_ppt)
from .errors import TempoCorrError
from .protocol import analytic_joint, run_protocol
from .quantifier import QReport, q_fixed_basis, q_inf, q_sweep
from .states import BasisPair, DensityMatrix, PureState, haar_random_unitary, max_coherent, max_entangled
from .tomography import channel_from_choi_state, measure, reconstruct
