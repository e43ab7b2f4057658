"""XX spin chains built from dual -1 Hahn polynomials.

The asymmetric family (``xi = eta + 1``, integer ``eta``) transfers an
excitation perfectly between even sites ``2n`` and ``N - 2n - 1`` at
``T = pi/4``, spreads odd-site excitations over odd sites only, and returns
every state to itself at ``2T``.
"""

__version__ = "0.1.0"

from .chain import (ChainSpec, Family, JacobiOperator, build, is_mirror_symmetric, load_chain,
                    perturb_coupling, save_chain, u_product_identity_residual)
from .dynamics import (AmplitudeMatrix, FREvent, PSTPair, TransportReport, amplitude_matrix,
                       amplitude_via_divided_difference, detect_fr, detect_pst, fidelity_sweep,
                       pst_time_condition, transport_report, verify_return)
from .hahn_m1 import DualM1HahnParams
from .orthopoly import GridFunction, MonicRecurrence
from .spectral import SpectralData, SpectralMode, eig_tridiagonal, spectral_data
