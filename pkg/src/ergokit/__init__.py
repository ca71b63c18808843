"""Battery capacity, ergotropy and capacity-gap entanglement for finite quantum systems."""

from .errors import ErgokitError, NoConvergence
from .ergotropy import (
    WorkQuantities,
    antiergotropy,
    capacity,
    equispaced_capacity_bounds,
    equispaced_duality,
    ergotropy,
    extremal_states,
    qubit_capacity,
    variance_lower_bound,
    work_extracted,
    work_quantities,
)
from .gaps import (
    GapReport,
    acin_gap_formulas,
    capacity_gap,
    capacity_gap_mixed_2q,
    concurrence_2q,
    ergotropic_gaps,
    gap_report,
    multipartite_measures,
)
from .haar import SampleConfig, haar_unitary, mc_work_variance, random_density, stream
from .linalg import eig_hermitian, majorizes, partial_trace, tensor
from .measures import (
    coherence_l1,
    coherence_relative_entropy,
    coherence_robustness,
    linear_entropy,
    tsallis_entropy,
    von_neumann_entropy,
)
from .state import DensityMatrix, Hamiltonian
from .thermal import match_gibbs, total_quantities

__version__ = "0.1.0"
