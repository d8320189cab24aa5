"""Nonlinear coherent states of a Kerr mode.

Constructs the deformed coherent-state families of a single field mode
with a Kerr-type nonlinearity, their m-photon-added variants, photon
statistics (distributions, Mandel parameter), and phase-space maps
(Husimi Q and Wigner functions), each by at least two independent routes.
"""

__version__ = "0.1.0"

from .errors import NonConvergenceError, PoleError, TruncationError
from .phasespace import (ClosedFormSpec, DisplacedNumberBasis, PhaseSpaceField,
                         PhaseSpaceGrid, coherent_overlap,
                         displaced_number_basis, displaced_number_overlaps,
                         field_over_grid, husimi, husimi_closed_a,
                         husimi_closed_d, smooth_wigner, wigner,
                         wigner_closed_a, wigner_closed_d)
from .specfun import (DEFAULT_TOL, SeriesTolerance, assoc_laguerre,
                      f_factorial, hyp_pFq, laguerre, pochhammer, sum_series)
from .states import (FAMILIES, MAX_DIM, TAIL_TOL, DeformedLadder, FockState,
                     KerrParams, StateLabel, add_photons, coherent, docs,
                     dpancs_a, dpancs_d, make_state, nlcs_eigenstate, pacs,
                     rebuild, zeta)
from .stats import (MandelSweep, PhotonDistribution, closed_form_distribution_a,
                    closed_form_distribution_d, mandel_q, mandel_sweep,
                    photon_distribution, write_distribution_csv,
                    write_mandel_csv)

__all__ = [
    "__version__",
    "NonConvergenceError", "PoleError", "TruncationError",
    "SeriesTolerance", "DEFAULT_TOL", "sum_series", "pochhammer", "laguerre",
    "assoc_laguerre", "hyp_pFq", "f_factorial",
    "KerrParams", "StateLabel", "FockState", "DeformedLadder", "FAMILIES",
    "TAIL_TOL", "MAX_DIM", "zeta", "coherent", "pacs", "nlcs_eigenstate",
    "docs", "dpancs_a", "dpancs_d", "add_photons", "make_state", "rebuild",
    "PhotonDistribution", "MandelSweep", "photon_distribution",
    "closed_form_distribution_a", "closed_form_distribution_d", "mandel_q",
    "mandel_sweep", "write_mandel_csv", "write_distribution_csv",
    "PhaseSpaceGrid", "PhaseSpaceField", "ClosedFormSpec",
    "DisplacedNumberBasis", "coherent_overlap", "husimi", "husimi_closed_a",
    "husimi_closed_d", "displaced_number_basis", "displaced_number_overlaps",
    "wigner", "wigner_closed_a", "wigner_closed_d", "field_over_grid",
    "smooth_wigner",
]
