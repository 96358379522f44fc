"""SU(2)-bundles over 3-connected 8-dimensional Poincare duality complexes."""
from .bundles import (achievable_lambdas, adapt_basis, admissibility, bundle_invariants,
                      enumerate_admissible_residues, exists_bundle, hypothesis_H4, hypothesis_H8,
                      is_admissible, lambda_closed_form, lambda_of)
from .core import PreconditionError, ResourceLimitError, smith_normal_form
from .eclass import (EPresentation, ENormalForm, RankOneClass, connected_sum, homotopy_equal,
                     normal_form, rank1_canonical, rank1_neighbors, stable_invariants, table1)
from .manifold import (CohomologyClass4, InputError, ManifoldPresentation, Parity, parity, sigma,
                       tau)
from .wedge import Pi7Wedge, compose_class, pushforward, stable_vector

__version__ = "0.1.0"
