"""qtower: exact rational homotopy of the orthogonal Whitehead tower.

Modules:
    linalg      exact scalars, matrices, and graded dimension maps over Q
    gca         free graded-commutative algebras and Poincare series
    sullivan    CDGAs, tower fibration models, cohomology in a degree window
    catalog     rational types of the groups, covers, triviality, B-cohomology
    serre       the transgressive Serre spectral-sequence engine (the oracle)
    structures  obstructions, torsors, and structure-class decompositions
    gauge       rational homotopy of gauge groups
    manifold    the TOML input format and shipped fixtures
    cli         the qtower command-line tool
"""

from .catalog import (EMProduct, GroupSpec, parse_groupspec, format_groupspec,
                      rational_type, classifying_space, cover,
                      is_rationally_trivial, split_indefinite,
                      bcohomology_generators, stable_tower_fiber)
from .gca import FreeGCA, Generator, Polynomial, basis_in_degree, poincare_dims
from .linalg import GradedDims, QMatrix, Rat, kernel_basis, rank, rat
from .manifold import ManifoldFile, fixture_path, list_fixtures, parse_manifold
from .serre import (BasePresentation, FiberSpec, FiberGenerator, SpectralSequence,
                    e2_page, run_to_einfty, standard_fiber, total_space_cohomology)
from .structures import (StructureQuery, StructureReport, obstruction_survey,
                         structure_torsor, fivebrane_decomposition,
                         ninebrane_decomposition, mapping_space_decompose,
                         pi0_of_mapping_space)
from .gauge import GaugeQuery, gauge_pi, sphere_case, connectivity, periodicity_check
from .sullivan import (CDGA, RelativeModel, cohomology_dims, d_squared_check,
                       differential_extend, pathspace_model,
                       relative_model_of_cover)

__version__ = "0.1.0"
