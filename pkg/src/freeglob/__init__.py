"""Free strict infinity-groupoids on finite globular sets.

The package provides:

* finite globular sets, disks, spheres and pasting-scheme colimits
  (:mod:`freeglob.globset`),
* arrow terms over such sets with boundaries and typing
  (:mod:`freeglob.terms`),
* a rewriting engine deciding term equalities with replayable traces
  (:mod:`freeglob.rewrite`),
* cylinders between parallel arrows and contraction cylinders over disks
  (:mod:`freeglob.cylinder`),
* elementary homotopy computations and arrow search
  (:mod:`freeglob.homotopy`),
* the category of tables and its term-valued extension with lifting
  towers (:mod:`freeglob.theta0`, :mod:`freeglob.tower`),
* a command line front end (:mod:`freeglob.cli`).
"""

__version__ = "0.1.0"

from .globset import (
    DEFAULT_DIM_BOUND,
    GlobMap,
    GlobSet,
    Table,
    disk,
    enumerate_glob_maps,
    globular_sum,
    sphere,
    validate_table,
)
from .terms import Comp, Context, Gen, Id, Inv, TypedTerm, boundary, elaborate, type_check
from .rewrite import EqVerdict, RewriteTrace, SearchBudget, equal, normalize, reduced_word
from .cylinder import Cylinder, contractibility_witness, validate_cylinder, verify_contraction
from .homotopy import ConnectBudget, ConnectResult, connect_arrow, pi0, pi1_free_rank
from .theta0 import Theta0Mor, hom_theta0, is_globally_parallel, table_of_sum
from .tower import (
    AdmissiblePair,
    ExtPresentation,
    ThetaTildeMor,
    evaluate_tower,
    extend_tower,
    lift_in_theta_tilde,
    precat_ops,
    uniqueness_check,
    verify_precat_equations,
)
from .cli import ParseError, RunConfig, parse_surface

__all__ = [
    "DEFAULT_DIM_BOUND",
    "GlobMap",
    "GlobSet",
    "Table",
    "disk",
    "enumerate_glob_maps",
    "globular_sum",
    "sphere",
    "validate_table",
    "Comp",
    "Context",
    "Gen",
    "Id",
    "Inv",
    "TypedTerm",
    "boundary",
    "elaborate",
    "type_check",
    "EqVerdict",
    "RewriteTrace",
    "SearchBudget",
    "equal",
    "normalize",
    "reduced_word",
    "Cylinder",
    "contractibility_witness",
    "validate_cylinder",
    "verify_contraction",
    "ConnectBudget",
    "ConnectResult",
    "connect_arrow",
    "pi0",
    "pi1_free_rank",
    "Theta0Mor",
    "hom_theta0",
    "is_globally_parallel",
    "table_of_sum",
    "AdmissiblePair",
    "ExtPresentation",
    "ThetaTildeMor",
    "evaluate_tower",
    "extend_tower",
    "lift_in_theta_tilde",
    "precat_ops",
    "uniqueness_check",
    "verify_precat_equations",
    "ParseError",
    "RunConfig",
    "parse_surface",
    "__version__",
]
