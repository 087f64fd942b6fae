"""Relative Turán numbers of uniform hypergraphs: hosts, patterns, extraction
algorithms and exact small-instance oracles."""

from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .errors import BudgetExceeded, CertificateViolation, GuardError, InputError
from .hypergraph import (
    DegreeProfile, Hypergraph, PartiteBoundNotMet, derive_seed, partite_threshold,
    random_r_partite_subgraph, rng_for, sample_random_hypergraph,
)
from .patterns import (
    Pattern, PatternFamily, contains_copy, count_copies, enumerate_r_partitions,
    find_violation, is_tightly_connected, list_copies, local_isomorphism_images,
    parse_family, parse_pattern, projection_family, tight_cycle_family,
)
from .constructions import (
    SizeVector, complete_host, complete_partite_host, generalized_quadrangle_incidence,
    bipartite_c4_count, bipartite_c6_count, girth, heawood_graph, layered_host, projective_plane_incidence, tight_cycle_free_host,
    tutte_coxeter_graph, unbalanced_partite_host,
)
from .extraction import (
    ExtractionReport, build_target_J, check_certificate, codegree_split_extract,
    first_moment_deletion, probabilistic_extremal, random_hom_extract, recursive_extract,
    tight_cycle_extract,
)
from .oracle import (
    ExactResult, ExponentProfile, alpha_recursion, brute_force_relative_turan,
    exact_relative_turan, exponent_fit, exponents, supersaturation_check,
)
