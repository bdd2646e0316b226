"""Exact free-cumulant calculus for anti-commutators and quadratic forms.

The package computes free cumulants of ab + ba and of weighted quadratic
expressions in free random variables, entirely in rational arithmetic.
The combinatorial side (non-crossing partitions, Kreweras complements,
block multigraphs and their oriented outercycles) lives in
``partitions`` and ``cactus``; the summation formulas and their
brute-force oracle in ``cumulants``; truncated power series and the
generating-function identities in ``series``.  ``freecactus.cli`` wires
it all into a command line tool.
"""

from freecactus.cactus import (
    BlockMultigraph,
    CactusValidation,
    OrientedCactus,
    bipartition,
    build_graph,
    canonical_outercycle,
    enumerate_oriented_cacti,
    g_exponent,
    is_connected,
    validate_cactus,
)
from freecactus.cumulants import (
    CumulantSpec,
    WeightMatrix,
    anticommutator_cumulant,
    anticommutator_cumulant_graphwise,
    cumulants_from_moments,
    even_anticommutator,
    format_rational,
    free_poisson_anticommutator_polynomial,
    kappa_pi,
    moments_from_cumulants,
    oracle_anticommutator_cumulants,
    oracle_anticommutator_moments,
    oracle_quadratic_cumulants,
    oracle_quadratic_moments,
    parse_rational,
    parse_spec,
    product_cumulant,
    quadratic_form_cumulant,
    semicircular_anticommutator,
)
from freecactus.errors import CumulantOrderError, ResourceCapError
from freecactus.series import (
    DEFAULT_SERIES_ORDER,
    FunctionalEquationReport,
    RMSeries,
    TruncatedSeries,
    cauchy_polynomial_residual,
    check_functional_equations,
    free_poisson_pair_cumulants,
    minverse_closed_form,
    r_m_transfer,
    y_count_recursive,
    y_series,
)
from freecactus.partitions import (
    DEFAULT_ENUMERATION_CAP,
    Partition,
    PartitionClassification,
    YDecomposition,
    catalan,
    classify,
    enumerate_nc,
    enumerate_y,
    interleave,
    interval_pairing,
    is_noncrossing,
    join,
    kreweras,
    level_counts,
    q_count,
    refines,
    restrict,
    x_membership,
    y_membership,
)

__version__ = "0.1.0"
