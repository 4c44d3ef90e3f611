"""Arithmetic and spectral statistics of sums of two squares."""

from .errors import BudgetError, CoverageError, CutoffError, TwoSquaresError, UnclassifiedError
from .local import LocalDensity, OffsetSet, delta, enumerate_T, enumerate_V, epsilon, h_p_set, in_Sp, nu_p
from .regions import Region, lattice_points, poisson_moment, surjections, volume
from .sieve import SieveWindow, count, elements, is_sots, level_density, sieve_upto, window_sieve
from .singular import (
    LANDAU_RAMANUJAN,
    SingularSeriesValue,
    generic_factor,
    is_admissible,
    landau_ramanujan,
    singular_series,
)
from .stats import (
    correlation,
    empirical_moment,
    inclusion_exclusion_bounds,
    interval_counts,
    joint_gap_statistic,
    singular_series_average,
    spacing_histogram,
    table_rows,
)

__version__ = "0.1.0"
