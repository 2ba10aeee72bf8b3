"""Discrete nabla fractional calculus on integer half-lines.

Taylor monomials by stable recurrence, Riemann-Liouville nabla sums and
differences with explicit base bookkeeping, method-of-steps solvers for
linear fractional initial value problems, a stability criterion with its
envelope bound and decay classification, and exact-rational twins of every
floating kernel for testing.
"""

from .exact import (
    dumps_fractions,
    oracle_first_order,
    oracle_frac_diff_composed,
    oracle_frac_diff_direct,
    oracle_mittag_leffler,
    oracle_monomial,
    oracle_nabla_diff_n,
    oracle_nabla_sum,
    oracle_solve,
    oracle_weight,
    oracle_weight_row,
)
from .grid import (
    DomainTooShortError,
    GridCsvError,
    GridFunction,
    OperatorResult,
    nabla_diff,
    nabla_diff_n,
    nabla_frac_diff_composed,
    nabla_frac_diff_direct,
    nabla_sum,
    power_rule_check,
    read_grid_csv,
    write_grid_csv,
)
from .monomial import (
    MonomialParams,
    convolution_weight,
    convolution_weights,
    monomial_at,
    monomial_limit_sequence,
    monomial_limit_value,
    monomial_sequence,
    monomial_tail,
    monomial_value,
)
from .solver import (
    SINGULAR_PIVOT_TOL,
    FirstOrderForm,
    LinearProblem,
    SingularStepError,
    SolutionTrace,
    coefficient_array,
    envelope_sequence,
    mittag_leffler_seq,
    solve_first_order,
    solve_general,
    solve_lagged,
    write_trace_csv,
    write_trace_json,
)
from .stability import (
    BOUND_SLACK,
    THREADS_ENV_VAR,
    DecayClass,
    OrderComparison,
    ScanCell,
    StabilityReport,
    bound_check,
    compare_orders,
    criterion_check,
    decay_classify,
    default_window,
    stability_scan,
    tail_exponent,
    write_report_json,
    write_scan_csv,
)

__version__ = "0.1.0"
