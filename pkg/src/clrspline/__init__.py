"""Zero-integral smoothing splines for centred logratio transformed densities."""
from .bspline import (KnotConfig, Spline, SplineSpace, basis_value, build_space,
                      collocation_matrix, derivative_operator, differentiate, evaluate,
                      gram_matrix, integrate, penalty_matrix)
from .clr import (DensityCurve, HistogramSample, Interval, clr_discrete, clr_discrete_inverse,
                  clr_functional, inverse_clr_spline)
from .exceptions import (ClrSplineError, DimensionError, DomainError, IngestError,
                         InvalidConfigError, InvalidInputError, InvalidOrderError)
from .ginverse import (InverseKind, LinearSystem, SolveReport, generalized_inverse,
                       min_norm_inverse, rank_factorize, solve_generalized, solve_min_norm)
from .io import Dataset, FitConfig, load_shiw, read_histogram_csv
from .smoothing import (ConstraintOperators, SmoothingProblem, SmoothingSolution,
                        antiderivative_coeffs, build_constraint_operators, fit_unconstrained,
                        fit_zero_integral, objective)

__version__ = "0.1.0"
