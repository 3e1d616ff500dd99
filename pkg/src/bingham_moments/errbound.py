"""Rigorous far-region error bound and the parameter-suggestion lookup.

The bound controls |Z_nm - Zhat_nm| for the truncated far-region series with
threshold d and truncation order N.  It is the sum of three terms: a Dawson
tail from the unexpanded remainder, minus the finite part captured by the
kept series through lower incomplete gamma functions, plus an exponential
integral tail for the truncated coefficients.
"""

import warnings
from dataclasses import dataclass

import math

from .errors import DomainError
from .specfun import dawson, double_factorial, exp_int_alpha, lower_inc_gamma


@dataclass(frozen=True)
class ErrorBoundReport:
    """Bound value plus its three summands (term2 enters with a minus sign)."""

    d: float
    N: int
    n: int
    m: int
    bound: float
    term1: float
    term2: float
    term3: float

    @property
    def terms(self):
        return (self.term1, self.term2, self.term3)


# (guaranteed absolute error, d, N1, N2); descending by error
PARAM_TABLE = (
    (5e-5, 13, 5, 4),
    (5e-6, 16, 6, 5),
    (5e-7, 20, 6, 6),
    (5e-8, 26, 6, 6),
)


def theorem1_bound(d: float, N: int, n: int = 0, m: int = 0) -> ErrorBoundReport:
    """Far-region truncation bound for given threshold d and series order N.

    bound = 4 pi F(sqrt(d)) / sqrt(d)
          - 2 pi sum_{j<=N} ((2j-1)!!/(2j)!!) d^{-j-1} gamma(j+1, d)
          + 2 pi sum_{j<=N} ((2j-1)!!/(2j)!!) alpha_j(d)

    The orders (n, m) are carried in the report for bookkeeping; the bound
    itself covers every even pair with n + m <= 4 at the same (d, N).
    """
    if d <= 0:
        raise DomainError(f"d must be positive, got {d}")
    if N < 0:
        raise DomainError(f"N must be nonnegative, got {N}")
    if n < 0 or m < 0 or n % 2 or m % 2:
        raise DomainError(f"n, m must be even and nonnegative, got ({n}, {m})")
    sqrt_d = math.sqrt(d)
    term1 = 4.0 * math.pi * dawson(sqrt_d) / sqrt_d
    term2 = 0.0
    term3 = 0.0
    for j in range(N + 1):
        c = double_factorial(2 * j - 1) / double_factorial(2 * j)
        term2 += 2.0 * math.pi * c * d ** (-j - 1) * lower_inc_gamma(j + 1, d)
        term3 += 2.0 * math.pi * c * exp_int_alpha(j, d)
    bound = term1 - term2 + term3
    return ErrorBoundReport(d=d, N=N, n=n, m=m, bound=bound,
                            term1=term1, term2=term2, term3=term3)


def suggest_params(target_abs_error: float):
    """(d, N1, N2) from the published suggestion table for a target error.

    Picks the row whose guaranteed error is the tightest value still at or
    above the target; targets outside the table span fall back to the nearest
    row with a warning.
    """
    if target_abs_error <= 0:
        raise DomainError(f"target error must be positive, got {target_abs_error}")
    lo = PARAM_TABLE[-1][0]
    hi = PARAM_TABLE[0][0]
    if target_abs_error < lo:
        warnings.warn(
            f"target {target_abs_error:g} below the table span [{lo:g}, {hi:g}]; "
            f"returning the tightest row", stacklevel=2)
        row = PARAM_TABLE[-1]
    elif target_abs_error > hi:
        warnings.warn(
            f"target {target_abs_error:g} above the table span [{lo:g}, {hi:g}]; "
            f"returning the loosest row", stacklevel=2)
        row = PARAM_TABLE[0]
    else:
        row = next(r for r in reversed(PARAM_TABLE) if r[0] >= target_abs_error)
    return row[1], row[2], row[3]
