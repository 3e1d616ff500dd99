"""Closed-form approximations for the far and mixed regions.

Far region (both parameters <= -d): truncated Gaussian-integral double series.
Mixed region (exactly one parameter <= -d): single series whose coefficients
are derivatives of the inner hypergeometric integral, tabulated on a fine grid
in the near parameter and cubically interpolated.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError


@dataclass(frozen=True)
class FarParams:
    """Truncation order and region threshold for the series formulas."""

    N1: int = 5
    d: float = 30.0

    def __post_init__(self):
        if self.N1 < 1:
            raise DomainError(f"N1 must be >= 1, got {self.N1}")
        if self.d <= 0:
            raise DomainError(f"d must be positive, got {self.d}")


@dataclass(frozen=True)
class GmDerivGrid:
    """Tabulated derivatives of the inner integral over b2 in [-d, 0].

    ``values[k, j, m//2]`` is the 2j-th derivative for exponent m at
    ``b2 = b2_min + k * b2_step``.
    """

    b2_step: float
    b2_min: float
    values: np.ndarray = field(repr=False)

    @property
    def n2(self) -> int:
        return self.values.shape[1] - 1


def _check_even(n: int, m: int) -> None:
    if n < 0 or m < 0 or n % 2 or m % 2:
        raise DomainError(f"n, m must be even and nonnegative, got ({n}, {m})")


def z_far(n: int, m: int, b1: float, b2: float, p: FarParams = FarParams()) -> float:
    """Far-region approximation of Z_nm; requires b1, b2 <= -d."""
    _check_even(n, m)
    if b1 > -p.d or b2 > -p.d:
        raise DomainError(
            f"far region requires b1, b2 <= -d = {-p.d}, got ({b1}, {b2})")
    return kernels.z_far_kernel(n, m, float(b1), float(b2), p.N1)


def gm_deriv(j: int, m: int, b2: float) -> float:
    """Exact 2j-th derivative of the inner integral at the series center.

    Assembled from the Leibniz product of the algebraic and hypergeometric
    factors; no finite differences anywhere.
    """
    if j < 0:
        raise DomainError(f"j must be nonnegative, got {j}")
    if m not in (0, 2, 4):
        raise DomainError(f"m must be in {{0, 2, 4}}, got {m}")
    if b2 > 0:
        raise DomainError(f"b2 must be nonpositive, got {b2}")
    return kernels.gm_deriv_kernel(j, m, float(b2))


def build_gm_grid(d: float, N2: int, step: float) -> GmDerivGrid:
    """Tabulate gm_deriv for b2 in [-d, 0] at the given spacing."""
    if step <= 0 or d <= 0:
        raise DomainError(f"d and step must be positive, got d={d}, step={step}")
    count = int(round(d / step))
    b2s = -d + step * np.arange(count + 1)
    values = kernels.gm_grid_kernel(b2s, N2)
    return GmDerivGrid(b2_step=step, b2_min=-d, values=values)


def z_mixed(n: int, m: int, b1: float, b2: float, grid: GmDerivGrid,
            N2: int | None = None) -> float:
    """Mixed-region approximation; exactly one of b1, b2 must be <= -d.

    The swapped case (b2 far, b1 near) is evaluated through the exact swap
    symmetry Z_nm(b1, b2) = Z_mn(b2, b1).
    """
    _check_even(n, m)
    d = -grid.b2_min
    if N2 is None:
        N2 = grid.n2
    if N2 > grid.n2:
        raise DomainError(f"N2={N2} exceeds grid truncation order {grid.n2}")
    far1 = b1 <= -d
    far2 = b2 <= -d
    if far1 == far2:
        raise DomainError(
            f"mixed region requires exactly one parameter <= -d = {-d}, got ({b1}, {b2})")
    if far2:
        n, m, b1, b2 = m, n, b2, b1
    if b2 > 0:
        raise DomainError(f"near parameter must be nonpositive, got {b2}")
    return kernels.z_mixed_kernel(n, m, float(b1), float(b2), grid.values,
                                  d, grid.b2_step, N2)
