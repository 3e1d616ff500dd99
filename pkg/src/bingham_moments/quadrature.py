"""Ground-truth evaluation of partition-function integrals by adaptive Simpson.

Slow by design; used for table generation audits, verification sweeps, and
benchmarks, never on the hot evaluation path.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class QuadratureSpec:
    """Error target and recursion cap for the adaptive rules."""

    abs_tol: float = 1e-11
    max_depth: int = 40

    def __post_init__(self):
        if self.abs_tol <= 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_depth < 10:
            raise DomainError(f"max_depth must be >= 10, got {self.max_depth}")


DEFAULT_SPEC = QuadratureSpec()


def adaptive_simpson_1d(f: Callable[[float], float], a: float, b: float,
                        abs_tol: float, max_depth: int = 40) -> float:
    """Bisecting adaptive Simpson with Richardson error estimate.

    Each panel is accepted when |S(a,m) + S(m,b) - S(a,b)| / 15 is within its
    tolerance share; the tolerance halves per split.
    """
    if not a < b:
        raise DomainError(f"requires a < b, got a={a}, b={b}")
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    total, failed = _simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, 0)
    if failed:
        raise ConvergenceError(
            f"adaptive Simpson did not converge to {abs_tol} within depth {max_depth}",
            best_estimate=total, error_estimate=abs_tol)
    return total


def _simpson_rec(f, a, b, fa, fm, fb, s, tol, max_depth, depth):
    mid = 0.5 * (a + b)
    lm = 0.5 * (a + mid)
    rm = 0.5 * (mid + b)
    flm, frm = f(lm), f(rm)
    sl = (mid - a) / 6.0 * (fa + 4.0 * flm + fm)
    sr = (b - mid) / 6.0 * (fm + 4.0 * frm + fb)
    err = (sl + sr - s) / 15.0
    if abs(err) <= tol or depth >= max_depth:
        return sl + sr + err, abs(err) > tol
    lv, lf = _simpson_rec(f, a, mid, fa, flm, fm, sl, 0.5 * tol, max_depth, depth + 1)
    rv, rf = _simpson_rec(f, mid, b, fm, frm, fb, sr, 0.5 * tol, max_depth, depth + 1)
    return lv + rv, lf or rf


def z_nm_oracle(n: int, m: int, b1: float, b2: float,
                spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Z_nm(diag(b1, b2, 0)) by nested adaptive Simpson in spherical coordinates.

    The spherical parametrization keeps the integrand smooth; the disk form has
    a boundary singularity that defeats Simpson at tight tolerances.
    """
    if n < 0 or m < 0 or n % 2 or m % 2:
        raise DomainError(f"n, m must be even and nonnegative, got ({n}, {m})")
    if n + m > 8:
        raise DomainError(f"n + m <= 8 required, got {n + m}")
    if b1 > 0 or b2 > 0:
        raise DomainError(f"b1, b2 must be nonpositive, got ({b1}, {b2})")
    value, fail = kernels.oracle_nm_kernel(n, m, float(b1), float(b2),
                                           spec.abs_tol, spec.max_depth)
    if fail:
        raise ConvergenceError(
            f"oracle did not reach abs_tol={spec.abs_tol} for "
            f"Z_{n}{m}({b1}, {b2}) within depth {spec.max_depth}",
            best_estimate=value, error_estimate=spec.abs_tol)
    return value


def z_general_oracle(n1: int, n2: int, n3: int, B: np.ndarray,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Z_{n1 n2 n3}(B) by direct quadrature in the original frame.

    The largest eigenvalue is factored out before integrating so the shifted
    integrand stays within [0, 1]; the stated tolerance applies to the shifted
    integral.
    """
    if min(n1, n2, n3) < 0 or n1 + n2 + n3 > 4:
        raise DomainError(f"orders must be nonnegative with total <= 4, got ({n1}, {n2}, {n3})")
    B = np.asarray(B, dtype=float)
    if B.shape != (3, 3) or not np.all(np.isfinite(B)):
        raise DomainError("B must be a finite 3x3 matrix")
    Bs = 0.5 * (B + B.T)
    shift = float(np.max(np.linalg.eigvalsh(Bs)))
    value, fail = kernels.oracle_general_kernel(
        n1, n2, n3,
        Bs[0, 0], Bs[0, 1], Bs[0, 2], Bs[1, 1], Bs[1, 2], Bs[2, 2],
        shift, spec.abs_tol, spec.max_depth)
    if fail:
        raise ConvergenceError(
            f"general oracle did not reach abs_tol={spec.abs_tol} within "
            f"depth {spec.max_depth}",
            best_estimate=value * math.exp(shift), error_estimate=spec.abs_tol)
    return value * math.exp(shift)
