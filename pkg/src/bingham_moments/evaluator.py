"""Public moment API for arbitrary symmetric parameter matrices.

Pipeline: diagonalize B with a proper rotation, sort the eigenvalues and shift
by the largest so the canonical diagonal is (b1, b2, 0) with b1 <= b2 <= 0,
dispatch the diagonal partition values to the three-region approximations,
reduce general monomials through x3^2 = 1 - x1^2 - x2^2, and expand rotated
monomials back into the original frame.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError, TableStateError

MAX_ORDER = 4

# even (p, q) pairs whose diagonal partition values the tables can produce
_BASE_PAIRS = ((0, 0), (2, 0), (0, 2), (4, 0), (0, 4), (2, 2))


@dataclass(frozen=True)
class ApproxParams:
    """Series truncation orders for the far and mixed regions."""

    N1: int = 5
    N2: int = 5

    def __post_init__(self):
        if self.N1 < 1 or self.N2 < 0:
            raise DomainError(f"invalid truncation orders N1={self.N1}, N2={self.N2}")


DEFAULT_PARAMS = ApproxParams()


@dataclass(frozen=True)
class CanonicalDiag:
    """Canonical form of a symmetric B: rotation, ordered diagonal, shift.

    B = rotation @ diag(b1 + log_shift, b2 + log_shift, log_shift) @ rotation.T
    with b1 <= b2 <= 0 and det(rotation) = +1.
    """

    b1: float
    b2: float
    rotation: np.ndarray = field(repr=False)
    log_shift: float


@dataclass(frozen=True)
class MomentSet:
    """Log partition value and all normalized moments of total order <= 4."""

    log_z: float
    moments: dict


def eig3_sym(B) -> CanonicalDiag:
    """Canonicalize a symmetric 3x3 matrix by cyclic Jacobi diagonalization.

    Jacobi sweeps are preferred over the analytic 3x3 closed forms, whose
    conditioning collapses near degenerate spectra; convergence is quadratic
    and the off-diagonal norm threshold is 1e-14 times the matrix norm.
    """
    B = np.asarray(B, dtype=float)
    if B.shape != (3, 3) or not np.all(np.isfinite(B)):
        raise DomainError("B must be a finite 3x3 matrix")
    a = 0.5 * (B + B.T)
    scale = float(np.linalg.norm(a))
    V = np.eye(3)
    if scale > 0.0:
        for _ in range(60):
            off = math.sqrt(a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2)
            if off <= 1e-14 * scale:
                break
            for p in range(2):
                for q in range(p + 1, 3):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    c = 1.0 / math.sqrt(t * t + 1.0)
                    s = t * c
                    J = np.eye(3)
                    J[p, p] = c
                    J[q, q] = c
                    J[p, q] = s
                    J[q, p] = -s
                    a = J.T @ a @ J
                    V = V @ J
    lam = np.diag(a).copy()
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    V = np.ascontiguousarray(V[:, order])
    if np.linalg.det(V) < 0.0:
        V[:, 2] = -V[:, 2]
    h = float(lam[2])
    b1 = min(float(lam[0]) - h, 0.0)
    b2 = min(float(lam[1]) - h, 0.0)
    return CanonicalDiag(b1=b1, b2=b2, rotation=V, log_shift=h)


def reduce_monomial(n1: int, n2: int, n3: int) -> dict:
    """Express Z_{n1 n2 n3}(diag(b1, b2, 0)) over the Z_{pq0} basis.

    Returns exact integer coefficients c such that the value equals
    sum c[(p, q)] * Z_pq(b1, b2), by expanding (1 - x1^2 - x2^2)^(n3/2).
    Odd monomials reduce to the empty combination (the moment vanishes).
    """
    if min(n1, n2, n3) < 0:
        raise DomainError(f"orders must be nonnegative, got ({n1}, {n2}, {n3})")
    if n1 + n2 + n3 > MAX_ORDER:
        raise DomainError(
            f"total order {n1 + n2 + n3} unsupported; the routine covers <= {MAX_ORDER}")
    if n1 % 2 or n2 % 2 or n3 % 2:
        return {}
    h = n3 // 2
    combo: dict = {}
    for j in range(h + 1):
        for k in range(h - j + 1):
            i = h - j - k
            coef = (-1) ** (j + k) * math.factorial(h) // (
                math.factorial(i) * math.factorial(j) * math.factorial(k))
            key = (n1 + 2 * j, n2 + 2 * k)
            combo[key] = combo.get(key, 0) + coef
    return {key: c for key, c in combo.items() if c != 0}


def _check_diag_args(n, m, b1, b2, tables):
    if tables is None:
        raise TableStateError("precomputed tables are required")
    if n < 0 or m < 0 or n % 2 or m % 2 or n + m > MAX_ORDER:
        raise DomainError(
            f"(n, m) must be even and nonnegative with n + m <= {MAX_ORDER}, got ({n}, {m})")
    if b1 > 0 or b2 > 0:
        raise DomainError(f"b1, b2 must be nonpositive, got ({b1}, {b2})")


def z_diag(n: int, m: int, b1: float, b2: float, tables,
           params: ApproxParams = DEFAULT_PARAMS) -> float:
    """Z_nm(diag(b1, b2, 0)) by three-region dispatch on (b1, b2)."""
    _check_diag_args(n, m, b1, b2, tables)
    if params.N2 > tables.gm_grid.n2:
        raise DomainError(
            f"N2={params.N2} exceeds the table truncation order {tables.gm_grid.n2}")
    return kernels.z_diag_kernel(n, m, float(b1), float(b2),
                                 *tables.kernel_args(), params.N1, params.N2)


def _base_ratios(b1: float, b2: float, tables, params: ApproxParams) -> dict:
    out = kernels.z_all_kernel(float(b1), float(b2), *tables.kernel_args(),
                               params.N1, params.N2)
    ratios = {(0, 0): 1.0}
    for i, pq in enumerate(kernels.RATIO_ORDER):
        ratios[pq] = float(out[1 + i])
    return float(out[0]), ratios


def _canonical_monomial_moments(ratios: dict) -> dict:
    """Normalized moments of every even canonical-frame monomial of order <= 4."""
    out = {}
    for e1 in range(0, MAX_ORDER + 1, 2):
        for e2 in range(0, MAX_ORDER + 1 - e1, 2):
            for e3 in range(0, MAX_ORDER + 1 - e1 - e2, 2):
                combo = reduce_monomial(e1, e2, e3)
                out[(e1, e2, e3)] = sum(c * ratios[pq] for pq, c in combo.items())
    return out


def _expand_row_power(row: np.ndarray, n: int) -> dict:
    """Multinomial expansion of (row . y)^n as {exponent-triple: coefficient}."""
    out = {}
    for a in range(n + 1):
        for b in range(n + 1 - a):
            c = n - a - b
            coef = (math.factorial(n) // (math.factorial(a) * math.factorial(b)
                                          * math.factorial(c))
                    * row[0] ** a * row[1] ** b * row[2] ** c)
            if coef != 0.0:
                out[(a, b, c)] = coef
    return out


def _rotated_moment(T: np.ndarray, n1: int, n2: int, n3: int, y_moms: dict) -> float:
    """Moment of x1^n1 x2^n2 x3^n3 with x = T y in the canonical y-frame."""
    poly = {(0, 0, 0): 1.0}
    for axis, power in ((0, n1), (1, n2), (2, n3)):
        if power == 0:
            continue
        factor = _expand_row_power(T[axis], power)
        merged: dict = {}
        for e, c in poly.items():
            for fe, fc in factor.items():
                key = (e[0] + fe[0], e[1] + fe[1], e[2] + fe[2])
                merged[key] = merged.get(key, 0.0) + c * fc
        poly = merged
    total = 0.0
    for e, c in poly.items():
        if e[0] % 2 or e[1] % 2 or e[2] % 2:
            continue
        total += c * y_moms[e]
    return total


def moments(B, tables, params: ApproxParams = DEFAULT_PARAMS) -> MomentSet:
    """All normalized moments of order <= 4 and the log partition value.

    The log of the partition function is returned instead of the raw value so
    that matrices with large positive eigenvalues cannot overflow; the shifted
    partition value itself never exceeds the sphere area.
    """
    if tables is None:
        raise TableStateError("precomputed tables are required")
    can = eig3_sym(B)
    z00, ratios = _base_ratios(can.b1, can.b2, tables, params)
    y_moms = _canonical_monomial_moments(ratios)
    T = can.rotation
    result = {}
    for n1 in range(MAX_ORDER + 1):
        for n2 in range(MAX_ORDER + 1 - n1):
            for n3 in range(MAX_ORDER + 1 - n1 - n2):
                if (n1 + n2 + n3) % 2:
                    result[(n1, n2, n3)] = 0.0
                else:
                    result[(n1, n2, n3)] = _rotated_moment(T, n1, n2, n3, y_moms)
    result[(0, 0, 0)] = 1.0
    return MomentSet(log_z=math.log(z00) + can.log_shift, moments=result)


def moment_derivative(n: int, m: int, wrt: str, b1: float, b2: float, tables,
                      params: ApproxParams = DEFAULT_PARAMS) -> float:
    """Partial derivative of the moment ratio Z_nm/Z00 in b1 or b2.

    Quotient rule over the diagonal partition values; derivatives of
    second-order ratios need fourth-order values, which the tables provide,
    hence the n + m <= 2 restriction.
    """
    if n + m > 2:
        raise DomainError(f"moment_derivative requires n + m <= 2, got ({n}, {m})")
    if wrt not in ("b1", "b2"):
        raise DomainError(f"wrt must be 'b1' or 'b2', got {wrt!r}")
    _check_diag_args(n, m, b1, b2, tables)
    z00 = z_diag(0, 0, b1, b2, tables, params)
    znm = z_diag(n, m, b1, b2, tables, params)
    if wrt == "b1":
        zup = z_diag(n + 2, m, b1, b2, tables, params)
        zder = z_diag(2, 0, b1, b2, tables, params)
    else:
        zup = z_diag(n, m + 2, b1, b2, tables, params)
        zder = z_diag(0, 2, b1, b2, tables, params)
    return (zup * z00 - znm * zder) / (z00 * z00)
