"""Oracle quadrature: trivial sphere integrals, cross-checks, error paths."""

import math

import numpy as np
import pytest

from bingham_moments.errors import ConvergenceError, DomainError
from bingham_moments.quadrature import (DEFAULT_SPEC, QuadratureSpec,
                                        adaptive_simpson_1d, z_general_oracle,
                                        z_nm_oracle)

FOUR_PI = 4.0 * math.pi


def gl_reference(n, m, b1, b2, n_theta=400, n_phi=200):
    """Tensor-product Gauss-Legendre value of Z_nm on the quarter sphere."""
    xt, wt = np.polynomial.legendre.leggauss(n_theta)
    xp, wp = np.polynomial.legendre.leggauss(n_phi)
    theta = 0.25 * math.pi * (xt + 1.0)
    phi = 0.25 * math.pi * (xp + 1.0)
    wt = 0.25 * math.pi * wt
    wp = 0.25 * math.pi * wp
    st = np.sin(theta)[:, None]
    c = np.cos(phi)[None, :]
    s = np.sin(phi)[None, :]
    integrand = (st ** (n + m + 1) * c ** n * s ** m
                 * np.exp(st * st * (b1 * c * c + b2 * s * s)))
    return 8.0 * float(wt @ integrand @ wp)


class TestQuadratureSpec:
    def test_defaults(self):
        assert DEFAULT_SPEC.abs_tol == 1e-11
        assert DEFAULT_SPEC.max_depth == 40

    def test_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(abs_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(max_depth=5)


class TestAdaptiveSimpson1D:
    def test_constant(self):
        assert adaptive_simpson_1d(lambda x: 1.0, 0.0, 1.0, 1e-12) == pytest.approx(1.0)

    def test_cubic_exact(self):
        # Simpson integrates cubics exactly
        val = adaptive_simpson_1d(lambda x: x * x, 0.0, 1.0, 1e-12)
        assert val == pytest.approx(1.0 / 3.0, abs=1e-14)

    def test_concentrated_integrand(self):
        f = lambda t: math.exp(-30.0 * math.sin(t) ** 2) * math.sin(t)
        xt, wt = np.polynomial.legendre.leggauss(300)
        t = 0.5 * math.pi * (xt + 1.0)
        ref = float(np.sum(0.5 * math.pi * wt * np.exp(-30.0 * np.sin(t) ** 2) * np.sin(t)))
        assert adaptive_simpson_1d(f, 0.0, math.pi, 1e-11) == pytest.approx(ref, abs=1e-10)

    def test_nonconvergence(self):
        with pytest.raises(ConvergenceError) as exc:
            adaptive_simpson_1d(lambda x: abs(x - 1.0 / math.pi), 0.0, 1.0,
                                1e-15, max_depth=10)
        assert exc.value.best_estimate is not None

    def test_domain(self):
        with pytest.raises(DomainError):
            adaptive_simpson_1d(lambda x: x, 1.0, 0.0, 1e-9)


class TestZnmOracle:
    def test_sphere_area(self):
        assert z_nm_oracle(0, 0, 0.0, 0.0) == pytest.approx(FOUR_PI, abs=1e-11)

    def test_uniform_second_moment(self):
        assert z_nm_oracle(2, 0, 0.0, 0.0) == pytest.approx(FOUR_PI / 3.0, abs=1e-11)

    @pytest.mark.parametrize("n,m,b1,b2", [
        (0, 0, -30.0, -15.0),
        (2, 0, -30.0, -15.0),
        (0, 0, -2.5, -80.0),
        (2, 2, -7.0, -3.0),
    ])
    def test_gauss_legendre_cross_check(self, n, m, b1, b2):
        assert abs(z_nm_oracle(n, m, b1, b2) - gl_reference(n, m, b1, b2)) <= 1e-11

    def test_swap_symmetry(self, rng):
        for _ in range(5):
            b1, b2 = -rng.uniform(0, 60, 2)
            n, m = 2 * rng.integers(0, 3, 2)
            a = z_nm_oracle(int(n), int(m), b1, b2)
            b = z_nm_oracle(int(m), int(n), b2, b1)
            assert abs(a - b) <= 2e-11

    def test_sum_rule(self, rng):
        for _ in range(4):
            b1, b2 = -rng.uniform(0, 40, 2)
            z00 = z_nm_oracle(0, 0, b1, b2)
            z20 = z_nm_oracle(2, 0, b1, b2)
            z02 = z_nm_oracle(0, 2, b1, b2)
            # Z_002 = Z00 - Z20 - Z02 by x3^2 = 1 - x1^2 - x2^2
            z002 = z_general_oracle(0, 0, 2, np.diag([b1, b2, 0.0]))
            assert abs(z20 + z02 + z002 - z00) <= 3e-11

    def test_domain(self):
        with pytest.raises(DomainError):
            z_nm_oracle(1, 0, -1.0, -1.0)
        with pytest.raises(DomainError):
            z_nm_oracle(0, 0, 0.5, -1.0)
        with pytest.raises(DomainError):
            z_nm_oracle(6, 4, -1.0, -1.0)


class TestGeneralOracle:
    def test_odd_vanishes(self):
        assert z_general_oracle(1, 1, 0, np.zeros((3, 3))) == pytest.approx(0.0, abs=1e-11)

    def test_uniform(self):
        assert z_general_oracle(2, 0, 0, np.zeros((3, 3))) == pytest.approx(
            FOUR_PI / 3.0, abs=1e-11)

    def test_self_consistency(self, rng):
        for _ in range(3):
            b1, b2 = -rng.uniform(0, 30, 2)
            B = np.diag([b1, b2, 0.0])
            assert abs(z_general_oracle(2, 0, 0, B)
                       - z_nm_oracle(2, 0, b1, b2)) <= 2e-11

    def test_rotation_consistency(self, rng):
        # second moments transform as a tensor under a rotation of B
        theta = 0.7
        R = np.array([[math.cos(theta), -math.sin(theta), 0.0],
                      [math.sin(theta), math.cos(theta), 0.0],
                      [0.0, 0.0, 1.0]])
        B = np.diag([-5.0, -2.0, 0.0])
        Br = R @ B @ R.T
        M = np.zeros((3, 3))
        orders = {(0, 0): (2, 0, 0), (1, 1): (0, 2, 0), (2, 2): (0, 0, 2),
                  (0, 1): (1, 1, 0), (0, 2): (1, 0, 1), (1, 2): (0, 1, 1)}
        z0 = z_general_oracle(0, 0, 0, B)
        for (i, j), nm in orders.items():
            M[i, j] = M[j, i] = z_general_oracle(*nm, B) / z0
        z0r = z_general_oracle(0, 0, 0, Br)
        for (i, j), nm in orders.items():
            got = z_general_oracle(*nm, Br) / z0r
            want = (R @ M @ R.T)[i, j]
            assert got == pytest.approx(want, abs=5e-11)

    def test_shift_conditioning(self):
        # positive eigenvalues: the shift keeps the integrand in [0, 1]
        B = np.diag([40.0, 35.0, 30.0])
        val = z_general_oracle(0, 0, 0, B)
        # Z(diag(40,35,30)) = e^40 Z(diag(0,-5,-10)) and Z000 is
        # permutation-invariant in the coordinates
        ref = math.exp(40.0) * z_nm_oracle(0, 0, -10.0, -5.0)
        assert val == pytest.approx(ref, rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            z_general_oracle(3, 1, 1, np.zeros((3, 3)))
        with pytest.raises(DomainError):
            z_general_oracle(0, 0, 0, np.full((3, 3), np.nan))
