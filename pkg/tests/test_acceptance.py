"""Acceptance criteria, one test per criterion.

These are the binding end-to-end checks: seeded accuracy sweeps against the
quadrature oracle, published bound values, bound soundness, parameter lookup,
benchmark floors, property suites, and the table pipeline.
"""

import io
import json
import math
import os

import numpy as np
import pytest

from bingham_moments import kernels
from bingham_moments import tables as T
from bingham_moments.cli import _sample_regions, main
from bingham_moments.errbound import suggest_params, theorem1_bound
from bingham_moments.errors import TableChecksumError
from bingham_moments.evaluator import (DEFAULT_PARAMS, moment_derivative,
                                       moments, z_diag)
from bingham_moments.quadrature import z_nm_oracle
from bingham_moments.series import z_far

Z00_TOL = 6.1e-8
RATIO_TOL = 5e-8


def test_criterion_1_accuracy_sweep(default_tables):
    """1,000 seeded samples per region: Z00 and ratio errors vs the oracle."""
    rng = np.random.default_rng(20240815)
    samples = _sample_regions(rng, 1000, default_tables.header.d)
    ka = default_tables.kernel_args()
    maxima = [0.0] * 6
    for region, b1, b2 in samples:
        approx = kernels.z_all_kernel(b1, b2, *ka, DEFAULT_PARAMS.N1, DEFAULT_PARAMS.N2)
        z00 = z_nm_oracle(0, 0, b1, b2)
        maxima[0] = max(maxima[0], abs(float(approx[0]) - z00))
        for q, (n, m) in enumerate(kernels.RATIO_ORDER):
            ref = z_nm_oracle(n, m, b1, b2) / z00
            maxima[1 + q] = max(maxima[1 + q], abs(float(approx[1 + q]) - ref))
    print(f"criterion 1: max Z00 error {maxima[0]:.3e} (<= {Z00_TOL}), "
          f"max ratio error {max(maxima[1:]):.3e} (<= {RATIO_TOL})")
    assert maxima[0] <= Z00_TOL
    assert max(maxima[1:]) <= RATIO_TOL


def test_criterion_2_bound_reproduction():
    """Published bound at default parameters and the four table rows."""
    rep = theorem1_bound(30.0, 5, 0, 4)
    assert rep.bound == pytest.approx(6.038e-8, rel=1e-3)
    rows = [(13.0, 5, 4.4e-5), (16.0, 6, 3.6e-6),
            (20.0, 6, 4.5e-7), (26.0, 6, 4.5e-8)]
    for d, N, expected in rows:
        got = theorem1_bound(d, N, 0, 4).bound
        assert got == pytest.approx(expected, rel=0.05), (d, N)
    print(f"criterion 2: bound(30, 5) = {rep.bound:.4e}, table rows within 5%")


def test_criterion_3_bound_soundness():
    """500 far-region samples: measured far-series error below the bound."""
    rng = np.random.default_rng(7)
    bound = theorem1_bound(30.0, 5, 0, 4).bound
    pairs = ((0, 0), (2, 0), (0, 2), (4, 0), (0, 4), (2, 2))
    worst = 0.0
    for i in range(500):
        b1 = -10.0 ** rng.uniform(math.log10(30.0), math.log10(200.0))
        b2 = -10.0 ** rng.uniform(math.log10(30.0), math.log10(200.0))
        n, m = pairs[i % len(pairs)]
        err = abs(z_far(n, m, b1, b2) - z_nm_oracle(n, m, b1, b2))
        worst = max(worst, err)
        assert err <= bound, (n, m, b1, b2, err)
    print(f"criterion 3: worst far-region error {worst:.3e} <= bound {bound:.3e}")


def test_criterion_4_param_lookup():
    """Suggestion table returns the four published rows exactly."""
    assert suggest_params(5e-5) == (13, 5, 4)
    assert suggest_params(5e-6) == (16, 6, 5)
    assert suggest_params(5e-7) == (20, 6, 6)
    assert suggest_params(5e-8) == (26, 6, 6)
    print("criterion 4: all four published parameter rows reproduced")


def test_criterion_5_speedup(default_tables, capsys):
    """3,000-sample benchmark: speedup >= 100x, median <= 10 microseconds."""
    rc = main(["bench", "--samples", "3000", "--seed", "1", "--json",
               "--tables", str(T.default_table_path())])
    out = capsys.readouterr().out
    assert rc == 0
    obj = json.loads(out.strip().splitlines()[-1])
    print(f"criterion 5: approximator median {obj['approx_median_us']:.2f} us, "
          f"speedup {obj['speedup']:.0f}x")
    assert obj["speedup"] >= 100.0
    assert obj["approx_median_us"] <= 10.0


def test_criterion_6_property_suites(default_tables):
    """Uniform exactness, shift invariance, equivariance, sum rules, derivatives."""
    rng = np.random.default_rng(99)

    # uniform case
    ms = moments(np.zeros((3, 3)), default_tables).moments
    assert abs(ms[(2, 0, 0)] - 1.0 / 3.0) <= Z00_TOL
    assert abs(ms[(4, 0, 0)] - 1.0 / 5.0) <= Z00_TOL
    assert abs(ms[(2, 2, 0)] - 1.0 / 15.0) <= Z00_TOL

    def rand_b(scale):
        A = rng.uniform(-scale, scale, (3, 3))
        return 0.5 * (A + A.T)

    # shift invariance for 200 random (B, h)
    for _ in range(200):
        B = rand_b(10.0)
        h = rng.uniform(-10.0, 10.0)
        a = moments(B, default_tables)
        b = moments(B + h * np.eye(3), default_tables)
        assert abs(b.log_z - a.log_z - h) <= 1e-10
        for key in a.moments:
            assert abs(a.moments[key] - b.moments[key]) <= 1e-10

    # rotation equivariance of the second-moment matrix, 100 rotations
    idx = {(0, 0): (2, 0, 0), (1, 1): (0, 2, 0), (2, 2): (0, 0, 2),
           (0, 1): (1, 1, 0), (0, 2): (1, 0, 1), (1, 2): (0, 1, 1)}
    for _ in range(100):
        B = rand_b(12.0)
        Q, R = np.linalg.qr(rng.normal(size=(3, 3)))
        Q = Q @ np.diag(np.sign(np.diag(R)))
        if np.linalg.det(Q) < 0:
            Q[:, 0] = -Q[:, 0]
        ma = moments(B, default_tables).moments
        mb = moments(Q @ B @ Q.T, default_tables).moments
        M = np.zeros((3, 3))
        Mr = np.zeros((3, 3))
        for (i, j), key in idx.items():
            M[i, j] = M[j, i] = ma[key]
            Mr[i, j] = Mr[j, i] = mb[key]
        assert np.max(np.abs(Mr - Q @ M @ Q.T)) <= 1e-8

    # sum rules and odd moments on every evaluated B
    for _ in range(50):
        ms = moments(rand_b(20.0), default_tables).moments
        assert abs(ms[(2, 0, 0)] + ms[(0, 2, 0)] + ms[(0, 0, 2)] - 1.0) <= 1e-9
        for axis in range(3):
            e2 = [0, 0, 0]
            e2[axis] = 2
            total = 0.0
            for j in range(3):
                e = list(e2)
                e[j] += 2
                total += ms[tuple(e)]
            assert abs(total - ms[tuple(e2)]) <= 1e-9
        for key, val in ms.items():
            if sum(key) % 2 == 1:
                assert val == 0.0

    # derivative vs central finite differences at 50 random points
    for _ in range(50):
        b1 = -rng.uniform(0.5, 29.0)
        b2 = -rng.uniform(0.5, 29.0)
        h = 1e-4

        def ratio(x1, x2):
            return (z_diag(2, 0, x1, x2, default_tables)
                    / z_diag(0, 0, x1, x2, default_tables))

        fd = (ratio(b1 + h, b2) - ratio(b1 - h, b2)) / (2.0 * h)
        got = moment_derivative(2, 0, "b1", b1, b2, default_tables)
        assert abs(got - fd) <= 1e-5, (b1, b2)
    print("criterion 6: all property suites passed")


def test_criterion_7_table_pipeline(default_tables):
    """Round trip bit-exactness, corruption rejection, default file size."""
    tiny = T.generate_tables(**T.TINY_CONFIG, audit_nodes=2)
    buf = io.BytesIO()
    T.write_tables(tiny, buf)
    raw = buf.getvalue()
    loaded = T.read_tables(io.BytesIO(raw))
    buf2 = io.BytesIO()
    T.write_tables(loaded, buf2)
    assert buf2.getvalue() == raw

    corrupted = bytearray(raw)
    corrupted[T.HEADER_SIZE + 17] ^= 0x04
    with pytest.raises(TableChecksumError):
        T.read_tables(io.BytesIO(bytes(corrupted)))

    size = os.path.getsize(T.default_table_path())
    print(f"criterion 7: round trip bit-exact, corruption rejected, "
          f"default table {size / 1e6:.1f} MB")
    assert 40e6 <= size <= 100e6
