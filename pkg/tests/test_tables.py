"""Table container format, determinism, corruption handling, spot audits."""

import io
import math
import os

import numpy as np
import pytest

from bingham_moments import tables as T
from bingham_moments.errors import (DomainError, TableChecksumError,
                                    TableCountError, TableFormatError,
                                    TableStateError, TableTruncationError,
                                    TableVersionError)
from bingham_moments.quadrature import z_nm_oracle

FOUR_PI = 4.0 * math.pi


def serialize(t) -> bytes:
    buf = io.BytesIO()
    T.write_tables(t, buf)
    return buf.getvalue()


class TestGeneration:
    def test_tiny_shapes(self, tiny_tables):
        h = tiny_tables.header
        assert h.nz00 == 3 and h.nratio == 3 and h.ngm == 5
        assert tiny_tables.z00_grid.f.shape == (3, 3)

    def test_origin_node_is_sphere_area(self, tiny_tables):
        assert tiny_tables.z00_grid.f[-1, -1] == pytest.approx(FOUR_PI, rel=1e-14)

    def test_ratio_origin_nodes(self, tiny_tables):
        r20 = tiny_tables.ratio_grids[0]
        assert r20.f[-1, -1] == pytest.approx(1.0 / 3.0, rel=1e-13)
        r22 = tiny_tables.ratio_grids[4]
        assert r22.f[-1, -1] == pytest.approx(1.0 / 15.0, rel=1e-13)

    def test_derivative_identity_at_nodes(self, tiny_tables):
        # d Z00 / d b1 = Z20 at every lattice node
        g = tiny_tables.z00_grid
        r20 = tiny_tables.ratio_grids[0]
        # compare against ratio * Z00 on the shared (coarser) lattice: for the
        # tiny config both lattices coincide
        assert np.allclose(g.dfdb1, r20.f * g.f, rtol=1e-12)

    def test_determinism(self):
        cfg = dict(T.TINY_CONFIG)
        a = T.generate_tables(**cfg, audit_nodes=0)
        b = T.generate_tables(**cfg, audit_nodes=0)
        assert serialize(a) == serialize(b)

    def test_bad_spacing_rejected(self):
        with pytest.raises(DomainError):
            T.generate_tables(d=1.0, N2=5, dz00=0.3, dratio=0.5, gm_step=0.25)

    def test_loose_quad_tol_rejected(self):
        from bingham_moments.quadrature import QuadratureSpec
        with pytest.raises(DomainError):
            T.generate_tables(**T.TINY_CONFIG, quad=QuadratureSpec(abs_tol=1e-9))


class TestRoundTrip:
    def test_bitwise_round_trip(self, tiny_tables):
        raw = serialize(tiny_tables)
        loaded = T.read_tables(io.BytesIO(raw))
        assert serialize(loaded) == raw
        assert np.array_equal(loaded.z00_grid.f, tiny_tables.z00_grid.f)
        assert np.array_equal(loaded.gm_grid.values, tiny_tables.gm_grid.values)
        for a, b in zip(loaded.ratio_grids, tiny_tables.ratio_grids):
            assert np.array_equal(a.f, b.f)
            assert np.array_equal(a.dfdb1, b.dfdb1)
            assert np.array_equal(a.dfdb2, b.dfdb2)

    def test_header_round_trip(self, tiny_tables):
        raw = serialize(tiny_tables)
        loaded = T.read_tables(io.BytesIO(raw))
        assert loaded.header.d == tiny_tables.header.d
        assert loaded.header.N2 == tiny_tables.header.N2


class TestCorruption:
    def test_payload_byte_flip(self, tiny_tables):
        raw = bytearray(serialize(tiny_tables))
        raw[T.HEADER_SIZE + 100] ^= 0x01
        with pytest.raises(TableChecksumError):
            T.read_tables(io.BytesIO(bytes(raw)))

    def test_every_section_checksummed(self, tiny_tables):
        raw = serialize(tiny_tables)
        for offset in (0, len(raw) - T.HEADER_SIZE - 1):
            bad = bytearray(raw)
            bad[T.HEADER_SIZE + offset] ^= 0x80
            with pytest.raises(TableChecksumError):
                T.read_tables(io.BytesIO(bytes(bad)))

    def test_bad_magic(self, tiny_tables):
        raw = bytearray(serialize(tiny_tables))
        raw[0:4] = b"NOPE"
        with pytest.raises(TableFormatError):
            T.read_tables(io.BytesIO(bytes(raw)))

    def test_bad_version(self, tiny_tables):
        raw = bytearray(serialize(tiny_tables))
        raw[4] = 99
        with pytest.raises(TableVersionError):
            T.read_tables(io.BytesIO(bytes(raw)))

    def test_truncated_header(self):
        with pytest.raises(TableTruncationError):
            T.read_tables(io.BytesIO(b"BMOM\x01"))

    def test_truncated_payload(self, tiny_tables):
        raw = serialize(tiny_tables)
        with pytest.raises(TableTruncationError):
            T.read_tables(io.BytesIO(raw[:-10]))

    def test_inconsistent_counts(self, tiny_tables):
        import struct
        raw = bytearray(serialize(tiny_tables))
        # overwrite the declared payload byte count (offset: 4s I 4d 4I)
        off = struct.calcsize("<4sI4d4I")
        raw[off:off + 8] = struct.pack("<Q", 123456)
        with pytest.raises(TableCountError):
            T.read_tables(io.BytesIO(bytes(raw)))


class TestFileIO:
    def test_save_and_load(self, tiny_tables, tmp_path):
        path = tmp_path / "tiny.tbl"
        n = T.save_tables(tiny_tables, path)
        assert path.stat().st_size == n
        loaded = T.load_tables(path)
        assert serialize(loaded) == serialize(tiny_tables)

    def test_env_var_path(self, tiny_tables, tmp_path, monkeypatch):
        path = tmp_path / "via_env.tbl"
        T.save_tables(tiny_tables, path)
        monkeypatch.setenv(T.TABLES_ENV_VAR, str(path))
        loaded = T.load_tables()
        assert loaded.header.d == tiny_tables.header.d

    def test_missing_file(self, tmp_path):
        with pytest.raises(TableStateError):
            T.load_tables(tmp_path / "absent.tbl")


class TestDefaultTables:
    def test_file_size_within_budget(self, default_tables):
        path = T.default_table_path()
        size = os.path.getsize(path)
        assert 40e6 <= size <= 100e6

    def test_spot_audit_against_oracle(self, default_tables, rng):
        # 50 random lattice nodes against a fresh oracle call
        h = default_tables.header
        worst = 0.0
        for _ in range(50):
            i = int(rng.integers(0, h.nz00))
            j = int(rng.integers(0, h.nz00))
            b1 = -h.d + i * h.dz00
            b2 = -h.d + j * h.dz00
            ref = z_nm_oracle(0, 0, b1, b2)
            worst = max(worst, abs(default_tables.z00_grid.f[i, j] - ref))
        assert worst <= 2e-11

    def test_header_consistency(self, default_tables):
        default_tables.validate()
        h = default_tables.header
        assert (h.d, h.dz00, h.dratio, h.gm_step) == (30.0, 0.025, 0.1, 0.001)


def test_fnv1a64_reference():
    # reference vectors for 64-bit FNV-1a
    assert T.fnv1a64(b"") == 0xCBF29CE484222325
    assert T.fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert T.fnv1a64(b"foobar") == 0x85944171F73967E8
