import numpy as np
import pytest

from bingham_moments import tables as tables_mod


@pytest.fixture(scope="session")
def tiny_tables():
    """Coarse 3x3-lattice tables; generation takes a second."""
    return tables_mod.generate_tables(**tables_mod.TINY_CONFIG, audit_nodes=2)


@pytest.fixture(scope="session")
def default_tables():
    """Full default-parameter tables, generated once and cached on disk."""
    return tables_mod.ensure_default_tables()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
