import pytest

from besselmoments import PrecisionContext


@pytest.fixture(scope="session")
def ctx50():
    """Shared 50-digit context so the Bessel/node caches amortize."""
    return PrecisionContext(50)


@pytest.fixture(scope="session")
def ctx30():
    """Cheaper context for tests that only need moderate precision."""
    return PrecisionContext(30)
