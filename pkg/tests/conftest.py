import pytest

from galois_atlas.atlas import load_atlas


@pytest.fixture(scope="session")
def atlas():
    return load_atlas()
