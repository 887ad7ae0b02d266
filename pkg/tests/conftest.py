import pytest

from zipstrata.zipdatum import gl_zip_datum


@pytest.fixture(scope="session")
def zd22():
    """GL_4 datum of signature (2,2)."""
    return gl_zip_datum(4, 2)


@pytest.fixture(scope="session")
def zd32():
    """GL_5 datum of signature (3,2)."""
    return gl_zip_datum(5, 3)


@pytest.fixture(scope="session")
def zd42():
    """GL_6 datum of signature (4,2)."""
    return gl_zip_datum(6, 4)
