import pytest

from stampbase.search import iter_classified


@pytest.fixture(scope="session")
def classified():
    """Classification records for p = 3..10, computed once per session."""
    return {p: list(iter_classified(p)) for p in range(3, 11)}
