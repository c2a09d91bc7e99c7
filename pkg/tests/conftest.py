import pytest

from sigma_density import primes


@pytest.fixture(scope="session")
def table():
    return primes.load_or_sieve(primes.DEFAULT_LIMIT)
