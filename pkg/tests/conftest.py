import numpy as np
import pytest

import semiprime_bias as spb


@pytest.fixture(scope="session")
def wheel():
    return spb.build_wheel()


@pytest.fixture(scope="session")
def flags_1e6(wheel):
    return spb.sieve_primes(10**6, wheel)


@pytest.fixture(scope="session")
def tables_1e6(flags_1e6):
    return spb.build_checkpoints(flags_1e6)


@pytest.fixture(scope="session")
def splist_1e6(flags_1e6):
    return spb.build_small_prime_list(flags_1e6, 10**6)


@pytest.fixture(scope="session")
def flags_1e7(wheel):
    return spb.sieve_primes(10**7, wheel)


@pytest.fixture(scope="session")
def tables_1e7(flags_1e7):
    return spb.build_checkpoints(flags_1e7)


@pytest.fixture(scope="session")
def splist_1e7(flags_1e7):
    return spb.build_small_prime_list(flags_1e7, 10**7)


@pytest.fixture(scope="session")
def moments_1e7(flags_1e7):
    return spb.compute_char_moments(flags_1e7)


@pytest.fixture(scope="session")
def oracle_primes():
    """Independent dense sieve used as the brute-force ground truth.

    Covers q up to (1.05 * 10^7) / 3 so that skip windows starting just
    below 10^7 stay inside the table."""
    n = 3_600_000
    s = np.ones(n + 1, dtype=bool)
    s[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if s[p]:
            s[p * p :: p] = False
    return np.flatnonzero(s).astype(np.int64)
