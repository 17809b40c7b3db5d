import numpy as np
import pytest

import semiprime_bias as spb
from semiprime_bias.errors import ConfigurationError
from semiprime_bias.tables import batch_counts, extract_primes, iter_prime_chunks


def _dense_counts(flags):
    """Independent per-integer cumulative counts straight off the bitset."""
    bits = np.unpackbits(flags.words.view(np.uint8), bitorder="little")
    ind = np.zeros(flags.limit + 1, dtype=np.int64)
    idx = np.flatnonzero(bits[: flags.nbits])
    ind[2 * idx + 3] = 1
    if flags.limit >= 2:
        ind[2] = 1
    cum = np.cumsum(ind)
    ind3 = np.zeros(flags.limit + 1, dtype=np.int64)
    n = 2 * idx + 3
    ind3[n[(n & 3) == 3]] = 1
    return cum, np.cumsum(ind3)


def test_checkpoint_first_block(tables_1e6, flags_1e6):
    assert int(tables_1e6.cnt_all[0]) == 0
    assert int(tables_1e6.cnt_3mod4[0]) == 0
    assert int(tables_1e6.cnt_all[1]) == 1028  # pi(8192)


def test_checkpoints_match_dense_oracle(tables_1e6, flags_1e6):
    cum, cum3 = _dense_counts(flags_1e6)
    ks = np.arange(len(tables_1e6.cnt_all))
    xs = ks * tables_1e6.spacing
    assert np.array_equal(tables_1e6.cnt_all, cum[xs].astype(np.uint64))
    assert np.array_equal(tables_1e6.cnt_3mod4, cum3[xs].astype(np.uint64))
    assert int(tables_1e6.cnt_all[122]) == int(cum[122 * 8192])


def test_checkpoint_invariants(tables_1e6):
    ca, c3 = tables_1e6.cnt_all, tables_1e6.cnt_3mod4
    assert np.all(np.diff(ca.astype(np.int64)) >= 0)
    assert np.all(np.diff(c3.astype(np.int64)) >= 0)
    assert np.all(c3 <= ca)
    assert np.all(np.diff(ca.astype(np.int64)) <= tables_1e6.spacing // 2)


def test_non_power_of_two_spacing(flags_1e6):
    tab = spb.build_checkpoints(flags_1e6, spacing=1000)
    cum, cum3 = _dense_counts(flags_1e6)
    xs = np.arange(len(tab.cnt_all)) * 1000
    assert np.array_equal(tab.cnt_all, cum[xs].astype(np.uint64))
    assert np.array_equal(tab.cnt_3mod4, cum3[xs].astype(np.uint64))


def test_random_queries_match_dense_oracle(tables_1e6, flags_1e6):
    cum, cum3 = _dense_counts(flags_1e6)
    rng = np.random.default_rng(17)
    xs = rng.integers(0, flags_1e6.limit + 1, 10_000)
    call, c3 = batch_counts(tables_1e6, xs)
    assert np.array_equal(call, cum[xs])
    assert np.array_equal(c3, cum3[xs])


def test_partition_identity(tables_1e6, flags_1e6):
    """pi - pi3 - 1 counts the 1 (mod 4) class (the -1 is the prime 2)."""
    cum, cum3 = _dense_counts(flags_1e6)
    ks = np.arange(1, len(tables_1e6.cnt_all))
    xs = ks * tables_1e6.spacing
    pi1_direct = np.array(
        [np.sum((extract_primes(flags_1e6, 3, int(x)) & 3) == 1) for x in xs[:10]]
    )
    lhs = (tables_1e6.cnt_all[1:11].astype(np.int64)
           - tables_1e6.cnt_3mod4[1:11].astype(np.int64) - 1)
    assert np.array_equal(lhs, pi1_direct)


def test_count_examples(tables_1e6, flags_1e6):
    assert spb.count_primes_upto(tables_1e6, flags_1e6, 10) == 4
    assert spb.count_primes_upto(tables_1e6, flags_1e6, 10**6) == 78498
    assert spb.count_primes_upto(tables_1e6, flags_1e6, 8192.7) == \
        spb.count_primes_upto(tables_1e6, flags_1e6, 8192)
    assert spb.count_primes_3mod4_upto(tables_1e6, flags_1e6, 10) == 2
    assert spb.count_primes_3mod4_upto(tables_1e6, flags_1e6, 10**6) == 39322
    pi1 = (spb.count_primes_upto(tables_1e6, flags_1e6, 10**6)
           - spb.count_primes_3mod4_upto(tables_1e6, flags_1e6, 10**6) - 1)
    assert pi1 == 39175
    assert spb.count_primes_3mod4_upto(tables_1e6, flags_1e6, 19) == 4


def test_count_contract_violations(tables_1e6, flags_1e6):
    with pytest.raises(ValueError):
        spb.count_primes_upto(tables_1e6, flags_1e6, 10**6 + 1)
    with pytest.raises(ValueError):
        spb.count_primes_upto(tables_1e6, flags_1e6, -1)


def test_small_prime_list_membership(splist_1e6, flags_1e6):
    primes = splist_1e6.primes
    assert primes[0] == 2 and primes[1] == 3
    assert np.all(np.diff(primes) > 0)
    dense = np.zeros(flags_1e6.limit + 1, dtype=bool)
    dense[primes] = True
    for n in (2, 3, 999983):
        assert dense[n] == spb.is_prime(flags_1e6, n)
    assert len(primes) == 78498


def test_prime_index_examples(splist_1e6):
    assert spb.prime_index(splist_1e6, 3) == 1
    assert spb.prime_index_3mod4(splist_1e6, 3) == 0
    p = 999983
    assert spb.prime_index(splist_1e6, p) == 78497  # pi(999982)


def test_prime_index_inverse_property(splist_1e6):
    rng = np.random.default_rng(23)
    idx = rng.integers(0, len(splist_1e6.primes), 2000)
    for i in idx:
        assert spb.prime_index(splist_1e6, int(splist_1e6.primes[i])) == i


def test_prime_index_rejects_composite(splist_1e6):
    with pytest.raises(ValueError):
        spb.prime_index(splist_1e6, 9)


def test_index_consistent_with_checkpoints(splist_1e6, tables_1e6, flags_1e6):
    for p in (3, 101, 65537, 999983):
        i3 = spb.prime_index_3mod4(splist_1e6, p)
        assert i3 == spb.count_primes_3mod4_upto(tables_1e6, flags_1e6, p - 1)


def test_small_prime_list_bound_guard(flags_1e6):
    with pytest.raises(ConfigurationError):
        spb.build_small_prime_list(flags_1e6, 10**7)


def test_prime_chunks_match_extract(flags_1e6):
    chunks = list(iter_prime_chunks(flags_1e6, 1000, 50_000, chunk_words=8))
    joined = np.concatenate(chunks)
    assert np.array_equal(joined, extract_primes(flags_1e6, 1000, 50_000))
    assert joined[0] >= 1000 and joined[-1] <= 50_000


def test_checkpoint_persistence_roundtrip(tmp_path, tables_1e6, flags_1e6):
    path = tmp_path / "ckpt.bin"
    spb.save_checkpoints(tables_1e6, path)
    loaded = spb.load_checkpoints(path, flags_1e6)
    assert np.array_equal(loaded.cnt_all, tables_1e6.cnt_all)
    assert np.array_equal(loaded.cnt_3mod4, tables_1e6.cnt_3mod4)


def test_checkpoint_loader_rejects_corruption(tmp_path, tables_1e6, flags_1e6):
    path = tmp_path / "ckpt.bin"
    spb.save_checkpoints(tables_1e6, path)
    raw = bytearray(path.read_bytes())
    raw[:8] = b"WRONGMAG"
    path.write_bytes(bytes(raw))
    with pytest.raises(ValueError, match="magic"):
        spb.load_checkpoints(path, flags_1e6)
    spb.save_checkpoints(tables_1e6, path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-16])
    with pytest.raises(ValueError, match="truncated"):
        spb.load_checkpoints(path, flags_1e6)
