"""Checkpointed prime counts and the dense small-prime list.

CheckpointTable stores pi(spacing*k) and pi(spacing*k; 4, 3) for every
block k (spacing defaults to 2^13, matching the block size the sieve
counts were collected at). Queries resolve as checkpoint + bit scan; the
scan itself is O(1) thanks to per-word cumulative offsets kept alongside
the checkpoint arrays (wordrel is exclusive within each 64-word block, so a
query touches one block entry, one word offset and one masked popcount).

Counts at real x use floor semantics: the callers only ever need
#\\{q <= x/p\\} with q an integer, and floor(x/p) is computed by integer
division in the verifier so no float division enters exact counting.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConfigurationError
from .sieve import PrimeFlags

DEFAULT_SPACING = 8192
DEFAULT_SMALL_PRIME_BOUND = 10**7

CKPT_MAGIC = b"SPBCKPT1"

_EVEN_BITS = np.uint64(0x5555555555555555)


@dataclass
class CheckpointTable:
    spacing: int
    limit: int
    cnt_all: np.ndarray = field(repr=False)
    cnt_3mod4: np.ndarray = field(repr=False)
    # internal O(1)-query tables (64-word blocks over the flag bitset)
    words: np.ndarray = field(repr=False)
    blockcnt: np.ndarray = field(repr=False)
    wordrel: np.ndarray = field(repr=False)
    blockcnt3: np.ndarray = field(repr=False)
    wordrel3: np.ndarray = field(repr=False)


def _word_tables(words: np.ndarray):
    nwords = len(words)
    ngroups = max(1, -(-nwords // 64))
    padded = np.zeros(ngroups * 64, dtype=np.uint64)
    padded[:nwords] = words

    def build(masked):
        pc = np.bitwise_count(masked).astype(np.int64).reshape(ngroups, 64)
        totals = pc.sum(axis=1)
        blockcnt = np.concatenate(([0], np.cumsum(totals)[:-1])).astype(np.uint64)
        within = np.cumsum(pc, axis=1) - pc
        wordrel = within.reshape(-1)[: max(nwords, 1)].astype(np.uint16)
        if nwords == 0:
            wordrel = np.zeros(1, dtype=np.uint16)
        return blockcnt, wordrel

    blockcnt, wordrel = build(padded)
    blockcnt3, wordrel3 = build(padded & _EVEN_BITS)
    return blockcnt, wordrel, blockcnt3, wordrel3


def build_checkpoints(flags: PrimeFlags, spacing: int = DEFAULT_SPACING) -> CheckpointTable:
    if spacing < 2:
        raise ConfigurationError(f"checkpoint spacing {spacing} < 2")
    blockcnt, wordrel, blockcnt3, wordrel3 = _word_tables(flags.words)
    table = CheckpointTable(
        spacing=spacing,
        limit=flags.limit,
        cnt_all=np.empty(0, dtype=np.uint64),
        cnt_3mod4=np.empty(0, dtype=np.uint64),
        words=flags.words,
        blockcnt=blockcnt,
        wordrel=wordrel,
        blockcnt3=blockcnt3,
        wordrel3=wordrel3,
    )
    ks = np.arange(flags.limit // spacing + 1, dtype=np.int64)
    xs = ks * spacing
    call, c3 = batch_counts(table, xs)
    table.cnt_all = call.astype(np.uint64)
    table.cnt_3mod4 = c3.astype(np.uint64)
    return table


def batch_counts(table: CheckpointTable, t_arr: np.ndarray):
    """(pi(t), pi(t;4,3)) for an int64 array of t; t may be any >= 0."""
    t = np.asarray(t_arr, dtype=np.int64)
    if table.words.size == 0:  # limit 2: no odd primes stored
        call = np.zeros_like(t)
        return call + (t >= 2), np.zeros_like(t)
    i = np.maximum((t - 3) >> 1, 0)
    if t.size and int(i.max()) >= 64 * table.words.size:
        raise ValueError(
            f"count query at t = {int(t.max())} beyond limit {table.limit}"
        )
    call, c3 = _kernels.prefix_counts(
        table.words, table.blockcnt, table.wordrel,
        table.blockcnt3, table.wordrel3, i,
    )
    small = t < 3
    call[small] = 0
    c3[small] = 0
    call += t >= 2  # the prime 2
    return call, c3


def _check_x(table: CheckpointTable, x) -> int:
    if x < 0:
        raise ValueError(f"count query at x = {x} < 0")
    if x > table.limit:
        raise ValueError(f"count query at x = {x} beyond limit {table.limit}")
    return int(x)  # floor for float input


def count_primes_upto(table: CheckpointTable, flags: PrimeFlags, x) -> int:
    """Exact pi(floor(x)); x must not exceed flags.limit."""
    m = _check_x(table, x)
    call, _ = batch_counts(table, np.array([m]))
    return int(call[0])


def count_primes_3mod4_upto(table: CheckpointTable, flags: PrimeFlags, x) -> int:
    m = _check_x(table, x)
    _, c3 = batch_counts(table, np.array([m]))
    return int(c3[0])


def save_checkpoints(table: CheckpointTable, path) -> None:
    with open(path, "wb") as fh:
        fh.write(CKPT_MAGIC)
        fh.write(struct.pack("<QQ", table.spacing, table.limit))
        fh.write(table.cnt_all.astype("<u8", copy=False).tobytes())
        fh.write(table.cnt_3mod4.astype("<u8", copy=False).tobytes())


def load_checkpoints(path, flags: PrimeFlags) -> CheckpointTable:
    with open(path, "rb") as fh:
        head = fh.read(24)
        if len(head) < 24 or head[:8] != CKPT_MAGIC:
            raise ValueError(f"{path}: bad magic, not a checkpoint file")
        spacing, limit = struct.unpack("<QQ", head[8:24])
        payload = fh.read()
    n = limit // spacing + 1
    if len(payload) != 16 * n:
        raise ValueError(f"{path}: truncated checkpoint payload")
    if limit != flags.limit:
        raise ValueError(
            f"{path}: checkpoint limit {limit} != flags limit {flags.limit}"
        )
    table = build_checkpoints(flags, int(spacing))
    stored_all = np.frombuffer(payload[: 8 * n], dtype="<u8")
    stored_3 = np.frombuffer(payload[8 * n :], dtype="<u8")
    if not (np.array_equal(stored_all, table.cnt_all)
            and np.array_equal(stored_3, table.cnt_3mod4)):
        raise ValueError(f"{path}: checkpoint counts disagree with flags")
    return table


# -- dense small-prime list --------------------------------------------------


@dataclass
class SmallPrimeList:
    bound: int
    primes: np.ndarray = field(repr=False)       # sorted, starts at 2
    cum_3mod4: np.ndarray = field(repr=False)    # inclusive cumulative count
    is_3mod4: np.ndarray = field(repr=False)


def iter_prime_chunks(flags: PrimeFlags, lo: int = 3, hi: int | None = None,
                      chunk_words: int = 1 << 17):
    """Yield int64 arrays of the odd primes in [lo, hi] in order."""
    hi = flags.limit if hi is None else min(hi, flags.limit)
    if hi < 3 or hi < lo:
        return
    i_lo = max((lo - 3 + 1) // 2, 0)  # first index with n >= lo
    i_hi = (hi - 3) >> 1
    w_lo, w_hi = i_lo >> 6, (i_hi >> 6) + 1
    for w0 in range(w_lo, w_hi, chunk_words):
        w1 = min(w0 + chunk_words, w_hi)
        bits = np.unpackbits(flags.words[w0:w1].view(np.uint8),
                             bitorder="little")
        idx = np.flatnonzero(bits).astype(np.int64) + 64 * w0
        idx = idx[(idx >= i_lo) & (idx <= i_hi)]
        if idx.size:
            yield 2 * idx + 3


def extract_primes(flags: PrimeFlags, lo: int = 3, hi: int | None = None) -> np.ndarray:
    chunks = list(iter_prime_chunks(flags, lo, hi))
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(chunks)


def build_small_prime_list(flags: PrimeFlags,
                           bound: int = DEFAULT_SMALL_PRIME_BOUND) -> SmallPrimeList:
    if bound > flags.limit:
        raise ConfigurationError(
            f"small prime bound {bound} exceeds sieve limit {flags.limit}"
        )
    odd = extract_primes(flags, 3, bound)
    primes = np.concatenate(([2], odd)) if bound >= 2 else odd
    is3 = (primes & 3) == 3
    return SmallPrimeList(
        bound=bound,
        primes=primes,
        cum_3mod4=np.cumsum(is3).astype(np.int64),
        is_3mod4=is3,
    )


def prime_index(splist: SmallPrimeList, p: int) -> int:
    """Number of primes strictly below p; p must itself be in the list."""
    i = int(np.searchsorted(splist.primes, p))
    if i >= len(splist.primes) or splist.primes[i] != p:
        raise ValueError(f"prime_index({p}): not a prime in the list")
    return i


def prime_index_3mod4(splist: SmallPrimeList, p: int) -> int:
    """Number of primes q < p with q == 3 (mod 4); p must be in the list."""
    i = prime_index(splist, p)
    return int(splist.cum_3mod4[i]) - int(splist.is_3mod4[i])
