"""Wheel-assisted segmented sieve producing an odd-only primality bitset.

The wheel over the primorial P = 2*3*...*23 supplies the residues coprime
to P. For sieving we exploit it as a precomputed bit pattern: composites
divisible by the odd wheel primes up to 13 are stamped out by tiling a
periodic pattern (period 3*5*7*11*13 = 15015 words), and the remaining
wheel primes are handled like ordinary sieve primes. The resulting flags
are identical for every wheel size; the wheel only changes how much
marking work the inner loop performs.

Storage: bit i <-> odd integer n = 2*i + 3, set bit = prime. The prime 2
is implicit. Queries for n > limit raise instead of returning 0.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConfigurationError, ResourceError

WHEEL_PRIME_CAP = 23
SIEVE_LIMIT_CAP = 10**18
DEFAULT_SEGMENT = 1 << 20  # integers per segment

FLAGS_MAGIC = b"SPBFLAGS"

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23)


class Wheel:
    """Residues coprime to the product of the primes up to a chosen cap.

    The residue table is materialized lazily: the sieve itself only needs
    the prime set, and the full 23-wheel table (36 495 360 residues) is
    only worth building when actually inspected.
    """

    def __init__(self, wheel_primes: tuple[int, ...]):
        self.wheel_primes = wheel_primes
        self.modulus = math.prod(wheel_primes)
        self._residues = None

    @property
    def residues(self) -> np.ndarray:
        if self._residues is None:
            coprime = np.ones(self.modulus, dtype=bool)
            for p in self.wheel_primes:
                coprime[::p] = False
            self._residues = np.flatnonzero(coprime).astype(np.uint32)
        return self._residues

    @property
    def residue_count(self) -> int:
        return math.prod(p - 1 for p in self.wheel_primes)

    def __repr__(self):
        return f"Wheel(modulus={self.modulus}, primes={self.wheel_primes})"


def build_wheel(wheel_prime_limit: int = WHEEL_PRIME_CAP) -> Wheel:
    """Wheel over all primes <= wheel_prime_limit (between 2 and 23)."""
    if wheel_prime_limit > WHEEL_PRIME_CAP:
        raise ConfigurationError(
            f"wheel_prime_limit {wheel_prime_limit} > {WHEEL_PRIME_CAP}: "
            "the residue table would exceed the memory target"
        )
    if wheel_prime_limit < 2:
        raise ConfigurationError("wheel_prime_limit must be at least 2")
    primes = tuple(p for p in _SMALL_PRIMES if p <= wheel_prime_limit)
    return Wheel(primes)


@dataclass
class PrimeFlags:
    """Primality bitset for 2 <= n <= limit (odd-only storage)."""

    limit: int
    words: np.ndarray = field(repr=False)

    @property
    def nbits(self) -> int:
        return (self.limit - 1) // 2 if self.limit >= 3 else 0

    def is_prime(self, n: int) -> bool:
        return is_prime(self, n)


def is_prime(flags: PrimeFlags, n: int) -> bool:
    if n < 2 or n > flags.limit:
        raise ValueError(f"is_prime({n}) outside [2, {flags.limit}]")
    if n % 2 == 0:
        return n == 2
    i = (n - 3) >> 1
    return bool((flags.words[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))


def _simple_odd_primes(n: int) -> np.ndarray:
    """Odd primes <= n by a plain dense sieve (used for base primes)."""
    if n < 3:
        return np.empty(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    is_p[2] = False
    return np.flatnonzero(is_p).astype(np.int64)


def _pattern_words(pattern_primes: list[int]) -> np.ndarray:
    """Periodic word pattern with bits cleared at multiples of the given
    odd primes. Bit period = product of the primes (odd), so the word
    period equals that same product."""
    q = math.prod(pattern_primes) if pattern_primes else 1
    bits = np.ones(q * 64, dtype=np.uint8)
    for p in pattern_primes:
        bits[(p - 3) // 2 :: p] = 0
    return np.packbits(bits, bitorder="little").view(np.uint64).copy()


def sieve_primes(
    limit: int,
    wheel: Wheel,
    *,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
) -> PrimeFlags:
    """Exact primality flags for all n <= limit.

    Segmented internally; peak memory beyond the output bitset is one
    segment per worker. Threads partition disjoint word ranges, so the
    output is identical for any worker count.
    """
    if limit < 2:
        raise ConfigurationError(f"sieve limit {limit} < 2")
    if limit < max(wheel.wheel_primes):
        raise ConfigurationError(
            f"sieve limit {limit} below largest wheel prime "
            f"{max(wheel.wheel_primes)}"
        )
    if limit > SIEVE_LIMIT_CAP:
        raise ConfigurationError(f"sieve limit {limit} > {SIEVE_LIMIT_CAP}")

    nbits = (limit - 1) // 2 if limit >= 3 else 0
    nwords = -(-nbits // 64)
    try:
        words = np.empty(nwords, dtype=np.uint64)
    except MemoryError as exc:
        raise ResourceError(
            f"flag bitset needs {8 * nwords} bytes for limit {limit}"
        ) from exc

    pattern_primes = [p for p in wheel.wheel_primes if 3 <= p <= 13]
    pattern = _pattern_words(pattern_primes)
    pat_len = len(pattern)

    base = _simple_odd_primes(math.isqrt(limit))
    if pattern_primes:
        base = base[base > max(pattern_primes)]

    words_per_seg = max(1, segment_size // 128)

    def do_range(w0: int, w1: int):
        words[w0:w1] = np.resize(np.roll(pattern, -(w0 % pat_len)), w1 - w0)
        for s0 in range(w0, w1, words_per_seg):
            s1 = min(s0 + words_per_seg, w1)
            _kernels.mark_composites(words, nbits, base, s0, s1)

    if threads <= 1 or nwords <= words_per_seg:
        do_range(0, nwords)
    else:
        chunk = -(-nwords // threads)
        chunk = -(-chunk // words_per_seg) * words_per_seg
        ranges = [
            (w0, min(w0 + chunk, nwords)) for w0 in range(0, nwords, chunk)
        ]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda r: do_range(*r), ranges))

    # the pattern stamps out the pattern primes themselves; restore them
    for p in pattern_primes:
        if p <= limit:
            i = (p - 3) >> 1
            words[i >> 6] |= np.uint64(1) << np.uint64(i & 63)

    if nbits % 64:
        words[-1] &= (np.uint64(1) << np.uint64(nbits % 64)) - np.uint64(1)

    return PrimeFlags(limit=limit, words=words)


def save_flags(flags: PrimeFlags, path) -> None:
    """Binary format: magic, limit as u64 LE, odd-only bitset as u64 LE."""
    with open(path, "wb") as fh:
        fh.write(FLAGS_MAGIC)
        fh.write(struct.pack("<Q", flags.limit))
        fh.write(flags.words.astype("<u8", copy=False).tobytes())


def load_flags(path) -> PrimeFlags:
    with open(path, "rb") as fh:
        head = fh.read(16)
        if len(head) < 16 or head[:8] != FLAGS_MAGIC:
            raise ValueError(f"{path}: bad magic, not a flags file")
        (limit,) = struct.unpack("<Q", head[8:16])
        nbits = (limit - 1) // 2 if limit >= 3 else 0
        nwords = -(-nbits // 64)
        payload = fh.read()
    if len(payload) != 8 * nwords:
        raise ValueError(
            f"{path}: payload is {len(payload)} bytes, "
            f"expected {8 * nwords} for limit {limit}"
        )
    words = np.frombuffer(payload, dtype="<u8").astype(np.uint64)
    return PrimeFlags(limit=int(limit), words=words)
