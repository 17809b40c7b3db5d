"""Pure-numpy kernels: odd-only bitset sieving and prefix bit counts.

Bit layout: bit i of the word array corresponds to the odd integer
n = 2*i + 3; a set bit means "prime". Words are uint64, little-endian
bit order within each word. The same two entry points exist in the
compiled Cython backend; the selector in _kernels.py picks one at
import time.
"""

import numpy as np

BACKEND = "python"

_EVEN_BITS = np.uint64(0x5555555555555555)  # bit i even <=> n = 2i+3 == 3 (mod 4)


def mark_composites(words, nbits, primes, word_lo, word_hi):
    """Clear bits of odd multiples p*m (m >= p odd) for each p in primes,
    restricted to bit indices in [64*word_lo, min(64*word_hi, nbits))."""
    bit_lo = 64 * word_lo
    bit_hi = min(64 * word_hi, nbits)
    if bit_hi <= bit_lo:
        return
    seg = np.unpackbits(
        words[word_lo:word_hi].view(np.uint8), bitorder="little"
    )
    n_lo = 2 * bit_lo + 3
    seg_bits = bit_hi - bit_lo
    for p in primes.tolist():
        m = max(p, -(-n_lo // p))  # ceil division
        if m % 2 == 0:
            m += 1
        start = (p * m - 3) // 2 - bit_lo
        if start < seg_bits:
            seg[start:seg_bits:p] = 0
    packed = np.packbits(seg, bitorder="little").view(np.uint64)
    words[word_lo:word_hi] = packed[: word_hi - word_lo]


def prefix_counts(words, blockcnt, wordrel, blockcnt3, wordrel3, i_arr):
    """Counts of set bits (all, and 3-mod-4 positions) with index <= i,
    for each i in i_arr. blockcnt/wordrel are the cumulative tables built
    in tables.py (64-word blocks, exclusive word offsets)."""
    i = i_arr.astype(np.int64, copy=False)
    w = i >> 6
    g = w >> 6
    r = (i & 63).astype(np.uint64)
    mask = ~np.uint64(0) >> (np.uint64(63) - r)
    cut = words[w] & mask
    call = blockcnt[g] + wordrel[w] + np.bitwise_count(cut)
    c3 = blockcnt3[g] + wordrel3[w] + np.bitwise_count(cut & _EVEN_BITS)
    return call.astype(np.int64), c3.astype(np.int64)
