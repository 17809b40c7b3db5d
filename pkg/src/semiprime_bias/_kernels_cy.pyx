# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: bit-level sieve marking and prefix popcounts.

Mirrors _kernels_py exactly (same bit layout, same signatures); the
backend selector prefers this module when the extension built.
"""

import numpy as np

from libc.stdint cimport int64_t, uint16_t, uint64_t

BACKEND = "cython"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

DEF EVEN_BITS = 0x5555555555555555


def mark_composites(words_arr, long long nbits, primes_arr,
                    long long word_lo, long long word_hi):
    """Clear bits of odd multiples p*m (m >= p odd) for each p in primes,
    restricted to bit indices in [64*word_lo, min(64*word_hi, nbits))."""
    cdef uint64_t[::1] words = words_arr
    cdef int64_t[::1] primes = np.ascontiguousarray(primes_arr, dtype=np.int64)
    cdef long long bit_lo = 64 * word_lo
    cdef long long bit_hi = 64 * word_hi
    if bit_hi > nbits:
        bit_hi = nbits
    if bit_hi <= bit_lo:
        return
    cdef long long n_lo = 2 * bit_lo + 3
    cdef long long j, p, m, i
    with nogil:
        for j in range(primes.shape[0]):
            p = primes[j]
            m = (n_lo + p - 1) / p
            if m < p:
                m = p
            if m % 2 == 0:
                m += 1
            i = (p * m - 3) >> 1
            while i < bit_hi:
                words[i >> 6] &= ~((<uint64_t>1) << (i & 63))
                i += p


def prefix_counts(words_arr, blockcnt_arr, wordrel_arr,
                  blockcnt3_arr, wordrel3_arr, i_arr):
    """Counts of set bits (all, and 3-mod-4 positions) with index <= i."""
    cdef uint64_t[::1] words = words_arr
    cdef uint64_t[::1] blockcnt = blockcnt_arr
    cdef uint16_t[::1] wordrel = wordrel_arr
    cdef uint64_t[::1] blockcnt3 = blockcnt3_arr
    cdef uint16_t[::1] wordrel3 = wordrel3_arr
    cdef int64_t[::1] iv = np.ascontiguousarray(i_arr, dtype=np.int64)
    cdef long long n = iv.shape[0]
    out_all = np.empty(n, dtype=np.int64)
    out_3 = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] oa = out_all
    cdef int64_t[::1] o3 = out_3
    cdef long long k, i, w, g
    cdef uint64_t cut, mask
    with nogil:
        for k in range(n):
            i = iv[k]
            w = i >> 6
            g = w >> 6
            mask = (<uint64_t>0xFFFFFFFFFFFFFFFF) >> (63 - (i & 63))
            cut = words[w] & mask
            oa[k] = <int64_t>blockcnt[g] + wordrel[w] + __builtin_popcountll(cut)
            o3[k] = (<int64_t>blockcnt3[g] + wordrel3[w]
                     + __builtin_popcountll(cut & <uint64_t>EVEN_BITS))
    return out_all, out_3
