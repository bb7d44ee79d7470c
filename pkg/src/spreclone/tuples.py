"""Tuple codec and bitset helpers.

Tuples over A = {0..k-1} are numbered lexicographically, first coordinate
most significant: encode(a_1..a_m) = sum a_i * k**(m-i).  Subsets of A^m are
stored as Python ints, bit i standing for the tuple with index i.
"""
from functools import lru_cache

import numpy as np


def encode(tup, k):
    i = 0
    for a in tup:
        i = i * k + a
    return i


def decode(index, k, m):
    out = [0] * m
    for j in range(m - 1, -1, -1):
        index, out[j] = divmod(index, k)
    return tuple(out)


def powers(k, m):
    return k ** np.arange(m - 1, -1, -1, dtype=np.int64)


@lru_cache(maxsize=None)
def all_tuples(k, m):
    """Array of shape (k**m, m) holding every m-tuple in codec order."""
    idx = np.arange(k ** m, dtype=np.int64)
    arr = (idx[:, None] // powers(k, m)) % k
    arr.setflags(write=False)
    return arr


def encode_rows(digits, k):
    """Encode along the last axis."""
    digits = np.asarray(digits, dtype=np.int64)
    return digits @ powers(k, digits.shape[-1])


def decode_many(indices, k, m):
    indices = np.asarray(indices, dtype=np.int64)
    return (indices[..., None] // powers(k, m)) % k


def mask_to_bits(mask, size):
    """Boolean array of length `size` for an int bitset."""
    if mask == 0:
        return np.zeros(size, dtype=bool)
    raw = np.frombuffer(mask.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size].astype(bool)


def bits_to_mask(bits):
    packed = np.packbits(np.asarray(bits, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def mask_indices(mask, size):
    return np.flatnonzero(mask_to_bits(mask, size))


def indices_to_mask(indices, size):
    bits = np.zeros(size, dtype=bool)
    bits[np.asarray(indices, dtype=np.int64)] = True
    return bits_to_mask(bits)


def popcount(mask):
    return bin(mask).count("1")
