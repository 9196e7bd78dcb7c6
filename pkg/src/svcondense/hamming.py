"""Hamming codes of length 2**d - 1 via syndrome arithmetic on machine words.

The parity-check matrix has the numbers 1..2**d-1 as columns, so the
syndrome of a block equals the XOR of the (1-indexed) positions of its set
bits.  That value is also the coset label: flipping bit i moves a block
from coset s to coset s XOR i, and the code itself is coset 0.  Blocks are
machine integers with bit 1 as the most significant of the 2**d - 1 bits.
"""

from __future__ import annotations

from typing import List

import numpy as np

MIN_D = 2
MAX_D = 8        # streaming/syndrome range; block fits a machine word
MAX_ENUM_D = 4   # full 2**(2**d - 1) enumeration stays desk-sized


class HammingCode:
    """Immutable [2**d - 1, 2**d - 1 - d] Hamming code."""

    __slots__ = ("d", "block_len")

    def __init__(self, d: int):
        if not MIN_D <= d <= MAX_D:
            raise ValueError(f"d must be in {MIN_D}..{MAX_D}, got {d}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "block_len", (1 << d) - 1)

    def __setattr__(self, name, value):
        raise AttributeError("HammingCode is immutable")

    def __repr__(self) -> str:
        return f"HammingCode(d={self.d})"

    def parity_matrix(self) -> np.ndarray:
        """d x (2**d - 1) matrix; column j is the binary of j, row 1 = MSB."""
        cols = np.arange(1, self.block_len + 1)
        rows = np.arange(self.d - 1, -1, -1)
        return ((cols[None, :] >> rows[:, None]) & 1).astype(np.uint8)

    def syndrome(self, block: int) -> int:
        """Coset label of a block: XOR of the positions of its set bits.

        O(popcount) per block; this is the per-block hot path.
        """
        if not 0 <= block < (1 << self.block_len):
            raise ValueError(f"block {block} does not fit in {self.block_len} bits")
        s = 0
        bl1 = self.block_len + 1
        while block:
            low = block & -block
            s ^= bl1 - low.bit_length()
            block ^= low
        return s

    def is_codeword(self, block: int) -> bool:
        return self.syndrome(block) == 0

    def codewords(self) -> List[int]:
        """All codewords, by enumeration (d <= MAX_ENUM_D)."""
        return self.coset_partition()[0]

    def coset_partition(self) -> List[List[int]]:
        """The 2**d syndrome fibers, indexed by syndrome value.

        Fiber i is the code translated by the i-th unit vector; together the
        fibers tile {0,1}^(2**d - 1) because the code is perfect.
        """
        if self.d > MAX_ENUM_D:
            raise ValueError(
                f"coset enumeration needs 2**{self.block_len} strings; "
                f"d must be <= {MAX_ENUM_D}"
            )
        syndromes = syndromes_of_all_blocks(self.d)
        cosets: List[List[int]] = [[] for _ in range(1 << self.d)]
        for block, s in enumerate(syndromes):
            cosets[int(s)].append(block)
        return cosets

    def flip(self, block: int, i: int) -> int:
        """Block with bit i (1-indexed from the left) toggled."""
        if not 1 <= i <= self.block_len:
            raise ValueError(f"position {i} out of range 1..{self.block_len}")
        return block ^ (1 << (self.block_len - i))


def syndromes_of_bit_matrix(d: int, bits: np.ndarray) -> np.ndarray:
    """Syndromes of many blocks at once.

    `bits` has one block per row, 2**d - 1 columns of 0/1 values in
    MSB-first order.  Vectorized XOR-fold of the column indices of set
    bits; used by the streaming path, tested against the scalar route.
    """
    code = HammingCode(d)
    if bits.ndim != 2 or bits.shape[1] != code.block_len:
        raise ValueError(f"expected rows of {code.block_len} bits")
    cols = np.arange(1, code.block_len + 1, dtype=np.uint16)
    vals = np.where(bits != 0, cols, 0).astype(np.uint16)
    return np.bitwise_xor.reduce(vals, axis=1)


def syndromes_of_all_blocks(d: int) -> np.ndarray:
    """Syndrome of every block value 0..2**(2**d - 1)-1 (d <= MAX_ENUM_D).

    Built incrementally: appending bit b to a width-w prefix shifts the
    remaining positions, so syndrome(x*2 + b) = syndrome(x applied to the
    first w positions) XOR (b ? last position : 0).  Equivalent direct
    rule: each set bit at machine-bit position t contributes t+1 when
    counted from the right, so we fold from the right instead.
    """
    code = HammingCode(d)
    if d > MAX_ENUM_D:
        raise ValueError(f"full enumeration needs d <= {MAX_ENUM_D}")
    bl = code.block_len
    idx = np.arange(1 << bl, dtype=np.uint32)
    syn = np.zeros(1 << bl, dtype=np.uint16)
    for t in range(bl):  # machine-bit position t holds block position bl - t
        on = ((idx >> t) & 1).astype(bool)
        syn[on] ^= bl - t
    return syn
