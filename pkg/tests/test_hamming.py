"""Tests for Hamming-code syndrome machinery."""

import numpy as np
import pytest

from svcondense.hamming import (
    MAX_D,
    MIN_D,
    HammingCode,
    syndromes_of_all_blocks,
    syndromes_of_bit_matrix,
)


def _block_bits(block, width):
    return np.array([(block >> (width - 1 - t)) & 1 for t in range(width)], dtype=np.uint8)


def _matrix_syndrome(code, block):
    """Oracle: explicit parity-check matrix multiply over GF(2)."""
    bits = _block_bits(block, code.block_len)
    syn_bits = code.parity_matrix().dot(bits) % 2
    return int("".join(map(str, syn_bits)), 2)


def test_parity_matrix_columns_are_the_nonzero_integers():
    for d in range(MIN_D, MAX_D + 1):
        M = HammingCode(d).parity_matrix()
        assert M.shape == (d, (1 << d) - 1)
        cols = [int("".join(map(str, M[:, j])), 2) for j in range(M.shape[1])]
        assert cols == list(range(1, 1 << d))


def test_syndrome_examples_d2():
    code = HammingCode(2)
    assert code.syndrome(0b000) == 0
    assert code.syndrome(0b001) == 3  # e_3 -> binary of 3
    assert code.syndrome(0b101) == 2  # 101 xor e_2 = 111, a codeword
    assert code.is_codeword(0b101 ^ (1 << 1))


def test_syndrome_matches_matrix_oracle_exhaustively_d2_d3():
    for d in (2, 3):
        code = HammingCode(d)
        for block in range(1 << code.block_len):
            assert code.syndrome(block) == _matrix_syndrome(code, block)


def test_syndrome_matches_matrix_oracle_randomized_high_d():
    import random

    rng = random.Random(1)
    for d in range(4, MAX_D + 1):
        code = HammingCode(d)
        for _ in range(50):
            block = rng.getrandbits(code.block_len)
            assert code.syndrome(block) == _matrix_syndrome(code, block)


def test_codewords_d2():
    code = HammingCode(2)
    assert sorted(code.codewords()) == [0b000, 0b111]
    for d in (2, 3, 4):
        assert HammingCode(d).is_codeword(0)
    for j in range(1, 4):
        assert not code.is_codeword(1 << (3 - j))


def test_coset_partition_sizes():
    for d in (2, 3, 4):
        code = HammingCode(d)
        cosets = code.coset_partition()
        expected_size = 1 << (code.block_len - d)
        assert len(cosets) == 1 << d
        assert all(len(c) == expected_size for c in cosets)
        everything = sorted(x for c in cosets for x in c)
        assert everything == list(range(1 << code.block_len))


def test_coset_i_is_code_shifted_by_unit_i():
    for d in (2, 3):
        code = HammingCode(d)
        cosets = code.coset_partition()
        codewords = set(cosets[0])
        for i in range(1, (1 << d)):
            shifted = {c ^ (1 << (code.block_len - i)) for c in codewords}
            assert set(cosets[i]) == shifted


def test_coset_partition_rejects_large_d():
    with pytest.raises(ValueError):
        HammingCode(5).coset_partition()


def test_minimum_distance_at_least_three():
    for d in (2, 3, 4):
        code = HammingCode(d)
        words = code.codewords()
        weights = [bin(w).count("1") for w in words if w != 0]
        assert min(weights) >= 3  # linear code: min distance = min weight
    # exhaustive pairwise confirmation at small d
    for d in (2, 3):
        words = HammingCode(d).codewords()
        for a in words:
            for b in words:
                if a != b:
                    assert bin(a ^ b).count("1") >= 3


def test_translation_property_exhaustive_small_d():
    for d in (2, 3):
        code = HammingCode(d)
        for block in range(1 << code.block_len):
            s = code.syndrome(block)
            for i in range(1, code.block_len + 1):
                assert code.syndrome(code.flip(block, i)) == s ^ i


def test_translation_property_randomized_large_d():
    rng = np.random.default_rng(2)
    cases = 0
    while cases < 10_000:
        d = int(rng.integers(4, MAX_D + 1))
        code = HammingCode(d)
        block = int(rng.integers(0, 1 << code.block_len))
        i = int(rng.integers(1, code.block_len + 1))
        assert code.syndrome(code.flip(block, i)) == code.syndrome(block) ^ i
        cases += 1


def test_vectorized_syndromes_agree_with_scalar():
    rng = np.random.default_rng(3)
    for d in range(MIN_D, MAX_D + 1):
        code = HammingCode(d)
        bits = rng.integers(0, 2, size=(64, code.block_len)).astype(np.uint8)
        got = syndromes_of_bit_matrix(d, bits)
        for row, s in zip(bits, got):
            block = int("".join(map(str, row)), 2)
            assert code.syndrome(block) == int(s)


def test_all_block_syndrome_table():
    for d in (2, 3):
        code = HammingCode(d)
        table = syndromes_of_all_blocks(d)
        for block in range(1 << code.block_len):
            assert int(table[block]) == code.syndrome(block)


def test_d_range_validation():
    with pytest.raises(ValueError):
        HammingCode(1)
    with pytest.raises(ValueError):
        HammingCode(9)
    with pytest.raises(ValueError):
        HammingCode(2).syndrome(8)
