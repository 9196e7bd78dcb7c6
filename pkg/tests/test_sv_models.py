"""Tests for SV source checkers and generators."""

import io
import json
import math

import numpy as np
import pytest

from svcondense.bitdist import JointDistribution, min_entropy
from svcondense.sv_models import (
    PotentialStrongSV,
    PrefixAdversary,
    SVParams,
    adversary_from_distribution,
    adversary_from_obj,
    adversary_to_obj,
    dump_adversary,
    iid_biased,
    is_strong_sv,
    is_sv,
    load_adversary,
    materialize,
    random_adversary,
    random_potential,
    random_potential_strong_sv,
)


def test_sv_params():
    params = SVParams(4, 0.5)
    assert params.p == 0.25 and params.q == 0.75
    assert params.p + params.q == 1.0
    with pytest.raises(ValueError):
        SVParams(4, 1.0)
    with pytest.raises(ValueError):
        SVParams(4, -0.1)


def test_is_sv_uniform_and_iid():
    uni = JointDistribution.uniform(4)
    for delta in (0.0, 0.3, 0.9):
        assert is_sv(uni, delta)
    assert is_sv(iid_biased(4, 0.75), 0.5)
    assert not is_sv(iid_biased(4, 0.76), 0.5)


def test_is_sv_point_mass_violation_detail():
    check = is_sv(JointDistribution.point_mass(3, 0b111), 0.5)
    assert not check
    assert check.violation.index == 1
    assert check.violation.prefix == ""
    assert check.violation.probability == pytest.approx(1.0)


def test_is_strong_sv_examples():
    for delta in (0.0, 0.25, 0.75):
        assert is_strong_sv(JointDistribution.uniform(3), delta)
        q = (1 + delta) / 2
        assert is_strong_sv(iid_biased(3, q), delta)
    # tighter bias than the source's own: must fail
    assert not is_strong_sv(iid_biased(3, 0.75), 0.4)


def test_greedy_singleton_is_sv_but_not_strong():
    # plain SV membership does not imply strong membership
    from svcondense.attacks import greedy_sv_for_set

    adv = greedy_sv_for_set(2, [0b11], 0.5)
    mu = materialize(adv)
    assert is_sv(mu, 0.5)
    check = is_strong_sv(mu, 0.5)
    assert not check
    assert check.violation.probability == pytest.approx(0.9)


def test_iid_biased_edges():
    assert np.allclose(iid_biased(3, 0.5).probs, 0.125)
    point = iid_biased(3, 1.0)
    assert point.probs[0b111] == 1.0
    assert min_entropy(iid_biased(4, 0.75)) == pytest.approx(
        4 * math.log2(4 / 3), abs=1e-12
    )


def test_materialize_constant_strategies():
    n = 3
    half = PrefixAdversary(n, 0.5, tuple(np.full(1 << l, 0.5) for l in range(n)))
    assert np.allclose(materialize(half).probs, 0.125)
    q = 0.75
    const = PrefixAdversary(n, 0.5, tuple(np.full(1 << l, q) for l in range(n)))
    assert np.allclose(materialize(const).probs, iid_biased(n, q).probs, atol=1e-12)


def test_materialize_greedy_singleton_hand_product():
    # A = {11}, delta = 0.5: branch toward 11 gets q = 0.75 twice, and the
    # dead 0-subtree resolves its tie toward the 0-branch.
    from svcondense.attacks import greedy_sv_for_set

    mu = materialize(greedy_sv_for_set(2, [0b11], 0.5))
    assert mu.probs == pytest.approx([0.1875, 0.0625, 0.1875, 0.5625], abs=1e-12)
    assert mu.probs[0b11] == pytest.approx(0.75**2, abs=1e-12)


def test_prefix_adversary_validation():
    with pytest.raises(ValueError):
        PrefixAdversary(2, 0.5, (np.array([0.9]), np.array([0.5, 0.5])))
    with pytest.raises(ValueError):
        PrefixAdversary(2, 0.5, (np.array([0.5]),))


def test_adversary_strategy_map_round_trip():
    adv = random_adversary(3, 0.5, seed=42)
    obj = adversary_to_obj(adv)
    assert set(obj) == {"n", "delta", "strategy"}
    assert obj["strategy"].keys() == {"", "0", "1", "00", "01", "10", "11"}
    back = adversary_from_obj(obj)
    assert np.allclose(materialize(back).probs, materialize(adv).probs)

    buf = io.StringIO()
    dump_adversary(adv, buf)
    buf.seek(0)
    again = load_adversary(buf)
    assert materialize(again) == materialize(back)


def test_adversary_from_obj_rejects_bad_files():
    from svcondense.bitdist import FileFormatError

    with pytest.raises(FileFormatError):
        adversary_from_obj({"n": 2, "delta": 0.5})
    with pytest.raises(FileFormatError):
        adversary_from_obj({"n": 2, "delta": 0.5, "strategy": {"": 0.5}})
    with pytest.raises(FileFormatError):
        adversary_from_obj({"n": 2, "delta": 0.5, "strategy": {"": 0.9, "0": 0.5, "1": 0.5}})


def test_extract_then_materialize_is_identity():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        adv = random_adversary(n, 0.6, seed=int(rng.integers(2**63)))
        mu = materialize(adv)
        again = materialize(adversary_from_distribution(mu, 0.6))
        assert np.allclose(again.probs, mu.probs, atol=1e-12)


def test_potential_zero_gives_uniform():
    pot = PotentialStrongSV(3, 0.5, np.zeros(8))
    assert np.allclose(pot.distribution().probs, 0.125)


def test_potential_single_coordinate():
    # potential(x) = x_1 at delta = 0.5: first bit biased to 0.75, rest uniform
    n = 3
    idx = np.arange(1 << n)
    potential = ((idx >> (n - 1)) & 1).astype(float)
    mu = PotentialStrongSV(n, 0.5, potential).distribution()
    expected = np.where(potential > 0, 0.75 / 4, 0.25 / 4)
    assert np.allclose(mu.probs, expected, atol=1e-12)


def test_potential_rejects_steep_edges():
    n = 2
    with pytest.raises(ValueError):
        PotentialStrongSV(n, 0.5, np.array([0.0, 2.0, 0.0, 0.0]))


def test_random_potential_sources_are_strong_sv():
    rng = np.random.default_rng(9)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        delta = float(rng.choice([0.1, 0.25, 0.5, 0.9]))
        mu = random_potential_strong_sv(n, delta, int(rng.integers(2**63)))
        assert is_strong_sv(mu, delta)


def test_random_potential_is_deterministic_per_seed():
    a = random_potential_strong_sv(4, 0.5, 123)
    b = random_potential_strong_sv(4, 0.5, 123)
    c = random_potential_strong_sv(4, 0.5, 124)
    assert np.array_equal(a.probs, b.probs)
    assert not np.array_equal(a.probs, c.probs)


def test_strong_implies_plain_on_seeded_sources():
    rng = np.random.default_rng(17)
    count = 0
    while count < 200:
        n = 2 + count % 5  # widths 2..6
        delta = (0.1, 0.3, 0.5, 0.7, 0.9)[count % 5]
        mu = random_potential_strong_sv(n, delta, int(rng.integers(2**63)))
        assert is_strong_sv(mu, delta)
        assert is_sv(mu, delta)
        count += 1


def test_sv_min_entropy_floor():
    rng = np.random.default_rng(23)
    for _ in range(100):
        n = int(rng.integers(2, 8))
        delta = float(rng.choice([0.2, 0.5, 0.8]))
        seed = int(rng.integers(2**63))
        for mu in (
            materialize(random_adversary(n, delta, seed)),
            random_potential_strong_sv(n, delta, seed),
        ):
            floor = n * math.log2(2 / (1 + delta))
            assert min_entropy(mu) >= floor - 1e-6


def test_random_potential_edge_scale_in_unit_interval():
    for seed in range(10):
        pot = random_potential(5, 0.5, seed)
        worst = 0.0
        arr = pot.potential
        for i in range(1, 6):
            block = arr.reshape(1 << (i - 1), 2, 1 << (5 - i))
            worst = max(worst, float(np.abs(block[:, 1, :] - block[:, 0, :]).max()))
        assert 0.0 < worst <= 1.0 + 1e-12
