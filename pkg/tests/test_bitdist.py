"""Tests for exact distributions over bit strings."""

import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svcondense.bitdist import (
    BitString,
    DimensionMismatchError,
    InconsistentConditioningError,
    JointDistribution,
    SizeLimitError,
    condition_on_prefix,
    conditional_bit_given_rest,
    dumps_distribution,
    l1_distance,
    load_distribution,
    loads_distribution,
    max_exact_n,
    min_entropy,
    pushforward,
    shannon_entropy,
    unit_vector,
)
from svcondense.condenser import CondenserMap
from svcondense.sv_models import iid_biased


def test_bitstring_msb_first_extraction():
    x = BitString.from_str("10110")
    assert x.n == 5 and x.value == 0b10110
    assert [x.bit(i) for i in range(1, 6)] == [1, 0, 1, 1, 0]
    assert str(x) == "10110"


def test_bitstring_xor_and_units():
    x = BitString.from_str("1010")
    e2 = unit_vector(4, 2)
    assert str(e2) == "0100"
    assert str(x.xor(e2)) == "1110"
    assert unit_vector(4, 0).value == 0


def test_bitstring_validation():
    with pytest.raises(ValueError):
        BitString(3, 8)
    with pytest.raises(ValueError):
        BitString.from_str("10a")
    with pytest.raises(ValueError):
        BitString(3, 1).bit(4)


def test_distribution_validation():
    with pytest.raises(DimensionMismatchError):
        JointDistribution(2, [0.5, 0.5])
    with pytest.raises(ValueError):
        JointDistribution(1, [0.7, 0.4])
    with pytest.raises(ValueError):
        JointDistribution(1, [-0.1, 1.1])
    with pytest.raises(SizeLimitError):
        JointDistribution(25, np.zeros(1 << 25))


def test_distribution_immutable():
    mu = JointDistribution.uniform(2)
    with pytest.raises(ValueError):
        mu.probs[0] = 1.0
    with pytest.raises(AttributeError):
        mu.n = 3


def test_max_exact_n_env_override(monkeypatch):
    assert max_exact_n() == 20
    monkeypatch.setenv("SVC_MAX_N", "10")
    assert max_exact_n() == 10
    with pytest.raises(SizeLimitError):
        JointDistribution.uniform(11)
    monkeypatch.setenv("SVC_MAX_N", "30")
    with pytest.raises(SizeLimitError):
        max_exact_n()


def test_min_entropy_uniform_and_point_mass():
    assert min_entropy(JointDistribution.uniform(3)) == pytest.approx(3.0, abs=1e-12)
    assert min_entropy(JointDistribution.point_mass(4, 9)) == pytest.approx(0.0)


def test_min_entropy_iid_closed_form_vs_direct_max():
    mu = iid_biased(4, 0.75)
    # independent route: explicit max over the 16-entry vector
    direct = -math.log2(max(float(p) for p in mu.probs))
    assert direct == pytest.approx(4 * math.log2(4 / 3), abs=1e-12)
    assert min_entropy(mu) == pytest.approx(direct, abs=1e-12)


def test_shannon_entropy_examples():
    assert shannon_entropy(JointDistribution.uniform(3)) == pytest.approx(3.0)
    assert shannon_entropy(JointDistribution.point_mass(3, 5)) == 0.0
    mu = JointDistribution(1, [0.25, 0.75])
    expected = 0.75 * math.log2(4 / 3) + 0.25 * math.log2(4)
    assert shannon_entropy(mu) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.8113, abs=5e-5)


def test_l1_distance_examples():
    mu = JointDistribution(1, [0.25, 0.75])
    uni = JointDistribution.uniform(1)
    assert l1_distance(mu, mu) == 0.0
    assert l1_distance(mu, uni) == pytest.approx(0.5)
    a = JointDistribution.point_mass(2, 0)
    b = JointDistribution.point_mass(2, 3)
    assert l1_distance(a, b) == pytest.approx(2.0)
    with pytest.raises(DimensionMismatchError):
        l1_distance(mu, JointDistribution.uniform(2))


def test_pushforward_point_mass_and_constant():
    f = CondenserMap.structured(2, 1)
    x = 0b101
    out = pushforward(JointDistribution.point_mass(3, x), f)
    assert out.probs[f(x)] == 1.0
    const = CondenserMap.constant(3, 2, value=1)
    out2 = pushforward(iid_biased(3, 0.3), const)
    assert out2.probs == pytest.approx([0.0, 1.0, 0.0, 0.0], abs=1e-12)


def test_pushforward_uniform_through_coset_labeler():
    # oracle: each syndrome class of the length-3 code has exactly 2 members
    f = CondenserMap.structured(2, 1)
    counts = np.bincount(f.table(), minlength=4)
    assert counts.tolist() == [2, 2, 2, 2]
    out = pushforward(JointDistribution.uniform(3), f)
    assert np.allclose(out.probs, 0.25, atol=1e-12)


def test_pushforward_width_mismatch():
    with pytest.raises(DimensionMismatchError):
        pushforward(JointDistribution.uniform(4), CondenserMap.structured(2, 1))


def test_condition_on_prefix_uniform_and_iid():
    uni = JointDistribution.uniform(4)
    got = condition_on_prefix(uni, "01")
    assert np.allclose(got.probs, 0.25)
    mu = iid_biased(4, 0.7)
    got = condition_on_prefix(mu, "10")
    assert np.allclose(got.probs, iid_biased(2, 0.7).probs, atol=1e-12)


def test_condition_on_prefix_normalizes():
    mu = JointDistribution(2, [0.2, 0.3, 0.0, 0.5])
    got = condition_on_prefix(mu, "0")
    assert np.allclose(got.probs, [0.4, 0.6])


def test_condition_on_zero_mass_prefix_raises():
    mu = JointDistribution(2, [0.0, 0.0, 0.4, 0.6])
    with pytest.raises(InconsistentConditioningError):
        condition_on_prefix(mu, "0")
    with pytest.raises(DimensionMismatchError):
        condition_on_prefix(mu, "00")


def test_conditional_bit_given_rest():
    uni = JointDistribution.uniform(3)
    for i in (1, 2, 3):
        for rest in ("00", "01", "10", "11"):
            assert conditional_bit_given_rest(uni, i, rest) == pytest.approx(0.5)
    mu = iid_biased(3, 0.75)
    for i in (1, 2, 3):
        for rest in ("00", "11"):
            assert conditional_bit_given_rest(mu, i, rest) == pytest.approx(0.75)


def test_conditional_bit_undefined_is_none():
    mu = JointDistribution(2, [0.5, 0.5, 0.0, 0.0])
    assert conditional_bit_given_rest(mu, 2, "1") is None


def _random_distribution(rng, n):
    probs = rng.random(1 << n)
    return JointDistribution(n, probs / probs.sum())


def test_entropy_chain_rule_on_random_distributions():
    # H(X) = H(first a bits) + sum over prefixes of Pr[prefix] * H(suffix)
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        a = int(rng.integers(1, n))
        mu = _random_distribution(rng, n)
        marginal = mu.probs.reshape(1 << a, 1 << (n - a)).sum(axis=1)
        total = shannon_entropy(JointDistribution(a, marginal))
        for prefix_value in range(1 << a):
            w = marginal[prefix_value]
            if w == 0:
                continue
            suffix = condition_on_prefix(mu, BitString(a, prefix_value))
            total += w * shannon_entropy(suffix)
        assert total == pytest.approx(shannon_entropy(mu), abs=1e-6)


def test_pushforward_entropy_never_exceeds_input_or_width():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(1, n + 1))
        mu = _random_distribution(rng, n)
        f = CondenserMap.from_table(n, m, rng.integers(0, 1 << m, size=1 << n))
        h_out = shannon_entropy(pushforward(mu, f))
        assert h_out <= min(m, shannon_entropy(mu)) + 1e-9


@st.composite
def distributions(draw, max_n=4):
    n = draw(st.integers(min_value=1, max_value=max_n))
    raw = draw(
        st.lists(
            st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
            min_size=1 << n,
            max_size=1 << n,
        )
    )
    total = sum(raw)
    if total <= 0:
        raw = [1.0] * (1 << n)
        total = float(1 << n)
    return JointDistribution(n, np.array(raw) / total)


@given(distributions())
@settings(max_examples=150, deadline=None)
def test_shannon_at_least_min_entropy(mu):
    assert shannon_entropy(mu) >= min_entropy(mu) - 1e-9


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_l1_is_a_metric(data):
    n = data.draw(st.integers(min_value=1, max_value=3))
    mu = data.draw(distributions(max_n=n).filter(lambda d: d.n == n))
    nu = data.draw(distributions(max_n=n).filter(lambda d: d.n == n))
    rho = data.draw(distributions(max_n=n).filter(lambda d: d.n == n))
    assert l1_distance(mu, nu) == pytest.approx(l1_distance(nu, mu), abs=1e-12)
    assert l1_distance(mu, rho) <= l1_distance(mu, nu) + l1_distance(nu, rho) + 1e-12


def test_distribution_file_round_trip_is_exact():
    rng = np.random.default_rng(3)
    probs = rng.random(8)
    mu = JointDistribution(3, probs / probs.sum())
    text = dumps_distribution(mu)
    back = loads_distribution(text)
    assert back.n == mu.n
    assert np.array_equal(back.probs, mu.probs)
    # every probability token carries 17 significant digits
    assert text.count("e") >= 8


def test_load_distribution_rejects_bad_schema():
    from svcondense.bitdist import FileFormatError

    with pytest.raises(FileFormatError):
        loads_distribution('{"n": 2}')
    with pytest.raises(FileFormatError):
        loads_distribution('{"n": 1, "probs": [0.5, 0.6]}')
    good = io.StringIO('{"n": 1, "probs": [0.5, 0.5]}')
    assert load_distribution(good).n == 1
