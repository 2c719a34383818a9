"""Tests for the passive-squeeze-passive factorization."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modecomb import (
    Decomposition,
    SymplecticTransform,
    balanced_beamsplitter,
    beamsplitter,
    decompose,
    phase_shift,
    recompose,
    two_mode_squeezer,
)

from conftest import embed, random_network, random_passive


def _roundtrip_error(transform):
    return np.linalg.norm(recompose(decompose(transform)).matrix - transform.matrix)


def test_two_mode_squeezer_splits_into_equal_single_mode_squeezers():
    result = decompose(two_mode_squeezer(0.8))
    assert result.squeeze == pytest.approx([0.8, 0.8], abs=1e-12)
    assert _roundtrip_error(two_mode_squeezer(0.8)) < 1e-12


def test_identity_decomposes_to_zero_squeezing():
    result = decompose(SymplecticTransform.identity(3))
    assert result.squeeze == pytest.approx([0.0, 0.0, 0.0], abs=0.0)
    assert _roundtrip_error(SymplecticTransform.identity(3)) == 0.0


def test_passive_network_short_circuits():
    # A passive input needs no squeezing; the factorization is exact.
    mixed = balanced_beamsplitter().compose(phase_shift_pair())
    result = decompose(mixed)
    assert result.squeeze == pytest.approx([0.0, 0.0], abs=0.0)
    assert np.allclose(recompose(result).matrix, mixed.matrix, atol=1e-14)


def phase_shift_pair():
    full = embed(2, phase_shift(0.4), (0,)) @ embed(2, phase_shift(-1.2), (1,))
    return SymplecticTransform(full, 2)


def test_squeeze_spectrum_is_sorted_descending():
    rng = np.random.default_rng(2)
    for _ in range(10):
        result = decompose(random_network(rng, 4, 12, r_max=1.0))
        spectrum = np.asarray(result.squeeze)
        assert np.all(np.diff(spectrum) <= 1e-12)
        assert np.all(spectrum >= 0.0)


def test_random_networks_recompose():
    rng = np.random.default_rng(31)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 7))
        transform = random_network(rng, n, int(rng.integers(1, 16)))
        worst = max(worst, _roundtrip_error(transform))
    assert worst < 1e-10


def test_degenerate_spectrum_recomposes():
    # Two identical squeezers on disjoint pairs: a fourfold-degenerate
    # spectrum exercising the subspace-gauge branch.
    full = embed(4, two_mode_squeezer(0.6), (0, 1)) @ embed(
        4, two_mode_squeezer(0.6), (2, 3)
    )
    transform = SymplecticTransform(full, 4)
    result = decompose(transform)
    assert result.squeeze == pytest.approx([0.6] * 4, abs=1e-12)
    assert _roundtrip_error(transform) < 1e-11


def test_spectrum_invariant_under_passive_conjugation():
    rng = np.random.default_rng(5)
    base = random_network(rng, 4, 10, r_max=1.0)
    reference = np.asarray(decompose(base).squeeze)
    for _ in range(10):
        left = random_passive(rng, 4)
        right = random_passive(rng, 4)
        conjugated = left.compose(base).compose(right)
        spectrum = np.asarray(decompose(conjugated).squeeze)
        assert np.allclose(spectrum, reference, atol=1e-10)


@settings(deadline=None, max_examples=40)
@given(r=st.floats(min_value=0.0, max_value=3.0))
def test_embedded_squeezer_spectrum(r):
    full = embed(3, two_mode_squeezer(r), (0, 2))
    result = decompose(SymplecticTransform(full, 3))
    assert result.squeeze == pytest.approx([r, r, 0.0], abs=1e-9)


def test_decomposition_validates_factors():
    good = decompose(two_mode_squeezer(0.5))
    with pytest.raises(ValueError):
        # An active transform cannot serve as a passive factor.
        Decomposition(
            passive_out=two_mode_squeezer(0.5),
            squeeze=good.squeeze,
            passive_in=good.passive_in,
        )
    with pytest.raises(ValueError):
        Decomposition(
            passive_out=good.passive_out,
            squeeze=(0.1, 0.5),  # not sorted descending
            passive_in=good.passive_in,
        )
    with pytest.raises(ValueError):
        Decomposition(
            passive_out=good.passive_out,
            squeeze=(0.5, -0.1),
            passive_in=good.passive_in,
        )
    with pytest.raises(ValueError):
        Decomposition(
            passive_out=good.passive_out,
            squeeze=(0.5,),
            passive_in=good.passive_in,
        )


def test_decomposition_factors_are_orthogonal_symplectics():
    rng = np.random.default_rng(9)
    result = decompose(random_network(rng, 3, 8))
    for factor in (result.passive_out, result.passive_in):
        m = factor.matrix
        assert np.allclose(m @ m.T, np.eye(6), atol=1e-10)


def test_single_beamsplitter_angle_sweep_recomposes():
    for theta in np.linspace(0.0, np.pi, 7):
        transform = beamsplitter(float(theta), 0.3)
        assert _roundtrip_error(transform) < 1e-12
