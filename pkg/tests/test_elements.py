"""Tests for elementary Gaussian elements and the gain/squeezing dictionary."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modecomb import (
    AmplifierSpec,
    Witness,
    apply_symplectic,
    balanced_beamsplitter,
    beamsplitter,
    check_physicality,
    gain_to_squeezing,
    loss_channel,
    phase_shift,
    squeezing_to_gain,
    two_mode_squeezer,
    vacuum_state,
    witness_variance,
)

# exp(-2r) for r = 1, the two-mode squeezed witness floor
EXP_MINUS_TWO = 0.1353352832366127
# 3 - 2*sqrt(2), the same floor expressed through G = 2
G2_WITNESS_FLOOR = 0.1715728752538097


def test_amplifier_spec_roundtrips_gain_and_squeezing():
    spec = AmplifierSpec.from_gain(2.0)
    assert spec.gain == 2.0
    assert spec.r == pytest.approx(math.acosh(math.sqrt(2.0)), abs=1e-15)

    spec2 = AmplifierSpec.from_squeezing(spec.r)
    assert spec2.gain == pytest.approx(2.0, rel=1e-14)

    # Unit gain is the identity amplifier.
    assert AmplifierSpec.from_gain(1.0).r == 0.0


def test_amplifier_spec_rejects_inconsistent_pairs():
    with pytest.raises(ValueError):
        AmplifierSpec(gain=2.0, r=1.0)
    with pytest.raises(ValueError):
        AmplifierSpec.from_gain(0.5)
    with pytest.raises(ValueError):
        AmplifierSpec.from_squeezing(-0.1)


def test_gain_squeezing_dictionary():
    assert gain_to_squeezing(1.0) == 0.0
    assert gain_to_squeezing(2.0) == pytest.approx(0.881373587019543, abs=1e-15)
    assert squeezing_to_gain(0.0) == 1.0
    for gain in (1.0, 1.5, 2.0, 5.0, 25.0):
        assert squeezing_to_gain(gain_to_squeezing(gain)) == pytest.approx(
            gain, rel=1e-12
        )
    with pytest.raises(ValueError):
        gain_to_squeezing(0.99)
    with pytest.raises(ValueError):
        squeezing_to_gain(-1e-3)


def test_two_mode_squeezer_builds_epr_correlations():
    state = apply_symplectic(vacuum_state(2), two_mode_squeezer(1.0))
    x_diff = Witness.from_terms(2, {(0, "x"): 1.0, (1, "x"): -1.0})
    p_sum = Witness.from_terms(2, {(0, "p"): 1.0, (1, "p"): 1.0})
    assert witness_variance(state, x_diff) == pytest.approx(EXP_MINUS_TWO, abs=1e-14)
    assert witness_variance(state, p_sum) == pytest.approx(EXP_MINUS_TWO, abs=1e-14)
    # Single-mode marginals are thermal: variance cosh(2r) in every quadrature.
    assert state.cov[0, 0] == pytest.approx(math.cosh(2.0), rel=1e-14)
    assert state.cov[2, 2] == pytest.approx(math.cosh(2.0), rel=1e-14)


def test_two_mode_squeezer_zero_strength_is_identity():
    assert np.array_equal(two_mode_squeezer(0.0).matrix, np.eye(4))


def test_two_mode_squeezer_rejects_bad_strength():
    with pytest.raises(ValueError):
        two_mode_squeezer(-0.5)
    with pytest.raises(ValueError):
        two_mode_squeezer(float("nan"))


def test_two_mode_squeezer_pump_phase_rotates_correlation():
    # With pump phase pi the correlated quadrature pair swaps sign.
    state = apply_symplectic(vacuum_state(2), two_mode_squeezer(1.0, math.pi))
    x_sum = Witness.from_terms(2, {(0, "x"): 1.0, (1, "x"): 1.0})
    assert witness_variance(state, x_sum) == pytest.approx(EXP_MINUS_TWO, abs=1e-14)


def test_balanced_beamsplitter_splits_power_evenly():
    bs = balanced_beamsplitter()
    assert np.allclose(bs.matrix @ bs.matrix.T, np.eye(4), atol=1e-15)
    # A single-mode displacement splits 50/50 between the outputs.
    amplitude = bs.matrix @ np.array([1.0, 0.0, 0.0, 0.0])
    assert amplitude[0] ** 2 == pytest.approx(0.5, abs=1e-15)
    assert amplitude[1] ** 2 == pytest.approx(0.5, abs=1e-15)


def test_beamsplitter_is_passive_and_periodic():
    bs = beamsplitter(0.3, 1.1)
    assert np.allclose(bs.matrix @ bs.matrix.T, np.eye(4), atol=1e-14)
    # theta = 0 is the identity; theta = pi/2 swaps modes up to phase.
    assert np.allclose(beamsplitter(0.0).matrix, np.eye(4))
    swap = beamsplitter(math.pi / 2.0).matrix
    assert abs(swap[0, 1]) == pytest.approx(1.0, abs=1e-15)
    assert swap[0, 0] == pytest.approx(0.0, abs=1e-15)


def test_phase_shift_quarter_turn_exchanges_quadratures():
    quarter = phase_shift(-math.pi / 2.0).matrix
    # x -> -p, p -> x under a -pi/2 rotation
    x_out = quarter @ np.array([1.0, 0.0])
    assert x_out == pytest.approx([0.0, 1.0], abs=1e-15)
    full_turn = phase_shift(2.0 * math.pi).matrix
    assert np.allclose(full_turn, np.eye(2), atol=1e-15)


def test_loss_channel_interpolates_to_vacuum():
    state = apply_symplectic(vacuum_state(2), two_mode_squeezer(1.0))
    untouched = loss_channel(state, 0, 1.0)
    assert np.allclose(untouched.cov, state.cov, atol=1e-15)

    dark = loss_channel(state, 0, 0.0)
    assert np.allclose(dark.cov[0, :], np.eye(4)[0], atol=1e-15)
    assert np.allclose(dark.cov[2, :], np.eye(4)[2], atol=1e-15)


def test_loss_channel_matches_closed_form_on_witness():
    # TMS -> loss on both modes -> witness variance equals 1 + eta(e^{-2r}-1).
    for eta in (1.0, 0.99, 0.9, 0.5):
        state = apply_symplectic(vacuum_state(2), two_mode_squeezer(1.0))
        state = loss_channel(loss_channel(state, 0, eta), 1, eta)
        w = Witness.from_terms(2, {(0, "x"): 1.0, (1, "x"): -1.0})
        expected = 1.0 + eta * (EXP_MINUS_TWO - 1.0)
        assert witness_variance(state, w) == pytest.approx(expected, abs=1e-12)


def test_loss_channel_rejects_bad_arguments():
    state = vacuum_state(2)
    with pytest.raises(ValueError):
        loss_channel(state, 2, 0.5)
    with pytest.raises(ValueError):
        loss_channel(state, 0, 1.5)
    with pytest.raises(ValueError):
        loss_channel(state, 0, -0.1)


@settings(deadline=None, max_examples=60)
@given(
    r=st.floats(min_value=0.0, max_value=2.0),
    eta=st.floats(min_value=0.0, max_value=1.0),
    mode=st.integers(min_value=0, max_value=1),
)
def test_loss_never_breaks_physicality(r, eta, mode):
    state = apply_symplectic(vacuum_state(2), two_mode_squeezer(r))
    lossy = loss_channel(state, mode, eta)
    ok, min_eig = check_physicality(lossy)
    assert ok, f"min eig {min_eig} at r={r}, eta={eta}"


def test_gain_identity_matches_squeezing_form_on_grid():
    # 1 + 2*eta*(G - 1 - sqrt(G(G-1))) == 1 + eta*(e^{-2r} - 1) with G = cosh^2 r
    for gain in (1.0, 1.2, 1.5, 2.0, 3.0, 4.0):
        r = gain_to_squeezing(gain)
        for eta in (1.0, 0.99, 0.95, 0.8):
            via_gain = 1.0 + 2.0 * eta * (gain - 1.0 - math.sqrt(gain * (gain - 1.0)))
            via_r = 1.0 + eta * (math.exp(-2.0 * r) - 1.0)
            assert via_gain == pytest.approx(via_r, abs=1e-12)
