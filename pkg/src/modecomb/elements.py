"""Elementary Gaussian optical operations.

Factories for the building blocks every network in this package is composed
from: the phase-insensitive two-mode amplifier (a two-mode squeezer), beam
splitters, phase rotations, and the loss channel used to model detector
efficiency. All factories return :class:`~modecomb.gaussian.SymplecticTransform`
objects except :func:`loss_channel`, which is a non-unitary channel and acts
on states directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianState, SymplecticTransform

#: Tolerance on the internal consistency gain = cosh^2(r) of an AmplifierSpec.
GAIN_CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class AmplifierSpec:
    """Operating point of a phase-insensitive two-mode amplifier.

    The intensity gain and the squeezing parameter describe the same physical
    knob: ``gain = cosh^2(r)``. Both are stored so either view is available
    without recomputation, and consistency is enforced on construction.

    Attributes:
        gain (float): intensity gain, at least 1
        r (float): squeezing parameter, at least 0
        pump_phase (float): pump phase in radians, passed through to the
            two-mode squeezer acting on each mode pair
    """

    gain: float
    r: float
    pump_phase: float = 0.0

    def __post_init__(self):
        if self.gain < 1.0:
            raise ValueError(f"amplifier gain must be >= 1, got {self.gain}")
        if self.r < 0.0:
            raise ValueError(f"squeezing parameter must be >= 0, got {self.r}")
        expected = math.cosh(self.r) ** 2
        if abs(self.gain - expected) > GAIN_CONSISTENCY_TOL * max(1.0, expected):
            raise ValueError(
                f"inconsistent amplifier spec: gain={self.gain} but "
                f"cosh^2(r)={expected}; build via from_gain or from_squeezing"
            )

    @classmethod
    def from_gain(cls, gain, pump_phase=0.0):
        """Build a spec from the intensity gain."""
        return cls(gain=gain, r=gain_to_squeezing(gain), pump_phase=pump_phase)

    @classmethod
    def from_squeezing(cls, r, pump_phase=0.0):
        """Build a spec from the squeezing parameter."""
        return cls(gain=squeezing_to_gain(r), r=r, pump_phase=pump_phase)


def two_mode_squeezer(r, phase=0.0):
    """Two-mode squeezing transform on modes (a, b).

    This is the Gaussian action of a phase-insensitive amplifier: correlated
    quadratures such as ``x_a - x_b`` and ``p_a + p_b`` (for ``phase = 0``)
    have their variance multiplied by ``e^{-2r}``, while the conjugate
    combinations are anti-squeezed by ``e^{+2r}``.

    For ``phase = 0`` the action is::

        x_a' = c x_a + s x_b        p_a' = c p_a - s p_b
        x_b' = s x_a + c x_b        p_b' = -s p_a + c p_b

    with ``c = cosh r``, ``s = sinh r``. A nonzero ``phase`` rotates which
    quadrature combinations are squeezed.

    Args:
        r (float): squeezing parameter, at least 0; use ``phase`` rather than
            a negative ``r`` to flip sign conventions
        phase (float): pump phase in radians

    Returns:
        SymplecticTransform: 4x4 transform on two modes

    Raises:
        ValueError: if ``r`` is negative or not finite.
    """
    if not math.isfinite(r):
        raise ValueError(f"squeezing parameter must be finite, got {r}")
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    ch, sh = math.cosh(r), math.sinh(r)
    cp, sp = math.cos(phase), math.sin(phase)
    matrix = np.array(
        [
            [ch, sh * cp, 0.0, sh * sp],
            [sh * cp, ch, sh * sp, 0.0],
            [0.0, sh * sp, ch, -sh * cp],
            [sh * sp, 0.0, -sh * cp, ch],
        ]
    )
    return SymplecticTransform(matrix, 2)


def beamsplitter(theta, phi=0.0):
    """Beam splitter transform on modes (a, b).

    ``theta`` sets the mixing angle (transmission amplitude ``cos theta``)
    and ``phi`` the relative phase picked up on reflection. The balanced,
    real convention is ``theta = pi/4, phi = 0``, mixing::

        x_a' = (x_a + x_b)/sqrt(2)      x_b' = (-x_a + x_b)/sqrt(2)

    and identically for p. The matrix is orthogonal as well as symplectic.

    Args:
        theta (float): mixing angle in radians
        phi (float): reflection phase in radians

    Returns:
        SymplecticTransform: 4x4 passive transform on two modes
    """
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    matrix = np.array(
        [
            [ct, st * cp, 0.0, -st * sp],
            [-st * cp, ct, -st * sp, 0.0],
            [0.0, st * sp, ct, st * cp],
            [st * sp, 0.0, -st * cp, ct],
        ]
    )
    return SymplecticTransform(matrix, 2)


def balanced_beamsplitter():
    """The 50:50 beam splitter, ``beamsplitter(pi/4, 0)``."""
    return beamsplitter(math.pi / 4, 0.0)


def phase_shift(phi):
    """Single-mode phase-space rotation by ``phi``.

    Rotates the quadratures as ``x' = x cos phi + p sin phi`` and
    ``p' = -x sin phi + p cos phi``; ``phi = -pi/2`` relabels
    ``x -> -p, p -> x``.

    Args:
        phi (float): rotation angle in radians

    Returns:
        SymplecticTransform: 2x2 transform on one mode
    """
    c, s = math.cos(phi), math.sin(phi)
    matrix = np.array([[c, s], [-s, c]])
    return SymplecticTransform(matrix, 1)


def loss_channel(state, mode, eta):
    """Mix one mode with vacuum, keeping a fraction ``eta`` of the signal.

    On the selected mode the covariance blocks update as
    ``cov -> eta * cov + (1 - eta) * I`` with cross-correlations to other
    modes scaled by ``sqrt(eta)``; the mean scales by ``sqrt(eta)``. This is
    the standard model for detector efficiency and propagation loss.

    Args:
        state (GaussianState): input state
        mode (int): mode index to attenuate
        eta (float): transmitted fraction, in [0, 1]; ``eta = 1`` is the
            identity and ``eta = 0`` resets the mode to vacuum

    Returns:
        GaussianState: the attenuated state
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmission must be in [0, 1], got {eta}")
    n = state.n_modes
    if not 0 <= mode < n:
        raise ValueError(f"mode {mode} out of range for {n} modes")

    root = math.sqrt(eta)
    idx = np.array([mode, n + mode])
    mean = state.mean.copy()
    mean[idx] *= root
    cov = state.cov.copy()
    cov[idx, :] *= root
    cov[:, idx] *= root
    cov[idx, idx] += 1.0 - eta
    return GaussianState(n, mean, cov)


def gain_to_squeezing(gain):
    """Squeezing parameter of a phase-insensitive amplifier of given gain.

    Inverts ``gain = cosh^2(r)``; exact inverse of :func:`squeezing_to_gain`
    to within 1e-12 round-trip error.

    Args:
        gain (float): intensity gain, at least 1

    Returns:
        float: squeezing parameter ``r = arccosh(sqrt(gain))``
    """
    if gain < 1.0:
        raise ValueError(f"amplifier gain must be >= 1, got {gain}")
    return math.acosh(math.sqrt(gain))


def squeezing_to_gain(r):
    """Intensity gain ``cosh^2(r)`` of an amplifier at squeezing ``r``."""
    if r < 0.0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    return math.cosh(r) ** 2
