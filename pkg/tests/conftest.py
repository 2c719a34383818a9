"""Shared helpers for building random Gaussian networks in tests."""

import numpy as np

from modecomb import (
    SymplecticTransform,
    beamsplitter,
    phase_shift,
    two_mode_squeezer,
)


def embed(n_modes, transform, modes):
    """Embed a one- or two-mode transform into a 2N x 2N identity."""
    full = np.eye(2 * n_modes)
    idx = np.array([*modes, *(n_modes + m for m in modes)])
    full[np.ix_(idx, idx)] = transform.matrix
    return full


def random_passive(rng, n_modes, n_elements=10):
    """Random interferometer built from beamsplitters and phase shifts."""
    total = np.eye(2 * n_modes)
    for _ in range(n_elements):
        if n_modes > 1 and rng.random() < 0.6:
            a, b = rng.choice(n_modes, size=2, replace=False)
            element = beamsplitter(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            total = embed(n_modes, element, (int(a), int(b))) @ total
        else:
            m = int(rng.integers(n_modes))
            total = embed(n_modes, phase_shift(rng.uniform(0, 2 * np.pi)), (m,)) @ total
    return SymplecticTransform(total, n_modes)


def random_network(rng, n_modes, n_elements, r_max=0.5):
    """Random mix of squeezers, beamsplitters, and phases on n_modes."""
    total = np.eye(2 * n_modes)
    for _ in range(n_elements):
        kind = rng.integers(3)
        if kind == 0 and n_modes > 1:
            a, b = rng.choice(n_modes, size=2, replace=False)
            element = two_mode_squeezer(rng.uniform(0, r_max), rng.uniform(0, 2 * np.pi))
            total = embed(n_modes, element, (int(a), int(b))) @ total
        elif kind == 1 and n_modes > 1:
            a, b = rng.choice(n_modes, size=2, replace=False)
            element = beamsplitter(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            total = embed(n_modes, element, (int(a), int(b))) @ total
        else:
            m = int(rng.integers(n_modes))
            total = embed(n_modes, phase_shift(rng.uniform(0, 2 * np.pi)), (m,)) @ total
    return SymplecticTransform(total, n_modes)
