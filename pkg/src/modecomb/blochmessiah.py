"""Passive-squeeze-passive factorization of Gaussian networks.

Any symplectic matrix S factors as ``S = P_out * D * P_in`` with orthogonal
symplectic (passive, photon-number-preserving) factors and a diagonal
squeezing core ``D = diag(e^{r_1}..e^{r_n}, e^{-r_1}..e^{-r_n})``. Physically:
every multimode nonlinear network is equivalent to an interferometer, a bank
of independent single-mode squeezers, and a second interferometer.

The construction runs in the complex (annihilation-operator) picture, where
S corresponds to the Bogoliubov pair ``a' = E a + F conj(a)``. A singular
value decomposition ``E = A cosh(r) B^+`` supplies the passive factors and
the squeeze spectrum; a Takagi gauge rotation inside each degenerate
singular-value group aligns the anomalous block ``F`` with ``sinh(r)``.
Because the passive factors are built directly from unitary matrices, they
are orthogonal symplectic to machine precision even when the spectrum is
degenerate or nearly so.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .gaussian import SymplecticTransform

#: Frobenius-norm tolerance for detecting passive (orthogonal) factors.
ORTHOGONALITY_TOL = 1e-10

#: Squeeze values below this magnitude are clamped to zero.
SQUEEZE_CLAMP = 1e-10

#: Relative gap below which neighboring singular values are treated as one
#: degenerate group. Unresolved subspaces are re-resolved by the Takagi
#: step, so merging is safe; splitting a too-small gap is not, because
#: singular subspace accuracy degrades as (machine epsilon / gap).
NEAR_DEGENERACY_GAP = 1e-4


@dataclass(frozen=True, eq=False)
class Decomposition:
    """A passive-squeeze-passive factorization.

    Attributes:
        passive_out (SymplecticTransform): orthogonal symplectic factor
            applied last
        squeeze (array[float]): per-mode squeeze parameters, nonnegative and
            sorted descending
        passive_in (SymplecticTransform): orthogonal symplectic factor
            applied first
    """

    passive_out: SymplecticTransform
    squeeze: np.ndarray
    passive_in: SymplecticTransform

    def __post_init__(self):
        n = self.passive_out.n_modes
        if self.passive_in.n_modes != n:
            raise ValueError("passive factors act on different mode counts")
        squeeze = np.asarray(self.squeeze, dtype=float).reshape(-1)
        if squeeze.size != n:
            raise ValueError(
                f"need one squeeze value per mode: got {squeeze.size} for "
                f"{n} modes"
            )
        if np.any(squeeze < 0):
            raise ValueError("squeeze values must be >= 0")
        if np.any(np.diff(squeeze) > 1e-12):
            raise ValueError("squeeze values must be sorted descending")
        for name, factor in (
            ("passive_out", self.passive_out),
            ("passive_in", self.passive_in),
        ):
            defect = np.linalg.norm(
                factor.matrix.T @ factor.matrix - np.eye(2 * n)
            )
            if defect > ORTHOGONALITY_TOL:
                raise ValueError(
                    f"{name} is not orthogonal: |P^T P - I| = {defect:.3e}"
                )
        object.__setattr__(self, "squeeze", squeeze)

    @property
    def n_modes(self):
        return self.passive_out.n_modes


def _squeeze_core(squeeze):
    """The diagonal symplectic ``diag(e^r, e^{-r})`` for squeeze vector r."""
    return np.diag(np.concatenate([np.exp(squeeze), np.exp(-squeeze)]))


def _degenerate_groups(values):
    """Contiguous (start, count) runs of nearly-equal descending values."""
    threshold = NEAR_DEGENERACY_GAP * values[0] if len(values) else 0.0
    groups = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i - 1] - values[i] > threshold:
            groups.append((start, i - start))
            start = i
    return groups


def _complex_blocks(matrix):
    """Bogoliubov blocks (E, F) of a quadrature-ordered symplectic matrix.

    With ``a = (x + ip) / sqrt(2)`` the action ``(x, p) -> S (x, p)``
    reads ``a' = E a + F conj(a)``.
    """
    n = matrix.shape[0] // 2
    a = matrix[:n, :n]
    b = matrix[:n, n:]
    c = matrix[n:, :n]
    d = matrix[n:, n:]
    e_block = 0.5 * ((a + d) + 1j * (c - b))
    f_block = 0.5 * ((a - d) + 1j * (b + c))
    return e_block, f_block


def _real_orthogonal(unitary):
    """The orthogonal symplectic matrix acting as ``unitary`` on amplitudes."""
    x = np.real(unitary)
    y = np.imag(unitary)
    return np.block([[x, -y], [y, x]])


def _takagi(block):
    """Autonne-Takagi factorization of a complex symmetric matrix.

    Returns (W, d) with W unitary and d nonnegative descending such that
    ``block = W diag(d) W^T``. Within degenerate singular-value subspaces
    the factor is completed via a matrix square root.
    """
    if block.shape == (1, 1):
        value = block[0, 0]
        unitary = np.array([[np.exp(0.5j * np.angle(value))]])
        return unitary, np.array([abs(value)])
    v, svals, wh = np.linalg.svd(block)
    w = wh.conj().T
    roots = []
    for start, count in _degenerate_groups(svals):
        sub = slice(start, start + count)
        roots.append(scipy.linalg.sqrtm(v[:, sub].T @ w[:, sub]))
    unitary = v @ np.conj(scipy.linalg.block_diag(*roots))
    return unitary, svals


def decompose(transform):
    """Factor a symplectic transform into passive-squeeze-passive form.

    Args:
        transform (SymplecticTransform): the network to factor

    Returns:
        Decomposition: factors satisfying
        ``recompose(result) == transform`` to high accuracy; the squeeze
        spectrum (the log-singular-value pairs of the matrix) is unique,
        while the passive factors are gauge-dependent for degenerate
        squeeze values.
    """
    s = transform.matrix
    n = transform.n_modes
    dim = 2 * n

    if np.linalg.norm(s.T @ s - np.eye(dim)) <= ORTHOGONALITY_TOL:
        # Already passive: conventionally place it on the output side.
        return Decomposition(
            passive_out=transform,
            squeeze=np.zeros(n),
            passive_in=SymplecticTransform.identity(n),
        )

    e_block, f_block = _complex_blocks(s)
    a_mat, e_svals, bh_mat = np.linalg.svd(e_block)
    b_mat = bh_mat.conj().T
    coupling = a_mat.conj().T @ f_block @ b_mat.conj()

    # Within each degenerate group of singular values of E the coupling
    # block is complex symmetric; its Takagi rotation, applied to both
    # passive factors, turns it into the nonnegative diagonal sinh(r).
    # Reading sinh(r) off the Takagi values (rather than as arccosh of the
    # singular values of E) keeps unsqueezed modes exactly at zero instead
    # of sqrt(machine-epsilon) noise, and resolves the spectrum correctly
    # even when nearly-equal values fall into one group.
    sinh_vals = np.zeros(n)
    gauge_blocks = []
    for start, count in _degenerate_groups(e_svals):
        sub = slice(start, start + count)
        block = coupling[sub, sub]
        unitary, values = _takagi(0.5 * (block + block.T))
        gauge_blocks.append(unitary)
        sinh_vals[sub] = values
    gauge = scipy.linalg.block_diag(*gauge_blocks)

    squeeze = np.arcsinh(sinh_vals)
    squeeze[squeeze < SQUEEZE_CLAMP] = 0.0

    a_final = a_mat @ gauge
    b_final = b_mat @ gauge
    return Decomposition(
        passive_out=SymplecticTransform(_real_orthogonal(a_final), n),
        squeeze=squeeze,
        passive_in=SymplecticTransform(
            _real_orthogonal(b_final.conj().T), n
        ),
    )


def recompose(decomposition):
    """Multiply a decomposition back into a single symplectic transform.

    Args:
        decomposition (Decomposition): factors to combine

    Returns:
        SymplecticTransform: ``passive_out * diag(e^r, e^{-r}) * passive_in``
    """
    matrix = (
        decomposition.passive_out.matrix
        @ _squeeze_core(decomposition.squeeze)
        @ decomposition.passive_in.matrix
    )
    return SymplecticTransform(matrix, decomposition.n_modes)
