"""Gaussian states and symplectic transformations in the covariance-matrix picture.

Conventions used throughout the package:

* Shot-noise units: the vacuum state has quadrature variance 1, so every
  noise figure is directly a shot-noise-normalized number.
* Quadratures are ordered x-major, ``(x_1, ..., x_N, p_1, ..., p_N)``.
* The symplectic form is ``Omega = [[0, I], [-I, 0]]``; a Gaussian unitary
  is any real matrix ``S`` with ``S Omega S^T = Omega``.

States and transforms are immutable values; every operation returns a new
object, so scenarios can be evaluated concurrently without shared state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Covariance matrices are re-symmetrized after every update; asymmetry
#: beyond this budget indicates a bug upstream, not numerical drift.
SYMMETRY_TOL = 1e-12

#: Frobenius-norm tolerance on ``S Omega S^T - Omega``.
SYMPLECTIC_TOL = 1e-10

#: Lower bound on the minimum eigenvalue of ``cov + i Omega``.
PHYSICALITY_TOL = -1e-10


def symplectic_form(n_modes):
    """Return the ``2N x 2N`` symplectic form in x-major ordering.

    Args:
        n_modes (int): number of optical modes ``N``

    Returns:
        array[float]: the matrix ``[[0, I], [-I, 0]]``
    """
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True, eq=False)
class GaussianState:
    """A Gaussian state of ``n_modes`` optical modes.

    Attributes:
        n_modes (int): number of modes ``N``
        mean (array[float]): length ``2N`` vector of quadrature means
        cov (array[float]): ``2N x 2N`` covariance matrix, vacuum = identity

    The covariance matrix is symmetrized on construction. Physicality
    (``cov + i Omega >= 0``) is *not* enforced here so that deliberately
    unphysical matrices can still be probed with :func:`check_physicality`.
    """

    n_modes: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("a Gaussian state needs at least one mode")
        dim = 2 * self.n_modes
        mean = np.asarray(self.mean, dtype=float).reshape(dim)
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (dim, dim):
            raise ValueError(
                f"covariance must be {dim}x{dim} for {self.n_modes} modes, "
                f"got {cov.shape}"
            )
        asymmetry = np.max(np.abs(cov - cov.T))
        scale = max(1.0, float(np.max(np.abs(cov))) if cov.size else 1.0)
        if asymmetry > SYMMETRY_TOL * scale:
            raise ValueError(
                f"covariance is not symmetric: |C - C^T| = {asymmetry:.3e}"
            )
        cov = 0.5 * (cov + cov.T)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self):
        """Phase-space dimension ``2N``."""
        return 2 * self.n_modes


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """A real symplectic matrix representing a Gaussian unitary.

    Attributes:
        matrix (array[float]): ``2N x 2N`` real matrix
        n_modes (int): number of modes the transform acts on

    Raises:
        ValueError: if ``S Omega S^T`` deviates from ``Omega`` by more than
            :data:`SYMPLECTIC_TOL` in Frobenius norm.
    """

    matrix: np.ndarray
    n_modes: int

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("a symplectic transform needs at least one mode")
        dim = 2 * self.n_modes
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.shape != (dim, dim):
            raise ValueError(
                f"matrix must be {dim}x{dim} for {self.n_modes} modes, "
                f"got {matrix.shape}"
            )
        omega = symplectic_form(self.n_modes)
        defect = np.linalg.norm(matrix @ omega @ matrix.T - omega)
        if defect > SYMPLECTIC_TOL:
            raise ValueError(
                f"matrix is not symplectic: |S Omega S^T - Omega| = {defect:.3e}"
            )
        object.__setattr__(self, "matrix", matrix)

    def compose(self, other):
        """Return the transform applying ``other`` first, then ``self``."""
        if other.n_modes != self.n_modes:
            raise ValueError("can only compose transforms on the same modes")
        return SymplecticTransform(self.matrix @ other.matrix, self.n_modes)

    def inverse(self):
        """Return the inverse transform, computed from the symplectic form."""
        omega = symplectic_form(self.n_modes)
        # S^{-1} = Omega^T S^T Omega for symplectic S
        return SymplecticTransform(omega.T @ self.matrix.T @ omega, self.n_modes)

    @classmethod
    def identity(cls, n_modes):
        return cls(np.eye(2 * n_modes), n_modes)


@dataclass(frozen=True, eq=False)
class Witness:
    """A linear quadrature combination whose variance certifies entanglement.

    Attributes:
        coeffs (array[float]): length ``2N`` coefficients over
            ``(x_1..x_N, p_1..p_N)``
        normalization (float): vacuum variance of the combination, always
            ``coeffs . coeffs`` in shot-noise units
    """

    coeffs: np.ndarray
    normalization: float = field(init=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float).reshape(-1)
        if coeffs.size == 0 or coeffs.size % 2 != 0:
            raise ValueError("witness coefficients must have even length 2N")
        norm = float(coeffs @ coeffs)
        if norm == 0.0:
            raise ValueError("witness coefficient vector must be nonzero")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "normalization", norm)

    @classmethod
    def from_terms(cls, n_modes, terms):
        """Build a witness from sparse ``{(mode, "x"|"p"): coefficient}`` terms."""
        coeffs = np.zeros(2 * n_modes)
        for (mode, quad), value in terms.items():
            if not 0 <= mode < n_modes:
                raise ValueError(f"mode {mode} out of range for {n_modes} modes")
            if quad == "x":
                coeffs[mode] += value
            elif quad == "p":
                coeffs[n_modes + mode] += value
            else:
                raise ValueError(f"quadrature must be 'x' or 'p', got {quad!r}")
        return cls(coeffs)

    def support(self, n_modes):
        """Mode indices on which the witness has a nonzero coefficient."""
        x_part = self.coeffs[:n_modes]
        p_part = self.coeffs[n_modes:]
        return tuple(np.nonzero((x_part != 0) | (p_part != 0))[0])


def vacuum_state(n_modes):
    """Return the ``n_modes``-mode vacuum: zero mean, identity covariance.

    Args:
        n_modes (int): number of modes, at least 1

    Returns:
        GaussianState: the vacuum state
    """
    if n_modes < 1:
        raise ValueError("vacuum_state requires at least one mode")
    return GaussianState(n_modes, np.zeros(2 * n_modes), np.eye(2 * n_modes))


def apply_symplectic(state, transform, modes=None):
    """Apply a symplectic transform to an ordered subset of modes.

    The transform is embedded as the identity on all other modes. Only the
    affected rows and columns of the covariance are recomputed, so applying
    a fixed-size element to a large state costs ``O(k * N)`` rather than a
    full ``2N x 2N`` matrix product.

    Args:
        state (GaussianState): input state
        transform (SymplecticTransform): element acting on ``len(modes)`` modes
        modes (sequence[int]): target modes, in the transform's own mode
            order; defaults to ``range(transform.n_modes)``

    Returns:
        GaussianState: the transformed state
    """
    if modes is None:
        modes = tuple(range(transform.n_modes))
    modes = tuple(int(m) for m in modes)
    if len(modes) != transform.n_modes:
        raise ValueError(
            f"transform acts on {transform.n_modes} modes but {len(modes)} "
            "were given"
        )
    if len(set(modes)) != len(modes):
        raise ValueError(f"repeated mode index in {modes}")
    if any(m < 0 or m >= state.n_modes for m in modes):
        raise ValueError(f"mode indices {modes} out of range for {state.n_modes} modes")

    n = state.n_modes
    idx = np.array([*modes, *(n + m for m in modes)])
    s = transform.matrix

    mean = state.mean.copy()
    mean[idx] = s @ mean[idx]
    cov = state.cov.copy()
    cov[idx, :] = s @ cov[idx, :]
    cov[:, idx] = cov[:, idx] @ s.T
    return GaussianState(n, mean, cov)


def witness_variance(state, witness):
    """Shot-noise-normalized variance of a witness combination.

    Evaluates ``w^T cov w / (w^T w)``; the result is 1 on vacuum for every
    nonzero witness, and below 1 certifies squeezing of the combination.

    Args:
        state (GaussianState): state to evaluate on
        witness (Witness): quadrature combination

    Returns:
        float: normalized variance
    """
    if witness.coeffs.size != state.dim:
        raise ValueError(
            f"witness has {witness.coeffs.size} coefficients but the state "
            f"has {state.dim} quadratures"
        )
    w = witness.coeffs
    return float(w @ state.cov @ w) / witness.normalization


def check_physicality(state):
    """Check the uncertainty-principle constraint ``cov + i Omega >= 0``.

    Args:
        state (GaussianState): state to check

    Returns:
        tuple[bool, float]: (is physical, minimum eigenvalue of
        ``cov + i Omega``); the eigenvalue is returned for diagnostics.
    """
    omega = symplectic_form(state.n_modes)
    herm = state.cov + 1j * omega
    min_eig = float(np.linalg.eigvalsh(herm)[0])
    return min_eig >= PHYSICALITY_TOL, min_eig


def purity(state):
    """Purity ``1 / sqrt(det cov)``; equals 1 exactly for pure states.

    Computed through the symplectic (Williamson) eigenvalues: with the
    Cholesky factor ``C = L L^T`` they are the singular values of
    ``L^T Omega L``, and the purity is the inverse of their product. For a
    pure state that matrix is exactly orthogonal, so the result stays
    accurate even for strongly squeezed covariances whose raw determinant
    is badly conditioned.

    Args:
        state (GaussianState): a physical state

    Returns:
        float: purity in (0, 1]

    Raises:
        ValueError: if the covariance is singular or not positive definite.
    """
    try:
        chol = np.linalg.cholesky(state.cov)
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            "covariance matrix is singular or not positive"
        ) from exc
    core = chol.T @ symplectic_form(state.n_modes) @ chol
    # Each symplectic eigenvalue appears twice among the singular values.
    doubled = np.linalg.svd(core, compute_uv=False)
    return float(np.exp(-0.5 * np.sum(np.log(doubled))))
