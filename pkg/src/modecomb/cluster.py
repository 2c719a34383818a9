"""Cluster-state construction, witnesses, and graph extraction.

Two graph structures appear here. The amplified comb is an EPR graph: one
unit-weight edge per probe/conjugate pair. Interfering the halves of a chain
of EPR sources on balanced beam splitters produces the dual-rail quantum
wire; after a -pi/2 quadrature rotation on alternate beam-splitter output
pairs the wire is a weighted cluster state whose interior edges carry weight
+-1/2 (the two chain-end modes attach with weight +-1/sqrt(2)).

Graphs use the complex-adjacency convention ``Z = U + iV``: a pure Gaussian
state with covariance blocks ``Cxx, Cxp, Cpp`` corresponds to the graph with
``V = Cxx^{-1}`` and ``U = Cxp^T Cxx^{-1}``, and its nullifier combinations
``p - Z x`` have vanishing mean-square residual. The real part ``U`` holds
the reported edge weights; the imaginary part encodes finite squeezing and
vanishes in the infinite-squeezing limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .elements import balanced_beamsplitter, phase_shift, two_mode_squeezer
from .gaussian import (
    GaussianState,
    Witness,
    apply_symplectic,
    purity,
    vacuum_state,
)

#: States with purity below 1 - PURITY_TOL have no pure-graph description.
PURITY_TOL = 1e-6

#: Real edge weights below this threshold are omitted from reported edge lists.
EDGE_WEIGHT_THRESHOLD = 1e-6

#: Allowed quadrature relabeling conventions for the dual-rail wire.
PHASE_CONVENTIONS = ("odd_mode_minus_half_pi", "none")

#: Allowed sign-pattern readings for the four-mode wire witnesses.
SIGN_CONVENTIONS = ("decaying", "mirrored", "grouped")

_SQRT2 = math.sqrt(2.0)


class NotAGraphStateError(ValueError):
    """Raised when a state admits no pure graph-state description."""


@dataclass(frozen=True, eq=False)
class GraphSpec:
    """A weighted graph over modes, as a complex symmetric adjacency.

    Attributes:
        n_nodes (int): number of graph nodes (modes)
        adjacency (array[complex]): symmetric matrix ``Z = U + iV``; for a
            graph extracted from a physical finite-squeezing state the
            diagonal imaginary parts are positive, while ideal
            infinite-squeezing graphs are purely real
        edges (tuple): reporting edge list ``(i, j, weight)`` over node pairs
            ``i < j`` whose real weight exceeds
            :data:`EDGE_WEIGHT_THRESHOLD` in magnitude
    """

    n_nodes: int
    adjacency: np.ndarray
    edges: tuple = field(init=False)

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=complex)
        if adj.shape != (self.n_nodes, self.n_nodes):
            raise ValueError(
                f"adjacency must be {self.n_nodes}x{self.n_nodes}, got {adj.shape}"
            )
        asym = np.abs(adj - adj.T).max() if self.n_nodes else 0.0
        if asym > 1e-10:
            raise ValueError(f"adjacency must be symmetric; asymmetry {asym:.3e}")
        adj = 0.5 * (adj + adj.T)
        edges = tuple(
            (i, j, float(adj[i, j].real))
            for i in range(self.n_nodes)
            for j in range(i + 1, self.n_nodes)
            if abs(adj[i, j].real) > EDGE_WEIGHT_THRESHOLD
        )
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "edges", edges)


@dataclass(frozen=True)
class DualRailSpec:
    """Parameters of a dual-rail quantum wire.

    Attributes:
        n_pairs (int): number of EPR sources, at least 2
        r (float): squeezing parameter shared by all sources
        phase_convention (str): "odd_mode_minus_half_pi" applies the -pi/2
            rotation that brings the wire to cluster (graph) form; "none"
            leaves the raw beam-splitter outputs
    """

    n_pairs: int
    r: float
    phase_convention: str = "odd_mode_minus_half_pi"

    def __post_init__(self):
        if self.n_pairs < 2:
            raise ValueError(
                f"a wire needs at least two EPR sources, got {self.n_pairs}"
            )
        if not math.isfinite(self.r) or self.r < 0:
            raise ValueError(f"squeezing parameter must be >= 0, got {self.r}")
        if self.phase_convention not in PHASE_CONVENTIONS:
            raise ValueError(
                f"phase convention must be one of {PHASE_CONVENTIONS}, "
                f"got {self.phase_convention!r}"
            )


def _rotated_modes(n_pairs):
    """Modes carrying the -pi/2 rotation under "odd_mode_minus_half_pi".

    Sources emit into modes (2k, 2k+1); beam splitter link k mixes modes
    (2k+1, 2k+2). Counting the wire along its macronodes (the beam-splitter
    output pairs), the odd macronodes are the outputs of every other link:
    modes congruent to 1 or 2 mod 4. Rotating exactly those modes is what
    turns the wire into a real-weighted cluster state; the two chain-end
    modes are left untouched.
    """
    return tuple(m for m in range(2 * n_pairs) if m % 4 in (1, 2))


def _wire_patterns(n_pairs):
    """Squeezed quadrature combinations of the beam-splitter-output wire.

    Returns ``(label, x_coeffs, p_coeffs)`` triples over the 2*n_pairs modes,
    before any phase relabeling. Each combination has vacuum variance 4 and
    variance ``4 e^{-2r}`` on the wire, so the normalized witness variance is
    ``e^{-2r}``. Interior source k contributes a four-mode x-combination
    (+1, +1, -1, +1) and p-combination (+1, +1, +1, -1) on modes
    (2k-1 .. 2k+2); the chain ends contribute three-mode combinations with a
    sqrt(2) weight on the unmixed end modes.
    """
    n_modes = 2 * n_pairs
    patterns = []

    def pattern(label, xterms, pterms):
        a = np.zeros(n_modes)
        b = np.zeros(n_modes)
        for m, c in xterms:
            a[m] = c
        for m, c in pterms:
            b[m] = c
        patterns.append((label, a, b))

    pattern("left_x", [(0, _SQRT2), (1, -1.0), (2, 1.0)], [])
    pattern("left_p", [], [(0, _SQRT2), (1, 1.0), (2, -1.0)])
    for k in range(1, n_pairs - 1):
        ms = (2 * k - 1, 2 * k, 2 * k + 1, 2 * k + 2)
        pattern(
            f"interior{k - 1}_x", list(zip(ms, (1.0, 1.0, -1.0, 1.0))), []
        )
        pattern(
            f"interior{k - 1}_p", [], list(zip(ms, (1.0, 1.0, 1.0, -1.0)))
        )
    last = n_modes - 1
    pattern("right_x", [(last - 2, 1.0), (last - 1, 1.0), (last, -_SQRT2)], [])
    pattern("right_p", [], [(last - 2, 1.0), (last - 1, 1.0), (last, _SQRT2)])
    return patterns


def _relabel(a, b, rotated):
    """Rewrite coefficients (a on x, b on p) after -pi/2 rotations.

    The rotation maps operators as x -> -p, p -> x on each rotated mode, so
    a combination a*x + b*p keeps its value with coefficients (-b, a) there.
    """
    a2, b2 = a.copy(), b.copy()
    for m in rotated:
        a2[m], b2[m] = -b[m], a[m]
    return a2, b2


def build_dual_rail(spec):
    """Build the dual-rail wire state and its ideal graph.

    Allocates ``2 * n_pairs`` modes; squeezes source pairs (2k, 2k+1);
    interferes adjacent source halves (2k+1, 2k+2) on balanced beam
    splitters; then applies the -pi/2 rotations selected by the spec's phase
    convention.

    The returned graph is the infinite-squeezing adjacency of the wire in
    cluster form (convention "odd_mode_minus_half_pi"): purely real, with
    interior weights +-1/2 and end-mode weights +-1/sqrt(2). Graphs of
    finite-r states extracted with :func:`extract_graph` converge to it as r
    grows. Under convention "none" the state differs only by the local
    quadrature relabeling, and the same graph is returned.

    Args:
        spec (DualRailSpec): wire parameters

    Returns:
        tuple[GaussianState, GraphSpec]: the wire state and ideal graph
    """
    n_modes = 2 * spec.n_pairs
    state = vacuum_state(n_modes)
    if spec.r > 0:
        squeezer = two_mode_squeezer(spec.r)
        for k in range(spec.n_pairs):
            state = apply_symplectic(state, squeezer, (2 * k, 2 * k + 1))
    splitter = balanced_beamsplitter()
    for k in range(spec.n_pairs - 1):
        state = apply_symplectic(state, splitter, (2 * k + 1, 2 * k + 2))
    if spec.phase_convention == "odd_mode_minus_half_pi":
        rotation = phase_shift(-math.pi / 2)
        for m in _rotated_modes(spec.n_pairs):
            state = apply_symplectic(state, rotation, (m,))
    return state, ideal_wire_graph(spec.n_pairs)


def ideal_wire_graph(n_pairs):
    """Infinite-squeezing graph of the dual-rail wire in cluster form.

    Solves the nullifier system: stacking the squeezed combinations of
    :func:`_wire_patterns` (rewritten through the -pi/2 relabeling) as rows
    ``a . x + b . p -> 0`` and eliminating p gives the real adjacency
    ``Z = -B^{-1} A``.

    Returns:
        GraphSpec: real adjacency with interior weights +-1/2 and end-mode
        weights +-1/sqrt(2)
    """
    n_modes = 2 * n_pairs
    rotated = _rotated_modes(n_pairs)
    a_rows = np.zeros((n_modes, n_modes))
    b_rows = np.zeros((n_modes, n_modes))
    for i, (_, a, b) in enumerate(_wire_patterns(n_pairs)):
        a_rows[i], b_rows[i] = _relabel(a, b, rotated)
    adjacency = -np.linalg.solve(b_rows, a_rows)
    adjacency = 0.5 * (adjacency + adjacency.T)
    return GraphSpec(n_modes, adjacency.astype(complex))


def wire_witnesses(spec):
    """All entanglement witnesses of a wire, adapted to its convention.

    Every returned witness has normalized variance ``e^{-2r}`` on the state
    from :func:`build_dual_rail` with the same spec, and 1 on vacuum. The
    coefficient vectors are rewritten through the spec's phase relabeling so
    the measured physical combination is identical for both conventions.

    Returns:
        tuple[tuple[str, Witness], ...]: labeled witnesses in wire order:
        left boundary pair, interior pairs, right boundary pair
    """
    rotated = (
        _rotated_modes(spec.n_pairs)
        if spec.phase_convention == "odd_mode_minus_half_pi"
        else ()
    )
    out = []
    for label, a, b in _wire_patterns(spec.n_pairs):
        a2, b2 = _relabel(a, b, rotated)
        out.append((label, Witness(np.concatenate([a2, b2]))))
    return tuple(out)


def witness_pair(wire_position, n_pairs, sign_convention="decaying"):
    """The four-mode x-type and p-type witnesses of one interior wire link.

    Interior link ``wire_position`` sits on source ``wire_position + 1`` and
    involves modes ``(2k-1, 2k, 2k+1, 2k+2)`` with ``k = wire_position + 1``;
    positions run from 0 to ``n_pairs - 3``, so a wire needs at least three
    sources to have an interior link. Coefficients refer to the raw
    beam-splitter-output quadratures (phase convention "none").

    The sign conventions differ in how the trailing pair of terms is signed:

    * ``"decaying"``: x-signs (+1, +1, -1, +1), p-signs (+1, +1, +1, -1) —
      the combinations whose variance decays as ``e^{-2r}`` under this
      package's beam-splitter convention;
    * ``"mirrored"``: the p-signs copy the x-signs (+1, +1, -1, +1);
    * ``"grouped"``: both read (+1, +1, -1, -1).

    Only the "decaying" pair is squeezed on the wire; the others mix squeezed
    and anti-squeezed combinations and are provided for comparison.

    Args:
        wire_position (int): interior link index, 0-based
        n_pairs (int): number of EPR sources of the wire
        sign_convention (str): one of ``"decaying"``, ``"mirrored"``,
            ``"grouped"``

    Returns:
        tuple[Witness, Witness]: the (x-type, p-type) witnesses, vacuum
        variance 4 each before normalization
    """
    if sign_convention not in SIGN_CONVENTIONS:
        raise ValueError(
            f"sign convention must be one of {SIGN_CONVENTIONS}, "
            f"got {sign_convention!r}"
        )
    if n_pairs < 2:
        raise ValueError(f"a wire needs at least two EPR sources, got {n_pairs}")
    if not 0 <= wire_position <= n_pairs - 3:
        raise ValueError(
            f"wire position {wire_position} is not an interior link of a "
            f"{n_pairs}-source wire (valid: 0 .. {n_pairs - 3})"
        )
    x_signs = (1.0, 1.0, -1.0, 1.0)
    p_signs = {
        "decaying": (1.0, 1.0, 1.0, -1.0),
        "mirrored": (1.0, 1.0, -1.0, 1.0),
        "grouped": (1.0, 1.0, -1.0, -1.0),
    }[sign_convention]
    if sign_convention == "grouped":
        x_signs = (1.0, 1.0, -1.0, -1.0)
    k = wire_position + 1
    modes = (2 * k - 1, 2 * k, 2 * k + 1, 2 * k + 2)
    n_modes = 2 * n_pairs
    wx = Witness.from_terms(
        n_modes, {(m, "x"): c for m, c in zip(modes, x_signs)}
    )
    wp = Witness.from_terms(
        n_modes, {(m, "p"): c for m, c in zip(modes, p_signs)}
    )
    return wx, wp


def bipartite_graph(comb):
    """EPR graph of an amplified comb: one unit edge per probe/conjugate pair.

    In probe-major mode ordering the adjacency is block-antidiagonal — all
    coupling sits between the probe and conjugate bands, none within a band.

    Args:
        comb (SpatialComb): the comb

    Returns:
        GraphSpec: real adjacency with weight-1 pair edges
    """
    adjacency = np.zeros((comb.n_modes, comb.n_modes), dtype=complex)
    for p, q in comb.pairs:
        adjacency[p, q] = adjacency[q, p] = 1.0
    return GraphSpec(comb.n_modes, adjacency)


def extract_graph(state):
    """Fit the graph description of a pure Gaussian state.

    Computes ``V = Cxx^{-1}`` and ``U = Cxp^T Cxx^{-1}`` from the covariance
    blocks (symmetrizing against roundoff) and returns ``Z = U + iV``. The
    fit quality is quantified by :func:`nullifier_residual`, which vanishes
    for exactly pure states.

    Args:
        state (GaussianState): a pure state (purity within 1e-6 of 1)

    Returns:
        GraphSpec: the state's graph

    Raises:
        NotAGraphStateError: if the state is mixed or its x-block covariance
            is singular.
    """
    p = purity(state)
    if p < 1.0 - PURITY_TOL:
        raise NotAGraphStateError(
            f"state has purity {p:.8f}; no pure graph description exists"
        )
    n = state.n_modes
    cxx = state.cov[:n, :n]
    cxp = state.cov[:n, n:]
    try:
        v = np.linalg.inv(cxx)
    except np.linalg.LinAlgError as exc:
        raise NotAGraphStateError(
            "x-quadrature covariance block is singular"
        ) from exc
    u = cxp.T @ v
    u = 0.5 * (u + u.T)
    v = 0.5 * (v + v.T)
    return GraphSpec(n, u + 1j * v)


def nullifier_residual(state, graph):
    """Frobenius norm of the mean-square nullifier defect.

    For adjacency ``Z`` the nullifiers are the combinations ``p - Z x``;
    their mean-square matrix on the state is
    ``Cpp - Z Cxx Z^dagger`` (Hermitian part), which is zero exactly when
    the state is the pure graph state of ``Z``.

    Args:
        state (GaussianState): state to test
        graph (GraphSpec): candidate graph, same mode count

    Returns:
        float: Frobenius norm of the residual matrix
    """
    if graph.n_nodes != state.n_modes:
        raise ValueError(
            f"graph has {graph.n_nodes} nodes but the state has "
            f"{state.n_modes} modes"
        )
    n = state.n_modes
    cxx = state.cov[:n, :n]
    cpp = state.cov[n:, n:]
    z = graph.adjacency
    residual = cpp - z @ cxx @ z.conj().T
    residual = 0.5 * (residual + residual.conj().T)
    return float(np.linalg.norm(residual))


def condition_on_homodyne(state, mode, quadrature, outcome):
    """Condition a state on a homodyne measurement of one quadrature.

    The measured mode is removed; remaining modes keep their order with
    indices above ``mode`` shifted down by one. The covariance update is the
    Schur complement on the measured row/column and is independent of the
    outcome; only the conditional mean depends on it.

    Args:
        state (GaussianState): state to measure, at least two modes
        mode (int): mode index to measure and remove
        quadrature (str): "x" or "p"
        outcome (float): measured value

    Returns:
        GaussianState: conditional state on the remaining modes
    """
    n = state.n_modes
    if not 0 <= mode < n:
        raise ValueError(f"mode {mode} out of range for {n} modes")
    if quadrature not in ("x", "p"):
        raise ValueError(f"quadrature must be 'x' or 'p', got {quadrature!r}")
    if n == 1:
        raise ValueError("cannot remove the last mode of a state")
    measured = mode if quadrature == "x" else n + mode
    keep = np.array([i for i in range(2 * n) if i not in (mode, n + mode)])

    var = state.cov[measured, measured]
    if var <= 0:
        raise ValueError(
            f"measured quadrature has nonpositive variance {var}"
        )
    cross = state.cov[keep, measured]
    cov = state.cov[np.ix_(keep, keep)] - np.outer(cross, cross) / var
    mean = state.mean[keep] + cross * (outcome - state.mean[measured]) / var
    return GaussianState(n - 1, mean, cov)
