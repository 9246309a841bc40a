"""Computation paths for exp(-beta H) over a closed Pauli term set.

Three routes produce the same expansion:

  exp_spectral       eigendecompose the Hermitian structure matrix and read
                     off the first column of exp(-beta A)
  exp_contour        trapezoidal quadrature of the resolvent around a circle
                     enclosing the spectrum
  exp_anticommuting  closed form cosh/sinh when the support pairwise
                     anticommutes

All routes multiply the result by exp(-beta * identity_offset), so the
identity component of the Hamiltonian never enters the linear algebra.
"""

from __future__ import annotations

import cmath
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import ContourError, SingularSystem
from .hamiltonian import (
    DEFAULT_CLOSURE_CAP,
    PauliExpansion,
    SparseHamiltonian,
)
from .resolvent import (
    StructureMatrix,
    build_structure_matrix,
    gershgorin_bounds,
    resolvent_at,
)

DEFAULT_NODES = 64


def _worker_count() -> int:
    raw = os.environ.get("PAULIEXP_THREADS", "1").strip()
    try:
        workers = int(raw)
    except ValueError:
        raise ValueError(f"PAULIEXP_THREADS must be a positive integer, got {raw!r}")
    if workers < 1:
        raise ValueError(f"PAULIEXP_THREADS must be a positive integer, got {raw!r}")
    return workers


@dataclass(frozen=True)
class SpectralData:
    """Eigendecomposition of a structure matrix (eigenvalues ascending)."""

    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)


def spectral_data(sm: StructureMatrix) -> SpectralData:
    w, v = np.linalg.eigh(sm.matrix)
    return SpectralData(w, v)


@dataclass(frozen=True)
class ContourSpec:
    """Circle center + radius for the quadrature, and node count."""

    center: complex
    radius: float
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.nodes < 4:
            raise ValueError(f"need at least 4 nodes, got {self.nodes}")

    @classmethod
    def for_matrix(
        cls, sm, nodes: int = DEFAULT_NODES, margin: float = 1.25, pad: float = 1.0
    ) -> "ContourSpec":
        """Default circle from Gershgorin bounds: centered on the interval
        midpoint, radius = half-spread * margin + pad."""
        lo, hi = gershgorin_bounds(sm)
        center = complex((lo + hi) / 2.0)
        radius = (hi - lo) / 2.0 * margin + pad
        return cls(center, radius, nodes)


def _reduce(h: SparseHamiltonian, cap: int) -> StructureMatrix:
    return build_structure_matrix(h, cap=cap)


def _finish(sm: StructureMatrix, column: np.ndarray, h, beta) -> PauliExpansion:
    scale = cmath.exp(-beta * h.identity_offset)
    coeffs = {0: scale * complex(column[0])}
    for i in range(sm.term_set.tau):
        coeffs[sm.term_set.code_at(i)] = scale * complex(column[i + 1])
    return PauliExpansion(h.n, coeffs)


def exp_spectral(
    h: SparseHamiltonian, beta: complex, cap: int = DEFAULT_CLOSURE_CAP
) -> PauliExpansion:
    """exp(-beta H) as a Pauli expansion, via eigh of the structure matrix.

    The coefficient vector is the first column of exp(-beta A): with
    A = V diag(w) V*, that is V (e^{-beta w} . conj(V[0])).
    """
    sm = _reduce(h, cap)
    w, v = np.linalg.eigh(sm.matrix)
    column = v @ (np.exp(-beta * w) * np.conj(v[0, :]))
    return _finish(sm, column, h, beta)


def _quadrature(sm: StructureMatrix, beta: complex, spec: ContourSpec) -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(spec.nodes) / spec.nodes
    zs = spec.center + spec.radius * np.exp(1j * angles)
    workers = min(_worker_count(), spec.nodes)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rs = list(pool.map(lambda z: resolvent_at(sm, z), zs))
    else:
        rs = [resolvent_at(sm, z) for z in zs]
    acc = np.zeros(sm.size, dtype=np.complex128)
    for z, r in zip(zs, rs):
        acc += (z - spec.center) * np.exp(-beta * z) * r
    return acc / spec.nodes


def exp_contour(
    h: SparseHamiltonian,
    beta: complex,
    contour: ContourSpec | None = None,
    cap: int = DEFAULT_CLOSURE_CAP,
    nodes: int | None = None,
) -> PauliExpansion:
    """exp(-beta H) via trapezoidal resolvent quadrature on a circle.

    The default contour encloses the Gershgorin interval with margin; a
    user contour must also enclose it or ContourError is raised. If a node
    lands on (or too near) an eigenvalue, the radius is grown by 1% and the
    quadrature retried once. `nodes` overrides the node count of the
    default contour; an explicit `contour` carries its own.
    """
    sm = _reduce(h, cap)
    spec = (
        contour
        if contour is not None
        else ContourSpec.for_matrix(sm, nodes=nodes or DEFAULT_NODES)
    )
    eigs = np.linalg.eigvalsh(sm.matrix)
    reach = float(np.abs(eigs - spec.center).max()) if eigs.size else 0.0
    if reach >= spec.radius:
        raise ContourError(
            f"circle (center {spec.center}, radius {spec.radius}) does not "
            f"enclose the spectrum (furthest eigenvalue at distance {reach})"
        )
    try:
        column = _quadrature(sm, beta, spec)
    except SingularSystem:
        spec = replace(spec, radius=spec.radius * 1.01)
        column = _quadrature(sm, beta, spec)
    return _finish(sm, column, h, beta)


def is_pairwise_anticommuting(h: SparseHamiltonian) -> bool:
    """Whether every pair of distinct support strings anticommutes."""
    codes = np.array(h.support, dtype=np.uint64)
    if codes.size < 2:
        return True
    fwd = _kernels.phase_exponents(codes[:, None], codes[None, :])
    commuting = fwd == fwd.T
    np.fill_diagonal(commuting, False)
    return not bool(commuting.any())


def exp_anticommuting(h: SparseHamiltonian, beta: complex) -> PauliExpansion:
    """Closed form for pairwise anticommuting support.

    With H0 = H - offset and H0^2 = (sum h_K^2) I = g^2 I,
    exp(-beta H0) = cosh(g beta) I - (sinh(g beta)/g) H0.
    """
    if not is_pairwise_anticommuting(h):
        raise ValueError("support does not pairwise anticommute")
    scale = cmath.exp(-beta * h.identity_offset)
    hs = np.array([h.terms[c] for c in h.support], dtype=np.float64)
    g = float(np.sqrt((hs**2).sum()))
    if g == 0.0:
        return PauliExpansion(h.n, {0: scale})
    ratio = cmath.sinh(g * beta) / g
    coeffs: dict[int, complex] = {0: scale * cmath.cosh(g * beta)}
    for code in h.support:
        coeffs[code] = -scale * ratio * h.terms[code]
    return PauliExpansion(h.n, coeffs)


def exp_pauli(
    h: SparseHamiltonian,
    beta: complex,
    method: str = "auto",
    cap: int = DEFAULT_CLOSURE_CAP,
    contour: ContourSpec | None = None,
) -> PauliExpansion:
    """Dispatch to a computation path.

    method=auto prefers the exact anticommuting closed form when the
    precondition holds, else the spectral path. Explicit methods never fall
    back: asking for anticommute on a non-anticommuting support is an error.
    """
    if method == "auto":
        method = "anticommute" if is_pairwise_anticommuting(h) else "spectral"
    if method == "spectral":
        return exp_spectral(h, beta, cap)
    if method == "contour":
        return exp_contour(h, beta, contour=contour, cap=cap)
    if method == "anticommute":
        return exp_anticommuting(h, beta)
    raise ValueError(f"unknown method {method!r}")


def partition_function(
    h: SparseHamiltonian, beta: complex, cap: int = DEFAULT_CLOSURE_CAP
) -> tuple[complex, complex]:
    """(z_normalized, z_trace) with z_normalized = tr(exp(-beta H)) / 2**n.

    z_normalized is the identity coefficient of the expansion (all other
    strings are traceless); z_trace = 2**n * z_normalized.
    """
    e = exp_spectral(h, beta, cap)
    z_norm = e.coefficient(0)
    return z_norm, (2**h.n) * z_norm


def gibbs_state(
    h: SparseHamiltonian, beta: float, cap: int = DEFAULT_CLOSURE_CAP
) -> PauliExpansion:
    """Gibbs expansion exp(-beta H) / tr(exp(-beta H)).

    The identity coefficient is set to exactly 1/2**n; the trace
    normalization makes that coefficient exact by construction.
    """
    e = exp_spectral(h, beta, cap)
    z_trace = (2**h.n) * e.coefficient(0)
    if z_trace == 0 or not np.isfinite(abs(z_trace)):
        raise ValueError(f"partition function {z_trace} cannot normalize a state")
    coeffs = {k: c / z_trace for k, c in e.coeffs.items()}
    coeffs[0] = 1.0 / (2**h.n)
    return PauliExpansion(h.n, coeffs)


def multiply_expansions(a: PauliExpansion, b: PauliExpansion) -> PauliExpansion:
    """Product of two expansions, re-expanded in the string basis."""
    if a.n != b.n:
        raise ValueError(f"qubit counts differ: {a.n} != {b.n}")
    ka = np.array(a.support, dtype=np.uint64)
    kb = np.array(b.support, dtype=np.uint64)
    if ka.size == 0 or kb.size == 0:
        return PauliExpansion(a.n, {})
    ca = np.array([a.coeffs[int(k)] for k in ka], dtype=np.complex128)
    cb = np.array([b.coeffs[int(k)] for k in kb], dtype=np.complex128)
    prods = (ka[:, None] ^ kb[None, :]).ravel()
    exps = _kernels.phase_exponents(ka[:, None], np.broadcast_to(kb[None, :], (ka.size, kb.size)))
    weights = (ca[:, None] * cb[None, :] * _kernels.I_POWERS_ARR[exps]).ravel()
    uniq, inverse = np.unique(prods, return_inverse=True)
    sums = np.zeros(uniq.size, dtype=np.complex128)
    np.add.at(sums, inverse, weights)
    return PauliExpansion(a.n, {int(k): complex(c) for k, c in zip(uniq, sums)})
