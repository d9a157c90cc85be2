"""Maxwell's equations, and their augmentation, as subspace-rejecting filters.

Each filter contracts a rank-2 plane-wave amplitude H with the basis of one
invariant family.  By bilinear orthogonality of distinct families, a filter
is blind to everything outside its own family:

    divergence   B_sy1   (the source-free divergence of the field)
    bianchi      C_sk3   (the cyclic identity)
    augment      C_sy6   (the symmetric partner of the cyclic identity)

Residuals are normalized by ||H|| ||n||^d with d the degree of the
contracting columns, which makes every threshold scale-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operator_spaces import (ALL_SPACES, C_SK3_TRIPLES, C_SY6_PAIRS, SubspaceId,
                              basis, cluster_basis, cyclic_sum, project)
from .tensor_core import asvec4, dot, is_regular
from .errors import NonRegularWavevector

FILTER_TOL = 1e-10
PROJECTION_TOL = 1e-9


def _as_col(H) -> np.ndarray:
    return np.asarray(H, dtype=complex).reshape(16)


def _scale(H, n, degree: int) -> float:
    h = np.linalg.norm(_as_col(H))
    if h == 0:
        return 1.0
    return float(h * np.linalg.norm(asvec4(n)) ** degree)


@dataclass
class FilterResiduals:
    divergence: complex
    bianchi: np.ndarray
    augment: np.ndarray
    symmetric: np.ndarray

    def magnitudes(self) -> dict:
        return {
            "divergence": float(abs(self.divergence)),
            "bianchi": float(np.max(np.abs(self.bianchi))),
            "augment": float(np.max(np.abs(self.augment))),
            "symmetric": float(np.max(np.abs(self.symmetric))),
        }


def divergence_contraction(H, n) -> complex:
    """Unnormalized image of X^i X^j H_ij, i.e. -sum n_i n_j H_ij."""
    n = asvec4(n)
    M = _as_col(H).reshape(4, 4)
    return complex(-(n @ M @ n))


def divergence_current(F, n, c: float = 1.0) -> np.ndarray:
    """J_a from dF^i_a/dx^i = (4 pi / c) J_a for a plane-wave field amplitude."""
    n = asvec4(n)
    F = _as_col(F).reshape(4, 4)
    return (c / (4 * np.pi)) * (1j * n @ F)


def residual_divergence(H, n) -> complex:
    return divergence_contraction(H, n) / _scale(H, n, 2)


def residual_bianchi(H, n) -> np.ndarray:
    """Contractions of H with the three C_sk3 columns."""
    if not is_regular(n):
        raise NonRegularWavevector("bianchi filter needs a regular wavevector")
    B = cluster_basis(SubspaceId.C_sk3, n)
    return (B.T @ _as_col(H)) / _scale(H, n, 1)


def bianchi_cyclic_sums(H, n) -> np.ndarray:
    """The three cyclic sums over the C_sk3 index triples, computed directly."""
    return np.array([cyclic_sum(H, n, *t) for t in C_SK3_TRIPLES]) / _scale(H, n, 1)


def residual_augment(H, n) -> np.ndarray:
    """Contractions of H with the six C_sy6 columns."""
    B = cluster_basis(SubspaceId.C_sy6, n)
    return (B.T @ _as_col(H)) / _scale(H, n, 2)


def augment_second_derivatives(H, n) -> np.ndarray:
    """The augmenting condition per (r, s), no summation, as second derivatives.

    d2H_ss/dx^r dx^r - d2H_rs/dx^s dx^r - d2H_sr/dx^r dx^s + d2H_rr/dx^s dx^s
    """
    n = asvec4(n)
    M = _as_col(H).reshape(4, 4)
    out = []
    for r, s in C_SY6_PAIRS:
        r, s = r - 1, s - 1
        out.append(-(n[r] * n[r] * M[s, s] - n[s] * n[r] * M[r, s]
                     - n[r] * n[s] * M[s, r] + n[s] * n[s] * M[r, r]))
    return np.array(out) / _scale(H, n, 2)


def residual_symmetric(H, n) -> np.ndarray:
    """Entrywise (n_a n^i H_ib + n_b n^i H_ai) - (n.n) H_ab."""
    n = asvec4(n)
    M = _as_col(H).reshape(4, 4)
    R = np.outer(n, n @ M) + np.outer(M @ n, n) - dot(n, n) * M
    return R.reshape(16) / _scale(H, n, 2)


def filter_residuals(H, n) -> FilterResiduals:
    return FilterResiduals(residual_divergence(H, n), residual_bianchi(H, n),
                           residual_augment(H, n), residual_symmetric(H, n))


def passes_filters(H, n, tol: float = FILTER_TOL) -> dict:
    m = filter_residuals(H, n).magnitudes()
    return {name: m[name] < tol for name in ("divergence", "bianchi", "augment")}


@dataclass
class Admissibility:
    components: dict        # SubspaceId -> relative norm of the projection
    passes: dict            # filter name -> bool
    admissible: bool
    symmetric_residual: float


def classify_admissible(H, n, tol: float = PROJECTION_TOL) -> Admissibility:
    """Which families H has weight on, and which filters it passes."""
    if not is_regular(n):
        raise NonRegularWavevector("admissibility needs a regular wavevector")
    H = _as_col(H)
    h = np.linalg.norm(H)
    comps = {}
    for space in ALL_SPACES:
        comps[space] = 0.0 if h == 0 else float(np.linalg.norm(project(space, H, n)) / h)
    passes = {
        "divergence": comps[SubspaceId.B_sy1] < tol,
        "bianchi": comps[SubspaceId.C_sk3] < tol,
        "augment": comps[SubspaceId.C_sy6] < tol,
    }
    sym = float(np.max(np.abs(residual_symmetric(H, n))))
    return Admissibility(comps, passes, all(passes.values()), sym)


def random_mixture(n, rng: np.random.Generator, spaces, scale: float = 1.0) -> np.ndarray:
    """Random complex combination of the basis columns of ``spaces``."""
    H = np.zeros(16, dtype=complex)
    for space in spaces:
        for k in SubspaceId(space).labels:
            U = basis(space, k, n)
            coef = scale * (rng.normal() + 1j * rng.normal())
            H += coef * U / np.linalg.norm(U)
    return H
