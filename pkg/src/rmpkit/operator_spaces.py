"""Invariant subspaces of the 16-dimensional operator column space.

All operators are evaluated at a sampled wavevector n, so a 16x1 column of
differential operators becomes a 16-entry complex column (row-major over the
tensor indices (a, b)).  The five invariant families and their eigenvalue
tags under K U = lambda (n.n) U are

    B_sy1  dim 1  lambda 2      U^1
    A_sk3  dim 3  lambda 1      U^2..U^4
    A_sy3  dim 3  lambda 1      U^5..U^7
    C_sk3  dim 3  lambda 0      U^8..U^10
    C_sy6  dim 6  lambda 0      U^11..U^16

K is the Fourier image of the non-trivial invariant 16x16 operator with its
overall sign absorbed: the eigen-equation  M U = -lambda Box U  becomes
K U = lambda (n.n) U  once X_a -> i n_a and Box -> n.n.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ClusterFailure, NonRegularWavevector, SingularGram
from .tensor_core import MIN_COMPONENT, MIN_SELF_DOT, asvec4, dot, is_regular


class SubspaceId(enum.Enum):
    B_sy1 = "B_sy1"
    A_sk3 = "A_sk3"
    A_sy3 = "A_sy3"
    C_sk3 = "C_sk3"
    C_sy6 = "C_sy6"

    @property
    def dimension(self) -> int:
        return _DIMENSION[self]

    @property
    def eigenvalue(self) -> int:
        return _EIGENVALUE[self]

    @property
    def symmetric(self) -> bool:
        return self in (SubspaceId.B_sy1, SubspaceId.A_sy3, SubspaceId.C_sy6)

    @property
    def degree(self) -> int:
        """Homogeneity degree of the basis columns in n."""
        return 2 if self.symmetric else 1

    @property
    def labels(self) -> range:
        """The global labels k of the basis elements in this family."""
        start = _FIRST_LABEL[self]
        return range(start, start + self.dimension)


_DIMENSION = {SubspaceId.B_sy1: 1, SubspaceId.A_sk3: 3, SubspaceId.A_sy3: 3,
              SubspaceId.C_sk3: 3, SubspaceId.C_sy6: 6}
_EIGENVALUE = {SubspaceId.B_sy1: 2, SubspaceId.A_sk3: 1, SubspaceId.A_sy3: 1,
               SubspaceId.C_sk3: 0, SubspaceId.C_sy6: 0}
_FIRST_LABEL = {SubspaceId.B_sy1: 1, SubspaceId.A_sk3: 2, SubspaceId.A_sy3: 5,
                SubspaceId.C_sk3: 8, SubspaceId.C_sy6: 11}

ALL_SPACES = tuple(SubspaceId)

# Fixed index choices (1-based) for each family.
A_SK3_INDICES = (1, 2, 3)
A_SY3_PAIRS = ((1, 4), (2, 4), (3, 4))
C_SK3_TRIPLES = ((2, 3, 4), (1, 3, 4), (1, 2, 4))
C_SY6_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


def space_of_label(k: int) -> SubspaceId:
    for space in ALL_SPACES:
        if k in space.labels:
            return space
    raise ValueError(f"basis label must be in 1..16, got {k}")


def _require_regular(n):
    if not is_regular(n):
        raise NonRegularWavevector(
            f"wavevector {np.round(n, 6)} has a component below {MIN_COMPONENT} "
            f"or |n.n| below {MIN_SELF_DOT}")


def _unit(i: int) -> np.ndarray:
    e = np.zeros(4, dtype=complex)
    e[i] = 1.0
    return e


# ------------------------------------------------------------ building blocks

def p_columns(n) -> np.ndarray:
    """The four columns P^r(a,b) = i n_a delta_br - i n_b delta_ar, shape (4, 16)."""
    n = asvec4(n)
    out = np.empty((4, 16), dtype=complex)
    for r in range(4):
        e = _unit(r)
        out[r] = (1j * (np.outer(n, e) - np.outer(e, n))).reshape(16)
    return out


def cyclic_pattern(r: int, s: int, t: int) -> np.ndarray:
    """(d_ar - d_as)(d_bs - d_bt) - (d_br - d_bs)(d_as - d_at) for 1-based r, s, t."""
    d = np.eye(4)
    r, s, t = r - 1, s - 1, t - 1
    u, w = d[r] - d[s], d[s] - d[t]
    return np.outer(u, w) - np.outer(w, u)


def r_operator(n, r: int, s: int, t: int, half: bool = True) -> np.ndarray:
    """Column of X^r X^s X^t / (2 X^a X^b) times the cyclic pattern.

    The division by n_a n_b is carried out entrywise, which is why every
    component of n must be bounded away from zero.  ``half=False`` drops the
    factor 1/2.
    """
    n = asvec4(n)
    _require_regular(n)
    if len({r, s, t}) != 3:
        raise ValueError("r, s, t must be distinct")
    num = (1j) ** 3 * n[r - 1] * n[s - 1] * n[t - 1]
    den = (1j) ** 2 * np.outer(n, n)
    col = num / den * cyclic_pattern(r, s, t)
    if half:
        col = col / 2
    return col.reshape(16)


def q_operator(n, r: int, s: int) -> np.ndarray:
    """Column of X_a P_b^{rs} + X_b P_a^{rs}, with P_a^{rs} = X^r d_as - X^s d_ar."""
    n = asvec4(n)
    w = 1j * (n[r - 1] * _unit(s - 1) - n[s - 1] * _unit(r - 1))
    return (1j * (np.outer(n, w) + np.outer(w, n))).reshape(16)


def basis(space: SubspaceId, k: int, n) -> np.ndarray:
    """Basis element U^k (global label k) of ``space`` at wavevector n."""
    space = SubspaceId(space)
    if k not in space.labels:
        raise ValueError(f"label {k} does not belong to {space.value}")
    n = asvec4(n)
    j = k - space.labels.start
    if space is SubspaceId.B_sy1:
        return (-np.outer(n, n)).reshape(16)
    if space is SubspaceId.A_sk3:
        return p_columns(n)[A_SK3_INDICES[j] - 1]
    if space is SubspaceId.A_sy3:
        return q_operator(n, *A_SY3_PAIRS[j])
    if space is SubspaceId.C_sk3:
        return r_operator(n, *C_SK3_TRIPLES[j])
    r, s = C_SY6_PAIRS[j]
    v = 1j * (n[r - 1] * _unit(s - 1) - n[s - 1] * _unit(r - 1))
    return np.outer(v, v).reshape(16)


def cluster_basis(space: SubspaceId, n) -> np.ndarray:
    """Basis columns of one family stacked as a (16, dim) matrix."""
    space = SubspaceId(space)
    return np.stack([basis(space, k, n) for k in space.labels], axis=1)


def full_basis(n) -> np.ndarray:
    """All sixteen basis columns, column k-1 holding U^k."""
    return np.concatenate([cluster_basis(s, n) for s in ALL_SPACES], axis=1)


# --------------------------------------------------------------- the matrix

def assemble_m16(n) -> np.ndarray:
    """K_{(ab),(ij)} = n_a n_i d_bj + n_b n_j d_ai."""
    n = asvec4(n)
    d = np.eye(4)
    K = np.einsum("a,i,bj->abij", n, n, d) + np.einsum("b,j,ai->abij", n, n, d)
    return K.reshape(16, 16)


def assemble_m16_trivial(n) -> np.ndarray:
    """Fourier image of the diagonal alternative, -(d_mr d_ns + d_nr d_ms)(n.n)."""
    d = np.eye(4)
    S = np.einsum("mr,ns->mnrs", d, d) + np.einsum("nr,ms->mnrs", d, d)
    return -S.reshape(16, 16) * dot(n, n)


CLUSTER_VALUES = (0, 1, 2)
EXPECTED_MULTIPLICITY = {0: 9, 1: 6, 2: 1}


@dataclass
class EigenReport:
    n: np.ndarray
    eigenvalues: np.ndarray                    # normalized, sorted by real part
    multiplicities: dict
    cluster_distance: float                    # max |lambda - nearest cluster|
    eigenvectors: dict = field(repr=False)     # cluster value -> (16, m) orthonormal
    residuals: dict = field(default_factory=dict)  # cluster value -> max eigen residual
    basis_residuals: dict = field(default_factory=dict)  # label k -> relative residual

    def as_dict(self) -> dict:
        return {
            "eigenvalues": [[float(v.real), float(v.imag)] for v in self.eigenvalues],
            "multiplicities": {str(k): int(v) for k, v in self.multiplicities.items()},
            "cluster_distance": float(self.cluster_distance),
            "cluster_residuals": {str(k): float(v) for k, v in self.residuals.items()},
            "basis_residuals": {str(k): float(v) for k, v in self.basis_residuals.items()},
        }


def eigen_residual(n, U, lam) -> float:
    """||K U - lam (n.n) U|| / (||K|| ||U||)."""
    K = assemble_m16(n)
    U = np.asarray(U, dtype=complex)
    r = K @ U - lam * dot(n, n) * U
    return float(np.linalg.norm(r) / (np.linalg.norm(K, 2) * np.linalg.norm(U)))


def eigendecompose(n, cluster_tol: float = 1e-6) -> EigenReport:
    """Eigen-decomposition of K/(n.n), grouped into the clusters {0, 1, 2}.

    K is complex-symmetric but not Hermitian, so a general eigensolver is used.
    """
    n = asvec4(n)
    _require_regular(n)
    nn = dot(n, n)
    K = assemble_m16(n)
    vals, vecs = np.linalg.eig(K / nn)
    nearest = np.array([min(CLUSTER_VALUES, key=lambda c: abs(v - c)) for v in vals])
    dist = np.abs(vals - nearest)
    if np.max(dist) > cluster_tol:
        raise ClusterFailure(
            f"normalized eigenvalue {vals[np.argmax(dist)]:.3g} is {np.max(dist):.3g} "
            f"from the nearest cluster")
    order = np.argsort(vals.real, kind="stable")
    mult = {c: int(np.sum(nearest == c)) for c in CLUSTER_VALUES}
    grouped, resid = {}, {}
    Knorm = np.linalg.norm(K, 2)
    for c in CLUSTER_VALUES:
        V = vecs[:, nearest == c]
        if V.shape[1]:
            Q, _ = np.linalg.qr(V)
            grouped[c] = Q
            R = K @ Q - c * nn * Q
            resid[c] = float(np.linalg.norm(R, 2) / Knorm)
        else:
            grouped[c] = np.zeros((16, 0), dtype=complex)
            resid[c] = 0.0
    basis_res = {}
    for space in ALL_SPACES:
        for k in space.labels:
            basis_res[k] = eigen_residual(n, basis(space, k, n), space.eigenvalue)
    return EigenReport(n=n, eigenvalues=vals[order], multiplicities=mult,
                       cluster_distance=float(np.max(dist)), eigenvectors=grouped,
                       residuals=resid, basis_residuals=basis_res)


# ------------------------------------------------------------ orthogonality

def bilinear(U, V) -> complex:
    """sum_ab U(a,b) V(a,b) (indices raised by the Kronecker metric)."""
    return complex(np.sum(np.asarray(U) * np.asarray(V)))


def gram_orthogonality(n) -> np.ndarray:
    """16x16 matrix of |U^k . U^l| / (||U^k|| ||U^l||) over all basis pairs."""
    n = asvec4(n)
    _require_regular(n)
    B = full_basis(n)
    norms = np.linalg.norm(B, axis=0)
    return np.abs(B.T @ B) / np.outer(norms, norms)


def label_eigenvalues() -> np.ndarray:
    """Eigenvalue tag of each basis label, index k-1."""
    return np.array([space_of_label(k).eigenvalue for k in range(1, 17)])


def max_cross_cluster(gram: np.ndarray) -> float:
    lam = label_eigenvalues()
    mask = lam[:, None] != lam[None, :]
    return float(np.max(gram[mask]))


def cluster_gram(space: SubspaceId, n) -> np.ndarray:
    """Normalized bilinear Gram matrix of one family."""
    B = cluster_basis(space, n)
    B = B / np.linalg.norm(B, axis=0)
    return B.T @ B


def project(space: SubspaceId, H, n, max_condition: float = 1e12) -> np.ndarray:
    """Projection of H onto ``space`` along the other fifteen basis directions.

    Uses the bilinear Gram matrix; because distinct clusters are bilinearly
    orthogonal, the five projections of any H sum to H.
    """
    _require_regular(n)
    B = cluster_basis(space, n)
    B = B / np.linalg.norm(B, axis=0)
    G = B.T @ B
    if np.linalg.cond(G) > max_condition:
        raise SingularGram(f"Gram matrix of {SubspaceId(space).value} is ill-conditioned")
    coeffs = np.linalg.solve(G, B.T @ np.asarray(H, dtype=complex))
    return B @ coeffs


def expand(n, coefficients) -> np.ndarray:
    """sum_k coefficients[k-1] * U^k over all sixteen basis columns."""
    return full_basis(n) @ np.asarray(coefficients, dtype=complex)


# -------------------------------------------------------------- identities

def p_contraction(n) -> np.ndarray:
    """sum_r n_r P^r, which vanishes identically."""
    n = asvec4(n)
    return n @ p_columns(n)


def r_cyclic_combination(n) -> np.ndarray:
    """n1 R^{234} - n2 R^{341} + n3 R^{412} - n4 R^{123}."""
    n = asvec4(n)
    return (n[0] * r_operator(n, 2, 3, 4) - n[1] * r_operator(n, 3, 4, 1)
            + n[2] * r_operator(n, 4, 1, 2) - n[3] * r_operator(n, 1, 2, 3))


def q_cyclic_combination(n, r: int, s: int, t: int) -> np.ndarray:
    """X^r Q^{st} + X^t Q^{rs} + X^s Q^{tr}, which vanishes for distinct r, s, t."""
    n = asvec4(n)
    return 1j * (n[r - 1] * q_operator(n, s, t) + n[t - 1] * q_operator(n, r, s)
                 + n[s - 1] * q_operator(n, t, r))


def cyclic_sum(H, n, r: int, s: int, t: int) -> complex:
    """Fourier image of dH_st/dx^r + dH_tr/dx^s + dH_rs/dx^t."""
    n = asvec4(n)
    H = np.asarray(H, dtype=complex).reshape(4, 4)
    r, s, t = r - 1, s - 1, t - 1
    return complex(1j * (n[r] * H[s, t] + n[s] * H[t, r] + n[t] * H[r, s]))
