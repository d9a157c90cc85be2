"""Field tensors from four-potentials and from the relativistic magnetic potential.

A plane-wave potential phi(x) = phi0 exp(i n.x) is represented by its
amplitude and wavevector; every function here works on those amplitudes.
The RMP A = (A1, A2, A3) embeds as the four-potential (A1, A2, A3, 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonSpatialWavevector, ZeroTemporalComponent
from .tensor_core import LEVI_CIVITA, apply_rank1, asvec4

ZERO_TOL = 1e-12


def _vec3(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.shape != (3,):
        raise ValueError(f"expected a three-component amplitude, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class FourPotential:
    phi: np.ndarray
    n: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "phi", asvec4(self.phi))
        object.__setattr__(self, "n", asvec4(self.n))


@dataclass(frozen=True)
class RMP:
    A: np.ndarray
    n: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _vec3(self.A))
        object.__setattr__(self, "n", asvec4(self.n))

    def embed(self) -> FourPotential:
        return FourPotential(np.append(self.A, 0.0), self.n)


@dataclass(frozen=True)
class EBFields:
    E: np.ndarray
    B: np.ndarray


def field_from_four_potential(p: FourPotential) -> np.ndarray:
    """F_ab = i (n_a phi_b - n_b phi_a)."""
    return 1j * (np.outer(p.n, p.phi) - np.outer(p.phi, p.n))


def _require_temporal(n):
    if abs(n[3]) < ZERO_TOL:
        raise ZeroTemporalComponent(f"fourth wavevector component {n[3]} is zero")


def rmp_reduce(p: FourPotential) -> RMP:
    """A_r = phi_r - (n_r / n_4) phi_4, r = 1..3.

    Evaluated as the spatial part of the temporal gauge shift, so the two
    routes agree bit for bit.
    """
    psi0 = temporal_gauge_parameter(p)
    return RMP(p.phi[:3] + 1j * p.n[:3] * psi0, p.n)


def field_from_rmp(a: RMP) -> np.ndarray:
    """Explicit RMP field matrix; F_k4 = -i n_4 A_k and F_jk = i(n_j A_k - n_k A_j)."""
    n, A = a.n, a.A
    F = np.zeros((4, 4), dtype=complex)
    for j in range(3):
        for k in range(j + 1, 3):
            F[j, k] = 1j * (n[j] * A[k] - n[k] * A[j])
            F[k, j] = -F[j, k]
        F[j, 3] = -1j * n[3] * A[j]
        F[3, j] = -F[j, 3]
    return F


def gauge_shift_four(p: FourPotential, psi0: complex) -> FourPotential:
    """phi' = phi + X psi with psi = psi0 exp(i n.x)."""
    return FourPotential(p.phi + 1j * p.n * psi0, p.n)


def temporal_gauge_parameter(p: FourPotential) -> complex:
    """psi0 for which the shifted potential has vanishing fourth component."""
    _require_temporal(p.n)
    return complex(1j * (p.phi[3] / p.n[3]))


def gauge_shift_spatial(a: RMP, psi0: complex) -> RMP:
    """A' = A + grad psi for a gauge function of the spatial coordinates only."""
    if abs(a.n[3]) > ZERO_TOL:
        raise NonSpatialWavevector(
            f"spatial gauge shift needs n_4 = 0, got {a.n[3]}")
    return RMP(a.A + 1j * a.n[:3] * psi0, a.n)


def transform_rmp(T, a: RMP) -> RMP:
    """Carry an RMP through x -> T x.

    The embedded four-potential and the wavevector transform as vectors; the
    temporal component produced by the map is then shifted away.
    """
    T = np.asarray(T, dtype=complex)
    Phi_hat = apply_rank1(T, a.embed().phi)
    n_hat = apply_rank1(T, a.n)
    _require_temporal(n_hat)
    A_hat = Phi_hat[:3] - n_hat[:3] / n_hat[3] * Phi_hat[3]
    return RMP(A_hat, n_hat)


def eb_extract(F) -> EBFields:
    """E_k = i F_k4 and B = (F_23, F_31, F_12)."""
    F = np.asarray(F, dtype=complex)
    E = 1j * F[:3, 3]
    B = np.array([F[1, 2], F[2, 0], F[0, 1]])
    return EBFields(E, B)


def dual_field(F) -> np.ndarray:
    """G_ab = (1/2) eps_abmn F_mn with eps_1234 = +1."""
    return 0.5 * np.einsum("abmn,mn->ab", LEVI_CIVITA, np.asarray(F, dtype=complex))


def dual_of_rmp_field(a: RMP) -> np.ndarray:
    """Closed form of dual_field(field_from_rmp(a)), written out entry by entry.

    Each entry is a single re-ordered entry of the RMP field matrix.
    """
    n, A = a.n, a.A
    G = np.zeros((4, 4), dtype=complex)
    G[0, 1] = -1j * n[3] * A[2]
    G[0, 2] = -(-1j * n[3] * A[1])
    G[0, 3] = 1j * (n[1] * A[2] - n[2] * A[1])
    G[1, 2] = -1j * n[3] * A[0]
    G[1, 3] = 1j * (n[2] * A[0] - n[0] * A[2])
    G[2, 3] = 1j * (n[0] * A[1] - n[1] * A[0])
    return G - G.T


def rmp_to_c_sk3_coefficients(A) -> np.ndarray:
    """Coefficients on the three C_sk3 basis columns whose combination is dual(F(A)).

    With the basis triples (2,3,4), (1,3,4), (1,2,4) the second triple has the
    opposite cyclic orientation to the other two, and each column carries a
    factor 1/2, so the map is alpha = 2 * (-A1, A2, -A3).
    """
    A = _vec3(A)
    return 2.0 * np.array([-A[0], A[1], -A[2]])
