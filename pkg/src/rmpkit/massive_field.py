"""The massive vector field generated by the symmetric lambda=1 family.

Potentials C = (C1, C2, C3) produce the four-vector theta, the symmetric
tensor G_ab = X_a theta_b + X_b theta_a and its conserved current.  On the
Klein-Gordon shell n.n = -kappa^2 the current reduces to kappa^2 theta.

The covariant representation packs C into an antisymmetric tensor Phi with
only three independent entries D = (D1, D2, D3):

        [  0   D1   D2   D3 ]
        [ -D1   0   D3   D2 ]
        [ -D2 -D3    0   D1 ]
        [ -D3 -D2  -D1    0 ]
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDirection, SingularSystem, TemplateMismatch, ZeroTemporalComponent
from .operator_spaces import SubspaceId, cluster_basis
from .tensor_core import apply_rank1, apply_rank2, asvec4, dot

log = logging.getLogger(__name__)

MAX_CONDITION = 1e12
TEMPLATE_TOL = 1e-9


@dataclass(frozen=True)
class CPotential:
    C: np.ndarray
    n: np.ndarray
    kappa: float = 0.0

    def __post_init__(self):
        C = np.asarray(self.C, dtype=complex)
        if C.shape != (3,):
            raise ValueError(f"C must have three components, got shape {C.shape}")
        if self.kappa < 0:
            raise ValueError("kappa must be non-negative")
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "n", asvec4(self.n))


@dataclass(frozen=True)
class CovariantPhi:
    D: np.ndarray
    Phi: np.ndarray


def theta_from_c(c: CPotential) -> np.ndarray:
    """theta = (-i n4 C, i (n1 C1 + n2 C2 + n3 C3))."""
    n = c.n
    theta = np.empty(4, dtype=complex)
    theta[:3] = -1j * n[3] * c.C
    theta[3] = 1j * np.dot(n[:3], c.C)
    return theta


def c_from_theta(theta, n) -> np.ndarray:
    """Recover C from the spatial part of theta (needs n4 != 0)."""
    theta, n = asvec4(theta), asvec4(n)
    if abs(n[3]) < 1e-12:
        raise ZeroTemporalComponent("cannot recover C when n4 = 0")
    return theta[:3] / (-1j * n[3])


def g_from_theta(theta, n) -> np.ndarray:
    """G_ab = i (n_a theta_b + n_b theta_a)."""
    theta, n = asvec4(theta), asvec4(n)
    return 1j * (np.outer(n, theta) + np.outer(theta, n))


def g_from_basis(c: CPotential) -> np.ndarray:
    """G as the combination sum_k U^k C_k over the A_sy3 basis columns."""
    return (cluster_basis(SubspaceId.A_sy3, c.n) @ c.C).reshape(4, 4)


def current_from_g(G, n) -> np.ndarray:
    """J_a = i sum_j n_j G_aj."""
    return 1j * (np.asarray(G, dtype=complex) @ asvec4(n))


def free_current(J, theta, kappa: float) -> np.ndarray:
    """The part J0 = J - kappa^2 theta not accounted for by the mass term."""
    return asvec4(J) - kappa ** 2 * asvec4(theta)


def kg_residual(c: CPotential) -> np.ndarray:
    """(n.n + kappa^2) C, zero exactly on the Klein-Gordon shell."""
    return (dot(c.n, c.n) + c.kappa ** 2) * c.C


def on_shell_wavevector(spatial, kappa: float) -> np.ndarray:
    """n = (k, i w) with w chosen so that n.n = -kappa^2."""
    k = np.asarray(spatial, dtype=float)
    w = np.sqrt(k @ k + kappa ** 2)
    return np.array([k[0], k[1], k[2], 1j * w])


# ------------------------------------------------------------ force balance

def lorentz_force(J, F) -> np.ndarray:
    """f_a = sum_i J^i F_ai."""
    return np.asarray(F, dtype=complex) @ asvec4(J)


def force_balance_residual(j_em, F, j_mass, G) -> np.ndarray:
    return lorentz_force(j_em, F) + lorentz_force(j_mass, G)


@dataclass
class BalanceSolution:
    scale: complex
    residual: float


def solve_balance_scale(j_em, F, j_mass_direction, G, tol: float = 1e-14) -> BalanceSolution:
    """Least-squares s minimising ||f_em + s * (J_dir . G)||."""
    f_em = lorentz_force(j_em, F)
    g = lorentz_force(j_mass_direction, G)
    gg = np.vdot(g, g).real
    if gg <= tol ** 2 * max(1.0, np.vdot(f_em, f_em).real):
        raise DegenerateDirection("mass-force direction is numerically zero")
    s = -np.vdot(g, f_em) / gg
    return BalanceSolution(complex(s), float(np.linalg.norm(f_em + s * g)))


# -------------------------------------------------- covariant representation

def d_system(n) -> np.ndarray:
    """Coefficient matrix of the four equations V_a(D) in terms of (D1, D2, D3).

    The common factor i of the Fourier rule cancels against the left-hand side.
    """
    n1, n2, n3, n4 = asvec4(n)
    return np.array([
        [-n2, -n3, -n4],
        [n1, -n4, -n3],
        [-n4, n1, n2],
        [n3, n2, n1],
    ])


def c_rhs(C, n) -> np.ndarray:
    n = asvec4(n)
    C = np.asarray(C, dtype=complex)
    return np.array([-n[3] * C[0], -n[3] * C[1], -n[3] * C[2], n[:3] @ C])


def phi_template(D) -> np.ndarray:
    d1, d2, d3 = np.asarray(D, dtype=complex)
    U = np.array([
        [0, d1, d2, d3],
        [0, 0, d3, d2],
        [0, 0, 0, d1],
        [0, 0, 0, 0],
    ], dtype=complex)
    return U - U.T


def template_deviation(Phi) -> float:
    """How far an antisymmetric tensor is from the three-parameter pattern."""
    P = np.asarray(Phi, dtype=complex)
    scale = max(np.max(np.abs(P)), 1e-300)
    dev = max(abs(P[0, 1] - P[2, 3]), abs(P[0, 2] - P[1, 3]), abs(P[0, 3] - P[1, 2]),
              np.max(np.abs(P + P.T)))
    return float(dev / scale)


def read_template(Phi, tol: float = TEMPLATE_TOL) -> np.ndarray:
    P = np.asarray(Phi, dtype=complex)
    dev = template_deviation(P)
    if dev > tol:
        raise TemplateMismatch(f"tensor deviates from the D-pattern by {dev:.3g}", dev)
    return np.array([(P[0, 1] + P[2, 3]) / 2, (P[0, 2] + P[1, 3]) / 2,
                     (P[0, 3] + P[1, 2]) / 2])


@dataclass
class DSolution:
    phi: CovariantPhi
    fourth_row_residual: float
    condition: float


def d_from_c(c: CPotential) -> DSolution:
    """Solve the first three equations for D; report the fourth-row residual."""
    M = d_system(c.n)
    rhs = c_rhs(c.C, c.n)
    cond = float(np.linalg.cond(M[:3]))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularSystem(f"D-system is singular at n = {np.round(c.n, 6)} (cond {cond:.3g})")
    D = np.linalg.solve(M[:3], rhs[:3])
    scale = max(np.linalg.norm(M[3]) * np.linalg.norm(D), abs(rhs[3]), 1e-300)
    res = abs(M[3] @ D - rhs[3]) / scale if np.any(D) else abs(rhs[3])
    return DSolution(CovariantPhi(D, phi_template(D)), float(res), cond)


def c_from_d(D, n) -> np.ndarray:
    """Invert the first three equations for C given D at wavevector n."""
    n = asvec4(n)
    if abs(n[3]) < 1e-12:
        raise ZeroTemporalComponent("cannot recover C when n4 = 0")
    V = d_system(n)[:3] @ np.asarray(D, dtype=complex)
    return V / (-n[3])


def transform_c(T, c: CPotential) -> CPotential:
    """C -> D -> Phi -> T Phi T^t -> D^ -> C^ at the transformed wavevector.

    Raises TemplateMismatch when the transformed Phi leaves the D-pattern.
    """
    T = np.asarray(T, dtype=complex)
    sol = d_from_c(c)
    n_hat = apply_rank1(T, c.n)
    # solvability at the new wavevector is part of the contract
    d_from_c(CPotential(np.zeros(3), n_hat, c.kappa))
    Phi_hat = apply_rank2(T, sol.phi.Phi)
    try:
        D_hat = read_template(Phi_hat)
    except TemplateMismatch as exc:
        log.warning("transform_c: %s", exc)
        raise
    return CPotential(c_from_d(D_hat, n_hat), n_hat, c.kappa)


def transform_c_via_theta(T, c: CPotential) -> CPotential:
    """Reference route: transport theta as a four-vector and read C back."""
    T = np.asarray(T, dtype=complex)
    n_hat = apply_rank1(T, c.n)
    theta_hat = apply_rank1(T, theta_from_c(c))
    return CPotential(c_from_theta(theta_hat, n_hat), n_hat, c.kappa)
