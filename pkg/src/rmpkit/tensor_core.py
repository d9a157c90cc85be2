"""Index conventions, the ict metric, Lorentz maps and the Fourier operator rule.

Coordinates follow x = (x1, x2, x3, ict), so the metric is the Kronecker delta
and every Lorentz map is a complex-orthogonal 4x4 matrix.  Differential
operators are never manipulated symbolically: they are evaluated on the plane
wave f0 * exp(i n.x), where d/dx^a acts as multiplication by i*n_a.

Indices in the public helpers that mirror tensor notation (``flatten_index``,
``fourier_diff``, ``boost``, ``rotation``) are 1-based; array indexing inside
the package is 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

# Regularity thresholds for wavevectors (see ``WaveVector.regular``).
MIN_COMPONENT = 0.5
MAX_COMPONENT = 4.0
MIN_SELF_DOT = 0.1

DEFAULT_RTOL = 1e-10


def asvec4(v) -> np.ndarray:
    """Return ``v`` as a complex array of shape (4,)."""
    arr = np.asarray(v, dtype=complex)
    if arr.shape != (4,):
        raise ValueError(f"expected a four-vector, got shape {arr.shape}")
    return arr


def dot(u, v) -> complex:
    """Euclidean (ict) inner product: sum_a u_a v_a, no conjugation."""
    return complex(np.dot(asvec4(u), asvec4(v)))


@dataclass(frozen=True)
class WaveVector:
    """Complex wavevector n of a plane wave exp(i n.x)."""

    n: tuple

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(complex(c) for c in asvec4(self.n)))

    def __array__(self, dtype=None, copy=None):
        return np.array(self.n, dtype=dtype if dtype is not None else complex)

    @property
    def self_dot(self) -> complex:
        return dot(self.n, self.n)

    @property
    def regular(self) -> bool:
        return is_regular(self.n)


def is_regular(n, min_component: float = MIN_COMPONENT,
               min_self_dot: float = MIN_SELF_DOT) -> bool:
    """All four components and n.n are bounded away from zero."""
    n = asvec4(n)
    return bool(np.all(np.abs(n) >= min_component) and abs(dot(n, n)) >= min_self_dot)


def fourier_diff(a: int, n, f0: complex = 1.0) -> complex:
    """Image of d/dx^a on the amplitude f0 of exp(i n.x): i * n_a * f0."""
    return 1j * asvec4(n)[a - 1] * f0


def fourier_integrate(a: int, n, f0: complex = 1.0) -> complex:
    """Image of the inverse operator 1/X_a (integration along x^a)."""
    return f0 / (1j * asvec4(n)[a - 1])


def dalembertian(n) -> complex:
    """Multiplier of the invariant second-order operator under the Fourier rule."""
    return dot(n, n)


def flatten_index(a: int, b: int) -> int:
    """Row-major flat index (1..16) for the tensor index pair (a, b)."""
    if not (1 <= a <= 4 and 1 <= b <= 4):
        raise ValueError(f"index pair out of range: {(a, b)}")
    return 4 * (a - 1) + b


def unflatten_index(k: int) -> tuple[int, int]:
    if not 1 <= k <= 16:
        raise ValueError(f"flat index out of range: {k}")
    return (k - 1) // 4 + 1, (k - 1) % 4 + 1


def to_column(H) -> np.ndarray:
    """4x4 tensor amplitude -> 16-entry column (row-major)."""
    H = np.asarray(H, dtype=complex)
    if H.shape != (4, 4):
        raise ValueError(f"expected a 4x4 tensor, got shape {H.shape}")
    return H.reshape(16).copy()


def to_matrix(col) -> np.ndarray:
    col = np.asarray(col, dtype=complex)
    if col.shape != (16,):
        raise ValueError(f"expected a 16-entry column, got shape {col.shape}")
    return col.reshape(4, 4).copy()


def is_symmetric(H, tol: float = 1e-12) -> bool:
    H = np.asarray(H).reshape(4, 4)
    scale = max(np.max(np.abs(H)), 1.0)
    return bool(np.max(np.abs(H - H.T)) <= tol * scale)


def is_antisymmetric(H, tol: float = 1e-12) -> bool:
    H = np.asarray(H).reshape(4, 4)
    scale = max(np.max(np.abs(H)), 1.0)
    return bool(np.max(np.abs(H + H.T)) <= tol * scale)


def _levi_civita() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        inversions = sum(perm[i] > perm[j] for i in range(4) for j in range(i + 1, 4))
        eps[perm] = -1.0 if inversions % 2 else 1.0
    return eps


# epsilon_{1234} = +1
LEVI_CIVITA = _levi_civita()


# ---------------------------------------------------------------- Lorentz maps

def boost(axis: int, rapidity: float) -> np.ndarray:
    """Pure boost along spatial ``axis`` (1..3) in the ict convention."""
    if axis not in (1, 2, 3):
        raise ValueError("boost axis must be 1, 2 or 3")
    if not np.isfinite(rapidity):
        raise ValueError("rapidity must be finite")
    k = axis - 1
    T = np.eye(4, dtype=complex)
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    T[k, k] = ch
    T[k, 3] = 1j * sh
    T[3, k] = -1j * sh
    T[3, 3] = ch
    return T


def rotation(axis: int, angle: float) -> np.ndarray:
    """Right-handed (active) rotation by ``angle`` about spatial ``axis``.

    rotation(3, pi/2) sends (1, 0, 0, 0) to (0, 1, 0, 0).
    """
    if axis not in (1, 2, 3):
        raise ValueError("rotation axis must be 1, 2 or 3")
    i, j = {1: (1, 2), 2: (2, 0), 3: (0, 1)}[axis]
    T = np.eye(4, dtype=complex)
    c, s = np.cos(angle), np.sin(angle)
    T[i, i] = c
    T[j, j] = c
    T[i, j] = -s
    T[j, i] = s
    return T


def is_lorentz_map(T, tol: float = 1e-12) -> bool:
    T = np.asarray(T, dtype=complex)
    return bool(np.max(np.abs(T @ T.T - np.eye(4))) <= tol
                and abs(np.linalg.det(T) - 1.0) <= tol)


def inverse_map(T) -> np.ndarray:
    """Inverse of a complex-orthogonal map (its transpose)."""
    return np.asarray(T, dtype=complex).T.copy()


def apply_rank1(T, v) -> np.ndarray:
    return np.asarray(T, dtype=complex) @ asvec4(v)


def apply_rank2(T, H) -> np.ndarray:
    T = np.asarray(T, dtype=complex)
    return T @ np.asarray(H, dtype=complex) @ T.T


def random_lorentz_map(rng: np.random.Generator, max_rapidity: float = 2.0,
                       kind: str = "mixed") -> np.ndarray:
    """Random proper Lorentz map built from rotations and boosts.

    kind is "rotation", "boost" or "mixed" (rotation * boost * rotation).
    """
    def rand_rot():
        T = np.eye(4, dtype=complex)
        for axis in rng.permutation([1, 2, 3]):
            T = rotation(int(axis), rng.uniform(-np.pi, np.pi)) @ T
        return T

    def rand_boost():
        return boost(int(rng.integers(1, 4)), rng.uniform(-max_rapidity, max_rapidity))

    if kind == "rotation":
        return rand_rot()
    if kind == "boost":
        return rand_boost()
    if kind == "mixed":
        return rand_rot() @ rand_boost() @ rand_rot()
    raise ValueError(f"unknown kind {kind!r}")


# ------------------------------------------------------------- wavevectors

def random_regular_wavevector(seed=None, physical: bool = True) -> WaveVector:
    """Deterministic random regular wavevector.

    Every component has magnitude in [0.5, 4] and |n.n| > 0.1.  With
    ``physical`` the spatial part is real and the fourth component purely
    imaginary (a real wave in the ict convention); otherwise each component
    carries an arbitrary complex phase.  ``seed`` may be an int or a Generator.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        mags = rng.uniform(MIN_COMPONENT, MAX_COMPONENT, size=4)
        if physical:
            signs = rng.choice([-1.0, 1.0], size=4)
            n = (mags * signs).astype(complex)
            n[3] *= 1j
        else:
            n = mags * np.exp(1j * rng.uniform(0, 2 * np.pi, size=4))
        if abs(dot(n, n)) > MIN_SELF_DOT:
            return WaveVector(tuple(n))


def parse_complex(token: str) -> complex:
    """Parse '3', '-2.5', '5i', '1+2i', '-i' into a complex number."""
    s = token.strip().replace(" ", "")
    if not s:
        raise ValueError("empty number")
    s = s.replace("I", "i").replace("j", "i")
    if s.endswith("i"):
        body = s[:-1]
        if body in ("", "+"):
            body += "1"
        elif body == "-":
            body = "-1"
        elif body[-1] in "+-":
            body += "1"
        s = body + "j"
    return complex(s)


def parse_vector(text: str, size: int) -> np.ndarray:
    parts = [p for p in text.split(",")]
    if len(parts) != size:
        raise ValueError(f"expected {size} comma-separated components, got {len(parts)}")
    return np.array([parse_complex(p) for p in parts], dtype=complex)
