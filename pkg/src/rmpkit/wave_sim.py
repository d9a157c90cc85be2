"""Plane-wave mode classification and a spectral evolver for the vacuum RMP equation.

On a periodic grid the source-free equation

    d^2 A / dt^2 = c^2 (lap A - grad div A)

decouples per Fourier mode m into a transverse part (perpendicular to m),
which oscillates at omega = c |m|, and a longitudinal part (parallel to m),
which has zero restoring force and so moves linearly in time.  The update
below is the exact solution per mode, so ``dt`` only sets the sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .tensor_core import asvec4, dot

CLASSIFY_TOL = 1e-9

TRANSVERSE = "Transverse"
LONGITUDINAL = "Longitudinal"
NON_SOLUTION = "NonSolution"


# ------------------------------------------------------- plane-wave analysis

def _vec3(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.shape != (3,):
        raise ValueError(f"expected three components, got shape {arr.shape}")
    return arr


def vacuum_residual(A0, n) -> np.ndarray:
    """(n.n) A0 - (k.A0) k with k the spatial part of n."""
    A0, n = _vec3(A0), asvec4(n)
    k = n[:3]
    return dot(n, n) * A0 - (k @ A0) * k


def relative_vacuum_residual(A0, n) -> float:
    A0, n = _vec3(A0), asvec4(n)
    scale = np.linalg.norm(A0) * np.linalg.norm(n) ** 2
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(vacuum_residual(A0, n)) / scale)


@dataclass(frozen=True)
class ModeClass:
    kind: str
    residual: float
    transversality: complex   # k.A0
    self_dot: complex         # n.n

    def as_dict(self) -> dict:
        return {"kind": self.kind, "residual": self.residual,
                "k_dot_A0": [self.transversality.real, self.transversality.imag],
                "n_dot_n": [self.self_dot.real, self.self_dot.imag]}


def classify_mode(A0, n, tol: float = CLASSIFY_TOL) -> ModeClass:
    """Transverse, Longitudinal or NonSolution, with scale-free tolerances.

    Transverse: n.n = 0 and k.A0 = 0.  Longitudinal: n4 = 0 and A0 parallel to k.
    """
    A0, n = _vec3(A0), asvec4(n)
    k = n[:3]
    nn = dot(n, n)
    kA = complex(k @ A0)
    a_norm, k_norm, n_norm = np.linalg.norm(A0), np.linalg.norm(k), np.linalg.norm(n)
    res = relative_vacuum_residual(A0, n)
    if a_norm > 0 and n_norm > 0:
        if abs(nn) < tol * n_norm ** 2 and abs(kA) < tol * a_norm * k_norm:
            return ModeClass(TRANSVERSE, res, kA, nn)
        if abs(n[3]) < tol * n_norm and k_norm > 0:
            perp = A0 - (np.vdot(k, A0) / k_norm ** 2) * k
            if np.linalg.norm(perp) < tol * a_norm:
                return ModeClass(LONGITUDINAL, res, kA, nn)
    return ModeClass(NON_SOLUTION, res, kA, nn)


def j4_diagnostic(A0, n, c: float = 1.0) -> complex:
    """J4 defined by X4 (div A) = (4 pi / c) J4 for the plane wave A0 exp(i n.x)."""
    A0, n = _vec3(A0), asvec4(n)
    return complex((c / (4 * np.pi)) * (1j * n[3]) * (1j * (n[:3] @ A0)))


# ----------------------------------------------------------------- the grid

@dataclass
class ModeSpec:
    """One initial Fourier mode on the grid.

    ``index`` is the integer wave index (kx, ky, kz); ``kind`` is
    "transverse" or "longitudinal".  Transverse modes start as a travelling
    wave (``traveling=True``) or a standing wave with zero initial velocity.
    Longitudinal modes may carry an initial velocity (zero by default).
    """

    index: tuple
    amplitude: np.ndarray
    kind: str = "transverse"
    traveling: bool = True
    velocity: np.ndarray | None = None

    def __post_init__(self):
        self.index = tuple(int(i) for i in self.index)
        self.amplitude = _vec3(self.amplitude)
        if self.velocity is not None:
            self.velocity = _vec3(self.velocity)
        if self.kind not in ("transverse", "longitudinal"):
            raise ConfigError(f"unknown mode kind {self.kind!r}")


def longitudinal_mode(index, alpha: complex = 1.0, velocity=None) -> ModeSpec:
    """alpha times the unit vector along the wave index."""
    k = np.asarray(index, dtype=float)
    if not np.any(k):
        raise ConfigError("a longitudinal mode needs a nonzero wave index")
    return ModeSpec(tuple(index), alpha * k / np.linalg.norm(k), "longitudinal",
                    traveling=False, velocity=velocity)


@dataclass
class SimConfig:
    N: int = 32
    dx: float = 1.0
    c: float = 1.0
    dt: float = 0.5
    steps: int = 1000
    modes: list = field(default_factory=list)
    record_every: int = 0   # keep a full snapshot every k steps; 0 keeps none

    def validate(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 8 or self.N & (self.N - 1):
            raise ConfigError(f"N must be a power of two >= 8, got {self.N}")
        for name in ("dx", "c", "dt"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be positive, got {v}")
        if self.steps < 1:
            raise ConfigError("steps must be >= 1")
        if self.record_every < 0:
            raise ConfigError("record_every must be >= 0")
        for mode in self.modes:
            if any(abs(i) >= self.N // 2 for i in mode.index):
                raise ConfigError(f"mode index {mode.index} exceeds the Nyquist limit")
            if mode.kind == "transverse" and mode.index == (0, 0, 0):
                raise ConfigError("a transverse mode needs a nonzero wave index")


def wavenumbers(N: int, dx: float) -> np.ndarray:
    """Angular wavenumbers m, shape (3, N, N, N)."""
    k1 = 2 * np.pi * np.fft.fftfreq(N, d=dx)
    return np.stack(np.meshgrid(k1, k1, k1, indexing="ij"))


def mode_wavevector(index, N: int, dx: float) -> np.ndarray:
    return 2 * np.pi * np.asarray(index, dtype=float) / (N * dx)


@dataclass
class GridField:
    """Spectral state of A and dA/dt on an N^3 periodic grid."""

    A_hat: np.ndarray
    V_hat: np.ndarray
    dx: float
    c: float

    @property
    def N(self) -> int:
        return self.A_hat.shape[1]

    @classmethod
    def zeros(cls, N: int, dx: float, c: float) -> "GridField":
        z = np.zeros((3, N, N, N), dtype=complex)
        return cls(z, z.copy(), dx, c)

    @classmethod
    def from_position(cls, A, V, dx: float, c: float) -> "GridField":
        return cls(np.fft.fftn(A, axes=(1, 2, 3)), np.fft.fftn(V, axes=(1, 2, 3)), dx, c)

    def position(self) -> np.ndarray:
        return np.fft.ifftn(self.A_hat, axes=(1, 2, 3))

    def velocity(self) -> np.ndarray:
        return np.fft.ifftn(self.V_hat, axes=(1, 2, 3))

    def copy(self) -> "GridField":
        return GridField(self.A_hat.copy(), self.V_hat.copy(), self.dx, self.c)

    def coefficient(self, index) -> np.ndarray:
        """Plane-wave amplitude of the mode ``index`` (spectral value / N^3)."""
        N = self.N
        i, j, k = (int(x) % N for x in index)
        return self.A_hat[:, i, j, k] / N ** 3

    def split(self) -> tuple[np.ndarray, np.ndarray]:
        """(transverse, longitudinal) spectral parts of A; the m=0 mode counts as longitudinal."""
        return _split(self.A_hat, wavenumbers(self.N, self.dx))

    def fields(self) -> tuple[np.ndarray, np.ndarray]:
        """Position-space E = -(1/c) dA/dt and B = curl A."""
        m = wavenumbers(self.N, self.dx)
        E_hat = -self.V_hat / self.c
        B_hat = 1j * np.cross(m, self.A_hat, axis=0)
        return (np.fft.ifftn(E_hat, axes=(1, 2, 3)), np.fft.ifftn(B_hat, axes=(1, 2, 3)))

    def divergence(self) -> np.ndarray:
        m = wavenumbers(self.N, self.dx)
        return np.fft.ifftn(1j * np.sum(m * self.A_hat, axis=0))


def _split(X_hat, m):
    mm = np.sum(m * m, axis=0)
    safe = np.where(mm == 0, 1.0, mm)
    along = np.sum(m * X_hat, axis=0) / safe
    L = m * along
    L[:, mm == 0] = X_hat[:, mm == 0]
    return X_hat - L, L


def initial_field(cfg: SimConfig) -> GridField:
    cfg.validate()
    N = cfg.N
    g = GridField.zeros(N, cfg.dx, cfg.c)
    for mode in cfg.modes:
        m = mode_wavevector(mode.index, N, cfg.dx)
        mn = np.linalg.norm(m)
        A0 = mode.amplitude
        if mode.kind == "transverse":
            if abs(m @ A0) > 1e-9 * mn * np.linalg.norm(A0):
                raise ConfigError(f"transverse amplitude is not perpendicular to {mode.index}")
            V0 = -1j * cfg.c * mn * A0 if mode.traveling else np.zeros(3, complex)
        else:
            if mn > 0 and np.linalg.norm(np.cross(m, A0)) > 1e-9 * mn * np.linalg.norm(A0):
                raise ConfigError(f"longitudinal amplitude is not parallel to {mode.index}")
            V0 = mode.velocity if mode.velocity is not None else np.zeros(3, complex)
        i, j, k = (x % N for x in mode.index)
        g.A_hat[:, i, j, k] += N ** 3 * A0
        g.V_hat[:, i, j, k] += N ** 3 * V0
    return g


class Propagator:
    """Exact per-mode update over a fixed interval dt.

    A state is carried in modal form: the transverse part as its two
    characteristic components a+ (phase e^{-i w t}) and a- (phase e^{+i w t}),
    the longitudinal part (and the m = 0 mode) as position and velocity.
    """

    def __init__(self, N: int, dx: float, c: float, dt: float):
        self.m = wavenumbers(N, dx)
        self.omega = c * np.sqrt(np.sum(self.m * self.m, axis=0))
        self.c = c
        self.dt = dt
        self._fwd = np.exp(-1j * self.omega * dt)
        self._bwd = np.conj(self._fwd)
        zero = self.omega == 0
        self._inv_omega = np.where(zero, 0.0, 1.0 / np.where(zero, 1.0, self.omega))

    def to_modal(self, g: GridField) -> "ModalState":
        A_T, A_L = _split(g.A_hat, self.m)
        V_T, V_L = _split(g.V_hat, self.m)
        iv = 1j * V_T * self._inv_omega
        return ModalState((A_T + iv) / 2, (A_T - iv) / 2, A_L, V_L)

    def to_grid(self, s: "ModalState", dx: float) -> GridField:
        A = s.a_plus + s.a_minus + s.A_L
        V = -1j * self.omega * (s.a_plus - s.a_minus) + s.V_L
        return GridField(A, V, dx, self.c)

    def advance(self, s: "ModalState") -> None:
        """One step of length dt, in place."""
        s.a_plus *= self._fwd
        s.a_minus *= self._bwd
        s.A_L += self.dt * s.V_L

    def step(self, g: GridField) -> GridField:
        s = self.to_modal(g)
        self.advance(s)
        return self.to_grid(s, g.dx)

    def transverse_energy(self, s: "ModalState") -> np.ndarray:
        """|dA_T/dt|^2 + w^2 |A_T|^2 per mode, i.e. 2 w^2 (|a+|^2 + |a-|^2)."""
        amp = np.sum(np.abs(s.a_plus) ** 2 + np.abs(s.a_minus) ** 2, axis=0)
        return 2 * self.omega ** 2 * amp


@dataclass
class ModalState:
    a_plus: np.ndarray
    a_minus: np.ndarray
    A_L: np.ndarray
    V_L: np.ndarray


@dataclass
class SimSeries:
    config: SimConfig
    times: np.ndarray
    mode_amplitudes: np.ndarray      # (n_modes, n_steps + 1, 3)
    e_coefficients: np.ndarray       # (n_modes, n_steps + 1, 3), plane-wave E per tracked mode
    e_norm: np.ndarray               # RMS over the grid of |E(x)|
    b_norm: np.ndarray
    div_norm: np.ndarray
    max_energy_drift: float          # worst relative change of transverse mode energy per step
    initial: GridField
    final: GridField
    snapshots: list                  # (step, GridField)


def grid_rms(f) -> float:
    """RMS over the grid of the pointwise vector norm of a (3, N, N, N) field."""
    return float(np.sqrt(np.sum(np.abs(f) ** 2) / f[0].size))


def evolve(g: GridField, cfg: SimConfig, diagnostics: bool = True) -> SimSeries:
    """Step ``g`` forward cfg.steps times by cfg.dt.

    Grid norms use Parseval on the modal state: with a real wavenumber the
    transverse and longitudinal parts are orthogonal, so |E|^2 and |B|^2
    split into per-part sums without an inverse transform per step.
    """
    cfg.validate()
    if g.N != cfg.N:
        raise ConfigError(f"grid size {g.N} does not match config N={cfg.N}")
    prop = Propagator(cfg.N, cfg.dx, cfg.c, cfg.dt)
    N, N3 = cfg.N, cfg.N ** 3
    steps = cfg.steps
    n_modes = len(cfg.modes)
    amps = np.zeros((n_modes, steps + 1, 3), dtype=complex)
    ecoef = np.zeros_like(amps)
    e_norm = np.zeros(steps + 1)
    b_norm = np.zeros(steps + 1)
    div_norm = np.zeros(steps + 1)
    snapshots = []
    tracked = [tuple(x % N for x in mode.index) for mode in cfg.modes]

    s = prop.to_modal(g)
    om = prop.omega
    # longitudinal velocity never changes; its share of |E|^2 is constant
    v_l_sq = float(np.sum(np.abs(s.V_L) ** 2))
    # div A = i m.A_L, linear in t: |s0 + t sv|^2 summed over modes
    s0 = np.sum(prop.m * s.A_L, axis=0)
    sv = np.sum(prop.m * s.V_L, axis=0)
    d00, d01, d11 = (float(np.sum(np.abs(s0) ** 2)), float(np.sum(np.conj(s0) * sv).real),
                     float(np.sum(np.abs(sv) ** 2)))
    norm = float(N3)   # Parseval: grid rms = sqrt(sum |f_hat|^2) / N^3

    def record(i):
        t = i * cfg.dt
        for j, (a, b, c) in enumerate(tracked):
            ap, am = s.a_plus[:, a, b, c], s.a_minus[:, a, b, c]
            amps[j, i] = (ap + am + s.A_L[:, a, b, c]) / N3
            v = -1j * om[a, b, c] * (ap - am) + s.V_L[:, a, b, c]
            ecoef[j, i] = -v / (N3 * cfg.c)
        if diagnostics:
            diff = s.a_plus - s.a_minus
            tot = s.a_plus + s.a_minus
            et = np.sum(om ** 2 * np.sum(np.abs(diff) ** 2, axis=0))
            e_norm[i] = np.sqrt(et + v_l_sq) / (cfg.c * norm)
            bt = np.sum(om ** 2 * np.sum(np.abs(tot) ** 2, axis=0))
            b_norm[i] = np.sqrt(bt) / (cfg.c * norm)
            div_norm[i] = np.sqrt(max(d00 + 2 * t * d01 + t * t * d11, 0.0)) / norm
        if cfg.record_every and i % cfg.record_every == 0:
            snapshots.append((i, prop.to_grid(s, cfg.dx)))

    record(0)
    worst = 0.0
    energy = prop.transverse_energy(s) if diagnostics else None
    for i in range(1, steps + 1):
        prop.advance(s)
        record(i)
        if diagnostics:
            new_energy = prop.transverse_energy(s)
            scale = max(float(np.max(energy)), 1e-300)
            worst = max(worst, float(np.max(np.abs(new_energy - energy))) / scale)
            energy = new_energy
    return SimSeries(cfg, cfg.dt * np.arange(steps + 1), amps, ecoef, e_norm, b_norm,
                     div_norm, worst, g.copy(), prop.to_grid(s, cfg.dx), snapshots)


def simulate(cfg: SimConfig, diagnostics: bool = True) -> SimSeries:
    return evolve(initial_field(cfg), cfg, diagnostics=diagnostics)


# -------------------------------------------------------------- diagnostics

def _dominant(series_3):
    """Index of the component with the largest initial magnitude."""
    return int(np.argmax(np.abs(series_3[0])))


def _dominant_over_time(series_3):
    return int(np.argmax(np.max(np.abs(series_3), axis=0)))


def _real_signal(x):
    """Whichever of the real or imaginary part carries more of a complex history."""
    return x.real if np.max(np.abs(x.real)) >= np.max(np.abs(x.imag)) else x.imag


def zero_crossing_period(t, x) -> float:
    """Mean period from linearly interpolated sign changes of a real signal."""
    x = np.asarray(x, dtype=float)
    s = np.signbit(x)
    idx = np.nonzero(s[1:] != s[:-1])[0]
    if len(idx) < 3:
        return float("nan")
    crossings = t[idx] - x[idx] * (t[idx + 1] - t[idx]) / (x[idx + 1] - x[idx])
    return float(2 * np.mean(np.diff(crossings)))


def phase_speed(t, coeff, wavenumber: float) -> float:
    """|d(phase)/dt| / |m| from a least-squares fit of the unwrapped phase."""
    phase = np.unwrap(np.angle(coeff))
    slope = np.polyfit(t, phase, 1)[0]
    return float(abs(slope) / wavenumber)


def running_phase_speed(t, coeff, wavenumber: float) -> np.ndarray:
    """Cumulative estimate |phase(t) - phase(0)| / (t |m|) for each sample."""
    phase = np.unwrap(np.angle(coeff))
    out = np.full(len(t), np.nan)
    out[1:] = np.abs(phase[1:] - phase[0]) / (t[1:] * wavenumber)
    return out


def _norm_period(t, x, rel: float = 1e-9) -> float:
    """Oscillation period of a norm history; NaN when it is constant to round-off."""
    x = np.asarray(x)
    if np.ptp(x) <= rel * max(np.max(np.abs(x)), 1e-300) or np.max(np.abs(x)) < 1e-12:
        return float("nan")
    return zero_crossing_period(t, x - np.mean(x))


def measure_diagnostics(series: SimSeries) -> dict:
    cfg = series.config
    t = series.times
    if len(t) < 2:
        raise ValueError("need at least two samples")
    modes = []
    for j, mode in enumerate(cfg.modes):
        amps = series.mode_amplitudes[j]
        m = np.linalg.norm(mode_wavevector(mode.index, cfg.N, cfg.dx))
        d = _dominant(amps)
        entry = {
            "mode_id": j,
            "kind": mode.kind,
            "index": list(mode.index),
            "wavenumber": float(m),
            "amplitude_drift": float(np.max(np.linalg.norm(amps - amps[0], axis=1))),
        }
        if mode.kind == "transverse":
            expected = 2 * np.pi / (cfg.c * m)
            if mode.traveling:
                entry["phase_speed"] = phase_speed(t, amps[:, d], m)
            else:
                period = zero_crossing_period(t, _real_signal(amps[:, d]))
                entry["phase_speed"] = float(2 * np.pi / (period * m))
            ec = series.e_coefficients[j]
            entry["field_period"] = zero_crossing_period(t, _real_signal(ec[:, _dominant_over_time(ec)]))
            entry["expected_period"] = float(expected)
        else:
            entry["phase_speed"] = 0.0
        modes.append(entry)
    return {
        "modes": modes,
        "max_e_norm": float(np.max(series.e_norm)),
        "max_b_norm": float(np.max(series.b_norm)),
        "e_norm_period": _norm_period(t, series.e_norm),
        "b_norm_period": _norm_period(t, series.b_norm),
        "max_divergence": float(np.max(series.div_norm)),
        "divergence_drift": float(np.ptp(series.div_norm)),
        "max_energy_drift": series.max_energy_drift,
    }


def decompose(g: GridField) -> tuple[GridField, GridField]:
    """Split a grid state into its transverse and longitudinal parts."""
    m = wavenumbers(g.N, g.dx)
    A_T, A_L = _split(g.A_hat, m)
    V_T, V_L = _split(g.V_hat, m)
    return GridField(A_T, V_T, g.dx, g.c), GridField(A_L, V_L, g.dx, g.c)
