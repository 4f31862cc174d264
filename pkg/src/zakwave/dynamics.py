"""Conservative pseudo-spectral evolution of the first-order Zakharov system

    v_t = -V_x,   V_t = -(v + |u|^2)_x,   i u_t + u_xx = u v

on a periodic grid, plus the modulated-distance machinery used by the
orbital-stability experiments.  Derivatives are spectral, quadratic
products are 2/3-dealiased, and time stepping is classical RK4 with an
optional integrating factor for the stiff i u_xx term.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BlowUpError, DomainError
from .wavefamily import DnoidalWave, SolitaryWave, solitary_wave

__all__ = [
    "GridSpec",
    "FieldState",
    "ZakInvariants",
    "ExperimentRecord",
    "Evolver",
    "wave_state",
    "rhs",
    "step_rk4",
    "invariants",
    "q1_paper_form",
    "functional_B",
    "orbital_distance",
    "stationarity_check",
    "compatibility_integrals",
    "shift_distance",
    "band_limited_perturbation",
    "evolve",
    "stability_experiment",
    "solitary_experiment",
]


# --------------------------------------------------------------------------
# grid and state containers

@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid x_j = j L / N."""

    L: float
    N: int

    def __post_init__(self):
        if self.N % 2 != 0 or self.N < 64:
            raise DomainError(f"grid N={self.N} must be even and >= 64")

    @property
    def xs(self) -> np.ndarray:
        return np.arange(self.N) * self.L / self.N

    @property
    def k(self) -> np.ndarray:
        """Spectral wavenumbers in fft ordering."""
        return 2.0 * math.pi * np.fft.fftfreq(self.N, d=1.0 / self.N) / self.L

    @property
    def dealias_mask(self) -> np.ndarray:
        n = np.abs(np.fft.fftfreq(self.N, d=1.0 / self.N))
        return n <= self.N / 3.0

    def integrate(self, f) -> float | complex:
        """Spectral quadrature, exact for trigonometric polynomials."""
        total = np.sum(f) * self.L / self.N
        return complex(total) if np.iscomplexobj(f) else float(total)


@dataclass
class FieldState:
    """Sampled (v, V, u) triple at time t; v, V real, u complex, V mean-zero."""

    t: float
    v: np.ndarray
    V: np.ndarray
    u: np.ndarray

    def copy(self) -> "FieldState":
        return FieldState(self.t, self.v.copy(), self.V.copy(), self.u.copy())


@dataclass(frozen=True)
class ZakInvariants:
    E: float
    Q1: float
    Q2: float


def _wave_scalars(wave):
    """(c, omega, nu) for either wave flavor."""
    if isinstance(wave, DnoidalWave):
        p = wave.params
        return p.c, p.omega, p.nu
    return wave.c, wave.omega, wave.nu


def wave_state(wave, grid: GridSpec, t: float = 0.0) -> FieldState:
    """Exact traveling-wave state sampled on the grid at time t."""
    c, omega, _ = _wave_scalars(wave)
    # wrap the comoving coordinate so solitary profiles stay centered in-box;
    # the carrier uses the same wrapped coordinate so that its (generally
    # non-periodic) phase jump falls where the envelope tails vanish, not at
    # the wrap point across the profile peak
    xi = np.mod(grid.xs - c * t + 0.5 * grid.L, grid.L) - 0.5 * grid.L
    u = np.exp(-1j * omega * t) * np.exp(0.5j * c * xi) * wave.phi(xi)
    return FieldState(t=t, v=wave.psi(xi), V=wave.varphi(xi), u=u.astype(complex))


# --------------------------------------------------------------------------
# right-hand side and time stepping

class Evolver:
    """Holds the grid-derived spectral machinery for one evolution run."""

    def __init__(self, grid: GridSpec, dt: float, integrating_factor: bool = False,
                 dealias: bool = True):
        if dt <= 0.0:
            raise DomainError("dt must be positive")
        self.grid = grid
        self.dt = dt
        self.integrating_factor = integrating_factor
        self.k = grid.k
        self.ik = 1j * self.k
        self.k2 = self.k**2
        self.mask = grid.dealias_mask if dealias else np.ones(grid.N, dtype=bool)
        if integrating_factor:
            self.E_half = np.exp(-0.5j * self.k2 * dt)
            self.E_full = self.E_half**2

    # spectral state is the tuple (vhat, Vhat, uhat)
    def to_spectral(self, s: FieldState):
        return np.fft.fft(s.v), np.fft.fft(s.V), np.fft.fft(s.u)

    def to_physical(self, spec, t: float) -> FieldState:
        vhat, Vhat, uhat = spec
        return FieldState(t=t, v=np.fft.ifft(vhat).real, V=np.fft.ifft(Vhat).real,
                          u=np.fft.ifft(uhat))

    def rhs_spectral(self, spec, include_linear_u: bool = True):
        vhat, Vhat, uhat = spec
        v = np.fft.ifft(vhat).real
        u = np.fft.ifft(uhat)
        u2hat = np.fft.fft(np.abs(u) ** 2)
        u2hat *= self.mask
        uvhat = np.fft.fft(u * v)
        uvhat *= self.mask
        dv = -self.ik * Vhat
        dV = -self.ik * (vhat + u2hat)
        du = -1j * uvhat
        if include_linear_u:
            du = du - 1j * self.k2 * uhat
        return dv, dV, du

    def step(self, spec):
        """One RK4 (or integrating-factor RK4) step on the spectral state."""
        dt = self.dt
        if not self.integrating_factor:
            f = self.rhs_spectral
            k1 = f(spec)
            k2 = f(tuple(y + 0.5 * dt * d for y, d in zip(spec, k1)))
            k3 = f(tuple(y + 0.5 * dt * d for y, d in zip(spec, k2)))
            k4 = f(tuple(y + dt * d for y, d in zip(spec, k3)))
            return tuple(
                y + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
                for y, a, b, c, d in zip(spec, k1, k2, k3, k4)
            )
        # Lawson integrating-factor RK4: exact transport of the i u_xx term
        eh = (1.0, 1.0, self.E_half)
        ef = (1.0, 1.0, self.E_full)
        f = lambda s: self.rhs_spectral(s, include_linear_u=False)
        k1 = f(spec)
        s2 = tuple(e * (y + 0.5 * dt * d) for e, y, d in zip(eh, spec, k1))
        k2 = f(s2)
        s3 = tuple(e * y + 0.5 * dt * d for e, y, d in zip(eh, spec, k2))
        k3 = f(s3)
        s4 = tuple(e * y + dt * eh_i * d for e, eh_i, y, d in zip(ef, eh, spec, k3))
        k4 = f(s4)
        return tuple(
            e * y + dt / 6.0 * (e * a + 2.0 * eh_i * (b + c) + d)
            for e, eh_i, y, a, b, c, d in zip(ef, eh, spec, k1, k2, k3, k4)
        )


def rhs(s: FieldState, grid: GridSpec, dealias: bool = True) -> FieldState:
    """Time derivative of the state (physical-space view of the spectral rhs)."""
    ev = Evolver(grid, dt=1.0, dealias=dealias)
    spec = ev.to_spectral(s)
    dv, dV, du = ev.rhs_spectral(spec)
    return FieldState(t=s.t, v=np.fft.ifft(dv).real, V=np.fft.ifft(dV).real,
                      u=np.fft.ifft(du))


def step_rk4(s: FieldState, dt: float, grid: GridSpec,
             integrating_factor: bool = False) -> FieldState:
    """Single classical fourth-order step; raises BlowUpError on NaN/overflow."""
    ev = Evolver(grid, dt, integrating_factor=integrating_factor)
    out = ev.to_physical(ev.step(ev.to_spectral(s)), s.t + dt)
    if not (np.all(np.isfinite(out.v)) and np.all(np.isfinite(out.V))
            and np.all(np.isfinite(out.u))):
        raise BlowUpError(out.t)
    return out


# --------------------------------------------------------------------------
# conserved quantities

def invariants(s: FieldState, grid: GridSpec) -> ZakInvariants:
    """E, Q1 (vV form), Q2 by spectral quadrature."""
    ux = np.fft.ifft(1j * grid.k * np.fft.fft(s.u))
    e = 0.5 * grid.integrate(
        2.0 * np.abs(ux) ** 2 + s.v**2 + s.V**2 + 2.0 * s.v * np.abs(s.u) ** 2
    )
    q1 = grid.integrate(s.v * s.V + (ux * np.conj(s.u)).imag)
    q2 = grid.integrate(np.abs(s.u) ** 2)
    return ZakInvariants(E=float(e), Q1=float(q1), Q2=float(q2))


def q1_paper_form(s: FieldState, grid: GridSpec) -> complex:
    """The momentum functional with the u V integrand as printed in the
    source formula; complex-valued for generic u and not conserved
    (diagnostic only, see the vV form in `invariants`)."""
    ux = np.fft.ifft(1j * grid.k * np.fft.fft(s.u))
    return grid.integrate(s.u * s.V + (ux * np.conj(s.u)).imag)


def functional_B(s: FieldState, wave, grid: GridSpec) -> float:
    """Lyapunov functional B = E - c Q1 - omega Q2."""
    c, omega, _ = _wave_scalars(wave)
    inv = invariants(s, grid)
    return inv.E - c * inv.Q1 - omega * inv.Q2


# --------------------------------------------------------------------------
# modulated distance

def _gauge(u: np.ndarray, c: float, t: float, grid: GridSpec) -> np.ndarray:
    # wrap the comoving coordinate so the gauge's phase seam tracks the
    # antipode of x = c t instead of cutting through the profile; for
    # carrier-periodic waves (c L multiple of 4 pi) this changes nothing
    zeta = np.mod(grid.xs - c * t + 0.5 * grid.L, grid.L) - 0.5 * grid.L
    return np.exp(-0.5j * c * zeta) * u


def _shift_field(fhat: np.ndarray, y: float, grid: GridSpec) -> np.ndarray:
    """Samples of f(x + y) from the spectrum of f."""
    return np.fft.ifft(fhat * np.exp(1j * grid.k * y))


def _profile_samples(wave, grid: GridSpec):
    """(phi, phi') on the grid, with the coordinate wrapped to [-L/2, L/2)
    so non-periodic solitary tails are centered rather than truncated."""
    xi = np.mod(grid.xs + 0.5 * grid.L, grid.L) - 0.5 * grid.L
    return wave.phi(xi), wave.phi_prime(xi)


def _omega_inner(what, dwhat, phi, dphi, nu, y, grid):
    """G(y) = <w'(.+y), phi'> + nu <w(.+y), phi> (phi real)."""
    wy = _shift_field(what, y, grid)
    dwy = _shift_field(dwhat, y, grid)
    return grid.integrate(dwy * dphi) + nu * grid.integrate(wy * phi)


def orbital_distance(u: np.ndarray, wave, nu: float, grid: GridSpec, t: float = 0.0):
    """nu-weighted modulated distance of u to the wave orbit.

    Applies the traveling gauge, computes the shift correlation for every
    cyclic shift at once, takes the closed-form optimal phase
    theta*(y) = -arg G(y), and refines the best shift to sub-grid accuracy
    by parabolic interpolation.  Returns (rho, y_star, theta_star).
    """
    c, _, _ = _wave_scalars(wave)
    w = _gauge(u, c, t, grid)
    phi, dphi = _profile_samples(wave, grid)
    what = np.fft.fft(w)
    dwhat = 1j * grid.k * what

    # G at all grid shifts via cross-correlation in Fourier space
    phihat = np.fft.fft(phi)
    dphihat = 1j * grid.k * phihat
    corr = np.fft.ifft(what * np.conj(phihat))
    corr_d = np.fft.ifft(dwhat * np.conj(dphihat))
    G_grid = (grid.L / grid.N) * (corr_d + nu * corr)
    mag = np.abs(G_grid)
    m = int(np.argmax(mag))

    # parabolic seed for the sub-grid shift, then Newton on |G|^2
    fm1, f0, fp1 = mag[m - 1], mag[m], mag[(m + 1) % grid.N]
    denom = fm1 - 2.0 * f0 + fp1
    delta = 0.5 * (fm1 - fp1) / denom if denom != 0.0 else 0.0
    delta = float(np.clip(delta, -0.5, 0.5))
    dx = grid.L / grid.N
    ddwhat = 1j * grid.k * dwhat
    y_ref = (m + delta) * dx
    for _ in range(8):
        G = _omega_inner(what, dwhat, phi, dphi, nu, y_ref, grid)
        Gp = _omega_inner(dwhat, ddwhat, phi, dphi, nu, y_ref, grid)
        Gpp = _omega_inner(ddwhat, 1j * grid.k * ddwhat, phi, dphi, nu, y_ref, grid)
        slope = 2.0 * (np.conj(G) * Gp).real
        curv = 2.0 * ((np.conj(Gp) * Gp).real + (np.conj(G) * Gpp).real)
        if curv >= 0.0:
            break
        step = -slope / curv
        if abs(step) > dx:
            break
        y_ref += step
        if abs(step) < 1e-14 * max(1.0, grid.L):
            break
    candidates = [m * dx, (m + delta) * dx, y_ref]

    best = None
    for y in candidates:
        G = _omega_inner(what, dwhat, phi, dphi, nu, y, grid)
        theta = float(-np.angle(G)) % (2.0 * math.pi)
        # direct evaluation of Omega: well conditioned when the distance is
        # tiny, unlike the expanded const - 2|G| form
        wy = _shift_field(what, y, grid)
        dwy = _shift_field(dwhat, y, grid)
        phase = np.exp(1j * theta)
        omega_val = (grid.integrate(np.abs(phase * dwy - dphi) ** 2)
                     + nu * grid.integrate(np.abs(phase * wy - phi) ** 2))
        if best is None or omega_val < best[0]:
            best = (omega_val, y % grid.L, theta)
    rho = math.sqrt(max(best[0], 0.0))
    return rho, best[1], best[2]


def stationarity_check(u: np.ndarray, wave, nu: float, y_star: float,
                       theta_star: float, grid: GridSpec, t: float = 0.0):
    """Gradient of Omega with respect to (y, theta) at the reported minimizer."""
    c, _, _ = _wave_scalars(wave)
    w = _gauge(u, c, t, grid)
    phi, dphi = _profile_samples(wave, grid)
    what = np.fft.fft(w)
    dwhat = 1j * grid.k * what
    ddwhat = 1j * grid.k * dwhat
    G = _omega_inner(what, dwhat, phi, dphi, nu, y_star, grid)
    Gprime = _omega_inner(dwhat, ddwhat, phi, dphi, nu, y_star, grid)
    phase = np.exp(1j * theta_star)
    d_y = -2.0 * (phase * Gprime).real
    d_theta = 2.0 * (phase * G).imag
    return float(d_y), float(d_theta)


def compatibility_integrals(u: np.ndarray, wave, y_star: float, theta_star: float,
                            grid: GridSpec, t: float = 0.0):
    """Diagnostic projections of the modulated perturbation on phi*psi and
    (phi*psi)': int q phi psi dx and int p (phi psi)' dx with
    xi = e^{i theta*} w(. + y*) - phi, p = Re xi, q = Im xi."""
    c, _, _ = _wave_scalars(wave)
    w = _gauge(u, c, t, grid)
    wy = _shift_field(np.fft.fft(w), y_star, grid)
    xs_wrapped = np.mod(grid.xs + 0.5 * grid.L, grid.L) - 0.5 * grid.L
    xi = np.exp(1j * theta_star) * wy - wave.phi(xs_wrapped)
    prod = wave.phi(xs_wrapped) * wave.psi(xs_wrapped)
    dprod = np.fft.ifft(1j * grid.k * np.fft.fft(prod)).real
    return (float(grid.integrate(xi.imag * prod)),
            float(grid.integrate(xi.real * dprod)))


def shift_distance(f: np.ndarray, g: np.ndarray, grid: GridSpec):
    """(min_y ||f(.+y) - g||_L2, argmin y) for real periodic samples."""
    fhat, ghat = np.fft.fft(f), np.fft.fft(g)
    corr = np.fft.ifft(fhat * np.conj(ghat)).real * grid.L / grid.N
    m = int(np.argmax(corr))
    fm1, f0, fp1 = corr[m - 1], corr[m], corr[(m + 1) % grid.N]
    denom = fm1 - 2.0 * f0 + fp1
    delta = float(np.clip(0.5 * (fm1 - fp1) / denom, -0.5, 0.5)) if denom != 0.0 else 0.0
    dx = grid.L / grid.N
    norms = grid.integrate(f**2) + grid.integrate(g**2)
    best = None
    for y in (m * dx, (m + delta) * dx):
        fy = _shift_field(fhat, y, grid).real
        d2 = norms - 2.0 * grid.integrate(fy * g)
        if best is None or d2 < best[0]:
            best = (d2, y % grid.L)
    return math.sqrt(max(best[0], 0.0)), best[1]


def distance_at_shift(f: np.ndarray, g: np.ndarray, y: float, grid: GridSpec) -> float:
    fy = _shift_field(np.fft.fft(f), y, grid).real
    return math.sqrt(max(grid.integrate((fy - g) ** 2), 0.0))


# --------------------------------------------------------------------------
# experiments

@dataclass
class ExperimentRecord:
    """Time series of conserved quantities and modulation diagnostics."""

    metadata: dict
    times: np.ndarray
    E: np.ndarray
    Q1: np.ndarray
    Q2: np.ndarray
    B: np.ndarray
    rho_nu: np.ndarray
    y_star: np.ndarray
    theta_star: np.ndarray
    dist_v: np.ndarray
    dist_V: np.ndarray
    dist_v_at_ystar: np.ndarray = field(default=None)
    dist_V_at_ystar: np.ndarray = field(default=None)
    q1_uv_real: np.ndarray = field(default=None)
    q1_uv_imag: np.ndarray = field(default=None)

    _CSV_FIELDS = ("t", "E", "Q1", "Q2", "B", "rho_nu", "y_star", "theta_star",
                   "dist_v", "dist_V")

    def delta_B(self) -> np.ndarray:
        return self.B - self.metadata["B_wave"]

    def to_csv(self, path) -> None:
        cols = (self.times, self.E, self.Q1, self.Q2, self.B, self.rho_nu,
                self.y_star, self.theta_star, self.dist_v, self.dist_V)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self._CSV_FIELDS)
            for row in zip(*cols):
                writer.writerow([f"{val:.17g}" for val in row])

    def to_json(self, path) -> None:
        payload = {"metadata": self.metadata}
        for name in ("times", "E", "Q1", "Q2", "B", "rho_nu", "y_star",
                     "theta_star", "dist_v", "dist_V", "dist_v_at_ystar",
                     "dist_V_at_ystar", "q1_uv_real", "q1_uv_imag"):
            arr = getattr(self, name)
            payload[name] = None if arr is None else [float(x) for x in arr]
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")


def dump_fields(s: FieldState, grid: GridSpec, prefix: str) -> None:
    """Binary little-endian float64 snapshot (v, V, Re u, Im u) + JSON sidecar."""
    stacked = np.stack([s.v, s.V, s.u.real, s.u.imag]).astype("<f8")
    with open(f"{prefix}.bin", "wb") as fh:
        fh.write(stacked.tobytes())
    sidecar = {
        "t": s.t, "L": grid.L, "N": grid.N, "dtype": "<f8",
        "layout": ["v", "V", "u_real", "u_imag"], "shape": [4, grid.N],
        "order": "C",
    }
    with open(f"{prefix}.json", "w") as fh:
        json.dump(sidecar, fh, indent=1)
        fh.write("\n")


def band_limited_perturbation(rng: np.random.Generator, grid: GridSpec, n_max: int,
                              complex_field: bool = False,
                              zero_mean: bool = False) -> np.ndarray:
    """Seeded random field with Fourier support |n| <= n_max (unnormalized)."""
    N = grid.N
    if complex_field:
        chat = np.zeros(N, dtype=complex)
        for n in range(-n_max, n_max + 1):
            chat[n % N] = rng.standard_normal() + 1j * rng.standard_normal()
        return np.fft.ifft(chat)
    chat = np.zeros(N, dtype=complex)
    if not zero_mean:
        chat[0] = rng.standard_normal()
    for n in range(1, n_max + 1):
        coef = rng.standard_normal() + 1j * rng.standard_normal()
        chat[n] = coef
        chat[-n] = np.conj(coef)
    return np.fft.ifft(chat).real


def _l2(f, grid) -> float:
    return math.sqrt(abs(grid.integrate(np.abs(f) ** 2)))


def _h1nu(f, grid, nu) -> float:
    df = np.fft.ifft(1j * grid.k * np.fft.fft(f))
    return math.sqrt(abs(grid.integrate(np.abs(df) ** 2)) + nu * abs(grid.integrate(np.abs(f) ** 2)))


def evolve(state0: FieldState, wave, grid: GridSpec, dt: float, t_end: float,
           save_every: int | None = None, integrating_factor: bool = False,
           track_q1_paper: bool = True, metadata: dict | None = None) -> ExperimentRecord:
    """Run the system from state0 and record diagnostics against `wave`."""
    c, omega, nu = _wave_scalars(wave)
    n_steps = int(round(t_end / dt))
    if save_every is None:
        save_every = max(1, n_steps // 200)
    ev = Evolver(grid, dt, integrating_factor=integrating_factor)
    spec = ev.to_spectral(state0)
    sup0 = max(np.max(np.abs(state0.v)), np.max(np.abs(state0.V)),
               np.max(np.abs(state0.u)), 1e-30)

    ref = wave_state(wave, grid, t=0.0)
    b_wave = functional_B(ref, wave, grid)
    psi_ref, vphi_ref = ref.v, ref.V

    series: dict[str, list] = {name: [] for name in (
        "times", "E", "Q1", "Q2", "B", "rho_nu", "y_star", "theta_star",
        "dist_v", "dist_V", "dist_v_at_ystar", "dist_V_at_ystar",
        "q1_uv_real", "q1_uv_imag")}

    def record(spec_state, t):
        s = ev.to_physical(spec_state, t)
        inv = invariants(s, grid)
        rho, ys, th = orbital_distance(s.u, wave, nu, grid, t=t)
        dv, _ = shift_distance(s.v, psi_ref, grid)
        dV, _ = shift_distance(s.V, vphi_ref, grid)
        series["times"].append(t)
        series["E"].append(inv.E)
        series["Q1"].append(inv.Q1)
        series["Q2"].append(inv.Q2)
        series["B"].append(inv.E - c * inv.Q1 - omega * inv.Q2)
        series["rho_nu"].append(rho)
        series["y_star"].append(ys)
        series["theta_star"].append(th)
        series["dist_v"].append(dv)
        series["dist_V"].append(dV)
        series["dist_v_at_ystar"].append(distance_at_shift(s.v, psi_ref, ys, grid))
        series["dist_V_at_ystar"].append(distance_at_shift(s.V, vphi_ref, ys, grid))
        if track_q1_paper:
            q1p = q1_paper_form(s, grid)
            series["q1_uv_real"].append(q1p.real)
            series["q1_uv_imag"].append(q1p.imag)
        else:
            series["q1_uv_real"].append(math.nan)
            series["q1_uv_imag"].append(math.nan)

    record(spec, state0.t)
    t = state0.t
    for step in range(1, n_steps + 1):
        spec = ev.step(spec)
        t = state0.t + step * dt
        if step % 50 == 0 and not np.all(np.isfinite(spec[2])):
            raise BlowUpError(t)
        if step % save_every == 0 or step == n_steps:
            s_check = ev.to_physical(spec, t)
            sup = max(np.max(np.abs(s_check.v)), np.max(np.abs(s_check.V)),
                      np.max(np.abs(s_check.u)))
            if not np.isfinite(sup) or sup > 1e6 * sup0:
                raise BlowUpError(t)
            record(spec, t)

    meta = dict(metadata or {})
    meta.update({
        "L": grid.L, "N": grid.N, "dt": dt, "t_end": t_end,
        "integrating_factor": integrating_factor, "c": c, "omega": omega,
        "nu": nu, "B_wave": b_wave,
    })
    return ExperimentRecord(
        metadata=meta,
        **{name: np.array(vals) for name, vals in series.items()},
    )


def _perturbed_initial_state(wave, grid: GridSpec, delta: float, seed: int,
                             respect_mean_condition: bool,
                             renormalize_q2: bool) -> FieldState:
    c, omega, nu = _wave_scalars(wave)
    base = wave_state(wave, grid, t=0.0)
    if delta == 0.0:
        return base
    rng = np.random.default_rng(seed)
    n_max = max(1, grid.N // 8)

    pert_v = band_limited_perturbation(rng, grid, n_max)
    pert_V = band_limited_perturbation(rng, grid, n_max, zero_mean=True)
    pert_u = band_limited_perturbation(rng, grid, n_max, complex_field=True)

    scale_v = _l2(base.v, grid) or 1.0
    scale_V = _l2(base.V, grid) or scale_v
    pert_v *= delta * scale_v / _l2(pert_v, grid)
    pert_V *= delta * scale_V / _l2(pert_V, grid)
    pert_u *= delta * _h1nu(base.u, grid, nu) / _h1nu(pert_u, grid, nu)

    if respect_mean_condition:
        mean = float(np.mean(pert_v))
        if mean > 0.0:
            pert_v -= mean

    u0 = base.u + pert_u
    if renormalize_q2:
        u0 *= _l2(base.u, grid) / _l2(u0, grid)
    return FieldState(t=0.0, v=base.v + pert_v, V=base.V + pert_V, u=u0)


def stability_experiment(w: DnoidalWave, delta: float, t_end: float,
                         dt: float | None = None, seed: int = 0,
                         respect_mean_condition: bool = True,
                         N: int = 256, renormalize_q2: bool = False,
                         integrating_factor: bool = False,
                         save_every: int | None = None) -> ExperimentRecord:
    """Seeded perturbed evolution around a dnoidal wave."""
    grid = GridSpec(L=w.params.L, N=N)
    if dt is None:
        dt = 1e-4 * (w.params.L / (2.0 * math.pi)) ** 2
    state0 = _perturbed_initial_state(w, grid, delta, seed,
                                      respect_mean_condition, renormalize_q2)
    meta = {"kind": "dnoidal", "delta": delta, "seed": seed,
            "respect_mean_condition": respect_mean_condition,
            "wave": {"L": w.params.L, "c": w.params.c, "nu": w.params.nu}}
    return evolve(state0, w, grid, dt, t_end, save_every=save_every,
                  integrating_factor=integrating_factor, metadata=meta)


def solitary_experiment(omega: float, c: float, box_factor: float = 80.0,
                        delta: float = 0.0, t_end: float = 10.0,
                        dt: float | None = None, seed: int = 0, N: int = 1024,
                        save_every: int | None = None,
                        integrating_factor: bool = True) -> ExperimentRecord:
    """Solitary-wave run on a torus large enough that tails are below 1e-14."""
    if box_factor < 80.0:
        raise DomainError("box_factor must be >= 80 so wrapped tails stay < 1e-14")
    sw = solitary_wave(omega, c)
    L = box_factor / math.sqrt(-4.0 * omega - c * c)
    grid = GridSpec(L=L, N=N)
    if dt is None:
        dt = 1e-4 * (L / (2.0 * math.pi)) ** 2
    state0 = _perturbed_initial_state(sw, grid, delta, seed,
                                      respect_mean_condition=False,
                                      renormalize_q2=False)
    meta = {"kind": "solitary", "delta": delta, "seed": seed,
            "box_factor": box_factor, "wave": {"omega": omega, "c": c}}
    return evolve(state0, sw, grid, dt, t_end, save_every=save_every,
                  integrating_factor=integrating_factor, metadata=meta)
