"""Dnoidal and solitary traveling-wave families of the periodic Zakharov system.

A wave is parameterized by the period L, the speed c (|c| < 1) and the
frequency parameter nu = -(omega + c^2/4) > 2 pi^2 / L^2.  The envelope
profile is phi(xi) = eta1 dn(eta1 xi / sqrt(2 alpha); k) with
alpha = 1 - c^2, the density profile is psi = -phi^2 / alpha, and the
zero-mean flux profile varphi = c psi - d0.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import Modulus, complete_E, complete_K, dK_dk, jacobi_sn_cn_dn
from .errors import DomainError, NoSolutionError

__all__ = [
    "WaveParams",
    "DnoidalWave",
    "SolitaryWave",
    "FamilyTable",
    "period_of",
    "solve_eta2",
    "build_wave",
    "eval_profiles",
    "ode_residuals",
    "mass_integral",
    "mass_derivative",
    "solitary_wave",
    "family_sweep",
]


def nu_threshold(L: float) -> float:
    """Least admissible nu for period L (the period infimum is pi sqrt(2/nu))."""
    return 2.0 * math.pi**2 / L**2


@dataclass(frozen=True)
class WaveParams:
    """Scalar parameters of one dnoidal wave."""

    L: float
    c: float
    omega: float
    nu: float
    alpha: float
    eta1: float
    eta2: float
    k: float
    d0: float
    Aphi: float


def _kprime_sq(eta2: float, nu: float, alpha: float) -> float:
    # k'^2 = eta2^2 / (2 nu alpha - eta2^2); free of the 1 - k^2 cancellation
    return eta2 * eta2 / (2.0 * nu * alpha - eta2 * eta2)


def _modulus_of(eta2: float, nu: float, alpha: float) -> Modulus:
    return Modulus.from_kprime_sq(_kprime_sq(eta2, nu, alpha))


def period_of(eta2: float, nu: float, alpha: float) -> float:
    """Fundamental period T(eta2) = 2 sqrt(2 alpha) K(k) / sqrt(2 nu alpha - eta2^2).

    Strictly decreasing on (0, sqrt(nu alpha)), diverging at the left
    endpoint and tending to pi sqrt(2/nu) at the right one.
    """
    if nu <= 0.0 or alpha <= 0.0:
        raise DomainError("period_of requires nu > 0 and alpha > 0")
    if not 0.0 < eta2 < math.sqrt(nu * alpha):
        raise DomainError(
            f"eta2={eta2} outside (0, sqrt(nu*alpha)={math.sqrt(nu * alpha)})"
        )
    m = _modulus_of(eta2, nu, alpha)
    return 2.0 * math.sqrt(2.0 * alpha) / math.sqrt(2.0 * nu * alpha - eta2**2) * complete_K(m)


def _period_deriv(eta2: float, nu: float, alpha: float) -> float:
    """Analytic dT/deta2, assembled from dK/dk and dk/deta2; negative on the domain."""
    m = _modulus_of(eta2, nu, alpha)
    denom = 2.0 * nu * alpha - eta2 * eta2
    dk_deta = -2.0 * eta2 * nu * alpha / (m.k * denom * denom)
    root = math.sqrt(denom)
    return 2.0 * math.sqrt(2.0 * alpha) * (
        eta2 / root**3 * complete_K(m) + dK_dk(m) * dk_deta / root
    )


def solve_eta2(L: float, c: float, nu: float, rtol: float = 1e-12) -> float:
    """Unique eta2 in (0, sqrt(nu alpha)) with period_of(eta2) = L.

    Safeguarded bracketed solve: bisection narrows the monotone bracket,
    then Newton steps with the analytic derivative polish the root;
    any Newton step leaving the bracket falls back to bisection.
    """
    alpha = 1.0 - c * c
    if alpha <= 0.0:
        raise DomainError(f"speed c={c} requires 1 - c^2 > 0")
    if nu <= nu_threshold(L):
        raise NoSolutionError(
            f"nu={nu} <= 2*pi^2/L^2={nu_threshold(L)}: the period infimum "
            f"pi*sqrt(2/nu) exceeds L, no dnoidal wave exists"
        )
    top = math.sqrt(nu * alpha)
    eps = 1e-12
    lo, hi = eps * top, (1.0 - eps) * top
    # period_of is decreasing: g(lo) > 0 > g(hi); expand lo toward 0 if needed
    g = lambda e: period_of(e, nu, alpha) - L
    while g(lo) <= 0.0:
        lo *= 0.5
        if lo < 1e-300:
            raise NoSolutionError("left bracket collapse in solve_eta2")
    if g(hi) >= 0.0:
        raise NoSolutionError("right bracket failure in solve_eta2")

    x = 0.5 * (lo + hi)
    for _ in range(200):
        gx = g(x)
        if abs(gx) <= rtol * L:
            return x
        if gx > 0.0:
            lo = x
        else:
            hi = x
        dg = _period_deriv(x, nu, alpha)
        x_new = x - gx / dg if dg != 0.0 else 0.5 * (lo + hi)
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if x_new == x:
            break
        x = x_new
    if abs(g(x)) <= rtol * L:
        return x
    raise NoSolutionError(f"solve_eta2 stalled with residual {g(x):.3e}")


@dataclass(frozen=True)
class DnoidalWave:
    """A dnoidal wave plus closed-form profile evaluators."""

    params: WaveParams
    modulus: Modulus
    EK_ratio: float = field(default=0.0)  # E(k)/K(k), cached for varphi

    # --- elliptic building blocks -------------------------------------
    def _arg(self, xs):
        p = self.params
        return p.eta1 * np.asarray(xs, dtype=float) / math.sqrt(2.0 * p.alpha)

    def _sncndn(self, xs):
        return jacobi_sn_cn_dn(self._arg(xs), self.modulus)

    # --- profiles ------------------------------------------------------
    def phi(self, xs):
        _, _, dn = self._sncndn(xs)
        return self.params.eta1 * dn

    def psi(self, xs):
        ph = self.phi(xs)
        return -ph * ph / self.params.alpha

    def varphi(self, xs):
        p = self.params
        _, _, dn = self._sncndn(xs)
        return -p.c * p.eta1**2 / p.alpha * (dn * dn - self.EK_ratio)

    def phi_prime(self, xs):
        p = self.params
        sn, cn, _ = self._sncndn(xs)
        k2 = self.modulus.k**2
        return -p.eta1**2 * k2 / math.sqrt(2.0 * p.alpha) * sn * cn

    def phi_second(self, xs):
        p = self.params
        sn, cn, dn = self._sncndn(xs)
        k2 = self.modulus.k**2
        return -p.eta1**3 * k2 / (2.0 * p.alpha) * (cn * cn - sn * sn) * dn

    def psi_second(self, xs):
        # (dn^2)'' = -2 k^2 (cn^2 dn^2 - sn^2 dn^2 - k^2 sn^2 cn^2) * scale^2
        p = self.params
        sn, cn, dn = self._sncndn(xs)
        k2 = self.modulus.k**2
        scale2 = p.eta1**2 / (2.0 * p.alpha)
        ddn2 = -2.0 * k2 * (cn * cn * dn * dn - sn * sn * dn * dn - k2 * sn * sn * cn * cn)
        return -p.eta1**2 / p.alpha * ddn2 * scale2


def build_wave(L: float, c: float, nu: float) -> DnoidalWave:
    """Construct the unique dnoidal wave with period L for (c, nu).

    Emits a warning (not an error) when c != 0 and cL/(4 pi) is not an
    integer, i.e. when the envelope's u-field is not itself L-periodic.
    """
    import warnings

    alpha = 1.0 - c * c
    eta2 = solve_eta2(L, c, nu)
    eta1 = math.sqrt(2.0 * nu * alpha - eta2 * eta2)
    m = _modulus_of(eta2, nu, alpha)
    omega = -nu - c * c / 4.0
    ek = complete_E(m) / complete_K(m)
    d0 = -c * eta1**2 / alpha * ek
    aphi = -(eta1 * eta2) ** 2 / (4.0 * alpha)
    if c != 0.0:
        ratio = c * L / (4.0 * math.pi)
        if abs(ratio - round(ratio)) > 1e-9:
            warnings.warn(
                f"cL/(4*pi)={ratio:.6g} is not an integer: the envelope "
                "carrier e^(icx/2) is not L-periodic",
                stacklevel=2,
            )
    params = WaveParams(
        L=L, c=c, omega=omega, nu=nu, alpha=alpha,
        eta1=eta1, eta2=eta2, k=m.k, d0=d0, Aphi=aphi,
    )
    return DnoidalWave(params=params, modulus=m, EK_ratio=ek)


def eval_profiles(w: DnoidalWave, xs):
    """Sample (phi, psi, varphi) on the grid xs."""
    return w.phi(xs), w.psi(xs), w.varphi(xs)


def ode_residuals(w: DnoidalWave, N: int = 1024):
    """Sup-norm residuals of the three defining identities on an N-grid.

    r1: phi'' - nu phi + phi^3/alpha = 0
    r2: (phi')^2 - (phi^2 - eta2^2)(eta1^2 - phi^2) / (2 alpha) = 0
    r3: (c^2 - 1) psi'' - (phi^2)'' = 0
    """
    if N < 64:
        raise DomainError("ode_residuals needs N >= 64")
    p = w.params
    xs = np.linspace(0.0, p.L, N, endpoint=False)
    ph = w.phi(xs)
    dph = w.phi_prime(xs)
    ddph = w.phi_second(xs)
    r1 = np.max(np.abs(ddph - p.nu * ph + ph**3 / p.alpha))
    r2 = np.max(np.abs(dph**2 - (ph**2 - p.eta2**2) * (p.eta1**2 - ph**2) / (2.0 * p.alpha)))
    dd_phisq = 2.0 * (dph * dph + ph * ddph)
    r3 = np.max(np.abs((p.c**2 - 1.0) * w.psi_second(xs) - dd_phisq))
    return float(r1), float(r2), float(r3)


def mass_integral(w: DnoidalWave) -> float:
    """Closed form of the squared-profile mass: int_0^L phi^2 = 8 alpha K(k) E(k) / L."""
    p = w.params
    return 8.0 * p.alpha * complete_K(w.modulus) * complete_E(w.modulus) / p.L


def mass_derivative(L: float, c: float, nu: float, h: float | None = None) -> float:
    """Central finite difference of mass_integral in nu (positive on the family)."""
    if h is None:
        h = 1e-4 * nu
    if nu - h <= nu_threshold(L):
        raise DomainError("finite-difference stencil leaves the admissible nu interval")
    mp = mass_integral(build_wave(L, c, nu + h))
    mm = mass_integral(build_wave(L, c, nu - h))
    return (mp - mm) / (2.0 * h)


@dataclass(frozen=True)
class SolitaryWave:
    """Sech-profile solitary wave on the line; the varphi component is c*psi."""

    omega: float
    c: float

    @property
    def alpha(self) -> float:
        return 1.0 - self.c * self.c

    @property
    def nu(self) -> float:
        return -(self.omega + self.c * self.c / 4.0)

    @property
    def decay_rate(self) -> float:
        return 0.5 * math.sqrt(-4.0 * self.omega - self.c**2)

    def phi(self, xs):
        amp = math.sqrt((-4.0 * self.omega - self.c**2) * self.alpha / 2.0)
        return amp / np.cosh(self.decay_rate * np.asarray(xs, dtype=float))

    def psi(self, xs):
        ph = self.phi(xs)
        return -ph * ph / self.alpha

    def varphi(self, xs):
        return self.c * self.psi(xs)

    def phi_prime(self, xs):
        xs = np.asarray(xs, dtype=float)
        amp = math.sqrt((-4.0 * self.omega - self.c**2) * self.alpha / 2.0)
        b = self.decay_rate
        return -amp * b * np.tanh(b * xs) / np.cosh(b * xs)


def solitary_wave(omega: float, c: float) -> SolitaryWave:
    if 4.0 * omega + c * c >= 0.0:
        raise DomainError(f"solitary wave needs 4*omega + c^2 < 0, got {4 * omega + c * c}")
    if 1.0 - c * c <= 0.0:
        raise DomainError(f"solitary wave needs 1 - c^2 > 0, got {1 - c * c}")
    return SolitaryWave(omega=omega, c=c)


_TABLE_FIELDS = ("nu", "eta2", "eta1", "k", "omega", "d0", "mass")


@dataclass
class FamilyTable:
    """One wave per row along a nu-sweep at fixed (L, c)."""

    L: float
    c: float
    rows: list[dict]

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(_TABLE_FIELDS)
            for row in self.rows:
                writer.writerow([f"{row[f]:.17g}" for f in _TABLE_FIELDS])

    def to_json(self, path) -> None:
        payload = [{f: row[f] for f in _TABLE_FIELDS} for row in self.rows]
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")


def family_sweep(L: float, c: float, nu_grid) -> FamilyTable:
    """Construct the wave at every nu in nu_grid and verify the monotone chains.

    eta2 must decrease strictly and k / mass increase strictly along
    increasing nu; any violation or failed construction raises with the
    offending nu.
    """
    rows = []
    for nu in nu_grid:
        try:
            w = build_wave(L, c, float(nu))
        except DomainError as exc:
            raise NoSolutionError(f"family_sweep failed at nu={nu}: {exc}") from exc
        p = w.params
        rows.append({
            "nu": p.nu, "eta2": p.eta2, "eta1": p.eta1, "k": p.k,
            "omega": p.omega, "d0": p.d0, "mass": mass_integral(w),
        })
    for prev, cur in zip(rows, rows[1:]):
        if not cur["eta2"] < prev["eta2"]:
            raise AssertionError(f"eta2 chain not strictly decreasing at nu={cur['nu']}")
        if not cur["k"] > prev["k"]:
            raise AssertionError(f"k chain not strictly increasing at nu={cur['nu']}")
    return FamilyTable(L=L, c=c, rows=rows)
