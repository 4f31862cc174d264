"""Dnoidal family construction against scan/quadrature oracles."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ellipk

from zakwave.elliptic import Modulus, complete_E, complete_K
from zakwave.errors import DomainError, NoSolutionError
from zakwave.wavefamily import (
    build_wave,
    eval_profiles,
    family_sweep,
    mass_derivative,
    mass_integral,
    nu_threshold,
    ode_residuals,
    period_of,
    solitary_wave,
    solve_eta2,
)


def _quiet_build(L, c, nu):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_wave(L, c, nu)


# --------------------------------------------------------------------------
# period function

def test_period_limit_at_right_endpoint():
    nu, alpha = 1.3, 0.75
    top = math.sqrt(nu * alpha)
    T = period_of(0.999999 * top, nu, alpha)
    assert abs(T - math.pi * math.sqrt(2.0 / nu)) < 1e-4


def test_period_monotone_decreasing():
    nu, alpha = 2.0, 1.0
    top = math.sqrt(nu * alpha)
    etas = np.linspace(0.05, 0.999, 50) * top
    Ts = [period_of(e, nu, alpha) for e in etas]
    assert np.all(np.diff(Ts) < 0.0)


def test_period_closed_form_example():
    # nu=2, alpha=1, eta2=1: k^2 = 2/3 and T = 2 sqrt(2)/sqrt(3) K(sqrt(2/3))
    T = period_of(1.0, 2.0, 1.0)
    expected = 2.0 * math.sqrt(2.0) / math.sqrt(3.0) * complete_K(
        Modulus.from_k(math.sqrt(2.0 / 3.0)))
    assert T == pytest.approx(expected, rel=1e-14)


def test_period_domain_errors():
    with pytest.raises(DomainError):
        period_of(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        period_of(2.0, 1.0, 1.0)


# --------------------------------------------------------------------------
# root solve

def test_solve_eta2_residual():
    for (L, c, nu) in [(2 * math.pi, 0.0, 1.0), (10.0, 0.5, 0.9), (20.0, -0.5, 0.3)]:
        eta2 = solve_eta2(L, c, nu)
        alpha = 1.0 - c * c
        assert abs(period_of(eta2, nu, alpha) - L) <= 1e-12 * L


def test_solve_eta2_against_dense_grid_scan():
    # vectorized period over a 10^6-point grid (scipy K as the oracle kernel)
    L, c, nu = 2.0 * math.pi, 0.0, 1.0
    alpha = 1.0 - c * c
    top = math.sqrt(nu * alpha)
    etas = np.linspace(1e-6 * top, (1.0 - 1e-9) * top, 1_000_000)
    denom = 2.0 * nu * alpha - etas**2
    msq = (2.0 * nu * alpha - 2.0 * etas**2) / denom  # k^2 in scipy's convention
    T = 2.0 * math.sqrt(2.0 * alpha) / np.sqrt(denom) * ellipk(msq)
    i = int(np.argmin(np.abs(T - L)))
    eta_grid = etas[i]
    eta = solve_eta2(L, c, nu)
    assert abs(eta - eta_grid) <= etas[1] - etas[0]


def test_solve_eta2_near_threshold_endpoint():
    L = 2.0 * math.pi
    nu = nu_threshold(L) * (1.0 + 1e-6)
    eta2 = solve_eta2(L, 0.0, nu)
    ratio = eta2 / math.sqrt(nu)
    assert 0.99 < ratio < 1.0


def test_solve_eta2_below_threshold_raises():
    L = 2.0 * math.pi
    with pytest.raises(NoSolutionError):
        solve_eta2(L, 0.0, nu_threshold(L))


def test_solve_eta2_rejects_supersonic_speed():
    with pytest.raises(DomainError):
        solve_eta2(2.0 * math.pi, 1.0, 1.0)


# --------------------------------------------------------------------------
# wave construction

@pytest.mark.parametrize("L,c,nu", [
    (2 * math.pi, 0.0, 1.0),
    (10.0, 0.5, 0.9),
    (20.0, -0.5, 0.3),
    (2 * math.pi, 0.0, 30.0),
])
def test_wave_params_invariants(L, c, nu):
    w = _quiet_build(L, c, nu)
    p = w.params
    assert p.alpha > 0.0 and 4.0 * p.omega + p.c**2 < 0.0
    assert p.nu > nu_threshold(p.L)
    assert abs(p.eta1**2 + p.eta2**2 - 2.0 * p.nu * p.alpha) <= 1e-12 * p.nu * p.alpha
    root = math.sqrt(p.nu * p.alpha)
    assert 0.0 < p.eta2 < root < p.eta1 < math.sqrt(2.0) * root
    ksq = (2 * p.nu * p.alpha - 2 * p.eta2**2) / (2 * p.nu * p.alpha - p.eta2**2)
    assert abs(p.k**2 - ksq) <= 1e-12
    assert abs(p.Aphi + (p.eta1 * p.eta2) ** 2 / (4.0 * p.alpha)) <= 1e-12
    ek = complete_E(w.modulus) / complete_K(w.modulus)
    assert abs(p.d0 + p.c * p.eta1**2 / p.alpha * ek) <= 1e-12


def test_build_wave_c_zero_has_no_flux():
    w = build_wave(2.0 * math.pi, 0.0, 1.0)
    assert w.params.omega == pytest.approx(-1.0)
    assert w.params.d0 == 0.0
    xs = np.linspace(0.0, w.params.L, 64)
    assert np.max(np.abs(w.varphi(xs))) == 0.0


def test_build_wave_periodicity_warning():
    with pytest.warns(UserWarning, match="not an integer"):
        build_wave(10.0, 0.5, 0.9)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        build_wave(8.0 * math.pi, 0.5, 0.2)  # cL/(4 pi) = 1, no warning


def test_spiky_limit_approaches_sech_amplitude():
    L, c, nu = 2.0 * math.pi, 0.0, 60.0
    w = build_wave(L, c, nu)
    # k -> 1: eta1 -> sqrt(2 nu alpha) and the crest approaches it
    assert w.params.k > 0.999
    assert float(w.phi(0.0)) == pytest.approx(math.sqrt(2.0 * nu), rel=1e-3)


# --------------------------------------------------------------------------
# profiles

def test_eval_profiles_pointwise_relations(wave_std):
    p = wave_std.params
    xs = np.linspace(0.0, p.L, 1024, endpoint=False)
    phi, psi, varphi = eval_profiles(wave_std, xs)
    assert np.all(phi > 0.0) and np.all(psi < 0.0)
    assert np.all(phi >= p.eta2 - 1e-12) and np.all(phi <= p.eta1 + 1e-12)
    assert np.max(np.abs(psi + phi**2 / p.alpha)) <= 1e-12
    assert phi[0] == pytest.approx(p.eta1, rel=1e-14)


def test_varphi_zero_mean(wave_std):
    p = wave_std.params
    xs = np.linspace(0.0, p.L, 4097)
    mean = np.trapezoid(wave_std.varphi(xs), xs) / p.L
    assert abs(mean) <= 1e-10


def test_phi_prime_matches_finite_difference(wave_std):
    xs = np.linspace(0.3, 5.0, 33)
    h = 1e-6
    fd = (wave_std.phi(xs + h) - wave_std.phi(xs - h)) / (2.0 * h)
    assert np.max(np.abs(wave_std.phi_prime(xs) - fd)) < 1e-8


@pytest.mark.parametrize("L,c,nu_mult", [
    (2 * math.pi, 0.0, 2.0), (10.0, 0.5, 10.0), (20.0, -0.5, 80.0),
    (2 * math.pi, 0.5, 1.000001),
])
def test_ode_residuals_small(L, c, nu_mult):
    nu = nu_threshold(L) * nu_mult
    w = _quiet_build(L, c, nu)
    scale = max(1.0, w.params.eta1**3)
    r1, r2, r3 = ode_residuals(w, 1024)
    assert max(r1, r2, r3) <= 1e-9 * scale


# --------------------------------------------------------------------------
# mass

def test_mass_integral_matches_quadrature(wave_std):
    p = wave_std.params
    xs = np.arange(8192) * p.L / 8192
    quad = float(np.sum(wave_std.phi(xs) ** 2) * p.L / 8192)
    assert mass_integral(wave_std) == pytest.approx(quad, rel=1e-10)


def test_mass_constant_profile_limit():
    L = 2.0 * math.pi
    nu = nu_threshold(L) * (1.0 + 1e-8)
    w = build_wave(L, 0.0, nu)
    # k ~ 0: phi ~ eta1 constant, so the mass tends to eta1^2 L; the
    # approach is first order in nu - threshold, hence the loose tolerance
    assert mass_integral(w) == pytest.approx(w.params.eta1**2 * L, rel=1e-3)


def test_mass_monotone_in_modulus():
    L = 10.0
    nus = nu_threshold(L) * np.array([2.0, 5.0, 20.0])
    waves = [build_wave(L, 0.0, nu) for nu in nus]
    ks = [w.params.k for w in waves]
    ms = [mass_integral(w) for w in waves]
    assert ks == sorted(ks) and ms == sorted(ms)


def test_mass_derivative_positive_and_second_order():
    L, c, nu = 2.0 * math.pi, 0.0, 1.0
    d = mass_derivative(L, c, nu)
    assert d > 0.0
    # Richardson: halving h shrinks the stencil error by ~4
    h = 1e-3 * nu
    ref = mass_derivative(L, c, nu, h=1e-6 * nu)
    e1 = abs(mass_derivative(L, c, nu, h=h) - ref)
    e2 = abs(mass_derivative(L, c, nu, h=h / 2.0) - ref)
    assert e1 / e2 == pytest.approx(4.0, rel=0.2)


def test_mass_derivative_chain_rule_oracle():
    # d/dnu [8 alpha K E / L] = 8 alpha / L * d/dk(K E) * dk/dnu
    L, c, nu = 2.0 * math.pi, 0.0, 1.0
    h = 1e-5 * nu
    kp = _quiet_build(L, c, nu + h).params.k
    km = _quiet_build(L, c, nu - h).params.k
    dk_dnu = (kp - km) / (2.0 * h)
    k0 = build_wave(L, c, nu).params.k
    hk = 1e-6

    def KE(k):
        m = Modulus.from_k(k)
        return complete_K(m) * complete_E(m)

    dKE_dk = (KE(k0 + hk) - KE(k0 - hk)) / (2.0 * hk)
    oracle = 8.0 * (1.0 - c * c) / L * dKE_dk * dk_dnu
    assert mass_derivative(L, c, nu) == pytest.approx(oracle, rel=1e-4)


def test_mass_derivative_stencil_domain_error():
    L = 2.0 * math.pi
    nu = nu_threshold(L) * (1.0 + 1e-6)
    with pytest.raises(DomainError):
        mass_derivative(L, 0.0, nu, h=nu_threshold(L))


# --------------------------------------------------------------------------
# solitary waves

def test_solitary_amplitude_and_relations():
    sw = solitary_wave(-1.0, 0.5)
    amp = math.sqrt((4.0 - 0.25) * 0.75 / 2.0)
    assert sw.phi(0.0)[()] == pytest.approx(amp, rel=1e-15)
    xs = np.linspace(-20.0, 20.0, 513)
    assert np.max(np.abs(sw.psi(xs) + sw.phi(xs) ** 2 / sw.alpha)) <= 1e-12
    assert np.max(np.abs(sw.varphi(xs) - sw.c * sw.psi(xs))) <= 1e-12


def test_solitary_profile_ode_residual():
    sw = solitary_wave(-1.0, 0.5)
    xs = np.linspace(-40.0, 40.0, 4096)
    b = sw.decay_rate
    amp = sw.phi(0.0)[()]
    sech = 1.0 / np.cosh(b * xs)
    phi_dd = amp * b * b * (sech - 2.0 * sech**3)
    resid = phi_dd - sw.nu * sw.phi(xs) + sw.phi(xs) ** 3 / sw.alpha
    assert np.max(np.abs(resid)) <= 1e-10


def test_solitary_domain_errors():
    with pytest.raises(DomainError):
        solitary_wave(0.0, 0.0)
    with pytest.raises(DomainError):
        solitary_wave(-1.0, 1.0)


def test_dnoidal_converges_to_solitary():
    omega, c = -1.0, 0.5
    sw = solitary_wave(omega, c)
    nu = -(omega + c * c / 4.0)
    sups = []
    for box in (20.0, 40.0, 80.0):
        L = box / math.sqrt(-4.0 * omega - c * c)
        w = _quiet_build(L, c, nu)
        xs = np.linspace(-L / 4.0, L / 4.0, 2048)
        sups.append(float(np.max(np.abs(w.phi(xs) - sw.phi(xs)))))
    assert sups[0] > sups[1] > sups[2]
    assert sups[2] <= 1e-6


# --------------------------------------------------------------------------
# sweeps

def test_family_sweep_monotone_chains():
    L, c = 10.0, 0.0
    grid = np.geomspace(nu_threshold(L) * 1.01, nu_threshold(L) * 100.0, 20)
    table = family_sweep(L, c, grid)
    eta2 = table.column("eta2")
    k = table.column("k")
    mass = table.column("mass")
    assert np.all(np.diff(eta2) < 0.0)
    assert np.all(np.diff(k) > 0.0)
    assert np.all(np.diff(mass) > 0.0)
    for row in table.rows:
        alpha = 1.0 - c * c
        assert abs(period_of(row["eta2"], row["nu"], alpha) - L) <= 1e-12 * L


def test_family_sweep_reports_offending_nu():
    L = 10.0
    bad = nu_threshold(L) * 0.5
    with pytest.raises(NoSolutionError, match=str(bad)[:8]):
        family_sweep(L, 0.0, [nu_threshold(L) * 2.0, bad])


def test_family_table_serialization(tmp_path):
    L, c = 10.0, 0.0
    grid = np.geomspace(nu_threshold(L) * 2.0, nu_threshold(L) * 10.0, 4)
    table = family_sweep(L, c, grid)
    csv_path = tmp_path / "fam.csv"
    json_path = tmp_path / "fam.json"
    table.to_csv(csv_path)
    table.to_json(json_path)
    header = csv_path.read_text().splitlines()[0]
    assert header == "nu,eta2,eta1,k,omega,d0,mass"
    import json

    rows = json.loads(json_path.read_text())
    assert len(rows) == 4 and rows[0]["nu"] == table.rows[0]["nu"]


@settings(max_examples=25, deadline=None)
@given(c=st.floats(-0.9, 0.9), mult=st.floats(1.01, 200.0))
def test_random_waves_satisfy_energy_relation(c, mult):
    L = 2.0 * math.pi
    w = _quiet_build(L, c, nu_threshold(L) * mult)
    r1, r2, r3 = ode_residuals(w, 256)
    scale = max(1.0, w.params.eta1**3)
    assert max(r1, r2, r3) <= 1e-9 * scale
