import math

import numpy as np
import pytest
import sympy as sp

import crocco_prandtl as cp


def test_version_and_catalog():
    assert cp.version() == "0.1.0"
    assert "exact_profile" in cp.scenario_catalog()
    assert "oscillation_lab" in cp.scenario_catalog()


def test_grid_rejects_coarse():
    with pytest.raises(cp.ConfigError):
        cp.GridSpec(nx=2)


def test_linear_profile_is_stationary():
    grid = cp.GridSpec(16, 16, 16)
    u = cp.solve("uniform", grid, 1e-3, lambda x, y: 1.0 - y, lambda y, t: 1.0 - y, -1.0)
    assert u.shape == (17, 17, 17)
    y = np.linspace(0.0, 1.0, 17)
    assert np.max(np.abs(u - (1.0 - y)[None, None, :])) < 1e-8


def test_cfl_violation():
    grid = cp.GridSpec(16, 16, 4, length=1.0, horizon=1.0)
    with pytest.raises(cp.ConfigError):
        cp.solve("uniform", grid, 1e-3, lambda x, y: 1.0 - y, lambda y, t: 1.0 - y, -1.0)


def test_coefficients_match_symbolic():
    x, y, t = sp.symbols("x y t")
    U = 1 + t
    Ux, Ut = sp.diff(U, x), sp.diff(U, t)
    Px = -(Ut + U * Ux)
    a = y * U
    b = (1 - y**2) * Ux + (1 - y) * Ut / U
    c = (1 - y) * Ux - Px / U
    for pt in [(0.3, 0.2, 0.1), (1.5, 0.9, 0.45)]:
        got = cp.coefficients_at("accelerating", *pt)
        sub = dict(zip((x, y, t), pt))
        assert got["a"] == pytest.approx(float(a.subs(sub)), abs=1e-12)
        assert got["b"] == pytest.approx(float(b.subs(sub)), abs=1e-12)
        assert got["c"] == pytest.approx(float(c.subs(sub)), abs=1e-12)
        assert got["px_over_u"] == pytest.approx(float((Px / U).subs(sub)), abs=1e-12)


def test_validate_flags_blowing():
    grid = cp.GridSpec(16, 16, 16)
    issues, _ = cp.validate("uniform", grid, lambda x, y: 1.0 - y, lambda y, t: 1.0 - y, 0.5)
    assert any(i["condition"] == "suction_sign" for i in issues)


def kernel_oracle(z, zeta):
    s = z[2] - zeta[2]
    if s <= 0:
        return 0.0
    dy = z[1] - zeta[1]
    dx = z[0] - zeta[0] - s * (z[1] + zeta[1]) / 2
    return math.sqrt(3) / (2 * math.pi * s**2) * math.exp(-dy**2 / (4 * s) - 3 * dx**2 / s**3)


def test_gamma0_formula_and_mass():
    rng = np.random.default_rng(7)
    for _ in range(20):
        z = tuple(rng.uniform(-1, 1, 3))
        zeta = tuple(rng.uniform(-1, 1, 3))
        assert cp.gamma0(z, zeta) == pytest.approx(kernel_oracle(z, zeta), rel=1e-12, abs=1e-300)
    assert cp.gamma0_mass(0.3) == pytest.approx(1.0, abs=1e-8)


def test_dilation():
    z = (0.2, -0.3, 0.5)
    assert cp.dilate(z, 2.0) == pytest.approx((1.6, -0.6, 2.0))
    assert cp.dilation_defect(z, 0.5) < 1e-12


def test_cutoff_certified_and_guarded():
    cut = cp.Cutoff()
    items = cut.certify(17)
    assert {i["item"] for i in items} >= {"transport_sign", "unit_core", "support"}
    assert all(i["pass"] for i in items)
    assert cut.phi(0.0, 0.0, 0.0) == pytest.approx(1.0)
    with pytest.raises(cp.ParameterError):
        cp.Cutoff(theta=0.5)


def test_model_maximum_principle():
    u = cp.solve_model("checkerboard", 4.0, "smooth", 16)
    assert u.shape == (33, 17, 17)
    assert u.min() >= u[0].min() - 1e-12
    assert u.max() <= max(u[0].max(), u[:, :, 0].max(), u[:, :, -1].max()) + 1e-12


def test_run_scenario_and_config_errors():
    text = "scenario = exact_profile\nNx = 16\nNy = 16\nNt = 16\nL = 2\nT = 0.5\neps_list = 1e-2\n"
    out = cp.run_scenario(text)
    assert out["verdicts"]["exact_reproduction"]
    assert out["header"].startswith("# crocco-prandtl 0.1.0 exact_profile 16x16x16")
    with pytest.raises(cp.ConfigError):
        cp.run_scenario("scenario = exact_profile\nbogus = 1\n")
