import math

import pytest

import dhwave as dh


def test_kernel_closed_form():
    # radicand = (1-0)(2+0-1) - 0 = 1 at this point
    assert dh.gamma_eval(t=1.0, x1=0.0, y1=1.0, x2=0.0) == pytest.approx(
        math.sqrt(3.0) / (2.0 * math.pi)
    )
    assert dh.in_support(t=1.0, x1=0.0, y1=1.0, x2=0.0)
    assert dh.gamma_eval(t=1.0, x1=0.0, y1=-0.5, x2=0.0) == 0.0


def test_weak_identity():
    phi = dh.TestFunction(
        dh.BumpAxis(0.05, 0.3), dh.BumpAxis(0.5, 0.5), dh.BumpAxis(0.0, 0.4), 1.0
    )
    got = dh.weak_apply(0.5, phi, tol=1e-3)
    assert got == pytest.approx(phi.value(0.0, 0.5, 0.0), abs=5e-3)


def test_fourier_representations_agree():
    a = dh.fourier_gamma(0.7, 0.3, -0.2, 4.0, 9.0)
    b = dh.fourier_gamma_direct(0.7, 0.3, -0.2, 4.0, 9.0)
    assert abs(a - b) < 1e-6
    # zero frequency recovers the total mass tau
    assert dh.fourier_gamma(0.7, 0.3, -0.2, 0.0, 0.0) == pytest.approx(0.7)
    assert abs(a) <= dh.bound_global(0.7, 0.3, 4.0, 9.0) * (1 + 1e-9)


def test_admissibility_verdicts():
    fine = dh.sc_integral(dh.RieszPower(0.5))
    assert not fine.divergent
    # closed form: 3 pi^2 / sin(3 pi beta / 2)
    assert fine.value == pytest.approx(3 * math.pi**2 * math.sqrt(2.0), rel=1e-9)
    assert dh.sc_integral(dh.RieszPower(0.8)).divergent
    assert dh.sc_integral(dh.WhiteNoise()).divergent
    assert not dh.dalang_integral(dh.RieszPower(0.8)).divergent
    quad = dh.classify_quadrature(dh.RieszPower(0.5), dh.AdmissibilityWeight.Degenerate)
    assert quad.value == pytest.approx(fine.value, rel=1e-4)
    with pytest.raises(ValueError):
        dh.sc_integral(dh.RieszPower(3.5))


def test_noise_round_trip(tmp_path):
    grid = dh.GridSpec(dt=0.125, t_steps=4, x_extent=2.2, n_modes=8, seed=11)
    noise = dh.sample_noise(grid, dh.GaussianDensity(1.0), sample=0)
    assert len(noise.points) == 16
    assert len(noise.values) == 4 * 16 * 16
    path = tmp_path / "noise.bin"
    noise.write_binary(str(path))
    back = dh.NoiseGrid.read_binary(str(path))
    assert back.values == noise.values
    # determinism: same key gives the same field
    again = dh.sample_noise(grid, dh.GaussianDensity(1.0), sample=0)
    assert again.values == noise.values


def test_simulate_matches_spectral_norm():
    grid = dh.GridSpec(dt=0.0625, t_steps=16, x_extent=2.2, n_modes=24, seed=3)
    mu = dh.GaussianDensity(1.0)
    ens = dh.simulate(grid, mu, t=1.0, x1=0.0, x2=0.0, n_samples=400)
    assert ens.n_samples == 400
    assert abs(ens.mean) < 4 * ens.std_error
    target = dh.norm_integral(1.0, 0.0, 0.0, mu, tol=1e-4)
    assert ens.variance == pytest.approx(target, rel=0.25)


def test_increments_shrink():
    mu = dh.GaussianDensity(1.0)
    big = dh.l2_increment(dh.IncrementAxis.X2, 0.5, -0.3, 0.2, 0.2, mu, tol=1e-4)
    small = dh.l2_increment(dh.IncrementAxis.X2, 0.5, -0.3, 0.2, 0.05, mu, tol=1e-4)
    assert 0 < small < big
    grid = dh.GridSpec(dt=0.03125, t_steps=32, x_extent=2.2, n_modes=32, seed=4)
    est = dh.mc_l2_increment(grid, mu, dh.IncrementAxis.Time, 0.5, -0.3, 0.2,
                             0.1, n_samples=400)
    ref = dh.l2_increment(dh.IncrementAxis.Time, 0.5, -0.3, 0.2, 0.1, mu, tol=1e-4)
    assert abs(est.mc_value - ref) <= 3 * est.mc_stderr + 0.05 * ref


def test_covariance_check():
    grid = dh.GridSpec(dt=0.125, t_steps=8, x_extent=2.2, n_modes=24, seed=5)
    phi = dh.TestFunction(
        dh.BumpAxis(0.5, 0.4), dh.BumpAxis(0.2, 0.8), dh.BumpAxis(-0.1, 0.8), 1.0
    )
    r = dh.covariance_mc_check(phi, phi, grid, dh.GaussianDensity(0.8), 300)
    assert r.spectral_value > 0
    assert r.lattice_value == pytest.approx(r.spectral_value, rel=0.05)
    assert abs(r.mc_value - r.spectral_value) <= 3 * r.mc_stderr + 0.02 * r.spectral_value
