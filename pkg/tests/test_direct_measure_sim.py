import numpy as np
import pytest

from oracles import GAUSSIAN_PINHOLE_RATIO
from weakphase import direct_measure_sim as dm
from weakphase import polarization as pol
from weakphase.presets import cubic_phase_gaussian, gaussian, point_mass
from weakphase.wavefield import Grid, SampledField, dft
from weakphase.weakvalue_bridge import loglog_slope

THETAS = (0.2, 0.1, 0.05)


@pytest.fixture(scope="module")
def cubic():
    return cubic_phase_gaussian(Grid.spanning(12.0, 512), sigma=1.0, cubic=0.1)


@pytest.fixture(scope="module")
def gauss():
    return gaussian(Grid.spanning(12.0, 512))


def test_scenario_guards(gauss):
    with pytest.raises(ValueError):
        dm.SliverScenario(gauss, 0.1, 512)
    with pytest.raises(ValueError):
        dm.SliverScenario(gauss.with_values(np.zeros(512)), 0.1, 3)
    with pytest.raises(ValueError, match="20 degrees"):
        dm.SliverScenario(gauss, 0.5, 3)


def test_rotate_theta_zero(cubic):
    ps = dm.sliver_rotate(dm.SliverScenario(cubic, 0.0, 256))
    assert np.all(ps.h.values == 0)
    assert np.allclose(ps.v.values, dft(cubic).values, atol=1e-15)


def test_rotate_full_quarter_turn(cubic):
    k = 250
    ps = dm.sliver_rotate(dm.SliverScenario(cubic, np.pi / 2, k, allow_large_theta=True))
    v_expected = np.array(cubic.values)
    v_expected[k] = 0
    assert np.allclose(ps.v.values, dft(cubic.with_values(v_expected)).values, atol=1e-14)
    assert np.abs(ps.h.values).max() == pytest.approx(abs(cubic.values[k]) * cubic.grid.dx, rel=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.05, 0.2, 0.34])
def test_rotate_conserves_norm(cubic, theta):
    ps = dm.sliver_rotate(dm.SliverScenario(cubic, theta, 260))
    assert abs(ps.norm2() - dft(cubic).norm2()) <= 1e-12 * dft(cubic).norm2()


def test_rotate_first_order_residual_is_cubic(gauss):
    k = 256
    dx = gauss.grid.dx
    p0 = gauss.grid.p_zero_index
    res = []
    for theta in THETAS:
        h0 = dm.sliver_rotate(dm.SliverScenario(gauss, theta, k)).h.values[p0]
        res.append(abs(abs(h0) - theta * abs(gauss.values[k]) * dx))
    assert 2.8 <= loglog_slope(THETAS, res) <= 3.2


def test_pinhole_weak_value_examples(gauss):
    g = gauss.grid
    pm = point_mass(g, 0.0)
    assert dm.pinhole_weak_value(dm.SliverScenario(pm, 0.1, g.index_of(0.0))) == pytest.approx(1.0)
    k = g.index_of(0.0)
    wv = dm.pinhole_weak_value(dm.SliverScenario(gauss, 0.1, k))
    assert wv.imag == 0 and wv.real > 0
    assert wv / g.dx == pytest.approx(GAUSSIAN_PINHOLE_RATIO, rel=1e-10)


def test_pinhole_null():
    g = Grid.centered(64, 0.25)
    v = np.zeros(64, complex)
    v[30], v[34] = 1.0, -1.0
    with pytest.raises(ValueError, match="post-selection null"):
        dm.pinhole_weak_value(dm.SliverScenario(SampledField(g, v), 0.1, 30))


def test_pointer_signals(gauss, cubic):
    assert dm.pointer_signals(dm.SliverScenario(cubic, 0.0, 250)) == (0.0, 0.0)
    for k in (200, 256, 300):
        _, sy = dm.pointer_signals(dm.SliverScenario(gauss, 0.1, k))
        assert abs(sy) <= 1e-12
    sx = [dm.pointer_signals(dm.SliverScenario(cubic, t, 250))[0] for t in THETAS]
    for a, b in zip(sx, sx[1:]):
        assert 1.9 <= a / b <= 2.1


def test_pointer_signals_first_order(cubic):
    k = 250
    F0 = dft(cubic).at_zero()
    wv = dm.pinhole_weak_value(dm.SliverScenario(cubic, 0.05, k))
    sx, sy = dm.pointer_signals(dm.SliverScenario(cubic, 0.05, k))
    assert sx == pytest.approx(abs(F0) ** 2 * (-2 * 0.05 * wv.real), rel=0.01)
    assert sy == pytest.approx(abs(F0) ** 2 * (2 * 0.05 * wv.imag), rel=0.01)


def test_vectorised_scan_matches_rotation(cubic):
    theta = 0.1
    est = dm.scan_weak_values(cubic, theta)
    p0 = cubic.grid.p_zero_index
    for k in (100, 240, 256, 300):
        h, v = dm.sliver_rotate(dm.SliverScenario(cubic, theta, k)).at(p0)
        sx = pol.pauli_expectation(h, v, pol.SIGMA_X)
        sy = pol.pauli_expectation(h, v, pol.SIGMA_Y)
        ref = (-sx + 1j * sy) / (2 * theta * (abs(h) ** 2 + abs(v) ** 2))
        assert est[k] == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_scan_reconstruct_point_mass():
    g = Grid.spanning(4.0, 64)
    pm = point_mass(g, 0.5)
    rec = dm.scan_reconstruct(pm, 0.1)
    assert dm.overlap_error(rec, pm) <= 1e-10
    with pytest.raises(ValueError):
        dm.scan_reconstruct(pm, 0.0)


def test_scan_reconstruct_cubic(cubic):
    rec = dm.scan_reconstruct(cubic, 0.1)
    assert dm.overlap_error(rec, cubic) <= 2e-3
    assert rec.norm2() == pytest.approx(1.0, abs=1e-12)
    k = int(np.argmax(np.abs(rec.values)))
    assert rec.values[k].imag == 0 and rec.values[k].real > 0


def test_scan_global_phase_invariance(cubic):
    a = dm.scan_reconstruct(cubic, 0.1)
    b = dm.scan_reconstruct(cubic.with_values(cubic.values * np.exp(0.9j)), 0.1)
    assert np.max(np.abs(a.values - b.values)) <= 1e-12


def test_operational_ratios_examples(gauss, cubic):
    re, im = dm.operational_ratios(cubic, 250, 1e-9)
    assert re == pytest.approx(1.0, abs=1e-9) and im == pytest.approx(1.0, abs=1e-9)
    for theta in (0.1, 0.05):
        _, im = dm.operational_ratios(gauss, 256, theta)
        assert abs(im - 1) <= 2 * theta**2 * 0.1
    with pytest.raises(ValueError):
        dm.operational_ratios(cubic, 512, 0.1)


def test_operational_ratios_track_weak_value(cubic):
    k = 250
    wv = dm.pinhole_weak_value(dm.SliverScenario(cubic, 0.1, k))
    res = []
    for theta in THETAS:
        re, im = dm.operational_ratios(cubic, k, theta)
        est = complex(-np.log(re) / theta, np.log(im) / theta)
        res.append(abs(est - wv))
    assert 0.8 <= loglog_slope(THETAS, res) <= 1.2


def test_operational_warns_for_large_coupling():
    g = Grid.spanning(4.0, 64)
    pm = point_mass(g, 0.0)
    with pytest.warns(dm.LargeCouplingWarning):
        dm.operational_ratios(pm, g.index_of(0.0), 0.8)
