import numpy as np
import pytest

from weakphase.expfilter import FilterSpec, continued_phase
from weakphase.presets import chirped_gaussian, gaussian, padded_grid, point_mass, random_smooth
from weakphase.wavefield import Grid, SampledField, analytic_extension
from weakphase.weakvalue_bridge import (
    BridgeReport,
    bridge_residual,
    filter_ratio,
    loglog_slope,
    modulus_shift_deviation,
    position_weak_value,
    weak_value_decomposition,
)

C_LIST = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1]


@pytest.fixture(scope="module")
def grid():
    return Grid.spanning(12.0, 1024)


def test_report_validation():
    with pytest.raises(ValueError):
        BridgeReport(0.0, 0.1, -1.0, 1.0, 0.0, 0j)


def test_gaussian_weak_value(grid):
    xc = 0.8
    f = gaussian(grid, center=xc)
    wv = position_weak_value(f, 0.0, 0.3)
    assert abs(wv.real) <= 1e-12
    assert wv.imag == pytest.approx(0.3 - xc, abs=1e-12)
    assert abs(position_weak_value(f, 0.0, xc)) <= 1e-12


def test_direct_sum_matches_decomposition(grid):
    rs = random_smooth(padded_grid(512, 16.0), seed=3)
    for f in (rs, chirped_gaussian(grid)):
        for p in (-0.4, 0.0, 0.25):
            assert abs(position_weak_value(f, p, 1.0) - weak_value_decomposition(f, p, 1.0)) <= 1e-6


def test_translation_covariance(grid):
    d = 0.37
    a = position_weak_value(gaussian(grid, center=0.1), 0.0, -2.0)
    b = position_weak_value(gaussian(grid, center=0.1 + d), 0.0, -2.0)
    assert b.imag - a.imag == pytest.approx(-d, abs=1e-8)


def test_weak_value_floor():
    g = Grid.centered(64, 0.25)
    v = np.zeros(64, complex)
    v[30], v[34] = 1.0, -1.0
    with pytest.raises(ValueError, match="below the floor"):
        position_weak_value(SampledField(g, v), 0.0, -10.0)


def test_filter_ratio_examples(grid):
    f = gaussian(grid)
    s = grid.x0 - 1.0
    assert filter_ratio(f, FilterSpec(1e-12, s), 0.0) == pytest.approx(1.0, abs=1e-10)
    pm = point_mass(grid, 1.3)
    xk = grid.x[grid.index_of(1.3)]
    assert filter_ratio(pm, FilterSpec(0.2, -1.0), 0.4) == pytest.approx(np.exp(-0.2 * (xk + 1.0)), rel=1e-14)
    assert filter_ratio(f, FilterSpec(0.01, s), 0.0) > 0


def test_point_mass_exact(grid):
    reports = bridge_residual(point_mass(grid, 1.3), 0.0, C_LIST, 0.0)
    assert len(reports) == len(C_LIST)
    assert max(r.residual for r in reports) <= 1e-12


@pytest.mark.parametrize("builder", [gaussian, chirped_gaussian])
@pytest.mark.parametrize("p", [0.0, 0.3, -0.5])
def test_residual_is_quadratic(grid, builder, p):
    f = builder(grid)
    reports = bridge_residual(f, grid.x0 - 1.0, C_LIST, p)
    for r in reports:
        assert r.residual == pytest.approx(abs(np.log(r.lhs) - np.log(r.rhs)), abs=1e-15)
    assert 1.8 <= loglog_slope(C_LIST, [r.residual for r in reports]) <= 2.2


def test_bridge_rejects_nonpositive_c(grid):
    with pytest.raises(ValueError):
        bridge_residual(gaussian(grid), grid.x0 - 1.0, [0.1, 0.0])


def test_consistency_with_continued_phase(grid):
    f = chirped_gaussian(grid, center=0.4)
    s = grid.x0 - 0.5
    c = 0.05
    phi = continued_phase(f, c)
    for j in (500, 512, 530):
        p = grid.p[j]
        Mext = np.sqrt(abs(analytic_extension(f, p, -c)) * abs(analytic_extension(f, p, c)))
        M = abs(analytic_extension(f, p, 0.0))
        rhs = c * s - phi[j].imag + np.log(Mext / M)
        assert np.log(filter_ratio(f, FilterSpec(c, s), p)) == pytest.approx(rhs, abs=1e-8)


def test_small_c_limit(grid):
    f = chirped_gaussian(grid)
    s = grid.x0 - 1.0
    wv = position_weak_value(f, 0.2, s)
    errs = [abs(np.log(filter_ratio(f, FilterSpec(c, s), 0.2)) / c - wv.imag) for c in C_LIST]
    assert all(a < b for a, b in zip(errs, errs[1:]))


def test_modulus_shift_deviation_is_quadratic(grid):
    f = chirped_gaussian(grid)
    devs = [modulus_shift_deviation(f, c, 0.3) for c in C_LIST]
    assert 1.8 <= loglog_slope(C_LIST, devs) <= 2.2


def test_loglog_slope_validation():
    assert loglog_slope([1, 10], [1, 100]) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        loglog_slope([1], [1])
    with pytest.raises(ValueError):
        loglog_slope([1, 2], [0, 1])
