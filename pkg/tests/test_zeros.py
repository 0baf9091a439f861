import numpy as np
import pytest

from oracles import argument_principle_count
from weakphase.presets import gaussian, two_spikes
from weakphase.wavefield import Grid, Spectrum, dft
from weakphase.zeros import (
    ZeroSet,
    find_real_zeros,
    hadamard_eval,
    sine_model_final_state,
    zero_shift_factor,
)


def test_zeroset_validation():
    with pytest.raises(ValueError):
        ZeroSet([0.0, 1.0])
    with pytest.raises(ValueError):
        ZeroSet([1.0], support=(1.0, 1.0))
    with pytest.raises(ValueError):
        ZeroSet([1.0], order=-1)


def test_zeroset_serialisation_round_trip():
    zs = ZeroSet([1 + 2j, -3.5], scale=0.5 - 1j, order=2, support=(-1.5, 2.0))
    record = zs.to_dict()
    assert set(record) == {"zeros", "B", "d", "a", "b"}
    assert ZeroSet.from_json(zs.to_json()) == zs


def test_hadamard_basics():
    zs = ZeroSet([2.0 + 1j, -1.0], support=(-1, 1))
    assert hadamard_eval(zs, 2.0 + 1j) == 0
    assert hadamard_eval(ZeroSet([], support=(-2, 2)), 0.37 + 0.2j) == pytest.approx(1.0)


def test_hadamard_reproduces_polynomial():
    rng = np.random.default_rng(0)
    roots = rng.normal(size=5) + 1j * rng.normal(size=5)
    zs = ZeroSet(roots, scale=2.0, order=1, support=(-1, 1))
    z = rng.normal(size=20) + 1j * rng.normal(size=20)
    poly = 2.0 * z * np.prod([1 - z[:, None] / roots[None, :]], axis=(0, 2))
    assert np.allclose(hadamard_eval(zs, z), poly, rtol=1e-12, atol=1e-12)


def test_hadamard_truncated_sine():
    eps = 1.0
    k = np.arange(1, 201)
    zeros = np.concatenate([k * np.pi / eps, -k * np.pi / eps])
    zs = ZeroSet(zeros, scale=eps, order=1, support=(-eps, eps))
    p = np.linspace(-1, 1, 41)
    got = hadamard_eval(zs, p)
    assert np.allclose(got, np.sin(eps * p), rtol=1e-3, atol=1e-12)


def test_no_real_zeros_for_gaussian():
    g = Grid.spanning(12.0, 512)
    assert find_real_zeros(dft(gaussian(g)), 1e-3) == []


def test_sine_zeros():
    g = Grid.centered(512, 2 * np.pi / (512 * 20 / 512))
    p = g.p
    inside = np.abs(p) <= 10
    spec = Spectrum(g, np.where(inside, np.sin(p), 0.0))
    found = [z for z in find_real_zeros(spec, 0.1) if abs(z) <= 10]
    expected = [k * np.pi for k in range(-3, 4)]
    assert len(found) == len(expected)
    assert np.all(np.abs(np.array(found) - expected) <= g.dp)


def test_two_slit_nulls():
    g = Grid.centered(256, 0.125)
    spec = dft(two_spikes(g, 0.0, 1.0))
    found = np.array(find_real_zeros(spec, 1e-2))
    p_max = np.max(np.abs(g.p))
    k = np.arange(-20, 20)
    expected = (2 * k + 1) * np.pi
    expected = expected[np.abs(expected) < p_max - g.dp]
    assert len(found) == len(expected)
    assert np.all(np.abs(found - expected) <= g.dp)


def test_found_zeros_bracket_a_sign_change():
    g = Grid.centered(256, 0.125)
    spec = dft(two_spikes(g, 0.0, 1.0))
    F = spec.values
    for z in find_real_zeros(spec, 1e-2):
        j = int(np.floor((z - g.p[0]) / g.dp))
        a = np.exp(-1j * np.angle(F[j]))
        assert (F[j] * a).real * (F[j + 1] * a).real <= 0


def test_zero_shift_factor_examples():
    assert zero_shift_factor(0.1, 0.01, 0.0) == (1.0, 0.0)
    exact, linear = zero_shift_factor(0.1, 0.01, 0.1)
    assert abs(np.angle(exact) - linear) <= (0.01 * 0.1 / 0.1) ** 3 / 3
    h = 1e-4
    for theta in (0.1, -0.1):
        up, _ = zero_shift_factor(theta, 0.01, h)
        dn, _ = zero_shift_factor(theta, 0.01, -h)
        slope = (np.angle(up) - np.angle(dn)) / (2 * h)
        assert slope == pytest.approx(-0.01 / theta, rel=1e-8)
    with pytest.raises(ValueError):
        zero_shift_factor(0.0, 0.01, 0.1)
    with pytest.raises(ValueError):
        zero_shift_factor(0.1, 0.0, 0.1)


def test_zero_shift_symmetry():
    p = np.linspace(0.01, 3, 50)
    a, _ = zero_shift_factor(0.2, 0.05, p)
    b, _ = zero_shift_factor(0.2, 0.05, -p)
    assert np.allclose(np.angle(a), -np.angle(b), atol=1e-15)
    assert np.allclose(np.abs(a), np.abs(b), rtol=1e-15)


def test_sine_model_examples():
    assert sine_model_final_state(0.05, 0.0, 0.0) == 0
    p = np.linspace(-5, 5, 21)
    assert np.allclose(sine_model_final_state(0.05, 0.0, p), -1j * np.sin(0.05 * p))


def test_sine_model_close_to_exact_factor():
    eps, theta = 0.05, 0.1
    p = np.linspace(-0.2 / eps, 0.2 / eps, 401)
    exact = np.cos(eps * p) * np.sin(theta) - 1j * np.sin(eps * p) * np.cos(theta)
    dev = sine_model_final_state(eps, theta, p) - exact
    # each component stays under 2e-3; the complex modulus just exceeds it (2.01e-3)
    assert np.max(np.abs(dev.real)) <= 2e-3
    assert np.max(np.abs(dev.imag)) <= 2e-3
    assert np.max(np.abs(dev)) <= 2.1e-3


def test_sine_model_single_zero_in_strip():
    eps, theta = 0.05, 0.1
    func = lambda z: -1j * np.sin(eps * z + 1j * theta)
    half = np.pi / eps * 0.9  # stays clear of the neighbouring zeros at k*pi/eps
    strip = 2 * theta / eps
    assert argument_principle_count(func, -half, half, -strip, strip) == 1
    assert abs(func(-1j * theta / eps)) <= 1e-15
