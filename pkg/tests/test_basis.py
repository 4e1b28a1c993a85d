"""Grids, plane-wave superpositions and the unitary transforms."""

import logging

import numpy as np
import pytest

from basis import (
    Representation,
    WaveFunction,
    check_aliasing,
    forward_transform,
    inner_product,
    inverse_transform,
    make_grid,
    normalize,
    nyquist_weight,
    plane_wave,
    superpose,
)
from errors import GridError, NormalizationError, RepresentationError


@pytest.mark.parametrize("n", [100, 3, 0, 2.0])
def test_grid_rejects_bad_point_counts(n):
    with pytest.raises(GridError):
        make_grid(1, n, 10.0)


@pytest.mark.parametrize("dim, extent", [(2, 10.0), (1, 0.0), (1, -1.0), (1, float("inf"))])
def test_grid_rejects_bad_dim_and_extent(dim, extent):
    with pytest.raises(GridError):
        make_grid(dim, 16, extent)


def test_grid_points_and_lattice():
    grid = make_grid(1, 8, 4.0)
    assert grid.spacing == pytest.approx(0.5)
    assert grid.axis_points[0] == pytest.approx(-2.0)
    assert grid.axis_points[grid.n // 2] == 0.0
    # k = -N/2 is on the lattice, +N/2 is not
    assert list(grid.axis_modes) == [0, 1, 2, 3, -4, -3, -2, -1]
    assert grid.axis_momenta[1] == pytest.approx(2 * np.pi / 4.0)


def test_plane_wave_has_a_single_amplitude():
    grid = make_grid(1, 32, 10.0)
    psi = plane_wave(grid, 3)
    assert psi.is_normalized
    a = forward_transform(psi)
    assert abs(a.at(3) - 1.0) < 1e-12
    assert a.total_weight == pytest.approx(1.0, abs=1e-12)
    others = np.delete(a.weights, grid.mode_slot(3)[0])
    assert np.max(others) < 1e-24


def test_plane_wave_values_match_the_exponential():
    grid = make_grid(1, 16, 7.0)
    psi = plane_wave(grid, -2)
    expected = np.exp(1j * grid.axis_momenta[grid.mode_slot(-2)] * grid.axis_points) / np.sqrt(grid.n)
    assert np.allclose(psi.values, expected, atol=1e-14)


def test_transforms_are_unitary():
    grid = make_grid(1, 64, 12.0)
    rng = np.random.default_rng(7)
    psi = normalize(WaveFunction(grid, rng.normal(size=64) + 1j * rng.normal(size=64)))
    a = forward_transform(psi)
    assert a.total_weight == pytest.approx(psi.norm, abs=1e-12)
    back = inverse_transform(a)
    assert np.max(np.abs(back.values - psi.values)) < 1e-13


def test_superpose_in_three_dimensions():
    grid = make_grid(3, 8, 5.0)
    psi = superpose(grid, {(1, 0, -1): 0.6, (0, 0, 0): 0.8j})
    assert psi.norm == pytest.approx(1.0, abs=1e-12)
    a = forward_transform(psi)
    assert abs(a.at((1, 0, -1)) - 0.6) < 1e-12
    assert abs(a.at((0, 0, 0)) - 0.8j) < 1e-12


def test_mode_outside_lattice():
    grid = make_grid(1, 8, 1.0)
    with pytest.raises(GridError):
        grid.mode_slot(4)
    with pytest.raises(GridError):
        grid.mode_slot((1, 2))


def test_inner_product_checks_operands():
    g1, g2 = make_grid(1, 16, 5.0), make_grid(1, 16, 6.0)
    with pytest.raises(RepresentationError):
        inner_product(plane_wave(g1, 0), plane_wave(g2, 0))
    momentum_view = forward_transform(plane_wave(g1, 0)).as_wavefunction()
    with pytest.raises(RepresentationError):
        inner_product(plane_wave(g1, 0), momentum_view)
    assert inner_product(plane_wave(g1, 1), plane_wave(g1, 2)) == pytest.approx(0.0, abs=1e-14)


def test_forward_transform_needs_position_state():
    grid = make_grid(1, 16, 5.0)
    view = forward_transform(plane_wave(grid, 1)).as_wavefunction()
    assert view.representation is Representation.MOMENTUM
    with pytest.raises(RepresentationError):
        forward_transform(view)


def test_normalize_rejects_zero_state():
    grid = make_grid(1, 16, 5.0)
    with pytest.raises(NormalizationError):
        normalize(WaveFunction(grid, np.zeros(16)))


def test_values_are_frozen():
    psi = plane_wave(make_grid(1, 16, 5.0), 0)
    with pytest.raises(ValueError):
        psi.values[0] = 1.0


def test_time_factor():
    psi = plane_wave(make_grid(1, 16, 5.0), 1, energy=2.0)
    later = psi.at_time(np.pi / 4)
    assert np.allclose(later.values, psi.values * np.exp(-0.5j * np.pi))
    with pytest.raises(NormalizationError):
        psi.with_energy(None).at_time(1.0)


def test_aliasing_guard_logs_a_warning(caplog):
    grid = make_grid(1, 16, 5.0)
    clean = forward_transform(plane_wave(grid, 2))
    assert nyquist_weight(clean) < 1e-20
    with caplog.at_level(logging.WARNING, logger="basis"):
        share = check_aliasing(forward_transform(plane_wave(grid, -8)))
    assert share == pytest.approx(1.0)
    assert "k=-N/2" in caplog.text


def test_dominant_modes_are_sorted_by_weight():
    grid = make_grid(1, 16, 5.0)
    psi = superpose(grid, {2: 0.3, -1: 0.9, 0: np.sqrt(1 - 0.09 - 0.81)})
    top = forward_transform(psi).dominant_modes(top=2)
    assert [m["mode"] for m in top] == [[-1], [0]]
    assert top[0]["weight"] == pytest.approx(0.81)


def test_gaussian_amplitudes_match_direct_sum():
    grid = make_grid(1, 256, 40.0)
    x, p = grid.axis_points, grid.axis_momenta
    psi = normalize(WaveFunction(grid, np.exp(-x**2 / 2.0)))
    direct = np.exp(-1j * np.outer(p, x)) @ psi.values / np.sqrt(grid.n)
    assert np.max(np.abs(forward_transform(psi).values - direct)) < 1e-10


def test_shift_by_one_point_is_a_phase():
    grid = make_grid(1, 64, 12.0)
    x = grid.axis_points
    psi = normalize(WaveFunction(grid, np.exp(-(x - 1.0) ** 2) * (1 + 0.5j * x)))
    shifted = WaveFunction(grid, np.roll(psi.values, -1))
    a, b = forward_transform(psi).values, forward_transform(shifted).values
    assert np.max(np.abs(b - np.exp(1j * grid.axis_momenta * grid.spacing) * a)) < 1e-12


def test_inner_product_parseval():
    grid = make_grid(1, 32, 8.0)
    rng = np.random.default_rng(11)
    f = normalize(WaveFunction(grid, rng.normal(size=32) + 1j * rng.normal(size=32)))
    g = normalize(WaveFunction(grid, rng.normal(size=32) + 1j * rng.normal(size=32)))
    fa, ga = forward_transform(f).as_wavefunction(), forward_transform(g).as_wavefunction()
    assert abs(inner_product(f, g) - inner_product(fa, ga)) < 1e-12
    assert inner_product(f, g) == pytest.approx(np.conj(inner_product(g, f)))


def test_delta_has_a_flat_spectrum():
    grid = make_grid(1, 64, 10.0)
    values = np.zeros(64)
    values[17] = 1.0
    weights = forward_transform(WaveFunction(grid, values)).weights
    assert np.allclose(weights, 1.0 / 64, atol=1e-15)


def test_normalize_scales_and_is_idempotent():
    grid = make_grid(1, 16, 5.0)
    psi = WaveFunction(grid, 2 * plane_wave(grid, 1).values)
    assert psi.norm == pytest.approx(4.0)
    unit = normalize(psi)
    assert np.allclose(unit.values, psi.values / 2, atol=1e-15)
    assert np.max(np.abs(normalize(unit).values - unit.values)) < 1e-15


@pytest.mark.parametrize("dim, n", [(1, 4096), (3, 16)])
def test_round_trip_at_largest_dense_size(dim, n):
    grid = make_grid(dim, n, 12.0)
    rng = np.random.default_rng(5)
    raw = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    psi = normalize(WaveFunction(grid, raw))
    back = inverse_transform(forward_transform(psi))
    assert np.max(np.abs(back.values - psi.values)) < 1e-12
    a = forward_transform(psi)
    again = forward_transform(inverse_transform(a))
    assert np.max(np.abs(again.values - a.values)) < 1e-12
