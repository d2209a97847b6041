import numpy as np
import pytest
from numpy.testing import assert_allclose

from cosetwalk import examples as ex
from cosetwalk.linalg import phase_multiset_distance, wrap_phase
from cosetwalk.spectral import (
    BandCrossingError,
    ExtremumError,
    band_curvature,
    band_phases,
    dispersion_grid,
    grid_axis,
    group_velocity,
)


def test_grid_axis_covers_principal_interval():
    axis = grid_axis(8)
    assert axis[-1] == pytest.approx(np.pi)
    assert np.all(axis > -np.pi)
    assert len(axis) == 8


def test_grid_shape_and_order(g2_one):
    grid = dispersion_grid(g2_one, 5)
    assert grid.kpoints.shape == (25, 2)
    assert grid.phases.shape == (25, 4)
    assert np.all(np.diff(grid.phases, axis=1) >= 0)
    assert np.all(grid.phases > -np.pi) and np.all(grid.phases <= np.pi)
    # row-major order over the axes
    assert_allclose(grid.kpoints[0], [grid.axis_values[0], grid.axis_values[0]])
    assert_allclose(grid.kpoints[1], [grid.axis_values[0], grid.axis_values[1]])


def test_grid_requires_two_points():
    with pytest.raises(ValueError):
        dispersion_grid(ex.g2_walk("I"), 1)


def test_g1_massive_point_values(g1_massive):
    # class II with n = 0.6: bands +-arccos(0.6) and the pi-shifted pair at k=0
    c = float(np.arccos(0.6))
    expected = np.sort(wrap_phase(np.repeat([c, -c, c - np.pi, np.pi - c], 2)))
    assert phase_multiset_distance(band_phases(g1_massive, (0.0, 0.0)), expected) < 1e-12


def test_g1_every_phase_has_multiplicity_two(g1_massive, rng):
    from cosetwalk.linalg import circular_distance

    for _ in range(10):
        phases = band_phases(g1_massive, rng.uniform(-np.pi, np.pi, 2))
        assert np.all(circular_distance(phases[0::2], phases[1::2]) < 1e-10)


def test_g2_degenerate_band_touching(g2_one):
    # k2 = pi, k3 = 0 puts both band pairs at +-pi/2
    phases = band_phases(g2_one, (np.pi, 0.0))
    expected = [-np.pi / 2, -np.pi / 2, np.pi / 2, np.pi / 2]
    assert phase_multiset_distance(phases, expected) < 1e-12


def test_grid_matches_closed_forms(g1_massive, g2_one):
    grid = dispersion_grid(g1_massive, 17)
    assert ex.g1_grid_oracle_deviation(grid, ex.G1Params("II", 0.6, 0.8, 1)) < 1e-9
    grid = dispersion_grid(g2_one, 17)
    assert ex.g2_grid_oracle_deviation(grid) < 1e-9


# --- group velocity ---------------------------------------------------------


def test_flat_walk_has_zero_velocity_everywhere(g1_flat, rng):
    for _ in range(5):
        k = rng.uniform(-3.0, 3.0, 2)
        for band in (0, 3, 7):
            assert_allclose(group_velocity(g1_flat, k, band), 0.0, atol=1e-9)


def test_g1_velocity_vanishes_at_symmetric_point(g1_massive):
    for band in range(8):
        assert np.abs(group_velocity(g1_massive, (0.0, 0.0), band)).max() < 1e-9


def test_g2_radial_slope_near_band_minimum(g2_one):
    # move along k2 only: (dkx, dky) = (delta, delta)/sqrt(2) from kx = ky = pi
    delta = 1e-3
    base = band_phases(g2_one, (np.pi, 0.0))[3]
    moved = band_phases(g2_one, (np.pi + delta / np.sqrt(2.0), 0.0))[3]
    slope = (moved - base) / delta
    assert slope == pytest.approx(1.0 / (2.0 * np.sqrt(2.0)), abs=1e-3)


def test_band_crossing_is_reported_not_averaged(g2_one):
    # alpha vanishes on the k2 = 0 line; the sorted bands kink there
    with pytest.raises(BandCrossingError):
        group_velocity(g2_one, (0.0, 1.0), 1)


def test_velocity_matches_closed_form_derivative(g1_massive):
    # band 4 at k=0 carries +arccos(alpha(0.6, k)); exact d/dkx at (0.8, 0.3)
    k = (0.8, 0.3)
    nu = 0.6
    kx, ky = k
    alpha = nu * np.sqrt(0.5 * (np.cos(kx / 2) ** 2 + np.cos(ky / 2) ** 2))
    dalpha = -nu * np.sin(kx / 2) * np.cos(kx / 2) / (
        2.0 * np.sqrt(2.0) * np.sqrt(np.cos(kx / 2) ** 2 + np.cos(ky / 2) ** 2)
    )
    exact = -dalpha / np.sqrt(1.0 - alpha * alpha)
    phases = band_phases(g1_massive, k)
    target = np.arccos(alpha)
    band = int(np.argmin(np.abs(phases - target)))
    velocity = group_velocity(g1_massive, k, band)
    assert velocity[0] == pytest.approx(exact, abs=1e-6)


# --- curvature --------------------------------------------------------------


@pytest.mark.parametrize("nu", [0.3, 0.6, 0.9])
def test_curvature_matches_mass_relation(nu):
    walk = ex.g1_walk(ex.G1Params("II", nu, float(np.sqrt(1 - nu * nu)), 1))
    phases = band_phases(walk, (0.0, 0.0))
    band = int(np.argmin(np.abs(phases - np.arccos(nu))))
    curvature = band_curvature(walk, (0.0, 0.0), band)
    expected = nu / (8.0 * np.sqrt(1.0 - nu * nu))
    assert curvature[0] == pytest.approx(expected, abs=1e-4)
    assert curvature[1] == pytest.approx(expected, abs=1e-4)


def test_flat_walk_curvature_is_zero(g1_flat):
    assert_allclose(band_curvature(g1_flat, (0.0, 0.0), 0), 0.0, atol=1e-8)


def test_curvature_requires_extremum(g2_one):
    with pytest.raises(ExtremumError):
        band_curvature(g2_one, (0.5, 0.3), 3)


def test_curvature_is_symmetric_between_axes(g1_massive):
    phases = band_phases(g1_massive, (0.0, 0.0))
    band = int(np.argmin(np.abs(phases - np.arccos(0.6))))
    curvature = band_curvature(g1_massive, (0.0, 0.0), band)
    assert curvature[0] == pytest.approx(curvature[1], abs=1e-8)


def test_analyze_band_bundles_kinematics(g1_massive):
    from cosetwalk.spectral import analyze_band

    phases = band_phases(g1_massive, (0.0, 0.0))
    band = int(np.argmin(np.abs(phases - np.arccos(0.6))))
    analysis = analyze_band(g1_massive, (0.0, 0.0), band)
    assert analysis.band == band
    assert analysis.location == (0.0, 0.0)
    assert max(abs(g) for g in analysis.gradient) < 1e-9
    assert analysis.curvature[0] == pytest.approx(0.09375, abs=1e-4)


# --- continuity -------------------------------------------------------------


@pytest.mark.parametrize("maker", [lambda: ex.g1_walk(ex.G1Params("II", 0.6, 0.8, 1)), lambda: ex.g2_walk("I")], ids=["g1", "g2"])
def test_phase_continuity_along_grid_lines(maker):
    walk = maker()
    resolution = 64
    grid = dispersion_grid(walk, resolution)
    phases = grid.phases.reshape(resolution, resolution, -1)
    # straight-line bands can attain the bound exactly, hence the epsilon
    bound = np.pi / resolution + 1e-9
    for axis in (0, 1):
        rolled = np.moveaxis(phases, axis, 0)
        for i in range(resolution - 1):
            rows_a = rolled[i].reshape(-1, phases.shape[-1])
            rows_b = rolled[i + 1].reshape(-1, phases.shape[-1])
            for a, b in zip(rows_a, rows_b):
                assert phase_multiset_distance(a, b) <= bound
