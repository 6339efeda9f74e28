"""
Test the Monte Carlo oracle: sampling, estimates and KS comparison
"""
import numpy as np
import pytest

from walker.densities import cdf_odd_dim
from walker.errors import DomainError, UnsupportedPathError
from walker.models_pydantic import KSReference
from walker.montecarlo import (estimate_moments, interpolated_cdf, ks_check, ks_passed, piecewise_cdf,
                               reference_cdf, sample_distances, sample_walk, simulate, unit_vectors)

SEED = 20240101


def test_unit_vectors_lie_on_the_sphere():
    rng = np.random.default_rng(1)
    v = unit_vectors(rng, (50,), 4)
    assert v.shape == (50, 4)
    assert np.allclose(np.linalg.norm(v, axis=-1), 1.0)


def test_single_walk_is_bounded():
    rng = np.random.default_rng(2)
    assert 0 <= sample_walk(5, 3, rng) <= 5
    with pytest.raises(DomainError):
        sample_walk(3, 1, rng)


def test_samples_are_reproducible_across_worker_counts():
    one = sample_distances(3, 2, 5000, SEED, workers=1)
    four = sample_distances(3, 2, 5000, SEED, workers=4)
    assert one.shape == (5000,)
    assert np.array_equal(one, four)
    assert not np.array_equal(one, sample_distances(3, 2, 5000, SEED + 1, workers=1))


def test_sampling_rejects_bad_arguments():
    with pytest.raises(DomainError):
        sample_distances(3, 1, 100, SEED)
    with pytest.raises(DomainError):
        sample_distances(0, 2, 100, SEED)


def test_second_moment_estimate():
    walk = estimate_moments(4, 3, [2, 1], 20000, SEED, cdf_points=[1.0, 4.0])
    second = walk.moment_estimates["2"]
    assert abs(second.mean - 4) < 4 * second.stderr
    assert walk.cdf_estimates["4"].mean == 1.0
    assert walk.rng_algorithm == "Philox"


def test_piecewise_reference_cdf():
    cdf = piecewise_cdf(cdf_odd_dim(3, 1), 3.0)
    values = cdf(np.array([-1.0, 0.0, 1.0, 2.0, 3.0, 7.0]))
    assert values[0] == 0.0
    assert values[1] == 0.0
    assert values[2] == pytest.approx(1 / 6)
    assert values[-2] == 1.0
    assert values[-1] == 1.0
    assert np.all(np.diff(values) >= 0)


def test_interpolated_reference_cdf():
    cdf = interpolated_cdf(lambda x: min(1.0, x * x / 4), 2, points=41)
    assert cdf(np.array([1.0]))[0] == pytest.approx(0.25)
    assert cdf(np.array([2.5]))[0] == 1.0


def test_reference_cdf_needs_a_closed_form():
    with pytest.raises(UnsupportedPathError):
        reference_cdf(4, 2)
    with pytest.raises(DomainError):
        reference_cdf(3, 3, KSReference.NONE)


def test_ks_against_exact_odd_dimension_cdf():
    first, rerun = ks_check(4, 3, 4000, SEED, reference_cdf(4, 3))
    assert ks_passed(first, rerun)
    assert first.critical == pytest.approx(1.628 / np.sqrt(4000))


def test_simulate_attaches_ks():
    walk = simulate(3, 5, [2], 3000, SEED, ks=KSReference.CLOSED)
    assert walk.ks is not None
    assert walk.ks.samples == 3000
    plain = simulate(3, 5, [2], 3000, SEED)
    assert plain.ks is None
    assert plain.moment_estimates["2"].mean == walk.moment_estimates["2"].mean
