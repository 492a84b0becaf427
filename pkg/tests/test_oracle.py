import numpy as np
import pytest

from strongmax.utils.enums import Variant
from strongmax.utils.exceptions import (
    GridMismatchError,
    GridTooLargeError,
    InvalidInputError,
    PreconditionError,
)
from strongmax.utils.log_polynomial import lemma21_volume
from strongmax.utils.maximal import bilinear_maximal_grid, strong_maximal_grid
from strongmax.utils.oracle import (
    brute_force_bilinear,
    brute_force_maximal,
    equivalence_suite,
    mc_volume,
)
from tests.conftest import make_grid


LEMMA_CASES = [(2, 1.5, 0.5, 100.0), (2, 1.0, 1.0, 500.0), (3, 1.0, 1.0, 1000.0)]


@pytest.mark.parametrize(
    "n,R,r,c,samples",
    [
        (2, 1.5, 0.5, 100.0, 200_000),
        (2, 1.0, 1.0, 500.0, 200_000),
        (3, 1.0, 1.0, 1000.0, 1_000_000),
    ],
)
def test_mc_volume_agrees_with_closed_form(n, R, r, c, samples):
    estimate = mc_volume(n, R, r, c, samples=samples, seed=7)
    assert estimate.samples == samples
    assert estimate.stderr > 0
    assert estimate.within(lemma21_volume(n, R, r, c), sigmas=3.0)


@pytest.mark.slow
@pytest.mark.parametrize("n,R,r,c", LEMMA_CASES)
@pytest.mark.parametrize("seed", [3, 7])
def test_mc_volume_many_samples(n, R, r, c, seed):
    estimate = mc_volume(n, R, r, c, samples=10_000_000, seed=seed)
    assert estimate.within(lemma21_volume(n, R, r, c), sigmas=3.0)


def test_mc_volume_is_seeded():
    first = mc_volume(2, 1.0, 1.0, 50.0, samples=100_000, seed=11)
    second = mc_volume(2, 1.0, 1.0, 50.0, samples=100_000, seed=11)
    other = mc_volume(2, 1.0, 1.0, 50.0, samples=100_000, seed=12)
    assert first == second
    assert first.estimate != other.estimate


def test_mc_volume_thread_independent(monkeypatch):
    monkeypatch.setenv("STRONGMAX_THREADS", "1")
    serial = mc_volume(2, 1.0, 1.0, 50.0, samples=600_000, seed=5)
    monkeypatch.setenv("STRONGMAX_THREADS", "4")
    threaded = mc_volume(2, 1.0, 1.0, 50.0, samples=600_000, seed=5)
    assert serial == threaded


@pytest.mark.parametrize(
    "args,error",
    [
        ((0, 1.0, 1.0, 10.0), InvalidInputError),
        ((2, 0.0, 1.0, 10.0), InvalidInputError),
        ((2, 1.0, 1.0, 4.0), PreconditionError),
    ],
)
def test_mc_volume_invalid(args, error):
    with pytest.raises(error):
        mc_volume(*args)


def test_mc_volume_needs_enough_samples():
    with pytest.raises(InvalidInputError):
        mc_volume(2, 1.0, 1.0, 50.0, samples=100)


def test_brute_force_examples():
    f = make_grid([0.0, 0.0, 1.0])
    np.testing.assert_allclose(
        brute_force_maximal(f).values, [1 / 3, 1 / 2, 1.0], rtol=1e-12
    )
    np.testing.assert_allclose(
        brute_force_maximal(f, Variant.CENTERED).values, [0.2, 1 / 3, 1.0], rtol=1e-12
    )


@pytest.mark.parametrize("variant", [Variant.UNCENTERED, Variant.CENTERED])
def test_brute_force_matches_fast(rng, variant):
    f = make_grid(rng.random((5, 7)))
    np.testing.assert_allclose(
        brute_force_maximal(f, variant).values,
        strong_maximal_grid(f, variant).values,
        rtol=1e-12,
    )


def test_brute_force_bilinear_matches_fast(rng):
    f = make_grid(rng.random((4, 3, 3)))
    g = make_grid(rng.random((4, 3, 3)))
    np.testing.assert_allclose(
        brute_force_bilinear(f, g).values,
        bilinear_maximal_grid(f, g).values,
        rtol=1e-12,
    )


def test_brute_force_limits():
    with pytest.raises(GridTooLargeError):
        brute_force_maximal(make_grid(np.ones((101, 100))))
    with pytest.raises(GridMismatchError):
        brute_force_bilinear(make_grid(np.ones(3)), make_grid(np.ones(4)))


def test_equivalence_suite():
    assert equivalence_suite(5, seed=1) == (15, 0)


@pytest.mark.slow
def test_equivalence_suite_full():
    passed, failed = equivalence_suite(100, seed=0)
    assert failed == 0
    assert passed == 300


def test_equivalence_suite_needs_trials():
    with pytest.raises(InvalidInputError):
        equivalence_suite(0)
