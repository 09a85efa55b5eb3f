import numpy as np
import pytest

from treedens import (
    BadParam,
    OutOfRange,
    SampleCounts,
    derive_seed,
    empirical_sup_deviation,
    family,
    interval_count,
    make_density,
    sample,
    subsets_to_masks,
)


def test_zero_draws_allowed():
    sc = sample(family("uniform", 4), 0, 123)
    assert sc.n == 0
    assert np.array_equal(sc.counts, np.zeros(4, dtype=np.int64))
    assert np.array_equal(sc.frequencies(), np.zeros(4))


def test_negative_draws_rejected():
    with pytest.raises(BadParam):
        sample(family("uniform", 4), -1, 0)


def test_point_mass_all_in_one_atom():
    f = make_density([1.0, 0.0, 0.0])
    sc = sample(f, 100, 5)
    assert list(sc.counts) == [100, 0, 0]


def test_uniform_k2_law_of_large_numbers():
    sc = sample(family("uniform", 2), 10**6, 42)
    # binomial sd is 0.0005 here; 0.002 is a 4-sigma corridor
    assert abs(sc.counts[0] / 10**6 - 0.5) < 0.002


def test_counts_sum_and_determinism():
    f = family("harmonic-zipf", 64)
    a = sample(f, 1000, 7)
    b = sample(f, 1000, 7)
    c = sample(f, 1000, 8)
    assert a.counts.sum() == 1000
    assert np.array_equal(a.counts, b.counts)
    assert not np.array_equal(a.counts, c.counts)


def test_derive_seed_spreads():
    seeds = {derive_seed(0, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(0, 3) == derive_seed(0, 3)
    assert derive_seed(0, 3) != derive_seed(1, 3)


def test_sample_counts_validation():
    with pytest.raises(BadParam):
        SampleCounts(k=2, n=3, counts=np.array([1, 1]))  # sum mismatch
    with pytest.raises(BadParam):
        SampleCounts(k=2, n=1, counts=np.array([2, -1]))


def test_interval_count_examples():
    sc = SampleCounts(k=3, n=12, counts=np.array([3, 4, 5]))
    assert interval_count(sc, 1, 3) == 12
    assert interval_count(sc, 2, 1) == 4
    assert interval_count(sc, 2, 2) == 9
    with pytest.raises(OutOfRange):
        interval_count(sc, 3, 2)
    with pytest.raises(OutOfRange):
        interval_count(sc, 0, 1)


def test_sup_deviation_zero_for_exact_counts():
    f = family("uniform", 4)
    sc = SampleCounts(k=4, n=8, counts=np.array([2, 2, 2, 2]))
    sets = [{1}, {2, 3}, {1, 2, 3, 4}]
    assert empirical_sup_deviation(sc, f, sets) == 0.0


def test_sup_deviation_empty_cases():
    f = family("uniform", 2)
    sc = SampleCounts(k=2, n=10, counts=np.array([7, 3]))
    assert empirical_sup_deviation(sc, f, [set()]) == 0.0
    assert empirical_sup_deviation(sc, f, []) == 0.0


def test_sup_deviation_single_atom():
    f = family("uniform", 2)
    sc = SampleCounts(k=2, n=10, counts=np.array([7, 3]))
    assert empirical_sup_deviation(sc, f, [{1}]) == pytest.approx(0.2, abs=1e-15)


def test_subsets_to_masks_accepts_masks_and_indices():
    a = subsets_to_masks([{1, 3}], 3)
    b = subsets_to_masks([[True, False, True]], 3)
    assert np.array_equal(a, b)
    with pytest.raises(OutOfRange):
        subsets_to_masks([{0}], 3)
    with pytest.raises(OutOfRange):
        subsets_to_masks([{4}], 3)


def test_counts_csv():
    sc = SampleCounts(k=2, n=3, counts=np.array([2, 1]))
    assert sc.to_csv() == "index,count\n1,2\n2,1\n"
