import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.bench.agreement import partition_labels, rand_index
from app.errors import InvalidInputError

from tests.settings import STANDARD_SETTINGS


def test_identical_partitions():
    a = partition_labels([[1, 2], [3]], outliers=[4])
    assert rand_index(a, dict(a)) == 1.0


def test_relabeling_does_not_matter():
    a = partition_labels([[1, 2], [3, 4]])
    b = partition_labels([[3, 4], [1, 2]])
    assert rand_index(a, b) == 1.0


def test_one_agreeing_pair_of_three():
    a = partition_labels([[1, 2], [3]])
    b = partition_labels([[1], [2, 3]])
    assert rand_index(a, b) == pytest.approx(1 / 3)


def test_every_pair_disagrees():
    a = partition_labels([[1], [2], [3]])
    b = partition_labels([[1, 2, 3]])
    assert rand_index(a, b) == 0.0


def test_outliers_are_singletons():
    # two outliers never share a group
    a = partition_labels([], outliers=[1, 2])
    b = partition_labels([[1, 2]])
    assert rand_index(a, b) == 0.0
    assert rand_index(a, partition_labels([[1], [2]])) == 1.0


def test_ignore_noise_drops_outlier_ids():
    a = partition_labels([[1, 2], [3]], outliers=[4])
    b = partition_labels([[1, 2], [3, 4]])
    assert rand_index(a, b) < 1.0
    assert rand_index(a, b, ignore_noise=True) == 1.0


def test_id_set_mismatch_is_rejected():
    with pytest.raises(InvalidInputError, match="different ids"):
        rand_index(partition_labels([[1, 2]]), partition_labels([[1, 3]]))


def test_tiny_partitions():
    assert rand_index({}, {}) == 1.0
    assert rand_index({1: None}, {1: 4}) == 1.0


groupings = st.lists(st.integers(min_value=0, max_value=4), min_size=2, max_size=30)


@given(groupings, groupings)
@STANDARD_SETTINGS
def test_rand_index_is_symmetric_and_bounded(xs, ys):
    n = min(len(xs), len(ys))
    # label 0 stands for an outlier
    a = {i: (xs[i] or None) for i in range(n)}
    b = {i: (ys[i] or None) for i in range(n)}
    forward, backward = rand_index(a, b), rand_index(b, a)
    assert forward == pytest.approx(backward)
    assert 0.0 <= forward <= 1.0
    assert rand_index(a, a) == 1.0
