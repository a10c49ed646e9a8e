import numpy as np
import pytest

from intpriors.types import Dataset, DomainError, GroupSummary, TrainingSample


def test_dataset_requires_content():
    with pytest.raises(DomainError):
        Dataset()
    with pytest.raises(DomainError):
        Dataset.from_observations([])


def test_dataset_stats():
    x = Dataset.from_observations([1.0, 2.0, 3.0, 6.0])
    assert x.n == 4
    assert x.total == 12.0
    assert x.mean == 3.0
    assert x.ssd == pytest.approx(14.0)
    assert x.sum_sq == pytest.approx(50.0)


def test_group_summary_stats():
    gs = GroupSummary([10, 10, 10], [0.0, 0.0, 1.5], [1.0, 1.0, 1.0])
    assert gs.n_total == 30
    assert gs.within_ss == pytest.approx(27.0)
    assert gs.grand_mean == pytest.approx(0.5)
    # 27 + 10*(0.25 + 0.25 + 1.0)
    assert gs.total_ss == pytest.approx(42.0)


def test_grouped_dataset_consistency_check():
    values = np.array([1.0, 2.0, 3.0, 5.0])
    groups = np.array([0, 0, 1, 1])
    good = GroupSummary([2, 2], [1.5, 4.0], [np.sqrt(0.5), np.sqrt(2.0)])
    Dataset(observations=values, groups=groups, group_summary=good)
    bad = GroupSummary([2, 2], [1.5, 4.1], [np.sqrt(0.5), np.sqrt(2.0)])
    with pytest.raises(DomainError):
        Dataset(observations=values, groups=groups, group_summary=bad)


def test_group_summary_derived_from_raw():
    values = np.array([1.0, 2.0, 3.0, 5.0, 4.0])
    groups = np.array([0, 0, 1, 1, 1])
    gs = Dataset.from_grouped(values, groups).group_summary
    assert gs.sizes.tolist() == [2, 3]
    assert gs.means == pytest.approx([1.5, 4.0])


def test_training_sample_group_alignment():
    with pytest.raises(DomainError):
        TrainingSample(np.array([1.0, 2.0]), groups=np.array([0]))
