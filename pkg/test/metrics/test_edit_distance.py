import editdistance
import numpy as np
import pytest

from sascsim.metrics.edit_distance import EditCounts, edit_distance


@pytest.mark.parametrize(
    "reference,hypothesis,expected",
    [
        ("abc", "abc", EditCounts(0, 0, 0)),
        ("abc", "axc", EditCounts(1, 0, 0)),
        ("", "a", EditCounts(0, 1, 0)),
        ("a", "", EditCounts(0, 0, 1)),
        (["okay", "great"], ["great", "okay"], EditCounts(2, 0, 0)),
    ],
)
def test_examples(reference, hypothesis, expected):
    assert edit_distance(list(reference), list(hypothesis)) == expected


def test_total_is_symmetric_and_matches_library():
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = rng.choice(list("abcd"), size=rng.integers(0, 8)).tolist()
        b = rng.choice(list("abcd"), size=rng.integers(0, 8)).tolist()
        total = edit_distance(a, b).total
        assert total == edit_distance(b, a).total
        assert total == editdistance.eval(a, b)


def test_counts_add():
    assert EditCounts(1, 2, 3) + EditCounts(1, 0, 0) == EditCounts(2, 2, 3)
