import pytest

from fairselect.model import Candidate, Dataset


@pytest.fixture
def t1() -> Dataset:
    """Three candidates whose dual lines all cross at x = 0.5."""
    return Dataset(
        [
            Candidate(0, (1.0, 0.0), "G1"),
            Candidate(1, (0.0, 1.0), "G2"),
            Candidate(2, (0.5, 0.5), "G2"),
        ],
        protected="G1",
    )


def make_dataset(rows, protected="G1", grid_decimals=6):
    cands = [Candidate(i, tuple(float(x) for x in scores), grp) for i, (scores, grp) in enumerate(rows)]
    return Dataset(cands, protected=protected, grid_decimals=grid_decimals)
