import numpy as np
import pytest

from vocabtrend.lexicon import FrequencyMatrix
from vocabtrend.neuralnet import Hyperparams


def make_matrix(per_word: dict[str, list[int]], years=None) -> FrequencyMatrix:
    """FrequencyMatrix from a {word: [counts per year]} mapping."""
    items = sorted(per_word.items())
    names = [w for w, _ in items]
    data = np.array([row for _, row in items], dtype=np.int64)
    if years is None:
        years = list(range(2000, 2000 + data.shape[1]))
    m = FrequencyMatrix(names, list(years), data)
    m.validate()
    return m


@pytest.fixture
def tiny_hyper() -> Hyperparams:
    return Hyperparams(
        hidden_size=2, dense1=3, dense2=2, dropout=0.0, epochs=2, batch_size=4, seed=7
    )
