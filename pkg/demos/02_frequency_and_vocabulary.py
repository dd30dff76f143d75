"""Build the word-by-year frequency matrix and slice its vocabulary.

Run:  python demos/02_frequency_and_vocabulary.py
"""

import tempfile
from pathlib import Path

from vocabtrend import (
    LemmaMap,
    ScreenList,
    apply_screening,
    build_frequency_matrix,
    default_rules,
    diff_vocabularies,
    load_corpus,
    rank_split,
)
from vocabtrend.synthetic import generate_corpus

with tempfile.TemporaryDirectory() as tmp:
    corpus_dir = Path(tmp) / "corpus"
    info = generate_corpus(corpus_dir, n_years=10, seed=7)

    # 1. Load the yearly files and count lemmas per year.
    docs = load_corpus(corpus_dir, default_rules())
    matrix = build_frequency_matrix(docs, LemmaMap.identity())
    print(f"matrix: {len(matrix.words)} words x {len(matrix.years)} years")
    print("years:", matrix.years)
    row = matrix.words.index("persista")
    print("counts for 'persista':", matrix.counts[row].tolist())

    # 2. Screening keeps an expert-approved subset.
    screen = ScreenList(frozenset(info.persistent + info.noise))
    screened = apply_screening(matrix, screen)
    print(f"\nafter screening: {len(screened.words)} words")

    # 3. Rank split: the most frequent k words become the model vocabulary.
    high, low = rank_split(screened, 15)
    print("high-rank group:", high.words[:8], "...")
    print(f"low group size: {len(low.words)}")

    # 4. Vocabulary diff against a related exam series that shares only
    #    the persistent words.
    from vocabtrend.corpus import YearDocument

    other_docs = [
        YearDocument(2019, info.persistent[:6] + ["bespoke", "phrasing"]),
        YearDocument(2020, info.persistent[:4] + ["bespoke", "wording"]),
    ]
    other = build_frequency_matrix(other_docs, LemmaMap.identity())
    only_a, only_b, both = diff_vocabularies(matrix, other)
    print(f"\nvocabulary diff: only here {len(only_a)}, only there {len(only_b)}, shared {len(both)}")
    print("words unique to the other series:", sorted(only_b))
