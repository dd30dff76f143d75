"""Train the window ensemble on a synthetic corpus and rank the words.

Run:  python demos/05_train_and_score.py    (about half a minute)
"""

import tempfile
from pathlib import Path

from vocabtrend import (
    Hyperparams,
    LemmaMap,
    ai_score,
    build_frequency_matrix,
    default_rules,
    load_corpus,
    train_ensemble,
)
from vocabtrend.forecast import EnsembleSpec
from vocabtrend.synthetic import generate_corpus

with tempfile.TemporaryDirectory() as tmp:
    corpus_dir = Path(tmp) / "corpus"
    info = generate_corpus(corpus_dir, n_years=12, seed=20231117)
    docs = load_corpus(corpus_dir, default_rules())
    matrix = build_frequency_matrix(docs, LemmaMap.identity())

    # Three window sizes: short windows chase recent behaviour, long ones
    # remember the early years, so their weights taper off.
    spec = EnsembleSpec(((3, 0.5), (5, 0.4), (7, 0.3)))
    hyper = Hyperparams(epochs=80, seed=11)
    print(f"training {len(spec.entries)} models on {len(matrix.words)} words ...")
    results = train_ensemble(matrix, spec, hyper)
    for n in spec.sizes:
        losses = results[n].epoch_losses
        print(f"  window {n}: loss {losses[0]:.3f} -> {losses[-1]:.3f}")

    table = ai_score(matrix.words, {n: results[n].prediction for n in spec.sizes}, spec)
    ranked = sorted(zip(table.score, table.words), reverse=True)

    print("\ntop 10 by score:")
    for score, word in ranked[:10]:
        print(f"  {word:>10}  {score:6.1f}")
    print("\nbottom 5:")
    for score, word in ranked[-5:]:
        print(f"  {word:>10}  {score:6.1f}")

    top10 = {w for _, w in ranked[:10]}
    print(f"\npersistent words in the top 10: {len(top10 & set(info.persistent))} of 10")
