"""Word co-occurrence in sentences and the correlation matrix behind it.

Run:  python demos/03_sentence_correlation.py
"""

import numpy as np

from vocabtrend import LemmaMap, correlation_matrix, occurrence_matrix

# A toy corpus: "storm" and "rain" travel together, "sun" avoids them.
sentences = [
    ["storm", "rain", "wind"],
    ["rain", "storm"],
    ["sun", "beach"],
    ["sun", "sky", "beach"],
    ["storm", "rain"],
    ["wind", "sky"],
    ["sun", "beach", "sky"],
    ["rain", "wind", "storm"],
]
vocab = sorted({t for s in sentences for t in s})

occ = occurrence_matrix(sentences, vocab, LemmaMap.identity())
print("occurrence matrix (words x sentences):")
for word, row in zip(occ.words, occ.cells):
    print(f"  {word:>6}", row.tolist())

corr = correlation_matrix(occ)
print("\ncorrelation matrix:")
header = "        " + "".join(f"{w:>8}" for w in corr.words)
print(header)
for word, row in zip(corr.words, corr.values):
    print(f"{word:>8}" + "".join(f"{v:8.3f}" for v in row))

# The strongest off-diagonal pairs tell the story.
pairs = [
    (corr.values[i, j], corr.words[i], corr.words[j])
    for i in range(len(vocab))
    for j in range(i + 1, len(vocab))
]
pairs.sort(reverse=True)
print("\nmost correlated pairs:")
for value, a, b in pairs[:3]:
    print(f"  {a} / {b}: {value:+.3f}")

assert np.array_equal(corr.values, corr.values.T), "matrix must be symmetric"
