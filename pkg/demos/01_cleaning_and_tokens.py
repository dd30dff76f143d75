"""Walk through the text cleaning stage on a deliberately messy snippet.

Run:  python demos/01_cleaning_and_tokens.py
"""

from vocabtrend import clean_text, default_rules, extract_sentences, tokenize
from vocabtrend.corpus import RemovalRuleSet

raw = (
    "21. Choose (A), the best word for the blank _____.\n"
    "The committee meets at 3 p.\nm. tomorrow!   대학 시험 ends at 5.\n"
    "Don't forget rule #2."
)

print("raw input:")
print(repr(raw))

# 1. With no rules at all, the character filter still strips digits,
#    punctuation and non-ASCII text, and lowercases what survives.
bare = clean_text(raw, RemovalRuleSet())
print("\ncleaned without rules:")
print(repr(bare))

# 2. The bundled rule file removes cross-line artifacts like "p.\nm."
#    before any normalization, so they cannot split sentences.
rules = default_rules()
cleaned = clean_text(raw, rules)
print("\ncleaned with bundled rules:")
print(repr(cleaned))

# 3. Tokens are maximal letter runs; sentences split on . ! ?
print("\ntokens:", tokenize(cleaned))
print("\nsentences:")
for sentence in extract_sentences(cleaned):
    print("  ", sentence)

# 4. Cleaning is idempotent: a second pass changes nothing.
assert clean_text(cleaned, rules) == cleaned
print("\nsecond cleaning pass is a no-op, as required")
