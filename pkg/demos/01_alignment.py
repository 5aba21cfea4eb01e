"""Walk through label extraction: how a (source, target) pair becomes a
per-token tag sequence, and how applying those tags recovers the target.

Run:  python3 demos/01_alignment.py
"""

from gstgec.corpus import SentencePair, detokenize, tokenize
from gstgec.labels import apply_labels, correct_iteratively, \
    extract_labels, format_label

EXAMPLES = [
    # substitution resolved as a verb-form transform
    ("He go to school", "He goes to school"),
    # duplicated word: deletion, not substitution
    ("the the cat sat", "the cat sat"),
    # two tokens merge into one
    ("over all it worked", "overall it worked"),
    # one token splits at its dash
    ("a well-known fact", "a well known fact"),
    # casing handled by a dedicated rule, not replacement
    ("the film was great", "The film was great"),
    # an insertion hangs off the token to its left
    ("I went home", "I quickly went home"),
    # insertion at the front attaches to the sentinel position
    ("went home", "I went home"),
]

for src_text, tgt_text in EXAMPLES:
    pair = SentencePair(tokenize(src_text), tokenize(tgt_text))
    labels = extract_labels(pair)
    print(f"{src_text!r} -> {tgt_text!r}")
    for token, label in zip(pair.source, labels):
        print(f"  {token:12s} {format_label(label)}")
    rebuilt = apply_labels(pair.source, labels)
    assert rebuilt == pair.target
    print()

# Insertions of several tokens in a row cannot all be expressed in one
# pass (each append needs a kept anchor), so correction iterates.
pair = SentencePair(tokenize("sat"), tokenize("the big cat sat"))
final, rounds = correct_iteratively(pair.source, pair.target)
print(f"{detokenize(pair.source)!r} -> {detokenize(final)!r} "
      f"in {rounds} extract/apply rounds")
assert final == pair.target
