"""Span-level scoring from first principles: which edits a hypothesis
proposes, which the reference demands, and how precision-weighted F0.5
summarizes the overlap.

Run:  python3 demos/04_evaluation.py
"""

from gstgec.corpus import tokenize
from gstgec.scoring import extract_edits, f_beta, score_corpus

source = tokenize("He go to to school yesterday")
reference = tokenize("He goes to school yesterday")
hypothesis = tokenize("He goes to to school today")

print("gold edits      ", sorted(extract_edits(source, reference)))
print("hypothesis edits", sorted(extract_edits(source, hypothesis)))

report = score_corpus([source], [hypothesis], [reference])
print(f"\n{report.text()}   (tp={report.tp} fp={report.fp} fn={report.fn})")

# F0.5 weighs precision twice as heavily as recall: a cautious system
# that fixes little but is usually right outscores an eager one.
print("\n   P      R     F0.5")
for p, r in [(90.0, 30.0), (60.0, 60.0), (30.0, 90.0)]:
    print(f"  {p:5.1f}  {r:5.1f}  {f_beta(p, r):5.1f}")
