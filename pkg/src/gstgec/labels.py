"""The corrective edit-label grammar.

Labels are extracted from sentence pairs by a minimal token-level
alignment and applied back in a single left-to-right pass.  The basic
operations KEEP / DELETE / APPEND / REPLACE are universal; substitutions
are compressed into reusable rule-backed labels (case change, merge,
split, noun-number toggle, verb-form change) whenever the rule
reproduces the aligned target token exactly.

A run of several insertions at one anchor keeps only its first insertion
as an APPEND per pass; the rest are recovered by re-extracting against
the fixed target and applying again, mirroring the iterative inference
loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import morph
from .corpus import SENTINEL, SentencePair, TokenSeq


class Kind(str, Enum):
    KEP = "KEP"
    DEL = "DEL"
    APP = "APP"
    REP = "REP"
    CAS = "CAS"
    MRG = "MRG"
    SPL = "SPL"
    NNUM = "NNUM"
    VFORM = "VFORM"


_PARAM_KINDS = {Kind.APP, Kind.REP, Kind.CAS, Kind.VFORM}

# Labels that never change sequence length when applied.
LENGTH_PRESERVING_KINDS = {Kind.KEP, Kind.REP, Kind.CAS, Kind.NNUM, Kind.VFORM}


@dataclass(frozen=True)
class TransformLabel:
    kind: Kind
    param: str | None = None

    def __post_init__(self):
        if self.kind in _PARAM_KINDS:
            if not self.param or any(c.isspace() for c in self.param):
                raise ValueError(f"{self.kind.value} needs a non-empty, "
                                 "whitespace-free parameter")
        elif self.param is not None:
            raise ValueError(f"{self.kind.value} takes no parameter")
        if self.kind is Kind.CAS and self.param not in morph.CASE_RULES:
            raise ValueError(f"unknown case rule {self.param!r}")
        if self.kind is Kind.VFORM and self.param not in morph.VERB_TAGS:
            raise ValueError(f"unknown verb-form tag {self.param!r}")

    def __str__(self):
        return format_label(self)


KEEP = TransformLabel(Kind.KEP)

LabelSequence = list[TransformLabel]

UNK_LABEL_STRING = "$UNK"


def format_label(label: TransformLabel) -> str:
    if label.param is None:
        return f"${label.kind.value}"
    return f"${label.kind.value}_{label.param}"


def parse_label(text: str) -> TransformLabel:
    """Inverse of format_label; raises ValueError on unknown labels."""
    if not text.startswith("$"):
        raise ValueError(f"label must start with '$': {text!r}")
    body = text[1:]
    for kind in Kind:
        if kind in _PARAM_KINDS:
            prefix = kind.value + "_"
            if body.startswith(prefix):
                return TransformLabel(kind, body[len(prefix):])
        elif body == kind.value:
            return TransformLabel(kind)
    raise ValueError(f"unknown label {text!r}")


class LabelVocab:
    """Label-string <-> dense id map; id 0 is always $KEP."""

    def __init__(self, labels: list[str]):
        if not labels or labels[0] != "$KEP":
            raise ValueError("label vocab must start with $KEP")
        if UNK_LABEL_STRING not in labels:
            raise ValueError("label vocab must contain the unknown label")
        self.labels = list(labels)
        self._ids = {s: i for i, s in enumerate(self.labels)}
        if len(self._ids) != len(self.labels):
            raise ValueError("duplicate labels in vocab")

    def __len__(self):
        return len(self.labels)

    @classmethod
    def build(cls, label_sequences) -> "LabelVocab":
        seen = set()
        for seq in label_sequences:
            for label in seq:
                seen.add(format_label(label))
        seen.discard("$KEP")
        seen.discard(UNK_LABEL_STRING)
        return cls(["$KEP", UNK_LABEL_STRING] + sorted(seen))

    def label_to_id(self, label: TransformLabel) -> int:
        return self._ids.get(format_label(label), self._ids[UNK_LABEL_STRING])

    def id_to_label(self, idx: int) -> TransformLabel | None:
        """None for the unknown label (treated as a no-op by callers)."""
        text = self.labels[idx]
        if text == UNK_LABEL_STRING:
            return None
        return parse_label(text)

    def encode(self, labels: LabelSequence):
        return [self.label_to_id(lab) for lab in labels]

    def kind_of_id(self, idx: int) -> Kind | None:
        label = self.id_to_label(idx)
        return None if label is None else label.kind


# ---------------------------------------------------------------------------
# Alignment
# ---------------------------------------------------------------------------

# op tuples: ("match", i, j) | ("sub", i, j) | ("del", i, None)
#          | ("ins", anchor_i, j)


def align_ops(src: TokenSeq, tgt: TokenSeq) -> list[tuple]:
    """Minimal-cost token alignment as a left-to-right op list.

    Unit cost for insert/delete/substitute, zero for match.  Ties at
    equal dynamic-programming cost are broken left to right preferring
    match > substitution > deletion > insertion.
    """
    n, m = len(src), len(tgt)
    # D[i][j] = minimal cost to align src[i:] with tgt[j:]
    D = [[0] * (m + 1) for _ in range(n + 1)]
    for j in range(m + 1):
        D[n][j] = m - j
    for i in range(n - 1, -1, -1):
        D[i][m] = n - i
        row, nxt = D[i], D[i + 1]
        si = src[i]
        for j in range(m - 1, -1, -1):
            best = nxt[j + 1] + (0 if si == tgt[j] else 1)
            if nxt[j] + 1 < best:
                best = nxt[j] + 1
            if row[j + 1] + 1 < best:
                best = row[j + 1] + 1
            row[j] = best
    ops = []
    i = j = 0
    while i < n or j < m:
        if (i < n and j < m and src[i] == tgt[j]
                and D[i][j] == D[i + 1][j + 1]):
            ops.append(("match", i, j))
            i += 1
            j += 1
        elif i < n and j < m and D[i][j] == 1 + D[i + 1][j + 1]:
            ops.append(("sub", i, j))
            i += 1
            j += 1
        elif i < n and D[i][j] == 1 + D[i + 1][j]:
            ops.append(("del", i, None))
            i += 1
        else:
            ops.append(("ins", i - 1, j))
            j += 1
    return ops


def edit_distance(src: TokenSeq, tgt: TokenSeq) -> int:
    return sum(1 for op in align_ops(src, tgt) if op[0] != "match")


def _classify_sub(src, tgt, ops, idx):
    """Turn a substitution op into a g-transformation when a rule fires.

    Returns (label, label_for_next_source_pos_or_None, ops consumed).
    """
    _, i, j = ops[idx]
    s, t = src[i], tgt[j]
    rule = morph.detect_case(s, t)
    if rule is not None:
        return TransformLabel(Kind.CAS, rule), None, 1
    # merge: sub(i) followed by deletion of i+1 whose join equals the target
    if (idx + 1 < len(ops) and ops[idx + 1][0] == "del"
            and ops[idx + 1][1] == i + 1 and s + src[i + 1] == t):
        return TransformLabel(Kind.MRG), TransformLabel(Kind.DEL), 2
    # split: sub to the first dash part, then insertions of the rest
    if "-" in s:
        parts = s.split("-")
        if len(parts) >= 2 and all(parts) and parts[0] == t:
            k = len(parts) - 1
            tail = ops[idx + 1: idx + 1 + k]
            if (len(tail) == k
                    and all(op[0] == "ins" and op[1] == i for op in tail)
                    and [tgt[op[2]] for op in tail] == parts[1:]):
                return TransformLabel(Kind.SPL), None, 1 + k
    if morph.toggle_number(s) == t:
        return TransformLabel(Kind.NNUM), None, 1
    tag = morph.detect_verb_form(s, t)
    if tag is not None:
        return TransformLabel(Kind.VFORM, tag), None, 1
    return TransformLabel(Kind.REP, t), None, 1


def extract_labels(pair: SentencePair) -> LabelSequence:
    """One corrective label per source position (sentinel included)."""
    src, tgt = pair.source, pair.target
    ops = align_ops(src, tgt)
    labels: list[TransformLabel | None] = [None] * len(src)
    idx = 0
    while idx < len(ops):
        op, i, j = ops[idx]
        if op == "match":
            labels[i] = KEEP
            idx += 1
        elif op == "del":
            labels[i] = TransformLabel(Kind.DEL)
            idx += 1
        elif op == "sub":
            label, next_label, consumed = _classify_sub(src, tgt, ops, idx)
            labels[i] = label
            if next_label is not None:
                labels[i + 1] = next_label
            idx += consumed
        else:  # ins
            # attach to a KEP anchor; later insertions in a run (and
            # insertions at already-edited anchors) wait for the next pass
            if i >= 0 and labels[i] is KEEP:
                labels[i] = TransformLabel(Kind.APP, tgt[j])
            idx += 1
    assert all(lab is not None for lab in labels)
    return labels  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Application
# ---------------------------------------------------------------------------


def apply_labels_with_warnings(
        src: TokenSeq, labels: LabelSequence) -> tuple[TokenSeq, list[str]]:
    """Apply labels in one left-to-right pass; inapplicable rules no-op."""
    if len(src) != len(labels):
        raise ValueError("label sequence length must match token count")
    out: list[str] = []
    warnings: list[str] = []
    i = 0
    n = len(src)
    while i < n:
        tok = src[i]
        label = labels[i]
        if i == 0 and label.kind not in (Kind.KEP, Kind.APP):
            warnings.append(f"pos 0: {label} not allowed on sentinel")
            label = KEEP
        kind = label.kind
        if kind is Kind.KEP:
            out.append(tok)
        elif kind is Kind.DEL:
            pass
        elif kind is Kind.APP:
            out.append(tok)
            out.append(label.param)
        elif kind is Kind.REP:
            out.append(label.param)
        elif kind is Kind.CAS:
            out.append(morph.apply_case(tok, label.param))
        elif kind is Kind.MRG:
            if i + 1 >= n:
                warnings.append(f"pos {i}: MRG at final position")
                out.append(tok)
            else:
                out.append(tok + src[i + 1])
                i += 1  # the merged-in token's own label is ignored
        elif kind is Kind.SPL:
            parts = tok.split("-")
            if "-" in tok and len(parts) >= 2 and all(parts):
                out.extend(parts)
            else:
                warnings.append(f"pos {i}: SPL on unsplittable {tok!r}")
                out.append(tok)
        elif kind is Kind.NNUM:
            toggled = morph.toggle_number(tok)
            if toggled is None:
                warnings.append(f"pos {i}: no number rule for {tok!r}")
                out.append(tok)
            else:
                out.append(toggled)
        elif kind is Kind.VFORM:
            mapped = morph.apply_verb_form(tok, label.param)
            if mapped is None:
                warnings.append(f"pos {i}: no verb rule for {tok!r}")
                out.append(tok)
            else:
                out.append(mapped)
        i += 1
    return tuple(out), warnings


def apply_labels(src: TokenSeq, labels: LabelSequence) -> TokenSeq:
    return apply_labels_with_warnings(src, labels)[0]


def correct_iteratively(src: TokenSeq, tgt: TokenSeq,
                        max_rounds: int | None = None) -> tuple[TokenSeq, int]:
    """Repeat extract/apply against a fixed target until it is reached.

    Returns (final sentence, rounds used).  The round bound defaults to
    max(5, edit distance), which suffices because every pass realizes
    all edits except deferred insertions, of which there are at most one
    fewer each round.
    """
    if max_rounds is None:
        max_rounds = max(5, edit_distance(src, tgt))
    cur = src
    for rounds in range(max_rounds + 1):
        if cur == tgt:
            return cur, rounds
        cur = apply_labels(cur, extract_labels(SentencePair(cur, tgt)))
    return cur, max_rounds + 1


# ---------------------------------------------------------------------------
# Derived quantities
# ---------------------------------------------------------------------------


def binarize(labels: LabelSequence) -> list[int]:
    """Per-position error bit: 1 iff the label is not KEEP."""
    return [0 if lab.kind is Kind.KEP else 1 for lab in labels]


def measure_error_rate(labels: LabelSequence) -> float:
    """Fraction of non-KEEP labels.

    The sentinel is excluded from the denominator when its label is
    KEEP, so a clean sentence scores exactly 0 and an APPEND on the
    sentinel counts like any other edit.
    """
    non_kep = sum(1 for lab in labels if lab.kind is not Kind.KEP)
    denom = len(labels) if labels and labels[0].kind is not Kind.KEP \
        else len(labels) - 1
    if denom <= 0:
        return 0.0
    return non_kep / denom
