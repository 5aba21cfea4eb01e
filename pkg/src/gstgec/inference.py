"""Iterative correction with a keep bias and a sentence-level gate.

Each round the model predicts one label per position; a fixed confidence
is added to the keep label before the argmax, and another round runs
only while the summed per-token error probability stays above the
sentence threshold.  Iteration is bounded and also stops at the first
round that changes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import TokenSeq
from .labels import KEEP, Kind, LabelSequence, TransformLabel, \
    apply_labels, format_label
from .model import GecModel, TokenDistributions


@dataclass(frozen=True)
class InferenceConfig:
    gamma: float = 0.5
    beta: float = 0.0
    max_iters: int = 5
    # divide the sentence score by its token count before the gamma gate
    normalize_score: bool = False

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class CorrectionRound:
    tokens: TokenSeq
    labels: LabelSequence
    score: float
    applied: bool


@dataclass
class CorrectionTrace:
    rounds: list[CorrectionRound] = field(default_factory=list)
    final: TokenSeq = ()

    def report(self) -> str:
        """Line-oriented text report for CLI --trace output."""
        lines = []
        for i, rnd in enumerate(self.rounds, start=1):
            labels = " ".join(format_label(lab) for lab in rnd.labels)
            lines.append(f"round {i} score={rnd.score:.4f} "
                         f"applied={'yes' if rnd.applied else 'no'} "
                         f"labels={labels} sentence={' '.join(rnd.tokens)}")
        lines.append(f"final {' '.join(self.final)}")
        return "\n".join(lines)


def sentence_error_score(dists: TokenDistributions) -> float:
    """Sum of error-class probability over non-sentinel positions."""
    return float(dists.ged[1:, 1].sum())


def biased_argmax(gel_row: np.ndarray, beta: float,
                  label_vocab) -> TransformLabel:
    """Argmax after adding beta to the keep entry (no renormalization;
    only the argmax is consumed, so the unnormalized sum is harmless)."""
    row = np.asarray(gel_row, dtype=np.float64).copy()
    row[0] += beta
    label = label_vocab.id_to_label(int(np.argmax(row)))
    return KEEP if label is None else label


def predict_labels(model: GecModel, dists: TokenDistributions,
                   beta: float) -> LabelSequence:
    labels = [biased_argmax(row, beta, model.label_vocab)
              for row in dists.gel]
    # the sentinel admits only keep or append
    if labels and labels[0].kind not in (Kind.KEP, Kind.APP):
        labels[0] = KEEP
    return labels


def correct(model: GecModel, sentence: TokenSeq,
            config: InferenceConfig) -> CorrectionTrace:
    """Iteratively correct one tokenized sentence."""
    trace = CorrectionTrace()
    cur = sentence
    for _ in range(config.max_iters):
        dists = model.forward_tokens(cur)
        score = sentence_error_score(dists)
        gate = score / max(1, len(cur) - 1) if config.normalize_score \
            else score
        labels = predict_labels(model, dists, config.beta)
        any_edit = any(lab.kind is not Kind.KEP for lab in labels)
        if gate <= config.gamma or not any_edit:
            trace.rounds.append(CorrectionRound(cur, labels, score, False))
            break
        new = apply_labels(cur, labels)
        trace.rounds.append(CorrectionRound(cur, labels, score, True))
        if new == cur:  # every predicted edit was an inapplicable no-op
            break
        cur = new
    trace.final = cur
    return trace


def correct_sentence(model: GecModel, sentence: TokenSeq,
                     config: InferenceConfig) -> TokenSeq:
    return correct(model, sentence, config).final
