"""Staged training with per-stage self-synthesis of errorful data.

A run consists of N stages.  Each stage trains M epochs on the genuine
pairs plus whatever synthetic pairs the previous stage produced, then
rebuilds the synthetic set from scratch: for every genuine source whose
summed error probability clears the sentence gate, one corrective label
per position is sampled from the keep-biased labeling distribution and
applied, manufacturing a new errorful variant of that sentence.  Raising
the keep confidence lowers the error rate of the synthesized data;
raising the gate shrinks how much of the corpus is synthesized from.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import SentencePair, TokenSeq, TokenVocab
from .inference import InferenceConfig, correct_sentence, \
    sentence_error_score
from .labels import KEEP, Kind, LENGTH_PRESERVING_KINDS, LabelSequence, \
    LabelVocab, apply_labels, binarize, extract_labels, format_label, \
    measure_error_rate
from .model import AdamState, GecModel, adam_step, forward, loss_and_grads
from .sampling import SamplingConfig, SamplingMode, relax_with_noise, \
    sample_gumbel, sample_label
from .scoring import ScoreReport, score_corpus


@dataclass(frozen=True)
class TrainingConfig:
    stages: int = 1
    epochs_per_stage: int = 1
    gamma: float = 0.5
    beta: float = 0.0
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    synthesis_pairing: str = "realign"  # or "literal"
    lr: float = 1e-3
    batch_size: int = 16
    seed: int = 0
    ged_weight: float = 1.0
    # gamma/beta used during synthesis; None means share the values above
    synth_gamma: float | None = None
    synth_beta: float | None = None

    def __post_init__(self):
        if self.stages < 1 or self.epochs_per_stage < 1:
            raise ValueError("stages and epochs_per_stage must be >= 1")
        if self.synthesis_pairing not in ("realign", "literal"):
            raise ValueError("synthesis_pairing must be realign or literal")
        if self.gamma < 0 or self.beta < 0:
            raise ValueError("gamma and beta must be non-negative")

    @property
    def effective_synth_gamma(self) -> float:
        return self.gamma if self.synth_gamma is None else self.synth_gamma

    @property
    def effective_synth_beta(self) -> float:
        return self.beta if self.synth_beta is None else self.synth_beta


@dataclass
class TrainExample:
    source: TokenSeq
    target: TokenSeq
    labels: LabelSequence
    src_ids: np.ndarray
    label_ids: np.ndarray
    det_bits: np.ndarray


@dataclass
class SyntheticExample:
    source: TokenSeq
    labels: LabelSequence
    origin_index: int
    stage: int


@dataclass
class StageMetrics:
    stage: int
    epoch_losses: list[float]
    eval: ScoreReport | None
    synthetic_count: int
    synthetic_error_rate: float


def prepare_example(pair: SentencePair, labels: LabelSequence,
                    token_vocab: TokenVocab,
                    label_vocab: LabelVocab) -> TrainExample:
    return TrainExample(
        source=pair.source,
        target=pair.target,
        labels=labels,
        src_ids=token_vocab.encode(pair.source),
        label_ids=np.array(label_vocab.encode(labels), dtype=np.int64),
        det_bits=np.array(binarize(labels), dtype=np.int64),
    )


def build_dataset(pairs, token_vocab, label_vocab) -> list[TrainExample]:
    return [prepare_example(p, extract_labels(p), token_vocab, label_vocab)
            for p in pairs]


def build_vocabs(pairs, min_freq: int = 1) -> tuple[TokenVocab, LabelVocab]:
    sentences = [p.source for p in pairs] + [p.target for p in pairs]
    token_vocab = TokenVocab.build(sentences, min_freq=min_freq)
    label_vocab = LabelVocab.build(extract_labels(p) for p in pairs)
    return token_vocab, label_vocab


def train_epoch(model: GecModel, examples: list[TrainExample],
                cfg: TrainingConfig, opt_state: AdamState,
                rng: np.random.Generator) -> float:
    """One seeded-shuffle pass; gradients averaged over each mini-batch."""
    if not examples:
        raise ValueError("dataset is empty")
    order = rng.permutation(len(examples))
    total_loss = 0.0
    for start in range(0, len(order), cfg.batch_size):
        batch = order[start:start + cfg.batch_size]
        acc = None
        batch_loss = 0.0
        for idx in batch:
            ex = examples[idx]
            loss, grads = loss_and_grads(
                model.params, ex.src_ids, ex.label_ids, ex.det_bits,
                model.cfg, ged_weight=cfg.ged_weight,
                train=model.cfg.dropout > 0, drop_rng=rng)
            batch_loss += loss
            if acc is None:
                acc = grads
            else:
                for name, g in grads.items():
                    acc[name] += g
        scale = 1.0 / len(batch)
        for name in acc:
            acc[name] *= scale
        adam_step(model.params, acc, opt_state, cfg.lr)
        total_loss += batch_loss
    return total_loss / len(order)


def _length_preserving_mask(label_vocab: LabelVocab) -> np.ndarray:
    mask = np.zeros(len(label_vocab), dtype=bool)
    for idx in range(len(label_vocab)):
        kind = label_vocab.kind_of_id(idx)
        if kind in LENGTH_PRESERVING_KINDS:
            mask[idx] = True
    return mask


def _sample_biased(probs: np.ndarray, beta: float, cfg: TrainingConfig,
                   rng: np.random.Generator) -> int:
    """Draw one label index under the keep bias.

    The exact sampler mirrors inference: the relaxed sample row is a
    valid distribution, so adding the keep confidence to it before the
    argmax makes beta >= 1 force the keep label outright, and with
    shared noise the keep region only grows as beta grows.  The
    multinomial baseline instead folds the bias into the row it draws
    from; the random baseline ignores probabilities entirely.
    """
    if cfg.sampling.mode is SamplingMode.GUMBEL_SOFTMAX:
        noise = sample_gumbel(len(probs), rng)
        relaxed = relax_with_noise(probs, noise, cfg.sampling.tau)
        relaxed[0] += beta
        return int(np.argmax(relaxed))
    if cfg.sampling.mode is SamplingMode.MULTINOMIAL:
        shifted = probs.copy()
        shifted[0] += beta
        return sample_label(shifted, cfg.sampling, rng)
    return sample_label(probs, cfg.sampling, rng)


def synthesize_example(model: GecModel, pair: SentencePair,
                       gold_labels: LabelSequence, origin_index: int,
                       stage: int, cfg: TrainingConfig,
                       rng: np.random.Generator) -> SyntheticExample | None:
    """Sample one errorful variant of a genuine source, or None when the
    detector sees too little error mass in it."""
    dists = forward(model.params, model.token_vocab.encode(pair.source),
                    model.cfg)
    if sentence_error_score(dists) <= cfg.effective_synth_gamma:
        return None
    literal = cfg.synthesis_pairing == "literal"
    mask = _length_preserving_mask(model.label_vocab) if literal else None
    beta = cfg.effective_synth_beta
    sampled: LabelSequence = []
    for pos, row in enumerate(dists.gel):
        probs = np.asarray(row, dtype=np.float64).copy()
        if literal:
            probs = probs * mask
        if pos == 0:
            # the sentinel admits only keep (or append, which literal
            # mode excludes anyway); restrict the row accordingly
            allowed = np.zeros_like(probs)
            allowed[0] = probs[0]
            if not literal:
                for idx in range(len(probs)):
                    if model.label_vocab.kind_of_id(idx) is Kind.APP:
                        allowed[idx] = probs[idx]
            probs = allowed
        probs /= probs.sum()
        idx = _sample_biased(probs, beta, cfg, rng)
        label = model.label_vocab.id_to_label(idx)
        if label is None or (literal and label.kind not in
                             LENGTH_PRESERVING_KINDS):
            label = KEEP
        if pos == 0 and label.kind not in (Kind.KEP, Kind.APP):
            label = KEEP
        sampled.append(label)
    synthetic_source = apply_labels(pair.source, sampled)
    if literal:
        labels = gold_labels
    else:
        labels = extract_labels(SentencePair(synthetic_source, pair.target))
    return SyntheticExample(synthetic_source, labels, origin_index, stage)


def synthesize_dataset(model: GecModel, pairs, gold_labels_per_pair,
                       stage: int, cfg: TrainingConfig,
                       base_seed: int) -> list[SyntheticExample]:
    """Rebuild the synthetic set from scratch over every genuine pair.

    RNG streams are derived per example from (seed, stage, index), so
    the result is independent of iteration order.
    """
    out = []
    for k, (pair, gold) in enumerate(zip(pairs, gold_labels_per_pair)):
        rng = np.random.default_rng((base_seed, stage, k))
        syn = synthesize_example(model, pair, gold, k, stage, cfg, rng)
        if syn is not None:
            out.append(syn)
    return out


def evaluate_model(model: GecModel, pairs,
                   infer_cfg: InferenceConfig) -> ScoreReport:
    sources = [p.source for p in pairs]
    references = [p.target for p in pairs]
    hypotheses = [correct_sentence(model, s, infer_cfg) for s in sources]
    return score_corpus(sources, hypotheses, references)


def run_gst(model: GecModel, genuine_pairs, cfg: TrainingConfig,
            heldout_pairs=None,
            infer_cfg: InferenceConfig | None = None,
            ) -> tuple[GecModel, list[StageMetrics]]:
    """The full staged loop: train, evaluate, resynthesize, repeat.

    Stage 1 starts from the supplied model; later stages warm-start from
    the previous stage's parameters.  With a single stage this is
    exactly baseline training and no synthetic data is ever consumed.
    """
    if infer_cfg is None:
        infer_cfg = InferenceConfig(gamma=cfg.gamma, beta=cfg.beta)
    gold_labels = [extract_labels(p) for p in genuine_pairs]
    genuine = [prepare_example(p, lab, model.token_vocab, model.label_vocab)
               for p, lab in zip(genuine_pairs, gold_labels)]
    epoch_rng = np.random.default_rng((cfg.seed, 0xE))
    opt_state = AdamState()
    synthetic: list[SyntheticExample] = []
    metrics: list[StageMetrics] = []
    for stage in range(1, cfg.stages + 1):
        dataset = genuine + [
            prepare_example(SentencePair(s.source, genuine_pairs[s.origin_index].target),
                            s.labels, model.token_vocab, model.label_vocab)
            for s in synthetic]
        losses = [train_epoch(model, dataset, cfg, opt_state, epoch_rng)
                  for _ in range(cfg.epochs_per_stage)]
        evaluation = None
        if heldout_pairs:
            evaluation = evaluate_model(model, heldout_pairs, infer_cfg)
        synthetic = synthesize_dataset(model, genuine_pairs, gold_labels,
                                       stage, cfg, cfg.seed)
        rate = float(np.mean([measure_error_rate(s.labels)
                              for s in synthetic])) if synthetic else 0.0
        metrics.append(StageMetrics(stage, losses, evaluation,
                                    len(synthetic), rate))
    return model, metrics


def metrics_csv(metrics: list[StageMetrics]) -> str:
    """CSV rows (stage, epoch, train_loss, P, R, F0.5); the held-out
    columns are filled on each stage's last epoch row."""
    lines = ["stage,epoch,train_loss,precision,recall,f_half"]
    for m in metrics:
        for epoch, loss in enumerate(m.epoch_losses, start=1):
            last = epoch == len(m.epoch_losses)
            if last and m.eval is not None:
                tail = (f"{m.eval.precision:.4f},{m.eval.recall:.4f},"
                        f"{m.eval.f_half:.4f}")
            else:
                tail = ",,"
            lines.append(f"{m.stage},{epoch},{loss:.6f},{tail}")
    return "\n".join(lines) + "\n"


def synthetic_tsv_rows(examples: list[SyntheticExample]):
    for ex in examples:
        yield ex.source, [format_label(lab) for lab in ex.labels]
