"""Command-line entry points.

One binary with subcommands: align, train, gst, correct, evaluate,
synthesize.  Every command writes a manifest (the fully resolved
configuration) next to its primary output; re-running from the same
manifest reproduces the outputs bit-exactly.

Exit codes: 0 success, 1 runtime failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .checkpoint import load_checkpoint, save_checkpoint
from .corpus import detokenize, read_parallel_tsv, read_sentences, \
    write_labeled_tsv
from .errors import GstError
from .inference import InferenceConfig, correct
from .labels import extract_labels, format_label, measure_error_rate
from .model import GecModel
from .sampling import SamplingConfig, SamplingMode
from .scoring import score_corpus
from .training import TrainingConfig, build_vocabs, metrics_csv, run_gst, \
    synthesize_dataset, synthetic_tsv_rows

_SAMPLING_NAMES = {
    "gumbel": SamplingMode.GUMBEL_SOFTMAX,
    "multinomial": SamplingMode.MULTINOMIAL,
    "random": SamplingMode.RANDOM,
}


class UsageError(GstError):
    pass


def _write_manifest(path, command: str, settings: dict) -> None:
    lines = [f"command = {command}", f"version = {__version__}"]
    for key in sorted(settings):
        lines.append(f"{key} = {settings[key]}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _manifest_path(output) -> Path:
    return Path(str(output) + ".manifest")


def _add_sampling_args(p):
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--sampling", choices=sorted(_SAMPLING_NAMES),
                   default="gumbel")
    p.add_argument("--seed", type=int, default=0)


def _add_model_args(p):
    p.add_argument("--dim", type=int, default=128)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--max-len", type=int, default=128)
    p.add_argument("--dropout", type=float, default=0.0)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--batch-size", type=int, default=16)


def _validate_common(args):
    if getattr(args, "gamma", 0) < 0:
        raise UsageError("--gamma must be non-negative")
    if getattr(args, "beta", 0) < 0:
        raise UsageError("--beta must be non-negative")
    if getattr(args, "tau", 1) <= 0:
        raise UsageError("--tau must be positive")
    if getattr(args, "max_iters", 1) < 1:
        raise UsageError("--max-iters must be at least 1")


def cmd_align(args) -> int:
    pairs = read_parallel_tsv(args.input)
    rows = []
    for pair in pairs:
        labels = extract_labels(pair)
        rows.append((pair.source, [format_label(lab) for lab in labels]))
    write_labeled_tsv(rows, args.output)
    _write_manifest(_manifest_path(args.output), "align", {
        "input": args.input, "output": args.output})
    return 0


def _run_training(args, stages: int) -> int:
    _validate_common(args)
    pairs = read_parallel_tsv(args.data)
    heldout = None
    if args.heldout:
        heldout = read_parallel_tsv(args.heldout)
    elif args.heldout_frac > 0:
        rng = np.random.default_rng((args.seed, 0x5))
        order = rng.permutation(len(pairs))
        cut = max(1, int(len(pairs) * args.heldout_frac))
        heldout = [pairs[i] for i in order[:cut]]
        pairs = [pairs[i] for i in order[cut:]]
    if not pairs:
        raise UsageError("no training pairs left after the held-out split")

    token_vocab, label_vocab = build_vocabs(pairs)
    model = GecModel.create(
        token_vocab, label_vocab, seed=args.seed, dim=args.dim,
        layers=args.layers, heads=args.heads, max_len=args.max_len,
        dropout=args.dropout)
    cfg = TrainingConfig(
        stages=stages, epochs_per_stage=args.epochs, gamma=args.gamma,
        beta=args.beta,
        sampling=SamplingConfig(mode=_SAMPLING_NAMES[args.sampling],
                                tau=args.tau, seed=args.seed),
        synthesis_pairing=args.pairing, lr=args.lr,
        batch_size=args.batch_size, seed=args.seed)
    model, metrics = run_gst(model, pairs, cfg, heldout_pairs=heldout)

    settings = {
        "data": args.data, "out": args.out, "stages": stages,
        "epochs": args.epochs, "gamma": args.gamma, "beta": args.beta,
        "tau": args.tau, "sampling": args.sampling, "seed": args.seed,
        "pairing": args.pairing, "dim": args.dim, "layers": args.layers,
        "heads": args.heads, "max_len": args.max_len,
        "dropout": args.dropout, "lr": args.lr,
        "batch_size": args.batch_size, "heldout": args.heldout or "",
        "heldout_frac": args.heldout_frac, "threads": args.threads,
    }
    save_checkpoint(model, args.out, extra={k: str(v)
                                            for k, v in settings.items()})
    csv_path = Path(str(args.out) + ".metrics.csv")
    csv_path.write_text(metrics_csv(metrics), encoding="utf-8")
    _write_manifest(_manifest_path(args.out), "gst" if stages > 1 or
                    args.command == "gst" else "train", settings)
    for m in metrics:
        line = f"stage {m.stage} loss={m.epoch_losses[-1]:.4f}"
        if m.eval is not None:
            line += f" heldout: {m.eval.text()}"
        line += f" synthesized={m.synthetic_count}"
        print(line)
    return 0


def cmd_train(args) -> int:
    return _run_training(args, stages=1)


def cmd_gst(args) -> int:
    if args.stages < 1:
        raise UsageError("--stages must be at least 1")
    return _run_training(args, stages=args.stages)


def cmd_correct(args) -> int:
    _validate_common(args)
    model, _ = load_checkpoint(args.model)
    icfg = InferenceConfig(gamma=args.gamma, beta=args.beta,
                           max_iters=args.max_iters)
    sentences = read_sentences(args.input)
    out_lines = []
    for sent in sentences:
        trace = correct(model, sent, icfg)
        out_lines.append(detokenize(trace.final))
        if args.trace:
            out_lines.append(trace.report())
    text = "\n".join(out_lines) + ("\n" if out_lines else "")
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        _write_manifest(_manifest_path(args.output), "correct", {
            "model": args.model, "input": args.input,
            "output": args.output, "gamma": args.gamma, "beta": args.beta,
            "max_iters": args.max_iters, "trace": args.trace})
    else:
        sys.stdout.write(text)
    return 0


def cmd_evaluate(args) -> int:
    sources = read_sentences(args.sources)
    hypotheses = read_sentences(args.hypotheses)
    references = read_sentences(args.references)
    report = score_corpus(sources, hypotheses, references)
    print(report.text())
    print("tp,fp,fn,precision,recall,f_half")
    print(report.csv_row())
    return 0


def cmd_synthesize(args) -> int:
    _validate_common(args)
    model, _ = load_checkpoint(args.model)
    pairs = read_parallel_tsv(args.data)
    cfg = TrainingConfig(
        gamma=args.gamma, beta=args.beta,
        sampling=SamplingConfig(mode=_SAMPLING_NAMES[args.sampling],
                                tau=args.tau, seed=args.seed),
        synthesis_pairing=args.pairing, seed=args.seed)
    gold = [extract_labels(p) for p in pairs]
    synthetic = synthesize_dataset(model, pairs, gold, stage=0, cfg=cfg,
                                   base_seed=args.seed)
    write_labeled_tsv(synthetic_tsv_rows(synthetic), args.out)
    rate = float(np.mean([measure_error_rate(s.labels)
                          for s in synthetic])) if synthetic else 0.0
    _write_manifest(_manifest_path(args.out), "synthesize", {
        "model": args.model, "data": args.data, "out": args.out,
        "gamma": args.gamma, "beta": args.beta, "tau": args.tau,
        "sampling": args.sampling, "seed": args.seed,
        "pairing": args.pairing})
    print(f"synthesized {len(synthetic)} of {len(pairs)} sentences, "
          f"mean label error rate {rate:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gstgec",
        description="Sequence-labeling grammatical error correction")
    parser.add_argument("--threads", type=int, default=1,
                        help="cap on internal parallelism")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("align", help="extract edit labels from a parallel "
                       "TSV")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_align)

    for name, helptext in (("train", "baseline training (single stage, no "
                            "synthesis)"),
                           ("gst", "staged training with self-synthesis")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--data", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--epochs", type=int, default=5)
        if name == "gst":
            p.add_argument("--stages", type=int, default=5)
        p.add_argument("--heldout", default=None)
        p.add_argument("--heldout-frac", type=float, default=0.0)
        p.add_argument("--pairing", choices=("realign", "literal"),
                       default="realign")
        _add_sampling_args(p)
        _add_model_args(p)
        p.set_defaults(func=cmd_train if name == "train" else cmd_gst)

    p = sub.add_parser("correct", help="iteratively correct sentences")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--max-iters", type=int, default=5)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("evaluate", help="span-level P/R/F0.5 scoring")
    p.add_argument("--sources", required=True)
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--references", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synthesize", help="dump a synthesized dataset from "
                       "a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pairing", choices=("realign", "literal"),
                   default="realign")
    _add_sampling_args(p)
    p.set_defaults(func=cmd_synthesize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GstError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
