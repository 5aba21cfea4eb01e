"""Tokenization, vocabularies, and corpus file formats.

Sentences are tuples of whitespace-free tokens with a synthetic
sentence-initial sentinel at position 0.  The sentinel exists so an
insertion before the first real word has an anchor token to attach to.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError

SENTINEL = "$START"
UNK_TOKEN = "$UNK"

TokenSeq = tuple[str, ...]


def tokenize(text: str) -> TokenSeq:
    """Split on runs of whitespace and prepend the sentinel."""
    return (SENTINEL, *text.split())


def detokenize(tokens: TokenSeq) -> str:
    """Inverse of tokenize up to whitespace normalization."""
    body = tokens[1:] if tokens and tokens[0] == SENTINEL else tokens
    return " ".join(body)


def validate_tokens(tokens: TokenSeq) -> TokenSeq:
    """Check the TokenSeq invariants, returning the input unchanged."""
    if not tokens or tokens[0] != SENTINEL:
        raise ValueError("token sequence must start with the sentinel")
    for tok in tokens:
        if not tok or any(c.isspace() for c in tok):
            raise ValueError(f"invalid token: {tok!r}")
    return tokens


@dataclass(frozen=True)
class SentencePair:
    """An errorful source sentence and its corrected target."""

    source: TokenSeq
    target: TokenSeq


def read_parallel_tsv(path) -> list[SentencePair]:
    """Read "source<TAB>target" pairs, one per non-empty line."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.count("\t") != 1:
                raise ParseError(
                    f"expected exactly one tab, found {line.count(chr(9))}",
                    path=path, line=lineno)
            src, tgt = line.split("\t")
            pairs.append(SentencePair(tokenize(src), tokenize(tgt)))
    return pairs


def write_parallel_tsv(pairs: list[SentencePair], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(f"{detokenize(pair.source)}\t{detokenize(pair.target)}\n")


def read_labeled_tsv(path) -> list[tuple[TokenSeq, list[str]]]:
    """Read the labeled-dataset cache: "source<TAB>space-joined labels"."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.count("\t") != 1:
                raise ParseError(
                    f"expected exactly one tab, found {line.count(chr(9))}",
                    path=path, line=lineno)
            src, labels = line.split("\t")
            tokens = tokenize(src)
            label_strs = labels.split()
            if len(label_strs) != len(tokens):
                raise ParseError(
                    f"{len(label_strs)} labels for {len(tokens)} tokens",
                    path=path, line=lineno)
            rows.append((tokens, label_strs))
    return rows


def write_labeled_tsv(rows, path) -> None:
    """Write (tokens, label strings) rows in the cache format."""
    with open(path, "w", encoding="utf-8") as fh:
        for tokens, label_strs in rows:
            fh.write(f"{detokenize(tokens)}\t{' '.join(label_strs)}\n")


def read_sentences(path) -> list[TokenSeq]:
    """One tokenized sentence per non-empty line."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line:
                out.append(tokenize(line))
    return out


def write_sentences(sentences, path) -> None:
    Path(path).write_text(
        "".join(detokenize(s) + "\n" for s in sentences), encoding="utf-8")


class TokenVocab:
    """Token <-> dense id map for the encoder; id 0 is the unknown token."""

    def __init__(self, tokens: list[str]):
        if not tokens or tokens[0] != UNK_TOKEN:
            raise ValueError("token vocab must start with the unknown token")
        self.tokens = list(tokens)
        self._ids = {tok: i for i, tok in enumerate(self.tokens)}
        if len(self._ids) != len(self.tokens):
            raise ValueError("duplicate tokens in vocab")

    def __len__(self):
        return len(self.tokens)

    @classmethod
    def build(cls, sentences, min_freq: int = 1) -> "TokenVocab":
        counts = Counter()
        for sent in sentences:
            counts.update(sent)
        kept = [t for t, c in counts.items() if c >= min_freq]
        kept.sort(key=lambda t: (-counts[t], t))
        return cls([UNK_TOKEN] + kept)

    def encode(self, tokens: TokenSeq) -> np.ndarray:
        unk = 0
        return np.array([self._ids.get(t, unk) for t in tokens], dtype=np.int64)

    def __contains__(self, token):
        return token in self._ids
