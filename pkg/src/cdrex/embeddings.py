"""Shared word/entity embedding table.

Vectors come from a word2vec-format text file when available; anything else
(including MeSH-id pseudo-words) is random-initialized uniformly in
[-0.25, 0.25] on first lookup and cached, so repeated lookups are stable
within a run.  An empty table reproduces the all-random condition.
"""

from __future__ import annotations

import logging

import numpy as np

logger = logging.getLogger(__name__)

INIT_BOUND = 0.25


class EmbeddingError(Exception):
    pass


class EmbeddingTable:
    def __init__(self, dim: int = 100, seed: int = 0):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = dim
        self.seed = seed
        self.entries: dict[str, np.ndarray] = {}
        self.loaded: set[str] = set()  # tokens that came from a vector file
        self._rng = np.random.default_rng(seed)
        self._frozen = False

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, token: str):
        return self.entries.get(token)

    def lookup_or_init(self, token: str) -> np.ndarray:
        """Stored vector, or a fresh cached uniform[-0.25, 0.25] draw."""
        vec = self.entries.get(token)
        if vec is None:
            if self._frozen:
                raise RuntimeError(f"table is frozen; unknown token {token!r}")
            vec = self._rng.uniform(-INIT_BOUND, INIT_BOUND, self.dim)
            self.entries[token] = vec
        return vec

    def warm(self, tokens) -> None:
        for t in tokens:
            self.lookup_or_init(t)

    def freeze(self) -> None:
        """After freezing the table is immutable and safe to share across threads."""
        self._frozen = True
        for vec in self.entries.values():
            vec.setflags(write=False)

    @property
    def frozen(self) -> bool:
        return self._frozen

    def oov_fraction(self, vocab) -> float:
        """Fraction of the vocabulary absent from the loaded vector file."""
        vocab = list(vocab)
        if not vocab:
            return 0.0
        hits = sum(1 for t in vocab if t in self.loaded)
        return 1.0 - hits / len(vocab)


def load_word2vec_text(path, seed: int = 0) -> EmbeddingTable:
    """Load a text-format word2vec file: header ``<count> <dim>``, then one
    ``<token> <dim floats>`` line per vector."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise EmbeddingError(f"{path}:1: expected '<count> <dim>' header")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise EmbeddingError(f"{path}:1: non-integer header fields") from None
        table = EmbeddingTable(dim=dim, seed=seed)
        n_lines = 0
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(" ")
            token, values = parts[0], parts[1:]
            if len(values) != dim:
                raise EmbeddingError(f"{path}:{lineno}: expected {dim} values, got {len(values)}")
            n_lines += 1
            if token in table.entries:
                logger.warning("%s:%d: duplicate token %r, keeping first", path, lineno, token)
                continue
            table.entries[token] = np.array([float(v) for v in values], dtype=np.float64)
            table.loaded.add(token)
        if n_lines != count:
            raise EmbeddingError(f"{path}: header declares {count} vectors, file has {n_lines}")
    return table


def dump_table(table: EmbeddingTable, path) -> None:
    """Write the table in word2vec text format (insertion order, full precision)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table.entries)} {table.dim}\n")
        for token, vec in table.entries.items():
            fh.write(token + " " + " ".join(repr(float(v)) for v in vec) + "\n")


def build_vocab(instances) -> list[str]:
    """Ordered union of all sequence tokens (first-occurrence order)."""
    seen: dict[str, None] = {}
    for inst in instances:
        for tok in inst.sequence:
            seen.setdefault(tok.text, None)
    return list(seen)
