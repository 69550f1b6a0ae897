"""
Loading embeddings and composing multi-word terms
==================================================

Build a small embedding matrix, round-trip it through the text and binary
file formats, compose multi-word terms by averaging word vectors, and build
a unit-normalized candidate index.
"""

import tempfile
from pathlib import Path

import numpy as np

from analogykit import (
    EmbeddingMatrix,
    build_candidate_index,
    compose_term,
    load_embeddings,
    normalize_term,
    save_embeddings,
)

# A toy vocabulary. Vectors are rows of a (tokens, dim) float matrix.
rng = np.random.default_rng(1)
tokens = ["common", "cold", "influenza", "fever", "headache", "virus"]
emb = EmbeddingMatrix(tokens, rng.normal(size=(len(tokens), 8)))
print(f"{len(emb)} tokens, {emb.dim} dimensions")

# The matrix is immutable; look up rows by token.
print("vector for 'cold':", np.round(emb.vector("cold"), 3))

# Round-trip through both on-disk formats. The text format carries a
# "<count> <dim>" header line; the binary format packs little-endian
# float32 rows after the same header.
with tempfile.TemporaryDirectory() as scratch:
    text_path = Path(scratch) / "vectors.txt"
    binary_path = Path(scratch) / "vectors.bin"
    save_embeddings(emb, text_path, "text")
    save_embeddings(emb, binary_path, "binary")
    from_text = load_embeddings(text_path, "text")
    from_binary = load_embeddings(binary_path, "binary")
    print("text round-trip exact:", np.array_equal(from_text.vectors, emb.vectors))
    print(
        "binary round-trip is float32-faithful:",
        np.array_equal(from_binary.vectors, emb.vectors.astype(np.float32).astype(np.float64)),
    )

# Term normalization lowercases, strips punctuation and symbol characters,
# and splits on whitespace.
for surface in ("Common cold", "light-headedness", "ICI 118630"):
    print(f"normalize_term({surface!r}) -> {normalize_term(surface)}")

# Multi-word terms are composed as the mean of their in-vocabulary word
# vectors. Out-of-vocabulary words are simply dropped; a term with no
# in-vocabulary words has no vector at all.
composed = compose_term("common cold", emb)
print("composed 'common cold' from:", composed.in_vocab)
manual = (emb.vector("common") + emb.vector("cold")) / 2.0
print("matches the two-vector mean:", np.allclose(composed.vector, manual))

partial = compose_term("seasonal influenza", emb)
print("'seasonal influenza' uses only:", partial.in_vocab)

missing = compose_term("entirely unknown phrase", emb)
print("no in-vocabulary words ->", missing.vector)

# A candidate index holds composed, unit-normalized vectors for the answer
# vocabulary. Surfaces that normalize to the same key collapse to one entry
# and uncomposable ones are discarded (the count is kept for reporting).
candidates = ["common cold", "Common Cold", "influenza", "yellow fever", "unknown thing"]
index = build_candidate_index(candidates, emb)
print(f"index holds {len(index)} entries, {index.n_discarded} discarded")
print("row norms are 1:", np.allclose(np.linalg.norm(index.matrix, axis=1), 1.0))
print("'COMMON COLD' resolves to entry:", index.index_of("COMMON COLD"))
