"""Vector analogy scoring over a candidate index.

Three scoring methods rank every candidate ``d`` for a query
``a : b_1..b_k :: c : ?``:

* ``cosadd``: cosine between the candidate and the offset target
  ``c + (mean_i(b_i) - a)``.
* ``pairdist``: cosine between the pair directions ``d - c`` and
  ``mean_i(b_i) - a``.
* ``cosmul``: mean over ``i`` of ``cos(d, b_i) * cos(d, c) / (cos(d, a) + epsilon)``.

Shared conventions: ``cos(x, 0) = 0`` whenever either argument has zero
norm; ranking is by descending score with ties broken by ascending
candidate index.  ``shift=True`` affects cosmul only: each cosine in its
formula is first mapped to ``(cos + 1) / 2``, keeping every factor
non-negative for arbitrary vectors.  The other two methods take a single
cosine, where the map would not change the ranking, and ignore the flag.

All functions are pure and read-only over their inputs, so one candidate
index can be scored from many threads at once.  ``block_size`` bounds how
many candidate rows are materialized per intermediate (the ``pairdist``
difference matrix is the large one); results do not depend on it beyond
float round-off.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .embeddings import CandidateIndex

logger = logging.getLogger(__name__)

METHODS = ("cosadd", "pairdist", "cosmul")
DEFAULT_EPSILON = 0.001


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity with the ``cos(x, 0) = 0`` convention."""
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def exemplar_offset(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Offset direction learned from the example pairs: ``mean_i(b_i) - a``."""
    return b.mean(axis=0) - a


@dataclass(frozen=True)
class AnalogyQuery:
    """Query-side vectors: ``a`` and ``c`` are ``(dim,)``, ``b`` is ``(k, dim)``."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        if self.a.ndim != 1 or self.c.ndim != 1:
            raise ValueError("a and c must be 1-d vectors")
        if self.b.ndim != 2 or self.b.shape[0] < 1:
            raise ValueError("b must be a (k, dim) matrix with k >= 1")
        if not (self.a.shape[0] == self.b.shape[1] == self.c.shape[0]):
            raise ValueError("query vectors disagree on dimensionality")


def _shift(scores: np.ndarray, shift: bool) -> np.ndarray:
    return (scores + 1.0) / 2.0 if shift else scores


def _cos_rows(block: np.ndarray, v: np.ndarray) -> np.ndarray:
    # Candidate rows are unit vectors, so only v needs normalizing.
    norm = np.linalg.norm(v)
    if norm == 0.0:
        return np.zeros(block.shape[0], dtype=np.float64)
    return block @ (v / norm)


def _score_block(block: np.ndarray, query: AnalogyQuery, method: str, epsilon: float, shift: bool) -> np.ndarray:
    if method == "cosadd":
        target = query.c + exemplar_offset(query.a, query.b)
        return _cos_rows(block, target)
    if method == "pairdist":
        offset = exemplar_offset(query.a, query.b)
        offset_norm = np.linalg.norm(offset)
        if offset_norm == 0.0:
            return np.zeros(block.shape[0], dtype=np.float64)
        diff = block - query.c
        diff_norms = np.linalg.norm(diff, axis=1)
        raw = diff @ (offset / offset_norm)
        return np.divide(raw, diff_norms, out=np.zeros_like(raw), where=diff_norms != 0.0)
    if method == "cosmul":
        sim_c = _shift(_cos_rows(block, query.c), shift)
        sim_a = _shift(_cos_rows(block, query.a), shift)
        with np.errstate(divide="ignore", invalid="ignore"):
            per_b = [
                _shift(_cos_rows(block, b_i), shift) * sim_c / (sim_a + epsilon)
                for b_i in query.b
            ]
        # Mean of the per-example scores; a single example recovers the
        # plain three-term formula exactly.
        return np.stack(per_b).mean(axis=0)
    raise ValueError(f"unknown scoring method {method!r}; expected one of {METHODS}")


def _blocks(n: int, block_size: int | None) -> Iterator[tuple[int, int]]:
    size = n if block_size is None else block_size
    for start in range(0, n, size):
        yield start, min(start + size, n)


def score_candidates(
    index: CandidateIndex,
    query: AnalogyQuery,
    method: str,
    *,
    epsilon: float = DEFAULT_EPSILON,
    shift: bool = False,
    block_size: int | None = None,
) -> np.ndarray:
    """Score every index entry for ``query``; higher is better."""
    if method not in METHODS:
        raise ValueError(f"unknown scoring method {method!r}; expected one of {METHODS}")
    if block_size is not None and block_size < 1:
        raise ValueError("block_size must be a positive integer")
    if query.a.shape[0] != index.dim:
        raise ValueError(f"query dimension {query.a.shape[0]} != index dimension {index.dim}")
    n = len(index)
    scores = np.empty(n, dtype=np.float64)
    for start, stop in _blocks(n, block_size):
        scores[start:stop] = _score_block(index.matrix[start:stop], query, method, epsilon, shift)
    return scores


def rank_candidates(scores: np.ndarray, exclusions: set[int] | None = None) -> np.ndarray:
    """Candidate indices by descending score, ties broken by ascending index.

    The stable sort over negated scores realizes the tie-break exactly, so
    rankings are reproducible across runs and worker counts.  When
    ``exclusions`` is given those indices are removed from the returned
    order; removing every candidate is an error.
    """
    order = np.argsort(-scores, kind="stable")
    if not exclusions:
        return order
    kept = order[~np.isin(order, list(exclusions))]
    if kept.shape[0] == 0:
        raise ValueError("every candidate is excluded")
    return kept


def ranking_positions(order: np.ndarray) -> np.ndarray:
    """Inverse permutation: ``positions[i]`` is the 0-based rank of candidate ``i``."""
    positions = np.empty(order.shape[0], dtype=np.int64)
    positions[order] = np.arange(order.shape[0])
    return positions


def top_candidate(order: np.ndarray, excluded: set[int]) -> int:
    """First candidate in ranking order whose index is not excluded."""
    for idx in order:
        i = int(idx)
        if i not in excluded:
            return i
    raise ValueError("every candidate is excluded; cannot pick a top guess")
