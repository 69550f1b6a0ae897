"""End-to-end evaluation of analogy datasets against an embedding space.

For each record the pipeline composes the query-side vectors (``a``, the
example terms the chosen setting keeps, and ``c``), scores every candidate,
and derives per-query metrics.  A question is skipped, never silently
dropped or failed, when it cannot be scored at all:

* a query term has no in-vocabulary component words;
* a query term composes to an exact zero vector that cannot be normalized;
* every candidate is excluded by the query's own terms.

Skips are returned with their reasons so the caller can report them and
set its exit status accordingly.  A question whose listed answers are all
missing from the candidate index is still scored: it counts a miss with
average precision and reciprocal rank 0.0, and a warning is logged.

Scoring runs on a thread pool.  Each task is a pure function of one
prepared query and the shared read-only index, and results are assembled
in dataset order, so reports are byte-identical for any worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import SETTINGS, AnalogyRecord, apply_setting
from .embeddings import CandidateIndex, EmbeddingMatrix, compose_term
from .metrics import (
    EvaluationSummary,
    QueryOutcome,
    average_precision,
    reciprocal_rank,
    summarize,
)
from .scoring import (
    DEFAULT_EPSILON,
    METHODS,
    AnalogyQuery,
    rank_candidates,
    ranking_positions,
    score_candidates,
    top_candidate,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SkippedQuery:
    relation_id: str
    a: str
    c: str
    reason: str


@dataclass(frozen=True)
class EvaluationResult:
    """Scored outcomes, skipped questions, and the aggregate summary.

    ``summary`` is ``None`` exactly when nothing was scored.
    """

    outcomes: tuple[QueryOutcome, ...]
    skipped: tuple[SkippedQuery, ...]
    summary: EvaluationSummary | None

    @property
    def n_scored(self) -> int:
        return len(self.outcomes)


class _SkipQuery(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class _Prepared:
    record: AnalogyRecord
    query: AnalogyQuery
    answer_indices: tuple[int, ...]
    excluded: frozenset[int]


def _compose_query_vector(term: str, emb: EmbeddingMatrix, normalize: bool) -> np.ndarray:
    composed = compose_term(term, emb)
    if composed.vector is None:
        raise _SkipQuery(f"term {term!r} has no in-vocabulary words")
    vec = composed.vector
    if normalize:
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise _SkipQuery(f"term {term!r} composed to a zero vector")
        vec = vec / norm
    return vec


def _prepare(
    record: AnalogyRecord,
    setting: str,
    emb: EmbeddingMatrix,
    index: CandidateIndex,
    normalize: bool,
) -> _Prepared:
    reduced = apply_setting(record, setting)
    a_vec = _compose_query_vector(reduced.a, emb, normalize)
    b_rows = np.vstack([_compose_query_vector(b, emb, normalize) for b in reduced.b_list])
    c_vec = _compose_query_vector(reduced.c, emb, normalize)

    seen: set[int] = set()
    answer_indices: list[int] = []
    for d in reduced.d_list:
        i = index.index_of(d)
        if i is not None and i not in seen:
            seen.add(i)
            answer_indices.append(i)
    if not answer_indices:
        logger.warning(
            "no listed answer of %r : %r is in the candidate index; question scores 0",
            record.a,
            record.c,
        )

    excluded = frozenset(
        i
        for term in (reduced.a, *reduced.b_list, reduced.c)
        if (i := index.index_of(term)) is not None
    )
    return _Prepared(
        record=record,
        query=AnalogyQuery(a=a_vec, b=b_rows, c=c_vec),
        answer_indices=tuple(answer_indices),
        excluded=excluded,
    )


def _score_one(
    prepared: _Prepared,
    index: CandidateIndex,
    method: str,
    epsilon: float,
    shift: bool,
    block_size: int | None,
) -> QueryOutcome:
    scores = score_candidates(
        index, prepared.query, method, epsilon=epsilon, shift=shift, block_size=block_size
    )
    order = rank_candidates(scores)
    positions = ranking_positions(order)
    answer_positions = [int(positions[i]) + 1 for i in prepared.answer_indices]
    try:
        top = top_candidate(order, set(prepared.excluded))
    except ValueError:
        raise _SkipQuery("every candidate is excluded") from None
    record = prepared.record
    return QueryOutcome(
        relation_id=record.relation_id,
        a=record.a,
        c=record.c,
        top_guess=index.surfaces[top],
        relaxed_hit=top in set(prepared.answer_indices),
        average_precision=average_precision(answer_positions),
        reciprocal_rank=reciprocal_rank(answer_positions),
        n_answers_listed=len(record.d_list),
        n_answers_scored=len(prepared.answer_indices),
    )


def evaluate_records(
    records: list[AnalogyRecord],
    emb: EmbeddingMatrix,
    index: CandidateIndex,
    *,
    setting: str,
    method: str,
    epsilon: float = DEFAULT_EPSILON,
    shift: bool = False,
    normalize_queries: bool = True,
    workers: int = 1,
    block_size: int | None = None,
) -> EvaluationResult:
    """Evaluate ``records`` and aggregate the outcomes.

    ``normalize_queries`` controls whether each composed query vector is
    scaled to unit length before entering the scoring formulas.  Candidate
    vectors are always unit length by construction of the index.
    """
    if setting not in SETTINGS:
        raise ValueError(f"unknown setting {setting!r}; expected one of {SETTINGS}")
    if method not in METHODS:
        raise ValueError(f"unknown scoring method {method!r}; expected one of {METHODS}")
    if workers < 1:
        raise ValueError("workers must be a positive integer")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if emb.dim != index.dim:
        raise ValueError(f"embedding dimension {emb.dim} != candidate index dimension {index.dim}")

    staged: list[_Prepared | SkippedQuery] = []
    for record in records:
        try:
            staged.append(_prepare(record, setting, emb, index, normalize_queries))
        except _SkipQuery as skip:
            staged.append(SkippedQuery(record.relation_id, record.a, record.c, skip.reason))

    results: dict[int, QueryOutcome | SkippedQuery] = {}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            (i, pool.submit(_score_one, item, index, method, epsilon, shift, block_size))
            for i, item in enumerate(staged)
            if isinstance(item, _Prepared)
        ]
        for i, future in futures:
            try:
                results[i] = future.result()
            except _SkipQuery as skip:
                record = records[i]
                results[i] = SkippedQuery(record.relation_id, record.a, record.c, skip.reason)

    outcomes: list[QueryOutcome] = []
    skipped: list[SkippedQuery] = []
    for i, item in enumerate(staged):
        final = results.get(i, item)
        if isinstance(final, QueryOutcome):
            outcomes.append(final)
        else:
            assert isinstance(final, SkippedQuery)
            skipped.append(final)

    if skipped:
        logger.warning("skipped %d of %d analogy questions", len(skipped), len(records))
    summary = summarize(outcomes) if outcomes else None
    return EvaluationResult(tuple(outcomes), tuple(skipped), summary)
