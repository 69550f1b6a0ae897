"""
Three ways to score an analogy
==============================

Walk the classic man : woman :: king : ? analogy through the three scoring
functions, with and without excluding the query terms from the ranking.
"""

import numpy as np

from analogykit import AnalogyQuery, build_candidate_index, rank_candidates, score_candidates
from analogykit.embeddings import EmbeddingMatrix

# A two-dimensional picture: "man" points along x, "woman" along y, and
# "king" sits between them. "queen" shares the y direction with "woman".
half = 1.0 / np.sqrt(2.0)
emb = EmbeddingMatrix(
    ["man", "woman", "king", "queen"],
    np.array([[1.0, 0.0], [0.0, 1.0], [half, half], [0.0, 1.0]]),
)
index = build_candidate_index(["man", "queen", "king", "woman"], emb)

query = AnalogyQuery(
    a=emb.vector("man"),
    b=emb.vector("woman")[np.newaxis, :],
    c=emb.vector("king"),
)

# cosadd ranks candidates by cosine to c + (b - a): take the king vector
# and push it the way man points to woman.
#
# pairdist compares directions: cosine between (candidate - c) and (b - a).
#
# cosmul multiplies the candidate's similarity to b and c and divides by its
# similarity to a, a multiplicative version of the same idea.
for method in ("cosadd", "pairdist", "cosmul"):
    scores = score_candidates(index, query, method)
    print(f"\n{method} scores:")
    for i, surface in enumerate(index.surfaces):
        print(f"  {surface:8s} {scores[i]: .4f}")

    # On the full ranking, "woman" and "queen" tie exactly (they share a
    # vector); the stable tie-break prefers the lower candidate row.
    full_order = rank_candidates(scores)
    print("  full ranking:", [index.surfaces[i] for i in full_order])

    # For the accuracy-style judgment the query terms a, b, and c are
    # removed before taking the top guess.
    excluded = {index.index_of(t) for t in ("man", "woman", "king")}
    top = rank_candidates(scores, exclusions=excluded)[0]
    print("  top guess after excluding a, b, c:", index.surfaces[top])

# Multiple exemplar objects are averaged before the offset is taken:
# b becomes a (k, dim) matrix and mean(b) - a replaces b - a.
b_pair = np.stack([emb.vector("woman"), emb.vector("queen")])
averaged = AnalogyQuery(a=emb.vector("man"), b=b_pair, c=emb.vector("king"))
print("\ncosadd with two exemplar objects:", np.round(score_candidates(index, averaged, "cosadd"), 4))

# cosmul's denominator guard epsilon and its optional cosine shift
# ((cos + 1) / 2, keeping every factor positive) are tunable.
shifted = score_candidates(index, query, "cosmul", epsilon=0.001, shift=True)
print("cosmul with shifted cosines:", np.round(shifted, 4))
