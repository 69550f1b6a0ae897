"""
Generating a balanced analogy dataset from relation triples
===========================================================

Turn a synthetic triple store (subject, relation, object), a concept-to-term
lexicon, and a term frequency table into an analogy dataset, then look at the
statistics and review outputs the pipeline produces along the way.
"""

import tempfile
from pathlib import Path

from analogykit.datagen import (
    GenerationConfig,
    Triple,
    frequent_concepts,
    generate,
    one_to_one_instances,
    write_review,
    write_statistics,
)
from analogykit.dataset import save_dataset

# Two synthetic relations. "treats" pairs each drug with a single disease,
# so every instance is one-to-one. "causes" gives each pathogen two diseases,
# which later shows up as ambiguity (several correct answers per analogy).
triples = []
lexicon = {}
freqs = {}
for i in range(60):
    drug, disease = f"CUI_DRUG_{i}", f"CUI_DIS_{i}"
    triples.append(Triple(drug, "treats", disease))
    lexicon[drug] = [f"drug {i}", f"compound {i}"]
    lexicon[disease] = [f"disease {i}"]
    freqs[f"drug {i}"] = 200
    freqs[f"compound {i}"] = 90
    freqs[f"disease {i}"] = 150
for i in range(30):
    pathogen = f"CUI_PATH_{i}"
    lexicon[pathogen] = [f"pathogen {i}"]
    freqs[f"pathogen {i}"] = 120
    for j in range(2):
        target = f"CUI_DIS_{(2 * i + j) % 60}"
        triples.append(Triple(pathogen, "causes", target))

# Concepts survive the frequency filter when at least one of their terms is
# frequent enough in the corpus counts.
frequent = frequent_concepts(lexicon, freqs, min_freq=25)
print(f"{len(frequent)} of {len(lexicon)} concepts pass the frequency filter")

# Relation selection looks at one-to-one instances only: pairs whose subject
# and object each appear exactly once inside the relation. "causes" has none
# (every pathogen has two diseases), so it cannot clear a positive threshold.
by_relation: dict[str, list[tuple[str, str]]] = {"treats": [], "causes": []}
for triple in triples:
    if triple.subject in frequent and triple.object in frequent:
        by_relation[triple.relation].append((triple.subject, triple.object))
for rid, pairs in by_relation.items():
    ones = one_to_one_instances(pairs)
    print(f"relation {rid}: {len(ones)} one-to-one instances")

# Generate with a threshold the "treats" relation clears. Sampling is
# seeded, so the same inputs and seed always give the same dataset. Each
# sampled subject is bundled with all of its objects, and analogies are all
# ordered pairs of bundles within a relation: n bundles -> n * (n - 1).
config = GenerationConfig(min_term_freq=25, min_one_to_one=40, pairs_per_relation=12, rng_seed=3)
result = generate(triples, lexicon, freqs, config)
print("\nselected relations:", list(result.selected_relations))
print("analogies generated:", len(result.term_records))

# Records come in two parallel renderings: concept ids, and representative
# terms (each concept's most frequent term, ties broken alphabetically).
print("\nfirst record, id rendering:   ", result.id_records[0])
print("first record, term rendering: ", result.term_records[0])

# The review table lists every relation that passed the filters (before any
# allowlist is applied) with sample pairs, for a human to inspect; the
# statistics table summarizes what was generated.
with tempfile.TemporaryDirectory() as scratch:
    out = Path(scratch)
    save_dataset(list(result.term_records), out / "dataset_terms.tsv")
    write_statistics(result.stats, out / "statistics.tsv")
    write_review(result.review, out / "review.tsv")
    print("\nstatistics.tsv:")
    print((out / "statistics.tsv").read_text(encoding="utf-8"))
    print("review.tsv:")
    print((out / "review.tsv").read_text(encoding="utf-8"))

# Restricting generation to an explicit allowlist of relation ids is how a
# human review round feeds back into the pipeline.
allow = GenerationConfig(
    min_term_freq=25,
    min_one_to_one=40,
    pairs_per_relation=12,
    rng_seed=3,
    allowlist=frozenset({"treats"}),
)
print("allowlisted run selects:", list(generate(triples, lexicon, freqs, allow).selected_relations))
