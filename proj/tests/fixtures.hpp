#pragma once

#include <string>
#include <vector>

#include "ellink/corpus.hpp"
#include "ellink/kb.hpp"
#include "ellink/rng.hpp"

namespace fixtures {

// Small KB for unit tests: one entity with the five-alias shape, plus a few
// entities with overlapping alias text.
ellink::KnowledgeBase small_kb();

// Random KB for property tests: up to `max_entities` entities with up to
// `max_aliases` aliases drawn from a small word pool (collisions intended).
ellink::KnowledgeBase random_kb(ellink::Rng& rng, int max_entities, int max_aliases);

// A random query surface: 1-3 words from the same pool.
std::string random_query(ellink::Rng& rng);

// Hand-built gold-recall fixture: 10 gold mentions, 9 retrievable by BM25
// at any k >= 2, 1 whose gold entity shares no term with any alias
// (enumerable by inspection => recall 9/10).
struct RecallFixture {
  ellink::KnowledgeBase kb;
  std::vector<ellink::Document> docs;
};
RecallFixture recall_fixture();

// Synthetic end-to-end linking task: 10 entities in 5 ambiguous surface
// pairs; every surface retrieves both pair entities, and the sentence
// context words identify the gold one uniquely (a Bayes-optimal linker
// scores 1.0 on the test split).
struct SyntheticTask {
  ellink::KnowledgeBase kb;
  std::vector<ellink::Document> train;
  std::vector<ellink::Document> test;
};
SyntheticTask synthetic_task();

// Writes the synthetic task plus a matching prior candidate map under
// `dir` (train.jsonl, test.jsonl, kb.jsonl, candidate_map.jsonl).
void write_synthetic_task(const SyntheticTask& task, const std::string& dir);

// Unique scratch directory under the system temp dir.
std::string temp_dir(const std::string& hint);

}  // namespace fixtures
