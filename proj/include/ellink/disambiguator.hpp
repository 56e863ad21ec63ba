#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellink/candidates.hpp"
#include "ellink/corpus.hpp"
#include "ellink/neural/train.hpp"
#include "ellink/pair.hpp"

namespace ellink {

struct TrainingExample {
  PairSequence pair;
  int label = 0;  // 1 = gold candidate, 0 = negative
};

// Examples for one mention: one per candidate, the gold entity (when
// retrieved) labelled 1 and every other candidate 0.
struct MentionExamples {
  std::vector<TrainingExample> examples;
  bool gold_in_candidates = false;
};

MentionExamples make_training_examples(const MentionSpan& mention,
                                       const TokenizedSentence& sentence,
                                       const std::string& gold_entity,
                                       const CandidateSet& candidates,
                                       const KnowledgeBase& kb, PairFlags flags,
                                       int max_seq_len);

struct ScoredCandidate {
  std::string entity_id;
  double probability = 0.0;
};

// chosen is empty (NIL) exactly when the candidate set was empty; otherwise
// the argmax by probability, ties to the lower candidate rank.
struct DisambiguationResult {
  MentionSpan mention;
  std::vector<ScoredCandidate> scored;
  std::optional<std::string> chosen;
  double chosen_probability = 0.0;
};

struct EdTraining {
  std::uint64_t seed = 0;
  int epochs = 0;
  std::vector<double> loss_trace;
  long gold_mentions = 0;
  long cg_missed = 0;   // gold mentions whose entity the CG stage never produced
  long positives = 0;   // always gold_mentions - cg_missed
};

// Pair classifier over (mention + local context, candidate title +
// description) sequences.
class EdModel {
 public:
  neural::EncoderModel encoder;
  PairFlags flags;
  EdTraining training;

  double score_pair(const PairSequence& pair) const;

  DisambiguationResult score_candidates(const MentionSpan& mention,
                                        const TokenizedSentence& sentence,
                                        const CandidateSet& candidates,
                                        const KnowledgeBase& kb) const;

  void save(const std::string& path) const;
  static EdModel load(const std::string& path);
};

struct EdTrainOptions {
  PairFlags flags;
  int top_k = kDefaultTopK;
  // Keep all-negative mention examples when the gold entity was not
  // retrieved; their negatives still carry signal.
  bool keep_unmatched_negatives = true;
};

EdModel train_ed(const std::vector<Document>& corpus, const CandidateSource& source,
                 const KnowledgeBase& kb, const neural::Hyperparameters& hyper,
                 const EdTrainOptions& options, neural::EncoderConfig cfg = {});

// Candidate title for pair construction: the KB label, falling back to the
// raw entity id for entities outside the KB.
std::string candidate_title(const std::string& entity_id, const KnowledgeBase& kb);

}  // namespace ellink
