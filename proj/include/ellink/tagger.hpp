#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ellink/bio.hpp"
#include "ellink/corpus.hpp"
#include "ellink/neural/train.hpp"

namespace ellink {

// Any mention tagger: the trainable desk-scale model below, or an external
// scorer wrapped behind the same signature.
class MentionTagger {
 public:
  virtual ~MentionTagger() = default;
  virtual std::vector<BioTag> tag_tokens(const TokenizedSentence& sentence) const = 0;

  std::vector<MentionSpan> detect(const TokenizedSentence& sentence) const {
    return decode_bio(tag_tokens(sentence), &sentence.tokens);
  }
};

struct TaggerTraining {
  std::uint64_t seed = 0;
  int epochs = 0;
  std::vector<double> loss_trace;  // mean loss per epoch
};

// Encoder with the 3-way per-token head. Sequences are framed as
// [START] tokens [SEP]; sentences longer than the window are tagged O past
// the truncation point.
class TaggerModel : public MentionTagger {
 public:
  neural::EncoderModel encoder;
  TaggerTraining training;

  std::vector<BioTag> tag_tokens(const TokenizedSentence& sentence) const override;

  void save(const std::string& path) const;
  static TaggerModel load(const std::string& path);
};

// Trains the tagger on every sentence of the corpus (gold spans become BIO
// labels; sentences without gold train as all-O). Deterministic per seed.
TaggerModel train_tagger(const std::vector<Document>& corpus,
                         const neural::Hyperparameters& hyper,
                         neural::EncoderConfig cfg = {});

// Argmax with ties resolved O > B > I (uniform logits favor no-mention).
BioTag argmax_tag(const std::array<double, 3>& logits);

// External tagger: runs a command once per call, writes one JSON request
// line {"tokens": [...]} to its stdin and reads back {"tags": ["B"|"I"|"O",
// ...]} from stdout.
class ExternalProcessTagger : public MentionTagger {
 public:
  explicit ExternalProcessTagger(std::string command) : command_(std::move(command)) {}
  std::vector<BioTag> tag_tokens(const TokenizedSentence& sentence) const override;

 private:
  std::string command_;
};

}  // namespace ellink
