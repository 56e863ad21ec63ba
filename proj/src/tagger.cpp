#include "ellink/tagger.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include "ellink/error.hpp"
#include "ellink/jsonl.hpp"
#include "ellink/neural/checkpoint.hpp"

namespace ellink {

using jsonl::json;
using neural::Example;
using neural::Vocabulary;

namespace {

// Tag head class order.
constexpr int kTagB = 0;
constexpr int kTagI = 1;
constexpr int kTagO = 2;

int tag_to_label(BioTag t) {
  switch (t) {
    case BioTag::B: return kTagB;
    case BioTag::I: return kTagI;
    case BioTag::O: return kTagO;
  }
  return kTagO;
}

BioTag label_to_tag(int label) {
  switch (label) {
    case kTagB: return BioTag::B;
    case kTagI: return BioTag::I;
    default: return BioTag::O;
  }
}

Example sentence_example(const neural::EncoderModel& encoder,
                         const TokenizedSentence& sentence,
                         const std::vector<BioTag>* labels) {
  Example ex;
  const int budget = encoder.config.max_seq_len - 2;
  const int n = std::min(static_cast<int>(sentence.tokens.size()), budget);
  ex.ids.push_back(Vocabulary::kStart);
  ex.tag_labels.push_back(-1);
  for (int t = 0; t < n; ++t) {
    ex.ids.push_back(encoder.vocab.id(sentence.tokens[static_cast<std::size_t>(t)]));
    ex.tag_labels.push_back(
        labels != nullptr ? tag_to_label((*labels)[static_cast<std::size_t>(t)]) : -1);
  }
  ex.ids.push_back(Vocabulary::kSep);
  ex.tag_labels.push_back(-1);
  return ex;
}

}  // namespace

BioTag argmax_tag(const std::array<double, 3>& logits) {
  // Ties resolve O > B > I.
  static constexpr int kPriority[] = {kTagO, kTagB, kTagI};
  int best = kTagO;
  double best_value = logits[kTagO];
  for (int idx : kPriority) {
    if (logits[static_cast<std::size_t>(idx)] > best_value) {
      best_value = logits[static_cast<std::size_t>(idx)];
      best = idx;
    }
  }
  return label_to_tag(best);
}

std::vector<BioTag> TaggerModel::tag_tokens(const TokenizedSentence& sentence) const {
  const int n = static_cast<int>(sentence.tokens.size());
  std::vector<BioTag> tags(static_cast<std::size_t>(n), BioTag::O);
  if (n == 0) return tags;
  const Example ex = sentence_example(encoder, sentence, nullptr);
  const neural::Matrix hidden =
      encoder.encode(encoder.embed_sequence(ex.ids, ex.segments));
  const auto logits = encoder.tag_logits(hidden);
  const int window = static_cast<int>(ex.ids.size()) - 2;
  for (int t = 0; t < window; ++t) {
    tags[static_cast<std::size_t>(t)] = argmax_tag(logits[static_cast<std::size_t>(t) + 1]);
  }
  return tags;
}

TaggerModel train_tagger(const std::vector<Document>& corpus,
                         const neural::Hyperparameters& hyper,
                         neural::EncoderConfig cfg) {
  if (corpus.empty()) throw ValidationError("train_tagger: empty corpus");
  hyper.validate();

  Vocabulary vocab;
  for (const Document& doc : corpus) {
    for (const TokenizedSentence& s : doc.sentences) {
      for (const std::string& t : s.tokens) vocab.add(t);
    }
  }
  cfg.max_seq_len = hyper.max_seq_len;
  TaggerModel model;
  model.encoder = neural::EncoderModel(cfg, std::move(vocab));
  Rng init_rng(hyper.seed);
  neural::init_params(model.encoder.params, model.encoder.config, init_rng);

  std::vector<Example> examples;
  for (const Document& doc : corpus) {
    // Gold spans per sentence become BIO labels.
    std::map<int, std::vector<MentionSpan>> by_sentence;
    for (const GoldAnnotation& g : doc.gold) by_sentence[g.sentence].push_back(g.span);
    for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
      const TokenizedSentence& sentence = doc.sentences[static_cast<std::size_t>(s)];
      if (sentence.tokens.empty()) continue;
      std::vector<BioTag> labels;
      const auto it = by_sentence.find(s);
      if (it != by_sentence.end()) {
        labels = encode_spans(it->second, static_cast<int>(sentence.tokens.size()));
      } else {
        labels.assign(sentence.tokens.size(), BioTag::O);
      }
      examples.push_back(sentence_example(model.encoder, sentence, &labels));
    }
  }
  if (examples.empty()) throw ValidationError("train_tagger: corpus has no sentences");

  const long steps_per_epoch =
      (static_cast<long>(examples.size()) + hyper.batch_size - 1) / hyper.batch_size;
  neural::AdamState opt(model.encoder.config, steps_per_epoch * hyper.epochs);
  Rng rng(hyper.seed + 1);

  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  model.training.seed = hyper.seed;
  model.training.epochs = hyper.epochs;
  std::vector<Example> batch;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    long batches = 0;
    for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(hyper.batch_size)) {
      batch.clear();
      for (std::size_t i = at; i < order.size() && i < at + static_cast<std::size_t>(hyper.batch_size); ++i) {
        batch.push_back(examples[order[i]]);
      }
      epoch_loss += neural::train_step(model.encoder, batch, opt, hyper, rng);
      ++batches;
    }
    model.training.loss_trace.push_back(epoch_loss / static_cast<double>(batches));
  }
  return model;
}

void TaggerModel::save(const std::string& path) const {
  json doc = neural::model_to_json(encoder);
  doc["format_version"] = 1;
  doc["kind"] = "tagger";
  doc["training"] = {{"seed", training.seed},
                     {"epochs", training.epochs},
                     {"loss_trace", training.loss_trace}};
  jsonl::save_json(path, doc);
}

TaggerModel TaggerModel::load(const std::string& path) {
  const json doc = jsonl::load_json(path);
  if (doc.value("kind", std::string()) != "tagger" || !doc.contains("format_version")) {
    throw ParseError(path + ": not a tagger model file");
  }
  TaggerModel model;
  model.encoder = neural::model_from_json(doc);
  if (doc.contains("training")) {
    model.training.seed = doc["training"].value("seed", 0ULL);
    model.training.epochs = doc["training"].value("epochs", 0);
    model.training.loss_trace =
        doc["training"].value("loss_trace", std::vector<double>());
  }
  return model;
}

std::vector<BioTag> ExternalProcessTagger::tag_tokens(
    const TokenizedSentence& sentence) const {
  namespace fs = std::filesystem;
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path();
  const std::string stem = "ellink_tag_" + std::to_string(::getpid()) + "_" +
                           std::to_string(counter++);
  const fs::path req = dir / (stem + ".req");
  const fs::path resp = dir / (stem + ".resp");
  {
    std::ofstream out(req);
    jsonl::append_line(out, json{{"tokens", sentence.tokens}});
  }
  const std::string cmd = command_ + " < " + req.string() + " > " + resp.string();
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    fs::remove(req);
    fs::remove(resp);
    throw Error("external tagger command failed (" + std::to_string(rc) + "): " + command_);
  }
  const json out = jsonl::load_json(resp.string());
  fs::remove(req);
  fs::remove(resp);
  std::vector<BioTag> tags;
  for (const auto& t : out.at("tags")) {
    const std::string s = t.get<std::string>();
    if (s == "B") {
      tags.push_back(BioTag::B);
    } else if (s == "I") {
      tags.push_back(BioTag::I);
    } else if (s == "O") {
      tags.push_back(BioTag::O);
    } else {
      throw ParseError("external tagger returned unknown tag '" + s + "'");
    }
  }
  if (tags.size() != sentence.tokens.size()) {
    throw ValidationError("external tagger returned " + std::to_string(tags.size()) +
                          " tags for " + std::to_string(sentence.tokens.size()) +
                          " tokens");
  }
  return tags;
}

}  // namespace ellink
