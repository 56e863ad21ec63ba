#include "ellink/disambiguator.hpp"

#include "ellink/error.hpp"
#include "ellink/jsonl.hpp"
#include "ellink/neural/checkpoint.hpp"

namespace ellink {

using jsonl::json;
using neural::Example;
using neural::Vocabulary;

std::string candidate_title(const std::string& entity_id, const KnowledgeBase& kb) {
  const EntityRecord* rec = kb.find(entity_id);
  if (rec != nullptr && !rec->label.empty()) return rec->label;
  return entity_id;
}

MentionExamples make_training_examples(const MentionSpan& mention,
                                       const TokenizedSentence& sentence,
                                       const std::string& gold_entity,
                                       const CandidateSet& candidates,
                                       const KnowledgeBase& kb, PairFlags flags,
                                       int max_seq_len) {
  MentionExamples out;
  for (const Candidate& c : candidates.candidates) {
    TrainingExample ex;
    ex.pair = build_pair(mention, sentence, candidate_title(c.entity_id, kb),
                         c.description, flags, max_seq_len);
    ex.label = c.entity_id == gold_entity ? 1 : 0;
    if (ex.label == 1) out.gold_in_candidates = true;
    out.examples.push_back(std::move(ex));
  }
  return out;
}

namespace {

Example pair_to_example(const Vocabulary& vocab, const PairSequence& pair, int label) {
  Example ex;
  ex.ids.reserve(pair.assembled.size());
  for (const std::string& t : pair.assembled) ex.ids.push_back(vocab.id(t));
  ex.segments = pair.segments;
  ex.pair_label = label;
  return ex;
}

}  // namespace

double EdModel::score_pair(const PairSequence& pair) const {
  const Example ex = pair_to_example(encoder.vocab, pair, 0);
  return encoder.classify_pair(encoder.encode(encoder.embed_sequence(ex.ids, ex.segments)));
}

DisambiguationResult EdModel::score_candidates(const MentionSpan& mention,
                                               const TokenizedSentence& sentence,
                                               const CandidateSet& candidates,
                                               const KnowledgeBase& kb) const {
  DisambiguationResult result;
  result.mention = mention;
  for (const Candidate& c : candidates.candidates) {
    const PairSequence pair =
        build_pair(mention, sentence, candidate_title(c.entity_id, kb), c.description,
                   flags, encoder.config.max_seq_len);
    result.scored.push_back({c.entity_id, score_pair(pair)});
  }
  if (result.scored.empty()) return result;  // NIL
  // Strict > keeps the lower-rank candidate on exact ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.scored.size(); ++i) {
    if (result.scored[i].probability > result.scored[best].probability) best = i;
  }
  result.chosen = result.scored[best].entity_id;
  result.chosen_probability = result.scored[best].probability;
  return result;
}

EdModel train_ed(const std::vector<Document>& corpus, const CandidateSource& source,
                 const KnowledgeBase& kb, const neural::Hyperparameters& hyper,
                 const EdTrainOptions& options, neural::EncoderConfig cfg) {
  hyper.validate();

  EdModel model;
  model.flags = options.flags;
  model.training.seed = hyper.seed;
  model.training.epochs = hyper.epochs;

  std::vector<TrainingExample> examples;
  for (const Document& doc : corpus) {
    for (const GoldAnnotation& gold : doc.gold) {
      const TokenizedSentence& sentence =
          doc.sentences[static_cast<std::size_t>(gold.sentence)];
      CandidateSet candidates = source.query(gold.span.surface, options.top_k);
      if (options.flags.use_description) {
        candidates = enrich_descriptions(std::move(candidates), kb);
      }
      MentionExamples mention_examples =
          make_training_examples(gold.span, sentence, gold.entity_id, candidates, kb,
                                 options.flags, hyper.max_seq_len);
      ++model.training.gold_mentions;
      if (!mention_examples.gold_in_candidates) {
        ++model.training.cg_missed;
        if (!options.keep_unmatched_negatives) continue;
      } else {
        ++model.training.positives;
      }
      for (TrainingExample& ex : mention_examples.examples) {
        examples.push_back(std::move(ex));
      }
    }
  }
  if (examples.empty()) throw ValidationError("train_ed: no training examples generated");

  Vocabulary vocab;
  for (const TrainingExample& ex : examples) {
    for (const std::string& t : ex.pair.assembled) vocab.add(t);
  }
  cfg.max_seq_len = hyper.max_seq_len;
  model.encoder = neural::EncoderModel(cfg, std::move(vocab));
  Rng init_rng(hyper.seed);
  neural::init_params(model.encoder.params, model.encoder.config, init_rng);

  std::vector<Example> encoded;
  encoded.reserve(examples.size());
  for (const TrainingExample& ex : examples) {
    encoded.push_back(pair_to_example(model.encoder.vocab, ex.pair, ex.label));
  }

  const long steps_per_epoch =
      (static_cast<long>(encoded.size()) + hyper.batch_size - 1) / hyper.batch_size;
  neural::AdamState opt(model.encoder.config, steps_per_epoch * hyper.epochs);
  Rng rng(hyper.seed + 1);
  std::vector<std::size_t> order(encoded.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<Example> batch;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    long batches = 0;
    for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(hyper.batch_size)) {
      batch.clear();
      for (std::size_t i = at; i < order.size() && i < at + static_cast<std::size_t>(hyper.batch_size); ++i) {
        batch.push_back(encoded[order[i]]);
      }
      epoch_loss += neural::train_step(model.encoder, batch, opt, hyper, rng);
      ++batches;
    }
    model.training.loss_trace.push_back(epoch_loss / static_cast<double>(batches));
  }
  return model;
}

void EdModel::save(const std::string& path) const {
  json doc = neural::model_to_json(encoder);
  doc["format_version"] = 1;
  doc["kind"] = "disambiguator";
  doc["flags"] = {{"use_local_context", flags.use_local_context},
                  {"use_description", flags.use_description}};
  doc["training"] = {{"seed", training.seed},
                     {"epochs", training.epochs},
                     {"loss_trace", training.loss_trace},
                     {"gold_mentions", training.gold_mentions},
                     {"cg_missed", training.cg_missed},
                     {"positives", training.positives}};
  jsonl::save_json(path, doc);
}

EdModel EdModel::load(const std::string& path) {
  const json doc = jsonl::load_json(path);
  if (doc.value("kind", std::string()) != "disambiguator" ||
      !doc.contains("format_version")) {
    throw ParseError(path + ": not a disambiguator model file");
  }
  EdModel model;
  model.encoder = neural::model_from_json(doc);
  model.flags.use_local_context = doc["flags"].value("use_local_context", true);
  model.flags.use_description = doc["flags"].value("use_description", true);
  if (doc.contains("training")) {
    const json& t = doc["training"];
    model.training.seed = t.value("seed", 0ULL);
    model.training.epochs = t.value("epochs", 0);
    model.training.loss_trace = t.value("loss_trace", std::vector<double>());
    model.training.gold_mentions = t.value("gold_mentions", 0L);
    model.training.cg_missed = t.value("cg_missed", 0L);
    model.training.positives = t.value("positives", 0L);
  }
  return model;
}

}  // namespace ellink
