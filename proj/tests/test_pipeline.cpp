#include <doctest.h>

#include "ellink/error.hpp"
#include "ellink/pipeline.hpp"
#include "fixtures.hpp"

using namespace ellink;

namespace {

neural::EncoderConfig small_cfg() {
  neural::EncoderConfig cfg;
  cfg.d_model = 32;
  cfg.layers = 2;
  cfg.heads = 4;
  return cfg;
}

// Subtask-trained models shared across cases (Arlen + Brimley docs).
struct TrainedStack {
  fixtures::SyntheticTask task;
  AliasIndex index;
  TaggerModel tagger;
  EdModel ed;
};

const TrainedStack& stack() {
  static const TrainedStack s = []() {
    TrainedStack out;
    out.task = fixtures::synthetic_task();
    out.task.train.resize(8);
    out.task.test.resize(2);
    out.index = AliasIndex::build(out.task.kb);
    neural::Hyperparameters md_hyper;
    md_hyper.epochs = 120;
    md_hyper.batch_size = 8;
    md_hyper.learning_rate = 2e-3;
    md_hyper.dropout = 0.0;
    md_hyper.seed = 21;
    out.tagger = train_tagger(out.task.train, md_hyper, small_cfg());
    const Bm25Source source(out.index);
    neural::Hyperparameters ed_hyper;
    ed_hyper.epochs = 80;
    ed_hyper.batch_size = 16;
    ed_hyper.learning_rate = 2e-3;
    ed_hyper.dropout = 0.0;
    ed_hyper.seed = 22;
    out.ed = train_ed(out.task.train, source, out.task.kb, ed_hyper, {}, small_cfg());
    return out;
  }();
  return s;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("config names pin candidate source and description use") {
  const PipelineConfig wikidata = PipelineConfig::from_name("cholan-wikidata");
  CHECK(wikidata.cg_source == "bm25");
  CHECK_FALSE(wikidata.use_description);
  const PipelineConfig fc = PipelineConfig::from_name("cholan-wiki-fc");
  CHECK(fc.cg_source == "bm25");
  CHECK_FALSE(fc.use_description);
  const PipelineConfig dca = PipelineConfig::from_name("cholan-wiki-dca");
  CHECK(dca.cg_source == "map");
  CHECK(dca.use_description);
  const PipelineConfig full = PipelineConfig::from_name("cholan");
  CHECK(full.cg_source == "bm25");
  CHECK(full.use_description);
  CHECK(full.use_local_context);
  CHECK(full.top_k == 30);
  CHECK_THROWS_AS(PipelineConfig::from_name("nonsense"), ValidationError);
}

TEST_CASE("gold mentions with singleton candidates force CG top-1") {
  const auto& s = stack();
  // A source that always returns exactly the gold pair's first entity.
  class Singleton : public CandidateSource {
   public:
    explicit Singleton(const AliasIndex& index) : index_(index) {}
    CandidateSet query(const std::string& surface, int) const override {
      CandidateSet set = index_.query(surface, 1);
      return set;
    }
    const AliasIndex& index_;
  };
  const Singleton source(s.index);
  PipelineRuntime rt;
  rt.ed = &s.ed;
  rt.kb = &s.task.kb;
  rt.source = &source;
  rt.gold_mentions = true;
  rt.top_k = 1;
  const auto preds = run_pipeline(rt, s.task.test);
  REQUIRE(preds.size() == 2);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& doc = s.task.test[i];
    const CandidateSet top = source.query(doc.gold[0].span.surface, 1);
    REQUIRE(preds[i].entity.has_value());
    CHECK(*preds[i].entity == top.candidates[0].entity_id);
  }
}

TEST_CASE("zero detected mentions yield zero predictions") {
  const auto& s = stack();
  TaggerModel silent = s.tagger;
  silent.encoder.params.tag_w.zero();
  silent.encoder.params.tag_b.zero();  // uniform logits -> everything O
  const Bm25Source source(s.index);
  PipelineRuntime rt;
  rt.tagger = &silent;
  rt.ed = &s.ed;
  rt.kb = &s.task.kb;
  rt.source = &source;
  CHECK(run_pipeline(rt, s.task.test).empty());
}

TEST_CASE("mentions without candidates come back as NIL records") {
  const auto& s = stack();
  class Empty : public CandidateSource {
   public:
    CandidateSet query(const std::string&, int) const override { return {}; }
  };
  const Empty source;
  PipelineRuntime rt;
  rt.ed = &s.ed;
  rt.kb = &s.task.kb;
  rt.source = &source;
  rt.gold_mentions = true;
  const auto preds = run_pipeline(rt, s.task.test);
  REQUIRE(preds.size() == 2);
  for (const Prediction& p : preds) CHECK_FALSE(p.entity.has_value());
}

TEST_CASE("end-to-end on the subtask and composition bounds") {
  const auto& s = stack();
  const Bm25Source source(s.index);
  PipelineRuntime rt;
  rt.tagger = &s.tagger;
  rt.ed = &s.ed;
  rt.kb = &s.task.kb;
  rt.source = &source;
  rt.use_description = true;

  const EvalReport e2e = evaluate(rt, s.task.test, EvalMode::end2end);
  const EvalReport md = evaluate(rt, s.task.test, EvalMode::md_only);
  const EvalReport cg = evaluate(rt, s.task.test, EvalMode::gold_recall);
  REQUIRE(cg.gold_recall.has_value());
  CHECK(e2e.recall <= *cg.gold_recall + 1e-12);
  CHECK(e2e.micro_f1 <= md.f1 + 1e-12);
  // The trained subtask stack actually links the held-out sentences.
  CHECK(e2e.micro_f1 == 1.0);
  CHECK(md.f1 == 1.0);
}

TEST_CASE("ed-only forces gold mentions and bounds end2end") {
  const auto& s = stack();
  const Bm25Source source(s.index);
  PipelineRuntime rt;
  rt.ed = &s.ed;
  rt.kb = &s.task.kb;
  rt.source = &source;
  rt.gold_mentions = false;  // ed-only overrides this
  rt.tagger = nullptr;
  const EvalReport ed = evaluate(rt, s.task.test, EvalMode::ed_only);
  REQUIRE(ed.gold_recall.has_value());
  CHECK(ed.recall <= *ed.gold_recall + 1e-12);
  CHECK(ed.micro_f1 == 1.0);
}

TEST_CASE("gold-recall mode matches the library value") {
  const auto fx = fixtures::recall_fixture();
  const AliasIndex index = AliasIndex::build(fx.kb);
  const Bm25Source source(index);
  PipelineRuntime rt;
  rt.source = &source;
  rt.top_k = 30;
  const EvalReport r = evaluate(rt, fx.docs, EvalMode::gold_recall);
  REQUIRE(r.gold_recall.has_value());
  CHECK(*r.gold_recall == gold_recall(fx.docs, source, 30));
  CHECK(*r.gold_recall == doctest::Approx(0.9));
}

TEST_CASE("same seed and inputs produce byte-identical reports") {
  const auto& s = stack();
  const Bm25Source source(s.index);
  PipelineRuntime rt;
  rt.tagger = &s.tagger;
  rt.ed = &s.ed;
  rt.kb = &s.task.kb;
  rt.source = &source;
  const PipelineConfig config = PipelineConfig::from_name("cholan");
  const auto once = make_report(evaluate(rt, s.task.test, EvalMode::end2end), config,
                                "end2end", {{"corpus", "abc123"}});
  const auto twice = make_report(evaluate(rt, s.task.test, EvalMode::end2end), config,
                                 "end2end", {{"corpus", "abc123"}});
  CHECK(once.dump() == twice.dump());
  CHECK(once.contains("seed"));
  CHECK(once.contains("checksums"));
  CHECK(once["config"]["name"] == "cholan");
}

TEST_CASE("unknown eval mode name is rejected") {
  CHECK_THROWS_AS(eval_mode_from_name("bogus"), ValidationError);
  CHECK(eval_mode_name(eval_mode_from_name("ed-only")) == "ed-only");
}

}  // TEST_SUITE
