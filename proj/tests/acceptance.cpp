// Acceptance suite: one criterion per run_* function, one pass/fail line
// each, nonzero exit if anything fails. The expensive end-to-end training
// runs once and feeds criteria 6-9.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ellink/alias_index.hpp"
#include "ellink/bio.hpp"
#include "ellink/neural/train.hpp"
#include "ellink/pipeline.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ellink;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
  int number;
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

// --- 1. BM25 oracle equivalence ---------------------------------------

Criterion bm25_oracle_equivalence() {
  Criterion c{1, "bm25-oracle-equivalence"};
  const auto start = Clock::now();
  Rng rng(20240601);
  double worst = 0.0;
  bool order_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const KnowledgeBase kb = fixtures::random_kb(rng, 100, 5);
    const AliasIndex index = AliasIndex::build(kb);
    for (int q = 0; q < 200; ++q) {
      const std::string surface = fixtures::random_query(rng);
      const auto expected = oracle::brute_force_bm25(kb, index.params(), surface, 10);
      const CandidateSet got = index.query(surface, 10);
      if (got.candidates.size() != expected.size()) {
        order_ok = false;
        continue;
      }
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (got.candidates[i].entity_id != expected[i].entity_id) order_ok = false;
        worst = std::max(worst, std::fabs(got.candidates[i].score - expected[i].score));
      }
    }
  }
  const double elapsed = seconds_since(start);
  c.pass = order_ok && worst <= 1e-9 && elapsed < 10.0;
  c.detail = fmt("max |dscore| %.3g over 50 KBs x 200 queries in %.2f s", worst, elapsed);
  return c;
}

// --- 2. Gold-recall correctness ----------------------------------------

Criterion gold_recall_correctness() {
  Criterion c{2, "gold-recall-correctness"};
  const auto fx = fixtures::recall_fixture();
  const AliasIndex index = AliasIndex::build(fx.kb);
  const Bm25Source source(index);
  const double recall = gold_recall(fx.docs, source, 30);
  bool monotone = true;
  Rng rng(555);
  for (int trial = 0; trial < 10 && monotone; ++trial) {
    const KnowledgeBase kb = fixtures::random_kb(rng, 40, 4);
    const AliasIndex rand_index = AliasIndex::build(kb);
    const Bm25Source rand_source(rand_index);
    std::vector<Document> docs;
    for (int d = 0; d < 12; ++d) {
      const std::string id =
          kb.ids()[static_cast<std::size_t>(rng.uniform_int(kb.ids().size()))];
      Document doc;
      doc.doc_id = "d" + std::to_string(d);
      TokenizedSentence s;
      s.tokens = {kb.find(id)->label};
      doc.sentences.push_back(s);
      GoldAnnotation g;
      g.sentence = 0;
      g.span = {0, 0, kb.find(id)->label};
      g.entity_id = id;
      doc.gold.push_back(g);
      docs.push_back(doc);
    }
    double prev = 0.0;
    for (int k = 1; k <= 8; ++k) {
      const double r = gold_recall(docs, rand_source, k);
      if (r < prev - 1e-15) monotone = false;
      prev = r;
    }
  }
  c.pass = recall == 0.9 && monotone;
  c.detail = fmt("hand fixture 9/10 -> %.3f; monotone in k on 10 random fixtures: ",
                 recall) + (monotone ? "yes" : "NO");
  return c;
}

// --- 3. Metric oracle ----------------------------------------------------

Criterion metric_oracle() {
  Criterion c{3, "strong-matching-metric-oracle"};
  Rng rng(777);
  const std::vector<std::string> entities = {"Q1", "Q2", "Q3", "Q4"};
  long trials_ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Document> docs;
    const int num_docs = 1 + static_cast<int>(rng.uniform_int(3));
    for (int d = 0; d < num_docs; ++d) {
      Document doc;
      doc.doc_id = "d" + std::to_string(d);
      TokenizedSentence s;
      for (int i = 0; i < 12; ++i) s.tokens.push_back("t");
      doc.sentences.push_back(s);
      const int num_gold = static_cast<int>(rng.uniform_int(5));
      for (int g = 0; g < num_gold; ++g) {
        GoldAnnotation ann;
        ann.sentence = 0;
        ann.span.start = static_cast<int>(rng.uniform_int(10));
        ann.span.end = ann.span.start + static_cast<int>(rng.uniform_int(2));
        ann.entity_id = entities[static_cast<std::size_t>(rng.uniform_int(4))];
        doc.gold.push_back(ann);
      }
      docs.push_back(doc);
    }
    std::vector<Prediction> preds;
    const int num_preds = static_cast<int>(rng.uniform_int(8));
    for (int p = 0; p < num_preds; ++p) {
      Prediction pr;
      pr.doc_id = "d" + std::to_string(rng.uniform_int(static_cast<std::uint64_t>(num_docs)));
      pr.sentence = 0;
      pr.start = static_cast<int>(rng.uniform_int(10));
      pr.end = pr.start + static_cast<int>(rng.uniform_int(2));
      if (rng.uniform() >= 0.15) {
        pr.entity = entities[static_cast<std::size_t>(rng.uniform_int(4))];
      }
      preds.push_back(pr);
    }
    const bool count_nil = rng.uniform() < 0.5;
    MetricOptions opt;
    opt.count_nil_predictions = count_nil;
    const EvalReport got = strong_micro_f1(preds, docs, opt);
    const EvalCounts expect = oracle::naive_strong_counts(preds, docs, count_nil);
    const double p = expect.predicted == 0
                         ? 0.0
                         : static_cast<double>(expect.tp) / expect.predicted;
    const double r =
        expect.gold == 0 ? 0.0 : static_cast<double>(expect.tp) / expect.gold;
    const double f1 = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    if (got.counts.tp == expect.tp && got.counts.predicted == expect.predicted &&
        got.counts.gold == expect.gold && got.precision == p && got.recall == r &&
        got.f1 == f1) {
      ++trials_ok;
    }
  }
  c.pass = trials_ok == 1000;
  c.detail = fmt("%1.0f/1000 randomized sets match the naive counter exactly",
                 static_cast<double>(trials_ok));
  return c;
}

// --- 4. BIO round trip ----------------------------------------------------

Criterion bio_round_trip() {
  Criterion c{4, "bio-round-trip"};
  Rng rng(31337);
  long rt_ok = 0;
  const int kTrials = 10000;
  for (int trial = 0; trial < kTrials; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(24));
    std::vector<MentionSpan> spans;
    int at = 0;
    while (at < n) {
      if (rng.uniform() < 0.4) {
        const int len = 1 + static_cast<int>(rng.uniform_int(3));
        const int end = std::min(n - 1, at + len - 1);
        spans.push_back({at, end, ""});
        at = end + 2;
      } else {
        ++at;
      }
    }
    const auto decoded = decode_bio(encode_spans(spans, n));
    bool same = decoded.size() == spans.size();
    for (std::size_t i = 0; same && i < spans.size(); ++i) {
      same = decoded[i].start == spans[i].start && decoded[i].end == spans[i].end;
    }
    if (same) ++rt_ok;
  }
  bool noise_ok = true;
  for (int trial = 0; trial < 5000 && noise_ok; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(24));
    std::vector<BioTag> tags;
    for (int t = 0; t < n; ++t) tags.push_back(static_cast<BioTag>(rng.uniform_int(3)));
    int prev_end = -1;
    for (const MentionSpan& s : decode_bio(tags)) {
      if (s.start <= prev_end || s.start > s.end || s.end >= n) noise_ok = false;
      prev_end = s.end;
    }
  }
  c.pass = rt_ok == kTrials && noise_ok;
  c.detail = fmt("%1.0f/10000 round trips identical; arbitrary noise decodes stay "
                 "disjoint: ", static_cast<double>(rt_ok)) + (noise_ok ? "yes" : "NO");
  return c;
}

// --- 5. Gradient check -----------------------------------------------------

Criterion gradient_check_criterion() {
  Criterion c{5, "gradient-check"};
  neural::EncoderConfig cfg;
  cfg.d_model = 64;
  cfg.layers = 2;
  cfg.heads = 4;
  cfg.max_seq_len = 32;
  neural::Vocabulary vocab;
  for (int i = 0; i < 12; ++i) vocab.add("tok" + std::to_string(i));
  neural::EncoderModel model(cfg, vocab);
  Rng rng(2025);
  neural::init_params(model.params, model.config, rng);
  neural::Example ex;
  ex.ids = {1, 4, 5, 6, 7, 2, 8, 9, 10, 11, 2};
  ex.segments = {0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  ex.pair_label = 1;

  const neural::GradientCheckResult good = neural::gradient_check(model, ex);

  neural::EncoderParams corrupted = neural::backward(model, ex);
  for (double& g : corrupted.blocks[1].wq.data) g += 0.01;
  const neural::GradientCheckResult bad =
      neural::compare_gradients(model, ex, corrupted);

  c.pass = good.max_rel_error <= 1e-4 && good.coordinates_checked >= 200 &&
           bad.max_rel_error > 1e-2;
  c.detail = fmt("max rel err %.3g on %1.0f coords; corrupted attention grad err %.3g",
                 good.max_rel_error, static_cast<double>(good.coordinates_checked),
                 bad.max_rel_error);
  return c;
}

// --- 6/7/8. End-to-end training, ablation, bounds --------------------------

struct EndToEndRuns {
  double train_seconds = 0.0;
  EvalReport full;
  EvalReport wlc;
  EvalReport md_only;
  EvalReport ed_only;
};

EndToEndRuns run_end_to_end() {
  EndToEndRuns out;
  const auto start = Clock::now();
  const auto task = fixtures::synthetic_task();
  const AliasIndex index = AliasIndex::build(task.kb);
  const Bm25Source source(index);
  neural::EncoderConfig cfg;
  cfg.d_model = 64;
  cfg.layers = 2;
  cfg.heads = 4;

  neural::Hyperparameters md_hyper;
  md_hyper.epochs = 150;
  md_hyper.batch_size = 8;
  md_hyper.learning_rate = 2e-3;
  md_hyper.dropout = 0.0;
  md_hyper.seed = 31;
  const TaggerModel tagger = train_tagger(task.train, md_hyper, cfg);

  neural::Hyperparameters ed_hyper;
  ed_hyper.epochs = 200;
  ed_hyper.batch_size = 16;
  ed_hyper.learning_rate = 1e-3;
  ed_hyper.dropout = 0.1;
  ed_hyper.seed = 32;
  EdTrainOptions full_opts;
  full_opts.flags = {true, true};  // the descriptions-on bm25 configuration
  const EdModel ed_full = train_ed(task.train, source, task.kb, ed_hyper, full_opts, cfg);
  EdTrainOptions wlc_opts;
  wlc_opts.flags = {false, true};  // without local context
  const EdModel ed_wlc = train_ed(task.train, source, task.kb, ed_hyper, wlc_opts, cfg);
  out.train_seconds = seconds_since(start);

  PipelineRuntime rt;
  rt.tagger = &tagger;
  rt.kb = &task.kb;
  rt.source = &source;
  rt.use_description = true;
  rt.ed = &ed_full;
  out.full = evaluate(rt, task.test, EvalMode::end2end);
  out.md_only = evaluate(rt, task.test, EvalMode::md_only);
  out.ed_only = evaluate(rt, task.test, EvalMode::ed_only);
  rt.ed = &ed_wlc;
  out.wlc = evaluate(rt, task.test, EvalMode::end2end);
  return out;
}

Criterion end_to_end_overfit(const EndToEndRuns& runs) {
  Criterion c{6, "end-to-end-overfit"};
  c.pass = runs.full.micro_f1 >= 0.9 && runs.train_seconds < 15.0 * 60.0;
  c.detail = fmt("test micro-F1 %.3f within 200 epochs, training %.1f s", runs.full.micro_f1,
                 runs.train_seconds);
  return c;
}

Criterion ablation_direction(const EndToEndRuns& runs) {
  Criterion c{7, "local-context-ablation-direction"};
  c.pass = runs.wlc.micro_f1 < runs.full.micro_f1;
  c.detail = fmt("without-local-context micro-F1 %.3f < full %.3f", runs.wlc.micro_f1,
                 runs.full.micro_f1);
  return c;
}

Criterion composition_bounds(const EndToEndRuns& runs) {
  Criterion c{8, "pipeline-composition-bounds"};
  const double gr = runs.full.gold_recall.value_or(1.0);
  const double gr_wlc = runs.wlc.gold_recall.value_or(1.0);
  const bool recall_ok =
      runs.full.recall <= gr + 1e-12 && runs.wlc.recall <= gr_wlc + 1e-12 &&
      runs.ed_only.recall <= runs.ed_only.gold_recall.value_or(1.0) + 1e-12;
  const bool f1_ok = runs.full.micro_f1 <= runs.md_only.f1 + 1e-12 &&
                     runs.wlc.micro_f1 <= runs.md_only.f1 + 1e-12;
  c.pass = recall_ok && f1_ok;
  c.detail = fmt("recall %.3f <= gold recall %.3f; micro-F1 %.3f", runs.full.recall, gr,
                 runs.full.micro_f1) +
             fmt(" <= MD span F1 %.3f", runs.md_only.f1);
  return c;
}

// --- 9. Determinism ---------------------------------------------------------

Criterion determinism() {
  Criterion c{9, "seeded-determinism"};
  auto task = fixtures::synthetic_task();
  task.train.resize(8);
  task.test.resize(2);
  const AliasIndex index = AliasIndex::build(task.kb);
  const Bm25Source source(index);
  neural::EncoderConfig cfg;
  cfg.d_model = 32;
  cfg.layers = 2;
  cfg.heads = 4;

  const auto run_once = [&]() {
    neural::Hyperparameters md_hyper;
    md_hyper.epochs = 40;
    md_hyper.batch_size = 8;
    md_hyper.learning_rate = 2e-3;
    md_hyper.dropout = 0.1;
    md_hyper.seed = 21;
    const TaggerModel tagger = train_tagger(task.train, md_hyper, cfg);
    neural::Hyperparameters ed_hyper;
    ed_hyper.epochs = 20;
    ed_hyper.batch_size = 16;
    ed_hyper.learning_rate = 2e-3;
    ed_hyper.dropout = 0.1;
    ed_hyper.seed = 22;
    const EdModel ed = train_ed(task.train, source, task.kb, ed_hyper, {}, cfg);
    PipelineRuntime rt;
    rt.tagger = &tagger;
    rt.ed = &ed;
    rt.kb = &task.kb;
    rt.source = &source;
    const EvalReport report = evaluate(rt, task.test, EvalMode::end2end);
    const PipelineConfig config = PipelineConfig::from_name("cholan");
    return std::make_tuple(tagger.training.loss_trace, ed.training.loss_trace,
                           make_report(report, config, "end2end", {}).dump());
  };
  const auto a = run_once();
  const auto b = run_once();
  const bool traces_equal =
      std::get<0>(a) == std::get<0>(b) && std::get<1>(a) == std::get<1>(b);
  const bool reports_equal = std::get<2>(a) == std::get<2>(b);
  c.pass = traces_equal && reports_equal;
  c.detail = std::string("loss traces bitwise equal: ") +
             (traces_equal ? "yes" : "NO") +
             "; report bytes equal: " + (reports_equal ? "yes" : "NO");
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(bm25_oracle_equivalence());
  results.push_back(gold_recall_correctness());
  results.push_back(metric_oracle());
  results.push_back(bio_round_trip());
  results.push_back(gradient_check_criterion());
  const EndToEndRuns runs = run_end_to_end();
  results.push_back(end_to_end_overfit(runs));
  results.push_back(ablation_direction(runs));
  results.push_back(composition_bounds(runs));
  results.push_back(determinism());

  int failures = 0;
  for (const Criterion& c : results) {
    if (!c.pass) ++failures;
    std::printf("[%s] %d. %s: %s\n", c.pass ? "PASS" : "FAIL", c.number, c.name.c_str(),
                c.detail.c_str());
  }
  std::printf("%zu/%zu acceptance criteria passed\n", results.size() - failures,
              results.size());
  return failures == 0 ? 0 : 1;
}
