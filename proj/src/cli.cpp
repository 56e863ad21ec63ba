#include "ellink/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "ellink/alias_index.hpp"
#include "ellink/candidate_map.hpp"
#include "ellink/checksum.hpp"
#include "ellink/corpus.hpp"
#include "ellink/disambiguator.hpp"
#include "ellink/error.hpp"
#include "ellink/jsonl.hpp"
#include "ellink/kb.hpp"
#include "ellink/metrics.hpp"
#include "ellink/pipeline.hpp"
#include "ellink/tagger.hpp"

namespace ellink {
namespace {

using jsonl::json;

struct HyperOpts {
  neural::Hyperparameters hyper;
  neural::EncoderConfig cfg;
};

void add_hyper_options(CLI::App* cmd, HyperOpts& opts) {
  cmd->add_option("--epochs", opts.hyper.epochs, "training epochs");
  cmd->add_option("--batch-size", opts.hyper.batch_size, "batch size");
  cmd->add_option("--lr", opts.hyper.learning_rate, "learning rate");
  cmd->add_option("--dropout", opts.hyper.dropout, "dropout probability");
  cmd->add_option("--seed", opts.hyper.seed, "training seed");
  cmd->add_option("--max-seq-len", opts.hyper.max_seq_len, "sequence window");
  cmd->add_option("--d-model", opts.cfg.d_model, "encoder width");
  cmd->add_option("--layers", opts.cfg.layers, "encoder blocks");
  cmd->add_option("--heads", opts.cfg.heads, "attention heads");
}

// Lazily loaded CG resources; owns whatever the chosen source needs.
struct CgResources {
  std::string kb_path;
  std::string index_path;
  std::string map_path;
  std::string source_name = "bm25";
  std::string fallback;  // "" or "bm25"
  int top_k = kDefaultTopK;

  std::optional<KnowledgeBase> kb;
  std::optional<AliasIndex> index;
  std::optional<CandidateMap> map;
  std::unique_ptr<CandidateSource> bm25_source;
  std::unique_ptr<CandidateSource> map_source;
  std::unique_ptr<CandidateSource> combined;

  void add_options(CLI::App* cmd, bool with_source = true) {
    cmd->add_option("--kb", kb_path, "knowledge base JSONL");
    cmd->add_option("--index", index_path, "prebuilt alias index file");
    cmd->add_option("--map", map_path, "candidate map JSONL");
    if (with_source) {
      cmd->add_option("--source,--cg", source_name, "candidate source")
          ->check(CLI::IsMember({"bm25", "map"}));
    }
    cmd->add_option("--top-k", top_k, "candidate list cap");
    cmd->add_option("--fallback", fallback, "fall back on map misses")
        ->check(CLI::IsMember({"bm25"}));
  }

  const KnowledgeBase& require_kb() {
    if (!kb) {
      if (kb_path.empty()) throw ValidationError("--kb is required here");
      kb = load_kb(kb_path);
    }
    return *kb;
  }

  const CandidateSource& make_source() {
    if (combined) return *combined;
    const auto ensure_bm25 = [&]() {
      if (bm25_source) return;
      if (!index_path.empty()) {
        index = AliasIndex::load(index_path);
      } else {
        index = AliasIndex::build(require_kb());
      }
      bm25_source = std::make_unique<Bm25Source>(*index);
    };
    if (source_name == "bm25") {
      ensure_bm25();
      combined = std::move(bm25_source);
    } else {
      if (map_path.empty()) throw ValidationError("--map is required for the map source");
      map = CandidateMap::load(map_path, top_k);
      map_source = std::make_unique<MapSource>(*map);
      if (fallback == "bm25") {
        ensure_bm25();
        combined = std::make_unique<FallbackSource>(*map_source, *bm25_source);
      } else {
        combined = std::move(map_source);
      }
    }
    return *combined;
  }

  void add_checksums(std::map<std::string, std::string>& sums) const {
    if (!kb_path.empty()) sums["kb"] = file_checksum(kb_path);
    if (!index_path.empty()) sums["index"] = file_checksum(index_path);
    if (!map_path.empty()) sums["map"] = file_checksum(map_path);
  }
};

void write_report_file(const std::string& path, const json& report) {
  if (path.empty()) return;
  jsonl::save_json(path, report, 2);
}

// ---- corpus ----------------------------------------------------------

void setup_corpus(CLI::App& app) {
  auto* corpus = app.add_subcommand("corpus", "corpus inspection");
  corpus->require_subcommand(1);

  auto* validate = corpus->add_subcommand("validate", "load and validate a corpus");
  auto path = std::make_shared<std::string>();
  validate->add_option("--corpus", *path, "corpus JSONL")->required();
  validate->callback([path]() {
    const auto docs = load_corpus(*path);
    long sentences = 0;
    long annotations = 0;
    for (const Document& d : docs) {
      sentences += static_cast<long>(d.sentences.size());
      annotations += static_cast<long>(d.gold.size());
    }
    std::cout << "documents=" << docs.size() << " sentences=" << sentences
              << " annotations=" << annotations << "\n";
  });

  auto* tok = corpus->add_subcommand("tokenize", "tokenize one line of text");
  auto text = std::make_shared<std::string>();
  tok->add_option("--text", *text, "input text")->required();
  tok->callback([text]() {
    const TokenizedSentence s = tokenize(*text);
    json spans = json::array();
    for (const auto& [b, e] : s.char_spans) spans.push_back({b, e});
    std::cout << json{{"tokens", s.tokens}, {"char_spans", spans}}.dump() << "\n";
  });
}

// ---- kb --------------------------------------------------------------

void setup_kb(CLI::App& app) {
  auto* kb_cmd = app.add_subcommand("kb", "knowledge base inspection");
  kb_cmd->require_subcommand(1);
  auto* stats = kb_cmd->add_subcommand("stats", "load a KB and print statistics");
  auto path = std::make_shared<std::string>();
  stats->add_option("--kb", *path, "KB JSONL")->required();
  stats->callback([path]() {
    const KnowledgeBase kb = load_kb(*path);
    const KbStats& s = kb.stats();
    std::cout << "entities=" << s.entity_count << " aliases=" << s.alias_count
              << " avg_alias_len=" << s.avg_alias_len << " terms=" << s.term_df.size()
              << "\n";
  });
}

// ---- md --------------------------------------------------------------

void setup_md(CLI::App& app) {
  auto* md = app.add_subcommand("md", "mention detection");
  md->require_subcommand(1);

  {
    auto* train = md->add_subcommand("train", "train the BIO tagger");
    auto corpus_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto opts = std::make_shared<HyperOpts>();
    train->add_option("--corpus", *corpus_path, "training corpus JSONL")->required();
    train->add_option("--out", *out_path, "model output path")->required();
    add_hyper_options(train, *opts);
    train->callback([corpus_path, out_path, opts]() {
      const auto docs = load_corpus(*corpus_path);
      const TaggerModel model = train_tagger(docs, opts->hyper, opts->cfg);
      model.save(*out_path);
      std::cout << "trained tagger on " << docs.size() << " documents; final loss "
                << model.training.loss_trace.back() << "\n";
    });
  }

  {
    auto* tag = md->add_subcommand("tag", "emit mention spans");
    auto model_path = std::make_shared<std::string>();
    auto corpus_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto use_gold = std::make_shared<bool>(false);
    auto external = std::make_shared<std::string>();
    tag->add_option("--model", *model_path, "tagger model file");
    tag->add_option("--corpus", *corpus_path, "corpus JSONL")->required();
    tag->add_option("--out", *out_path, "spans JSONL output")->required();
    tag->add_flag("--gold-mentions", *use_gold, "emit gold spans instead of tagging");
    tag->add_option("--external-tagger", *external,
                    "shell command implementing the external tagger protocol");
    tag->callback([model_path, corpus_path, out_path, use_gold, external]() {
      const auto docs = load_corpus(*corpus_path);
      std::unique_ptr<MentionTagger> tagger;
      if (!*use_gold) {
        if (!external->empty()) {
          tagger = std::make_unique<ExternalProcessTagger>(*external);
        } else if (!model_path->empty()) {
          tagger = std::make_unique<TaggerModel>(TaggerModel::load(*model_path));
        } else {
          throw ValidationError("md tag needs --model, --external-tagger, or --gold-mentions");
        }
      }
      std::ofstream out(*out_path);
      if (!out) throw IoError("cannot write " + *out_path);
      long count = 0;
      for (const Document& doc : docs) {
        std::vector<std::pair<int, MentionSpan>> mentions;
        if (*use_gold) {
          mentions = gold_mentions(doc);
        } else {
          for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
            const auto& sentence = doc.sentences[static_cast<std::size_t>(s)];
            if (sentence.tokens.empty()) continue;
            for (MentionSpan& span : tagger->detect(sentence)) {
              mentions.emplace_back(s, std::move(span));
            }
          }
        }
        for (const auto& [sentence, span] : mentions) {
          jsonl::append_line(out, json{{"doc_id", doc.doc_id},
                                       {"sentence", sentence},
                                       {"start", span.start},
                                       {"end", span.end},
                                       {"surface", span.surface}});
          ++count;
        }
      }
      std::cout << "wrote " << count << " spans to " << *out_path << "\n";
    });
  }
}

// ---- cg --------------------------------------------------------------

void setup_cg(CLI::App& app) {
  auto* cg = app.add_subcommand("cg", "candidate generation");
  cg->require_subcommand(1);

  {
    auto* build = cg->add_subcommand("build-index", "build the alias index");
    auto kb_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto params = std::make_shared<Bm25Params>();
    build->add_option("--kb", *kb_path, "KB JSONL")->required();
    build->add_option("--out", *out_path, "index output path")->required();
    build->add_option("--k1", params->k1, "BM25 k1");
    build->add_option("--b", params->b, "BM25 b");
    build->callback([kb_path, out_path, params]() {
      const KnowledgeBase kb = load_kb(*kb_path);
      const AliasIndex index = AliasIndex::build(kb, *params);
      index.save(*out_path);
      std::cout << "indexed " << index.alias_count() << " alias units from "
                << kb.size() << " entities\n";
    });
  }

  {
    auto* query = cg->add_subcommand("query", "query the alias index");
    auto index_path = std::make_shared<std::string>();
    auto kb_path = std::make_shared<std::string>();
    auto mention = std::make_shared<std::string>();
    auto top_k = std::make_shared<int>(kDefaultTopK);
    query->add_option("--index", *index_path, "alias index file")->required();
    query->add_option("--mention", *mention, "mention surface form")->required();
    query->add_option("--top-k", *top_k, "result cap");
    query->add_option("--kb", *kb_path, "KB JSONL for description enrichment");
    query->callback([index_path, kb_path, mention, top_k]() {
      const AliasIndex index = AliasIndex::load(*index_path);
      CandidateSet set = index.query(*mention, *top_k);
      if (!kb_path->empty()) {
        const KnowledgeBase kb = load_kb(*kb_path);
        set = enrich_descriptions(std::move(set), kb);
      }
      for (const Candidate& c : set.candidates) {
        json rec{{"rank", c.rank}, {"entity", c.entity_id}, {"score", c.score}};
        if (!c.description.empty()) rec["description"] = c.description;
        std::cout << rec.dump() << "\n";
      }
    });
  }

  {
    auto* recall = cg->add_subcommand("gold-recall", "gold recall per corpus/source");
    auto corpora = std::make_shared<std::vector<std::string>>();
    auto sources = std::make_shared<std::vector<std::string>>();
    auto res = std::make_shared<CgResources>();
    recall->add_option("--corpus", *corpora, "corpus JSONL (repeatable)")->required();
    recall->add_option("--source", *sources, "candidate source (repeatable)")
        ->check(CLI::IsMember({"bm25", "map"}));
    res->add_options(recall, false);
    recall->callback([corpora, sources, res]() {
      if (sources->empty()) sources->push_back("bm25");
      std::cout << std::left << std::setw(10) << "source";
      for (const std::string& path : *corpora) std::cout << std::setw(24) << path;
      std::cout << "\n";
      for (const std::string& source_name : *sources) {
        CgResources local;
        local.kb_path = res->kb_path;
        local.index_path = res->index_path;
        local.map_path = res->map_path;
        local.top_k = res->top_k;
        local.fallback = res->fallback;
        local.source_name = source_name;
        const CandidateSource& source = local.make_source();
        std::cout << std::left << std::setw(10) << source_name;
        for (const std::string& path : *corpora) {
          const auto docs = load_corpus(path);
          std::cout << std::setw(24) << std::setprecision(4)
                    << gold_recall(docs, source, local.top_k);
        }
        std::cout << "\n";
      }
    });
  }
}

// ---- ed --------------------------------------------------------------

void setup_ed(CLI::App& app) {
  auto* ed = app.add_subcommand("ed", "entity disambiguation");
  ed->require_subcommand(1);

  {
    auto* train = ed->add_subcommand("train", "train the pair classifier");
    auto corpus_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto config_name = std::make_shared<std::string>("cholan");
    auto res = std::make_shared<CgResources>();
    auto opts = std::make_shared<HyperOpts>();
    auto no_local = std::make_shared<bool>(false);
    auto no_desc = std::make_shared<bool>(false);
    train->add_option("--corpus", *corpus_path, "training corpus JSONL")->required();
    train->add_option("--out", *out_path, "model output path")->required();
    train->add_option("--config", *config_name, "pipeline configuration")
        ->check(CLI::IsMember(PipelineConfig::names()));
    res->add_options(train);
    add_hyper_options(train, *opts);
    train->add_flag("--no-local-context", *no_local, "WLC ablation: drop the sentence");
    train->add_flag("--no-description", *no_desc, "drop entity descriptions");
    train->callback([corpus_path, out_path, config_name, res, opts, no_local, no_desc]() {
      PipelineConfig config = PipelineConfig::from_name(*config_name);
      res->source_name = config.cg_source;
      EdTrainOptions train_opts;
      train_opts.flags = config.pair_flags();
      if (*no_local) train_opts.flags.use_local_context = false;
      if (*no_desc) train_opts.flags.use_description = false;
      train_opts.top_k = res->top_k;
      const auto docs = load_corpus(*corpus_path);
      const CandidateSource& source = res->make_source();
      const EdModel model = train_ed(docs, source, res->require_kb(), opts->hyper,
                                     train_opts, opts->cfg);
      model.save(*out_path);
      std::cout << "trained on " << model.training.gold_mentions << " mentions ("
                << model.training.cg_missed << " cg-missed); final loss "
                << model.training.loss_trace.back() << "\n";
    });
  }

  {
    auto* score = ed->add_subcommand("score", "score mentions and pick entities");
    auto model_path = std::make_shared<std::string>();
    auto md_model_path = std::make_shared<std::string>();
    auto corpus_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto use_gold = std::make_shared<bool>(false);
    auto res = std::make_shared<CgResources>();
    score->add_option("--model", *model_path, "disambiguator model")->required();
    score->add_option("--md-model", *md_model_path, "tagger model for detection");
    score->add_option("--corpus", *corpus_path, "corpus JSONL")->required();
    score->add_option("--out", *out_path, "predictions JSONL")->required();
    score->add_flag("--gold-mentions", *use_gold, "use gold spans");
    res->add_options(score);
    score->callback([model_path, md_model_path, corpus_path, out_path, use_gold, res]() {
      const auto docs = load_corpus(*corpus_path);
      const EdModel ed_model = EdModel::load(*model_path);
      std::optional<TaggerModel> tagger;
      if (!*use_gold) {
        if (md_model_path->empty()) {
          throw ValidationError("ed score needs --md-model or --gold-mentions");
        }
        tagger = TaggerModel::load(*md_model_path);
      }
      PipelineRuntime rt;
      rt.ed = &ed_model;
      rt.kb = &res->require_kb();
      rt.source = &res->make_source();
      rt.use_description = ed_model.flags.use_description;
      rt.gold_mentions = *use_gold;
      rt.top_k = res->top_k;
      if (tagger) rt.tagger = &*tagger;
      const auto predictions = run_pipeline(rt, docs);
      std::ofstream out(*out_path);
      if (!out) throw IoError("cannot write " + *out_path);
      for (const Prediction& p : predictions) {
        jsonl::append_line(out, prediction_to_json(p));
      }
      std::cout << "wrote " << predictions.size() << " predictions to " << *out_path
                << "\n";
    });
  }
}

// ---- pipeline / eval --------------------------------------------------

struct RunArgs {
  std::string config_name = "cholan";
  std::string corpus_path;
  std::string train_corpus_path;
  std::string md_model_path;
  std::string ed_model_path;
  std::string report_path;
  std::string pred_path;
  bool use_gold = false;
  bool no_local = false;
  bool no_desc = false;
  bool count_nil = false;
  CgResources res;
  HyperOpts opts;
};

void add_run_options(CLI::App* cmd, RunArgs& args, bool with_mode_corpus_alias) {
  cmd->add_option("--config", args.config_name, "pipeline configuration")
      ->check(CLI::IsMember(PipelineConfig::names()));
  auto* corpus_opt = cmd->add_option("--corpus", args.corpus_path, "evaluation corpus");
  if (with_mode_corpus_alias) {
    cmd->add_option("--test-corpus", args.corpus_path, "evaluation corpus")
        ->excludes(corpus_opt);
    cmd->add_option("--train-corpus", args.train_corpus_path,
                    "train MD/ED models on this corpus before evaluating");
  }
  cmd->add_option("--md-model", args.md_model_path, "tagger model file");
  cmd->add_option("--ed-model", args.ed_model_path, "disambiguator model file");
  cmd->add_option("--report", args.report_path, "JSON report output");
  cmd->add_option("--pred", args.pred_path, "predictions JSONL output");
  cmd->add_flag("--gold-mentions", args.use_gold, "oracle mention spans");
  cmd->add_flag("--no-local-context", args.no_local, "WLC ablation");
  cmd->add_flag("--no-description", args.no_desc, "drop entity descriptions");
  cmd->add_flag("--count-nil", args.count_nil, "count NIL predictions as predictions");
  args.res.add_options(cmd, false);
  add_hyper_options(cmd, args.opts);
}

// Assembles (training when asked) the runtime, runs the mode, writes report.
int execute_run(RunArgs& args, EvalMode mode) {
  PipelineConfig config = PipelineConfig::from_name(args.config_name);
  config.use_local_context = !args.no_local;
  if (args.no_desc) config.use_description = false;
  config.top_k = args.res.top_k;
  config.gold_mentions = args.use_gold;
  config.fallback_bm25 = args.res.fallback == "bm25";
  config.count_nil_predictions = args.count_nil;
  config.seed = args.opts.hyper.seed;
  args.res.source_name = config.cg_source;

  if (args.corpus_path.empty()) throw ValidationError("--corpus is required");
  const auto docs = load_corpus(args.corpus_path);

  std::optional<TaggerModel> tagger;
  std::optional<EdModel> ed_model;
  std::optional<std::vector<Document>> train_docs;
  if (!args.train_corpus_path.empty()) {
    train_docs = load_corpus(args.train_corpus_path);
  }

  const bool needs_tagger =
      !args.use_gold && mode != EvalMode::gold_recall && mode != EvalMode::ed_only;
  if (needs_tagger) {
    if (!args.md_model_path.empty()) {
      tagger = TaggerModel::load(args.md_model_path);
    } else if (train_docs) {
      tagger = train_tagger(*train_docs, args.opts.hyper, args.opts.cfg);
    } else {
      throw ValidationError("need --md-model, --train-corpus, or --gold-mentions");
    }
  }
  const bool needs_ed = mode == EvalMode::end2end || mode == EvalMode::ed_only;
  if (needs_ed) {
    if (!args.ed_model_path.empty()) {
      ed_model = EdModel::load(args.ed_model_path);
    } else if (train_docs) {
      EdTrainOptions train_opts;
      train_opts.flags = config.pair_flags();
      train_opts.top_k = config.top_k;
      ed_model = train_ed(*train_docs, args.res.make_source(), args.res.require_kb(),
                          args.opts.hyper, train_opts, args.opts.cfg);
    } else {
      throw ValidationError("need --ed-model or --train-corpus");
    }
  }

  PipelineRuntime rt;
  rt.gold_mentions = args.use_gold || mode == EvalMode::ed_only;
  if (tagger) rt.tagger = &*tagger;
  if (ed_model) {
    rt.ed = &*ed_model;
    rt.use_description = ed_model->flags.use_description;
  }
  rt.top_k = config.top_k;
  if (mode != EvalMode::md_only) {
    rt.source = &args.res.make_source();
    rt.kb = &args.res.require_kb();
  }

  MetricOptions metric_options;
  metric_options.count_nil_predictions = config.count_nil_predictions;
  const EvalReport report = evaluate(rt, docs, mode, metric_options);

  if (!args.pred_path.empty() && (mode == EvalMode::end2end || mode == EvalMode::ed_only)) {
    const auto predictions = run_pipeline(rt, docs);
    std::ofstream out(args.pred_path);
    if (!out) throw IoError("cannot write " + args.pred_path);
    for (const Prediction& p : predictions) jsonl::append_line(out, prediction_to_json(p));
  }

  std::map<std::string, std::string> checksums;
  checksums["corpus"] = file_checksum(args.corpus_path);
  if (!args.train_corpus_path.empty()) {
    checksums["train_corpus"] = file_checksum(args.train_corpus_path);
  }
  if (!args.md_model_path.empty()) checksums["md_model"] = file_checksum(args.md_model_path);
  if (!args.ed_model_path.empty()) checksums["ed_model"] = file_checksum(args.ed_model_path);
  args.res.add_checksums(checksums);

  const json report_json = make_report(report, config, eval_mode_name(mode), checksums);
  write_report_file(args.report_path, report_json);
  std::cout << report_json.dump() << "\n";
  return 0;
}

void setup_pipeline(CLI::App& app) {
  auto* pipeline = app.add_subcommand("pipeline", "end-to-end runs");
  pipeline->require_subcommand(1);
  auto* run = pipeline->add_subcommand("run", "run MD -> CG -> ED and report");
  auto args = std::make_shared<RunArgs>();
  add_run_options(run, *args, true);
  run->callback([args]() { execute_run(*args, EvalMode::end2end); });
}

void setup_eval(CLI::App& app) {
  auto* eval = app.add_subcommand("eval", "evaluation harness");
  auto mode_name = std::make_shared<std::string>("end2end");
  eval->add_option("--mode", *mode_name, "evaluation mode")
      ->check(CLI::IsMember({"end2end", "ed-only", "md-only", "gold-recall"}));
  auto args = std::make_shared<RunArgs>();
  add_run_options(eval, *args, true);
  eval->callback([args, mode_name]() {
    execute_run(*args, eval_mode_from_name(*mode_name));
  });
}

}  // namespace

int main_cli(int argc, const char* const* argv) {
  CLI::App app{"entity linking toolkit: mention detection, candidate "
               "generation, entity disambiguation"};
  app.require_subcommand(1);
  setup_corpus(app);
  setup_kb(app);
  setup_md(app);
  setup_cg(app);
  setup_ed(app);
  setup_pipeline(app);
  setup_eval(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ellink
