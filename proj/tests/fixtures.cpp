#include "fixtures.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "ellink/jsonl.hpp"

namespace fixtures {

using ellink::Document;
using ellink::EntityRecord;
using ellink::GoldAnnotation;
using ellink::KnowledgeBase;
using ellink::TokenizedSentence;

namespace {

EntityRecord entity(std::string id, std::string label, std::vector<std::string> aliases,
                    std::string description = "") {
  EntityRecord e;
  e.entity_id = std::move(id);
  e.label = std::move(label);
  e.aliases = std::move(aliases);
  e.description = std::move(description);
  return e;
}

TokenizedSentence sentence_of(const std::vector<std::string>& tokens) {
  TokenizedSentence s;
  std::size_t at = 0;
  for (const std::string& t : tokens) {
    s.tokens.push_back(t);
    s.char_spans.emplace_back(at, at + t.size());
    at += t.size() + 1;
  }
  return s;
}

Document one_sentence_doc(const std::string& doc_id,
                          const std::vector<std::string>& tokens, int start, int end,
                          const std::string& entity_id) {
  Document doc;
  doc.doc_id = doc_id;
  doc.sentences.push_back(sentence_of(tokens));
  GoldAnnotation g;
  g.sentence = 0;
  g.span.start = start;
  g.span.end = end;
  g.span.surface = ellink::span_surface(tokens, start, end);
  g.entity_id = entity_id;
  doc.gold.push_back(g);
  return doc;
}

}  // namespace

KnowledgeBase small_kb() {
  KnowledgeBase kb;
  kb.add(entity("Q33", "Finland",
                {"Finlande", "Finnia", "Land of Thousand Lakes", "Suomi",
                 "Suomen tasavalta"},
                "Country in northern Europe"));
  kb.add(entity("Q17", "Japan", {"Nippon", "Nihon"}, "Island country in East Asia"));
  kb.add(entity("J_team", "Japan national football team", {"Japan", "Samurai Blue"},
                "National association football team"));
  kb.add(entity("NH1", "National Highway", {}));
  kb.add(entity("NH2", "National Highway", {"NH"}));
  kb.refresh_stats();
  return kb;
}

namespace {

const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> kPool = {
      "amber", "bay",   "castle", "delta",  "east",  "fort",   "green", "harbor",
      "india", "june",  "kirk",   "lake",   "march", "north",  "old",   "park",
      "queen", "river", "south",  "tower",  "union", "valley", "west",  "york"};
  return kPool;
}

std::string random_words(ellink::Rng& rng, int count) {
  std::string out;
  for (int i = 0; i < count; ++i) {
    if (i > 0) out.push_back(' ');
    out += word_pool()[static_cast<std::size_t>(rng.uniform_int(word_pool().size()))];
  }
  return out;
}

}  // namespace

KnowledgeBase random_kb(ellink::Rng& rng, int max_entities, int max_aliases) {
  KnowledgeBase kb;
  const int entities = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_entities)));
  for (int e = 0; e < entities; ++e) {
    const int aliases = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_aliases)));
    std::vector<std::string> alias_list;
    for (int a = 0; a < aliases; ++a) {
      alias_list.push_back(random_words(rng, 1 + static_cast<int>(rng.uniform_int(3))));
    }
    kb.add(entity("E" + std::to_string(e),
                  random_words(rng, 1 + static_cast<int>(rng.uniform_int(3))),
                  std::move(alias_list)));
  }
  kb.refresh_stats();
  return kb;
}

std::string random_query(ellink::Rng& rng) {
  return random_words(rng, 1 + static_cast<int>(rng.uniform_int(3)));
}

RecallFixture recall_fixture() {
  RecallFixture fx;
  // Nine entities whose aliases contain their mention token; the tenth
  // ("Ghostwood" -> R9 "Blackpine Forest") shares no term with any alias,
  // so BM25 can never retrieve it.
  const std::vector<std::pair<std::string, std::string>> retrievable = {
      {"Maplewood", "Maplewood"},     {"Silverton", "Silverton"},
      {"Crestfall", "Crestfall"},     {"Windmere", "Windmere"},
      {"Oakridge", "Oakridge"},       {"Pinehurst", "Pinehurst"},
      {"Larkspur", "Larkspur"},       {"Ashford", "Ashford"},
      {"Thornbury", "Thornbury"},
  };
  for (std::size_t i = 0; i < retrievable.size(); ++i) {
    fx.kb.add(entity("R" + std::to_string(i), retrievable[i].second + " Town",
                     {retrievable[i].second}));
  }
  fx.kb.add(entity("R9", "Blackpine Forest", {"Blackpine"}));
  fx.kb.refresh_stats();

  for (std::size_t i = 0; i < retrievable.size(); ++i) {
    fx.docs.push_back(one_sentence_doc(
        "d" + std::to_string(i), {"people", "visited", retrievable[i].first, "today"}, 2,
        2, "R" + std::to_string(i)));
  }
  fx.docs.push_back(
      one_sentence_doc("d9", {"people", "visited", "Ghostwood", "today"}, 2, 2, "R9"));
  return fx;
}

namespace {

struct SyntheticEntity {
  std::string id;
  std::string surface;  // shared ambiguous mention token
  std::string label;
  std::string description;
  std::vector<std::string> context;  // six unique context words
};

const std::vector<SyntheticEntity>& synthetic_entities() {
  static const std::vector<SyntheticEntity> kEntities = {
      {"QA1", "Arlen", "Arlen River", "river flowing through the misty valley",
       {"flooded", "banks", "fishermen", "waters", "bridge", "rowed"}},
      {"QA2", "Arlen", "Arlen Motors", "car maker known for compact engines",
       {"factory", "engines", "cars", "workers", "showroom", "dealership"}},
      {"QB1", "Brimley", "Brimley Peak", "mountain rising above the high plateau",
       {"climbers", "summit", "snow", "trail", "ridge", "slopes"}},
      {"QB2", "Brimley", "Brimley Biscuits", "bakery famous for oat biscuits",
       {"bakery", "ovens", "flour", "biscuits", "pastry", "sugar"}},
      {"QC1", "Corda", "Corda Observatory", "telescope site on the dry mesa",
       {"telescope", "stars", "astronomers", "dome", "comet", "lenses"}},
      {"QC2", "Corda", "Corda Shipping", "freight company moving cargo by sea",
       {"cargo", "docks", "containers", "freighter", "harbor", "crates"}},
      {"QD1", "Dunmore", "Dunmore Abbey", "monastery founded by early monks",
       {"monks", "cloister", "prayers", "chapel", "bells", "manuscripts"}},
      {"QD2", "Dunmore", "Dunmore Airfield", "airstrip serving light aircraft",
       {"pilots", "runway", "hangar", "aircraft", "takeoff", "propeller"}},
      {"QE1", "Ellery", "Ellery Gallery", "museum showing modern paintings",
       {"paintings", "curator", "exhibit", "sculpture", "canvas", "visitors"}},
      {"QE2", "Ellery", "Ellery Dairy", "farm producing cheese and butter",
       {"cows", "cheese", "butter", "milking", "pasture", "churns"}},
  };
  return kEntities;
}

}  // namespace

SyntheticTask synthetic_task() {
  SyntheticTask task;
  for (const SyntheticEntity& e : synthetic_entities()) {
    task.kb.add(entity(e.id, e.label, {e.surface}, e.description));
  }
  // Distractors keep the index from being only the ambiguous pairs.
  task.kb.add(entity("QX1", "Veldt Plain", {"Veldt"}, "grassland region"));
  task.kb.add(entity("QX2", "Mistral Wind", {"Mistral"}, "seasonal north wind"));
  task.kb.refresh_stats();

  int doc_id = 0;
  for (const SyntheticEntity& e : synthetic_entities()) {
    const auto& w = e.context;
    const std::string& m = e.surface;
    // Four training sentences per entity. Mention positions cover 0..3 so
    // token identity, not position, is the detection signal; the context
    // words pin down which pair member is meant.
    const std::vector<std::pair<std::vector<std::string>, int>> train_sents = {
        {{m, w[0], "the", w[1]}, 0},
        {{"the", m, w[2], w[3]}, 1},
        {{"the", w[4], m, w[2]}, 2},
        {{w[0], w[5], "and", m}, 3},
    };
    for (const auto& [tokens, at] : train_sents) {
      task.train.push_back(one_sentence_doc("train" + std::to_string(doc_id++), tokens,
                                            at, at, e.id));
    }
    // One held-out sentence recombining seen context words in a seen frame.
    task.test.push_back(one_sentence_doc("test" + std::to_string(doc_id++),
                                         {"the", m, w[1], w[4]}, 1, 1, e.id));
  }
  return task;
}

void write_synthetic_task(const SyntheticTask& task, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  ellink::save_corpus(dir + "/train.jsonl", task.train);
  ellink::save_corpus(dir + "/test.jsonl", task.test);
  ellink::save_kb(dir + "/kb.jsonl", task.kb);

  // Matching prior map: each surface lists its pair, higher prior first.
  std::ofstream out(dir + "/candidate_map.jsonl");
  const auto& ents = synthetic_entities();
  for (std::size_t i = 0; i < ents.size(); i += 2) {
    nlohmann::json rec;
    rec["mention"] = ents[i].surface;
    rec["candidates"] = {
        {{"entity", ents[i].id}, {"prior", 0.6}, {"description", ents[i].description}},
        {{"entity", ents[i + 1].id},
         {"prior", 0.4},
         {"description", ents[i + 1].description}}};
    ellink::jsonl::append_line(out, rec);
  }
}

std::string temp_dir(const std::string& hint) {
  namespace fs = std::filesystem;
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("ellink_test_" + hint + "_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace fixtures
