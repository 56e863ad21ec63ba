#include "ellink/corpus.hpp"

#include <fstream>
#include <unordered_set>

#include "ellink/error.hpp"
#include "ellink/jsonl.hpp"
#include "ellink/text.hpp"

namespace ellink {

using jsonl::json;

std::string span_surface(const std::vector<std::string>& tokens, int start, int end) {
  std::string out;
  for (int t = start; t <= end; ++t) {
    if (t > start) out.push_back(' ');
    out += tokens[static_cast<std::size_t>(t)];
  }
  return out;
}

TokenizedSentence tokenize(const std::string& text) {
  TokenizedSentence s;
  for (const text::RawToken& t : text::split_tokens(text)) {
    s.tokens.push_back(t.token);
    s.char_spans.emplace_back(t.begin, t.end);
  }
  return s;
}

namespace {

TokenizedSentence parse_sentence(const json& rec, const std::string& where) {
  TokenizedSentence s;
  if (!rec.contains("tokens") || !rec["tokens"].is_array()) {
    throw ParseError(where + ": sentence missing tokens array");
  }
  for (const auto& t : rec["tokens"]) {
    if (!t.is_string() || t.get<std::string>().empty()) {
      throw ValidationError(where + ": tokens must be non-empty strings");
    }
    s.tokens.push_back(t.get<std::string>());
  }
  if (rec.contains("char_spans")) {
    for (const auto& sp : rec["char_spans"]) {
      if (!sp.is_array() || sp.size() != 2) {
        throw ParseError(where + ": char_span must be [begin, end]");
      }
      s.char_spans.emplace_back(sp[0].get<std::size_t>(), sp[1].get<std::size_t>());
    }
    if (s.char_spans.size() != s.tokens.size()) {
      throw ValidationError(where + ": char_spans count != token count");
    }
    std::size_t prev_end = 0;
    for (std::size_t i = 0; i < s.char_spans.size(); ++i) {
      const auto [b, e] = s.char_spans[i];
      if (b >= e || (i > 0 && b < prev_end)) {
        throw ValidationError(where + ": char_spans must be increasing and non-overlapping");
      }
      prev_end = e;
    }
  }
  return s;
}

Document parse_document(const json& rec, const std::string& where) {
  Document doc;
  if (!rec.is_object() || !rec.contains("doc_id") || !rec["doc_id"].is_string()) {
    throw ParseError(where + ": record missing doc_id");
  }
  doc.doc_id = rec["doc_id"].get<std::string>();
  const std::string ctx = where + " (doc " + doc.doc_id + ")";
  if (rec.contains("text") && rec["text"].is_string()) {
    doc.text = rec["text"].get<std::string>();
  }
  if (rec.contains("sentences")) {
    for (const auto& sent : rec["sentences"]) {
      TokenizedSentence s = parse_sentence(sent, ctx);
      s.doc_id = doc.doc_id;
      doc.sentences.push_back(std::move(s));
    }
  } else if (!doc.text.empty()) {
    TokenizedSentence s = tokenize(doc.text);
    s.doc_id = doc.doc_id;
    doc.sentences.push_back(std::move(s));
  }
  if (rec.contains("gold")) {
    for (const auto& g : rec["gold"]) {
      GoldAnnotation ann;
      ann.sentence = g.value("sentence", 0);
      ann.span.start = g.at("start").get<int>();
      ann.span.end = g.at("end").get<int>();
      ann.entity_id = g.value("entity", std::string("NIL"));
      if (ann.sentence < 0 ||
          ann.sentence >= static_cast<int>(doc.sentences.size())) {
        throw ValidationError(ctx + ": gold annotation sentence index out of range");
      }
      const auto& toks = doc.sentences[static_cast<std::size_t>(ann.sentence)].tokens;
      if (ann.span.start < 0 || ann.span.start > ann.span.end ||
          ann.span.end >= static_cast<int>(toks.size())) {
        throw ValidationError(ctx + ": gold span [" + std::to_string(ann.span.start) +
                              "," + std::to_string(ann.span.end) + "] out of range");
      }
      ann.span.surface = span_surface(toks, ann.span.start, ann.span.end);
      doc.gold.push_back(std::move(ann));
    }
  }
  return doc;
}

}  // namespace

std::vector<Document> load_corpus(const std::string& path) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  jsonl::for_each_record(path, [&](std::size_t line_no, const json& rec) {
    Document doc = parse_document(rec, path + ":" + std::to_string(line_no));
    if (!seen.insert(doc.doc_id).second) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": duplicate doc_id " + doc.doc_id);
    }
    docs.push_back(std::move(doc));
  });
  return docs;
}

void save_corpus(const std::string& path, const std::vector<Document>& docs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const Document& doc : docs) {
    json rec;
    rec["doc_id"] = doc.doc_id;
    rec["text"] = doc.text;
    json sents = json::array();
    for (const TokenizedSentence& s : doc.sentences) {
      json sent;
      sent["tokens"] = s.tokens;
      json spans = json::array();
      for (const auto& [b, e] : s.char_spans) spans.push_back({b, e});
      sent["char_spans"] = spans;
      sents.push_back(std::move(sent));
    }
    rec["sentences"] = std::move(sents);
    json gold = json::array();
    for (const GoldAnnotation& g : doc.gold) {
      gold.push_back({{"sentence", g.sentence},
                      {"start", g.span.start},
                      {"end", g.span.end},
                      {"entity", g.entity_id}});
    }
    rec["gold"] = std::move(gold);
    jsonl::append_line(out, rec);
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace ellink
