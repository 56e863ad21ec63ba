#include "ellink/kb.hpp"

#include <fstream>
#include <set>

#include "ellink/error.hpp"
#include "ellink/jsonl.hpp"
#include "ellink/text.hpp"

namespace ellink {

using jsonl::json;

void KnowledgeBase::add(EntityRecord record) {
  if (entities_.count(record.entity_id) != 0) {
    throw ValidationError("duplicate entity_id " + record.entity_id);
  }
  order_.push_back(record.entity_id);
  entities_.emplace(record.entity_id, std::move(record));
}

const EntityRecord* KnowledgeBase::find(const std::string& entity_id) const {
  auto it = entities_.find(entity_id);
  return it == entities_.end() ? nullptr : &it->second;
}

std::vector<std::string> KnowledgeBase::alias_texts(const std::string& entity_id) const {
  const EntityRecord* rec = find(entity_id);
  if (rec == nullptr) return {};
  std::vector<std::string> out;
  std::set<std::string> seen;
  const auto push = [&](const std::string& text) {
    if (text.empty()) return;
    std::string key = text::normalize_term(text);
    if (key.empty()) key = text;  // punctuation-only alias still one unit
    if (seen.insert(key).second) out.push_back(text);
  };
  push(rec->label);
  for (const std::string& a : rec->aliases) push(a);
  return out;
}

std::string KnowledgeBase::description_of(const std::string& entity_id) const {
  const EntityRecord* rec = find(entity_id);
  if (rec == nullptr) return "";
  if (!rec->description.empty()) return rec->description;
  if (rec->cross_kb_id) {
    const EntityRecord* cross = find(*rec->cross_kb_id);
    if (cross != nullptr) return cross->description;
  }
  return "";
}

KbStats KnowledgeBase::recompute_stats() const {
  KbStats stats;
  stats.entity_count = static_cast<int>(order_.size());
  long long total_len = 0;
  for (const std::string& id : order_) {
    for (const std::string& alias : alias_texts(id)) {
      ++stats.alias_count;
      const std::vector<std::string> terms = text::normalized_terms(alias);
      total_len += static_cast<long long>(terms.size());
      std::set<std::string> uniq(terms.begin(), terms.end());
      for (const std::string& t : uniq) ++stats.term_df[t];
    }
  }
  stats.avg_alias_len =
      stats.alias_count > 0 ? static_cast<double>(total_len) / stats.alias_count : 0.0;
  return stats;
}

KnowledgeBase load_kb(const std::string& path) {
  KnowledgeBase kb;
  jsonl::for_each_record(path, [&](std::size_t line_no, const json& rec) {
    const std::string where = path + ":" + std::to_string(line_no);
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string()) {
      throw ParseError(where + ": record missing id");
    }
    EntityRecord e;
    e.entity_id = rec["id"].get<std::string>();
    e.label = rec.value("label", std::string());
    if (rec.contains("aliases")) {
      for (const auto& a : rec["aliases"]) e.aliases.push_back(a.get<std::string>());
    }
    e.description = rec.value("description", std::string());
    if (rec.contains("cross_kb_id") && rec["cross_kb_id"].is_string()) {
      e.cross_kb_id = rec["cross_kb_id"].get<std::string>();
    }
    try {
      kb.add(std::move(e));
    } catch (const ValidationError& err) {
      throw ValidationError(where + ": " + err.what());
    }
  });
  kb.refresh_stats();
  return kb;
}

void save_kb(const std::string& path, const KnowledgeBase& kb) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const std::string& id : kb.ids()) {
    const EntityRecord* e = kb.find(id);
    json rec;
    rec["id"] = e->entity_id;
    rec["label"] = e->label;
    rec["aliases"] = e->aliases;
    rec["description"] = e->description;
    rec["cross_kb_id"] = e->cross_kb_id ? json(*e->cross_kb_id) : json(nullptr);
    jsonl::append_line(out, rec);
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace ellink
