#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ellink {

struct EntityRecord {
  std::string entity_id;
  std::string label;
  std::vector<std::string> aliases;
  std::string description;
  std::optional<std::string> cross_kb_id;
};

// Aggregate statistics over the searchable alias set (label + aliases,
// deduplicated per entity by normalized text).
struct KbStats {
  int entity_count = 0;
  int alias_count = 0;
  double avg_alias_len = 0.0;               // mean token length of alias units
  std::map<std::string, int> term_df;       // term -> number of alias units containing it

  friend bool operator==(const KbStats&, const KbStats&) = default;
};

class KnowledgeBase {
 public:
  void add(EntityRecord record);  // throws ValidationError on duplicate id

  const EntityRecord* find(const std::string& entity_id) const;
  bool contains(const std::string& entity_id) const { return find(entity_id) != nullptr; }
  std::size_t size() const { return order_.size(); }

  // Entity ids in insertion order (deterministic iteration).
  const std::vector<std::string>& ids() const { return order_; }

  // Searchable alias texts for one entity: label first, then aliases,
  // deduplicated by normalized form.
  std::vector<std::string> alias_texts(const std::string& entity_id) const;

  // Entity description, following cross_kb_id to a sibling record when the
  // record's own description is empty.
  std::string description_of(const std::string& entity_id) const;

  const KbStats& stats() const { return stats_; }
  KbStats recompute_stats() const;
  void refresh_stats() { stats_ = recompute_stats(); }

 private:
  std::unordered_map<std::string, EntityRecord> entities_;
  std::vector<std::string> order_;
  KbStats stats_;
};

// Loads a JSONL knowledge base; statistics are computed on load.
KnowledgeBase load_kb(const std::string& path);

void save_kb(const std::string& path, const KnowledgeBase& kb);

}  // namespace ellink
