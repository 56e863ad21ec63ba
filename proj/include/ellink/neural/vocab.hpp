#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace ellink::neural {

// Token vocabulary with fixed special ids. The vertical bar used as the
// mention/context separator is its own special token.
class Vocabulary {
 public:
  static constexpr int kUnk = 0;
  static constexpr int kStart = 1;
  static constexpr int kSep = 2;
  static constexpr int kBar = 3;

  Vocabulary() {
    for (const char* s : {"[UNK]", "[START]", "[SEP]", "|"}) add(s);
  }

  int add(const std::string& token) {
    auto [it, inserted] = index_.emplace(token, static_cast<int>(tokens_.size()));
    if (inserted) tokens_.push_back(token);
    return it->second;
  }

  int id(const std::string& token) const {
    const auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
  }

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  nlohmann::json to_json() const { return tokens_; }

  static Vocabulary from_json(const nlohmann::json& j) {
    Vocabulary v;
    for (const auto& t : j) v.add(t.get<std::string>());
    return v;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace ellink::neural
