#pragma once

#include <functional>
#include <string>

#include <json.hpp>

namespace ellink::jsonl {

using json = nlohmann::json;

// Calls `fn(line_number, record)` for every non-blank line. Line numbers are
// 1-based. Malformed JSON raises ParseError naming the file and line.
void for_each_record(const std::string& path,
                     const std::function<void(std::size_t, const json&)>& fn);

// Loads a whole-file JSON document (model checkpoints, indexes, reports).
json load_json(const std::string& path);

void save_json(const std::string& path, const json& doc, int indent = -1);

void append_line(std::ostream& out, const json& record);

}  // namespace ellink::jsonl
