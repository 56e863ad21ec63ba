#include "ellink/jsonl.hpp"

#include <fstream>

#include "ellink/error.hpp"

namespace ellink::jsonl {

void for_each_record(const std::string& path,
                     const std::function<void(std::size_t, const json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    fn(line_no, record);
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& doc, int indent) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << doc.dump(indent) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

void append_line(std::ostream& out, const json& record) {
  out << record.dump() << "\n";
}

}  // namespace ellink::jsonl
