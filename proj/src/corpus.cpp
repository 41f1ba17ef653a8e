#include "recode/corpus.hpp"

#include <sstream>

#include "recode/error.hpp"
#include "recode/text_util.hpp"

namespace recode {

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::Original: return "original";
    case Origin::Augmented: return "augmented";
    case Origin::Sampled: return "sampled";
  }
  return "original";
}

nlohmann::json to_json(const LabeledDescription& d) {
  nlohmann::json j = {{"id", d.id}, {"text", d.text}, {"bug_type", to_string(d.bug_type)}, {"origin", to_string(d.origin)}};
  if (d.source_id) j["source_id"] = *d.source_id;
  return j;
}

LabeledDescription labeled_from_json(const nlohmann::json& j, std::size_t line_index) {
  if (!j.is_object() || !j.contains("text") || !j["text"].is_string() || !j.contains("bug_type") ||
      !j["bug_type"].is_string()) {
    throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_index + 1) + ": expected text and bug_type");
  }
  LabeledDescription d;
  d.text = j["text"].get<std::string>();
  if (trim(d.text).empty()) throw Error(ErrorCode::EmptyDescription, "line " + std::to_string(line_index + 1));
  const auto type = parse_bug_type(j["bug_type"].get<std::string>());
  if (!type) throw Error(ErrorCode::InvalidArgument, "unknown bug type: " + j["bug_type"].get<std::string>());
  d.bug_type = *type;
  d.id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : std::to_string(line_index);
  if (j.contains("origin") && j["origin"].is_string()) {
    const auto o = j["origin"].get<std::string>();
    if (o == "augmented") d.origin = Origin::Augmented;
    else if (o == "sampled") d.origin = Origin::Sampled;
  }
  if (j.contains("source_id") && j["source_id"].is_string()) d.source_id = j["source_id"].get<std::string>();
  return d;
}

std::vector<LabeledDescription> parse_jsonl(std::string_view contents) {
  std::vector<LabeledDescription> out;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      ++index;
      continue;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(index + 1) + ": " + e.what());
    }
    out.push_back(labeled_from_json(j, index));
    ++index;
  }
  return out;
}

std::vector<LabeledDescription> read_jsonl(const std::filesystem::path& path) { return parse_jsonl(read_text_file(path)); }

void write_jsonl(const std::filesystem::path& path, const std::vector<LabeledDescription>& items) {
  std::string out;
  for (const auto& d : items) out += to_json(d).dump() + "\n";
  write_text_file(path, out);
}

}  // namespace recode
