#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "recode/bug_type.hpp"

namespace recode {

enum class Origin { Original, Augmented, Sampled };
std::string_view to_string(Origin o);

/// One labeled description of a text-only corpus (classifier training,
/// augmentation).
struct LabeledDescription {
  std::string id;
  std::string text;
  BugType bug_type = BugType::FunctionalDefect;
  Origin origin = Origin::Original;
  std::optional<std::string> source_id;  // set for Augmented
  friend bool operator==(const LabeledDescription&, const LabeledDescription&) = default;
};

nlohmann::json to_json(const LabeledDescription& d);
/// `line_index` supplies the id when the object has none.
LabeledDescription labeled_from_json(const nlohmann::json& j, std::size_t line_index);

/// JSON lines, one `{"text":..., "bug_type":...}` object per line; blank
/// lines are skipped.
std::vector<LabeledDescription> read_jsonl(const std::filesystem::path& path);
std::vector<LabeledDescription> parse_jsonl(std::string_view contents);
void write_jsonl(const std::filesystem::path& path, const std::vector<LabeledDescription>& items);

}  // namespace recode
