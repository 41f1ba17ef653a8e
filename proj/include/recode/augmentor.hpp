#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "recode/bug_type.hpp"
#include "recode/corpus.hpp"
#include "recode/lexicon.hpp"

namespace recode {

struct AugmentationPlan {
  std::map<BugType, std::size_t> per_type_target;  // absent types pass through unchanged
  std::uint64_t seed = 0;
};

/// Final per-type counts of the reference balanced corpus.
AugmentationPlan reference_plan(std::uint64_t seed = 0);
AugmentationPlan plan_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AugmentationPlan& plan);

/// A replaceable keyword occurrence in a description.
struct KeywordSite {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string category;
  std::string canonical;
};

/// Keyword occurrences eligible for replacement under `type`: its strategy
/// lexicon plus augmentation groups tagged with the type.
std::vector<KeywordSite> replaceable_keywords(std::string_view text, BugType type, const LexiconSet& lexicons);

/// Every single-keyword substitution of `desc`, in seeded random order.
/// Replacements stay in the script (Latin or not) of the replaced keyword.
/// Throws NoReplaceableKeyword when nothing can be substituted.
std::vector<LabeledDescription> augment_description(const LabeledDescription& desc, const LexiconSet& lexicons,
                                                    std::uint64_t rng_seed);

struct UnreachableTarget {
  BugType bug_type;
  std::size_t target = 0;
  std::size_t achieved = 0;
};
nlohmann::json to_json(const UnreachableTarget& w);

struct BalanceResult {
  std::vector<LabeledDescription> entries;  // grouped by type in declaration order
  std::vector<UnreachableTarget> warnings;
};

BalanceResult balance_corpus(const std::vector<LabeledDescription>& corpus, const AugmentationPlan& plan,
                             const LexiconSet& lexicons);

}  // namespace recode
