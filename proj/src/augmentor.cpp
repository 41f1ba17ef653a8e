#include "recode/augmentor.hpp"

#include <algorithm>
#include <set>

#include "recode/error.hpp"
#include "recode/rng.hpp"
#include "recode/text_util.hpp"

namespace recode {

namespace {

std::string_view strategy_category(BugType t) {
  switch (t) {
    case BugType::Crash: return category::kCrash;
    case BugType::NetworkError: return category::kNetwork;
    case BugType::NullScreen: return category::kNullScreen;
    case BugType::PerformanceProblem: return category::kPerformance;
    default: return {};
  }
}

// "layout-problem+display-problem/display" applies to both listed types.
bool group_applies(std::string_view canonical, BugType t) {
  const auto slash = canonical.find('/');
  if (slash == std::string_view::npos) return false;
  std::string_view types = canonical.substr(0, slash);
  while (!types.empty()) {
    const auto plus = types.find('+');
    if (types.substr(0, plus) == to_string(t)) return true;
    if (plus == std::string_view::npos) break;
    types.remove_prefix(plus + 1);
  }
  return false;
}

bool is_latin(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

std::string match_case(std::string replacement, std::string_view original) {
  if (!original.empty() && original.front() >= 'A' && original.front() <= 'Z' && !replacement.empty() &&
      replacement.front() >= 'a' && replacement.front() <= 'z') {
    replacement.front() = static_cast<char>(replacement.front() - 'a' + 'A');
  }
  return replacement;
}

std::vector<std::string> substitutions(const std::string& text, BugType type, const LexiconSet& lexicons) {
  std::vector<std::string> out;
  for (const auto& site : replaceable_keywords(text, type, lexicons)) {
    const std::string_view slice = std::string_view(text).substr(site.begin, site.end - site.begin);
    const std::string folded = normalize_whitespace(to_lower(slice));
    const bool latin = is_latin(slice);
    for (const auto& surface : lexicons.synonyms(site.category, site.canonical)) {
      if (surface == folded || is_latin(surface) != latin) continue;
      out.push_back(text.substr(0, site.begin) + match_case(surface, slice) + text.substr(site.end));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase(out, text);
  return out;
}

}  // namespace

AugmentationPlan reference_plan(std::uint64_t seed) {
  AugmentationPlan plan;
  plan.seed = seed;
  plan.per_type_target = {
      {BugType::FunctionalDefect, 480}, {BugType::Crash, 497},         {BugType::LayoutProblem, 301},
      {BugType::DisplayProblem, 424},   {BugType::NetworkError, 481},  {BugType::NullScreen, 294},
      {BugType::PerformanceProblem, 454}, {BugType::ErrorPrompt, 367}, {BugType::GarbledError, 72},
      {BugType::TransitionProblem, 370},
  };
  return plan;
}

AugmentationPlan plan_from_json(const nlohmann::json& j) {
  AugmentationPlan plan;
  try {
    plan.seed = j.value("seed", std::uint64_t{0});
    for (const auto& [name, value] : j.at("targets").items()) {
      const auto type = parse_bug_type(name);
      if (!type) throw Error(ErrorCode::InvalidArgument, "unknown bug type in plan: " + name);
      const auto n = value.get<long long>();
      if (n <= 0) throw Error(ErrorCode::InvalidArgument, "plan target must be positive: " + name);
      plan.per_type_target[*type] = static_cast<std::size_t>(n);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed plan: ") + e.what());
  }
  if (plan.per_type_target.empty()) throw Error(ErrorCode::InvalidArgument, "plan has no targets");
  return plan;
}

nlohmann::json to_json(const AugmentationPlan& plan) {
  nlohmann::json targets = nlohmann::json::object();
  for (const auto& [t, n] : plan.per_type_target) targets[std::string(to_string(t))] = n;
  return {{"seed", plan.seed}, {"targets", targets}};
}

std::vector<KeywordSite> replaceable_keywords(std::string_view text, BugType type, const LexiconSet& lexicons) {
  std::vector<KeywordSite> sites;
  const auto cat = strategy_category(type);
  if (!cat.empty()) {
    for (const auto& m : match_terms(text, lexicons, cat)) sites.push_back({m.begin, m.end, m.category, m.canonical});
  }
  if (lexicons.has_category(category::kAugmentation)) {
    for (const auto& m : match_terms(text, lexicons, category::kAugmentation)) {
      if (!group_applies(m.canonical, type)) continue;
      const bool overlaps = std::any_of(sites.begin(), sites.end(),
                                        [&m](const KeywordSite& s) { return m.begin < s.end && s.begin < m.end; });
      if (!overlaps) sites.push_back({m.begin, m.end, m.category, m.canonical});
    }
  }
  std::sort(sites.begin(), sites.end(), [](const KeywordSite& a, const KeywordSite& b) { return a.begin < b.begin; });
  return sites;
}

std::vector<LabeledDescription> augment_description(const LabeledDescription& desc, const LexiconSet& lexicons,
                                                    std::uint64_t rng_seed) {
  auto texts = substitutions(desc.text, desc.bug_type, lexicons);
  if (texts.empty()) {
    throw Error(ErrorCode::NoReplaceableKeyword, "no replaceable keyword for " + std::string(to_string(desc.bug_type)) +
                                                     " in description " + desc.id);
  }
  Rng rng(derive_seed(rng_seed, desc.id));
  rng.shuffle(texts);
  std::vector<LabeledDescription> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    LabeledDescription v;
    v.id = desc.id + "~" + std::to_string(i);
    v.text = std::move(texts[i]);
    v.bug_type = desc.bug_type;
    v.origin = Origin::Augmented;
    v.source_id = desc.source_id.value_or(desc.id);
    out.push_back(std::move(v));
  }
  return out;
}

nlohmann::json to_json(const UnreachableTarget& w) {
  return {{"warning", "UnreachableTarget"}, {"bug_type", to_string(w.bug_type)}, {"target", w.target}, {"achieved", w.achieved}};
}

BalanceResult balance_corpus(const std::vector<LabeledDescription>& corpus, const AugmentationPlan& plan,
                             const LexiconSet& lexicons) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "nothing to balance");
  for (const auto& [t, n] : plan.per_type_target) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "plan target must be positive: " + std::string(to_string(t)));
  }

  std::array<std::vector<LabeledDescription>, kBugTypeCount> per_type;
  std::array<std::optional<UnreachableTarget>, kBugTypeCount> warnings;

#pragma omp parallel for schedule(dynamic)
  for (std::size_t ti = 0; ti < kBugTypeCount; ++ti) {
    const BugType type = kAllBugTypes[ti];
    std::vector<LabeledDescription> originals;
    for (const auto& d : corpus) {
      if (d.bug_type == type) originals.push_back(d);
    }
    auto& out = per_type[ti];
    // Types without a target pass through.
    const auto it = plan.per_type_target.find(type);
    if (it == plan.per_type_target.end()) {
      out = std::move(originals);
      continue;
    }
    const std::size_t target = it->second;
    Rng rng(derive_seed(plan.seed, ti));

    if (originals.size() >= target) {
      std::vector<std::size_t> idx(originals.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      rng.shuffle(idx);
      idx.resize(target);
      std::sort(idx.begin(), idx.end());
      const bool sampled = originals.size() > target;
      for (const auto i : idx) {
        out.push_back(originals[i]);
        if (sampled) out.back().origin = Origin::Sampled;
      }
      continue;
    }

    out = originals;
    std::size_t need = target - originals.size();
    std::set<std::string> seen;
    for (const auto& d : originals) seen.insert(d.text);

    // Breadth-first over substitution depth: depth-1 variants of the
    // originals first, variants of variants only when those run out.
    std::vector<LabeledDescription> frontier = originals;
    std::size_t counter = 0;
    while (need > 0 && !frontier.empty()) {
      std::vector<LabeledDescription> level;
      for (const auto& src : frontier) {
        std::vector<LabeledDescription> variants;
        try {
          variants = augment_description(src, lexicons, plan.seed);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoReplaceableKeyword) throw;
          continue;
        }
        for (auto& v : variants) {
          if (!seen.insert(v.text).second) continue;
          v.id = std::string(to_string(type)) + "-aug-" + std::to_string(counter++);
          level.push_back(std::move(v));
        }
      }
      if (level.size() <= need) {
        need -= level.size();
        out.insert(out.end(), level.begin(), level.end());
        frontier = std::move(level);
        continue;
      }
      rng.shuffle(level);
      level.resize(need);
      std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
      out.insert(out.end(), level.begin(), level.end());
      need = 0;
    }
    if (need > 0) warnings[ti] = UnreachableTarget{type, target, out.size()};
  }

  BalanceResult result;
  for (std::size_t ti = 0; ti < kBugTypeCount; ++ti) {
    result.entries.insert(result.entries.end(), per_type[ti].begin(), per_type[ti].end());
    if (warnings[ti]) result.warnings.push_back(*warnings[ti]);
  }
  return result;
}

}  // namespace recode
