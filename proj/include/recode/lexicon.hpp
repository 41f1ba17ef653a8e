#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace recode {

namespace category {
inline constexpr std::string_view kColor = "color_words";
inline constexpr std::string_view kPosition = "position_words";
inline constexpr std::string_view kType = "type_words";
inline constexpr std::string_view kNegative = "negative_words";
inline constexpr std::string_view kDoubleNegative = "double_negatives";
inline constexpr std::string_view kPrompt = "prompt_words";
inline constexpr std::string_view kCrash = "crash_keywords";
inline constexpr std::string_view kNetwork = "network_keywords";
inline constexpr std::string_view kNullScreen = "null_screen_keywords";
inline constexpr std::string_view kPerformance = "performance_keywords";
/// Optional: replacement groups for bug types without a strategy lexicon.
inline constexpr std::string_view kAugmentation = "augmentation_keywords";
}  // namespace category

/// Categories that must be present and non-empty in a lexicon directory.
const std::vector<std::string_view>& required_categories();

struct LexiconEntry {
  std::string canonical;
  std::string surface;  // lowercase
  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

inline constexpr int kIconSize = 16;

struct IconTemplate {
  std::string id;
  std::array<std::uint8_t, kIconSize * kIconSize> bits{};  // 1 = ink
  friend bool operator==(const IconTemplate&, const IconTemplate&) = default;
};

class LexiconSet {
 public:
  LexiconSet(std::map<std::string, std::vector<LexiconEntry>, std::less<>> categories,
             std::vector<IconTemplate> icons);

  bool has_category(std::string_view name) const;
  /// Entries in file order. Throws UnknownCategory.
  const std::vector<LexiconEntry>& entries(std::string_view name) const;
  /// Entries sorted by descending surface length (matching order).
  const std::vector<LexiconEntry>& entries_by_length(std::string_view name) const;
  std::vector<std::string> category_names() const;
  /// Sorted by id.
  const std::vector<IconTemplate>& loading_icon_templates() const { return icons_; }

  /// Surfaces sharing the canonical key of `surface` within a category.
  std::vector<std::string> synonyms(std::string_view category, std::string_view canonical) const;

  friend bool operator==(const LexiconSet& a, const LexiconSet& b) {
    return a.categories_ == b.categories_ && a.icons_ == b.icons_;
  }

 private:
  std::map<std::string, std::vector<LexiconEntry>, std::less<>> categories_;
  std::map<std::string, std::vector<LexiconEntry>, std::less<>> by_length_;
  std::vector<IconTemplate> icons_;
};

/// Parses `canonical<TAB>surface` / bare `surface` lines with `#` comments.
std::vector<LexiconEntry> parse_lexicon_file(std::string_view contents, std::string_view category);

/// Validates and assembles a set from raw category files.
LexiconSet build_lexicons(const std::map<std::string, std::string>& files, std::vector<IconTemplate> icons);

LexiconSet load_lexicons(const std::filesystem::path& dir);
/// Lexicons compiled into the library.
const LexiconSet& default_lexicons();
/// Writes a set in the on-disk layout load_lexicons reads.
void export_lexicons(const LexiconSet& lexicons, const std::filesystem::path& dir);

/// Procedurally drawn 16x16 spinner, ring, arc and hourglass glyphs.
std::vector<IconTemplate> default_loading_templates();

struct TermMatch {
  std::string category;
  std::string canonical;
  std::string surface;  // the matched slice of the input
  std::size_t begin = 0;
  std::size_t end = 0;  // byte offsets, half-open
  friend bool operator==(const TermMatch&, const TermMatch&) = default;
};

/// Case-insensitive, non-overlapping, longest-match-first scan. Latin terms
/// must sit on word boundaries; a space in a term matches any whitespace run.
std::vector<TermMatch> match_terms(std::string_view text, const LexiconSet& lexicons,
                                   std::string_view category);

}  // namespace recode
