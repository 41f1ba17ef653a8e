#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recode/lexicon.hpp"
#include "recode/types.hpp"

namespace recode {

struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

/// A widget referenced in a description, with its locating features.
struct WidgetMention {
  CharSpan head_span;
  std::optional<Color> color;
  std::optional<Position> position;
  std::optional<std::string> text_literal;
  std::optional<WidgetKind> type_name;
  /// Structure labels of the attached modifiers (ATT, F), for traces only.
  std::vector<std::string> structures;

  bool has_feature() const { return color || position || text_literal || type_name; }
  friend bool operator==(const WidgetMention&, const WidgetMention&) = default;
};

enum class Polarity { Negative, Positive };
std::string_view to_string(Polarity p);

struct TextAnalysis {
  std::vector<WidgetMention> mentions;
  Polarity polarity = Polarity::Positive;
  std::optional<std::string> prompt_text;
};

struct TextDecomposerConfig {
  int attach_window = 6;  // tokens, clause-bounded
};

std::vector<WidgetMention> extract_mentions(std::string_view text, const LexiconSet& lexicons,
                                            const TextDecomposerConfig& cfg = {});
Polarity polarity(std::string_view text, const LexiconSet& lexicons);
/// Quoted span after the first prompt word, else the rest of its clause.
std::optional<std::string> extract_prompt_text(std::string_view text, const LexiconSet& lexicons);
TextAnalysis analyze_text(std::string_view text, const LexiconSet& lexicons, const TextDecomposerConfig& cfg = {});

struct QuotedSpan {
  CharSpan outer;    // including the quote marks
  CharSpan content;  // between the marks
};

/// ASCII single/double quotes, curly quotes and CJK corner brackets. An
/// ASCII apostrophe only opens or closes a quote at a word boundary.
std::vector<QuotedSpan> find_quoted_spans(std::string_view text);

}  // namespace recode
