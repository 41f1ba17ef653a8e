#pragma once

// Synthetic report corpora with planted ground truth.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recode/bug_type.hpp"
#include "recode/corpus.hpp"
#include "recode/lexicon.hpp"
#include "recode/report.hpp"

namespace recode {

enum class Tier { NoiseFree, Noisy };
std::string_view to_string(Tier t);
std::optional<Tier> parse_tier(std::string_view name);

/// Share of each bug type among reports of the surveyed platform.
std::map<BugType, double> default_type_mix();

struct CorpusSpec {
  std::size_t n_reports = 100;
  std::map<BugType, double> per_type_mix = default_type_mix();
  double consistent_fraction = 0.5;
  Tier tier = Tier::NoiseFree;
  int width = 240;
  int height = 400;
  std::uint64_t seed = 0;
  void validate() const;
};

/// A locating-feature tuple as planted in a description.
struct PlantedMention {
  std::optional<Color> color;
  std::optional<Position> position;
  std::optional<std::string> text;
  std::optional<WidgetKind> type;
  friend auto operator<=>(const PlantedMention&, const PlantedMention&) = default;
};

struct PlantedWidget {
  Box box;  // the drawn rectangle
  WidgetKind kind;
  std::optional<std::string> text;
  Color color;
  Position position;
};

struct GeneratedReport {
  TestReport report;
  BugType bug_type;
  bool consistent;
  std::vector<PlantedWidget> widgets;
  std::vector<PlantedMention> mentions;
};

/// Report `index` of the corpus described by `spec`; reports are
/// independent of each other given the spec.
GeneratedReport generate_report(const CorpusSpec& spec, std::size_t index);
std::vector<GeneratedReport> generate_reports(const CorpusSpec& spec);
/// Writes one bundle per report (`r00000`, `r00001`, ...) under `out`.
void generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out);

/// Labeled descriptions from the same templates, `per_type` per bug type.
std::vector<LabeledDescription> generate_training_corpus(std::size_t per_type, std::uint64_t seed,
                                                         Tier tier = Tier::NoiseFree);

// Drawing primitives (blocky glyphs: 4x8 cells, 6px advance, 4px extra per space).
int text_width(std::string_view text);
/// Draws text with its top-left ink corner at (x, y); returns the ink box.
Box draw_text(RgbImage& image, int x, int y, std::string_view text, Rgb color);
void draw_icon(RgbImage& image, const IconTemplate& icon, int x, int y, int scale, Rgb color);

}  // namespace recode
