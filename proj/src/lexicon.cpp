#include "recode/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "recode/error.hpp"
#include "recode/image.hpp"
#include "recode/text_util.hpp"

namespace recode {

namespace detail {
const std::map<std::string, std::string>& bundled_lexicon_files();
}

const std::vector<std::string_view>& required_categories() {
  static const std::vector<std::string_view> names = {
      category::kColor,  category::kPosition, category::kType,    category::kNegative,
      category::kDoubleNegative, category::kPrompt, category::kCrash, category::kNetwork,
      category::kNullScreen, category::kPerformance,
  };
  return names;
}

LexiconSet::LexiconSet(std::map<std::string, std::vector<LexiconEntry>, std::less<>> categories,
                       std::vector<IconTemplate> icons)
    : categories_(std::move(categories)), icons_(std::move(icons)) {
  std::sort(icons_.begin(), icons_.end(), [](const IconTemplate& a, const IconTemplate& b) { return a.id < b.id; });
  for (const auto& [name, list] : categories_) {
    auto sorted = list;
    std::stable_sort(sorted.begin(), sorted.end(), [](const LexiconEntry& a, const LexiconEntry& b) {
      return a.surface.size() > b.surface.size();
    });
    by_length_.emplace(name, std::move(sorted));
  }
}

bool LexiconSet::has_category(std::string_view name) const { return categories_.find(name) != categories_.end(); }

const std::vector<LexiconEntry>& LexiconSet::entries(std::string_view name) const {
  const auto it = categories_.find(name);
  if (it == categories_.end()) throw Error(ErrorCode::UnknownCategory, std::string(name));
  return it->second;
}

const std::vector<LexiconEntry>& LexiconSet::entries_by_length(std::string_view name) const {
  const auto it = by_length_.find(name);
  if (it == by_length_.end()) throw Error(ErrorCode::UnknownCategory, std::string(name));
  return it->second;
}

std::vector<std::string> LexiconSet::category_names() const {
  std::vector<std::string> out;
  for (const auto& [name, list] : categories_) out.push_back(name);
  return out;
}

std::vector<std::string> LexiconSet::synonyms(std::string_view cat, std::string_view canonical) const {
  std::vector<std::string> out;
  for (const auto& e : entries(cat)) {
    if (e.canonical == canonical) out.push_back(e.surface);
  }
  return out;
}

std::vector<LexiconEntry> parse_lexicon_file(std::string_view contents, std::string_view cat) {
  std::vector<LexiconEntry> out;
  std::set<std::string> seen;
  std::size_t pos = 0;
  // Skip a UTF-8 byte-order mark.
  if (contents.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;
  while (pos <= contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string line(contents.substr(pos, eol - pos));
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    LexiconEntry entry;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      entry.surface = to_lower(normalize_whitespace(line));
      entry.canonical = entry.surface;
    } else {
      entry.canonical = trim(std::string_view(line).substr(0, tab));
      entry.surface = to_lower(normalize_whitespace(std::string_view(line).substr(tab + 1)));
    }
    if (entry.surface.empty() || entry.canonical.empty()) {
      throw Error(ErrorCode::InvalidLexicon, std::string(cat) + ": empty term in line '" + line + "'");
    }
    if (!seen.insert(entry.surface).second) {
      throw Error(ErrorCode::DuplicateTerm, std::string(cat) + ": '" + entry.surface + "'");
    }
    out.push_back(std::move(entry));
  }
  return out;
}

LexiconSet build_lexicons(const std::map<std::string, std::string>& files, std::vector<IconTemplate> icons) {
  std::map<std::string, std::vector<LexiconEntry>, std::less<>> categories;
  for (const auto name : required_categories()) {
    const auto it = files.find(std::string(name));
    if (it == files.end()) throw Error(ErrorCode::MissingCategory, std::string(name));
    auto entries = parse_lexicon_file(it->second, name);
    if (entries.empty()) throw Error(ErrorCode::EmptyCategory, std::string(name));
    categories.emplace(std::string(name), std::move(entries));
  }
  if (const auto it = files.find(std::string(category::kAugmentation)); it != files.end()) {
    categories.emplace(std::string(category::kAugmentation), parse_lexicon_file(it->second, category::kAugmentation));
  } else {
    categories.emplace(std::string(category::kAugmentation), std::vector<LexiconEntry>{});
  }
  if (icons.empty()) throw Error(ErrorCode::EmptyCategory, "loading_icons");

  LexiconSet set(std::move(categories), std::move(icons));
  for (const auto& pattern : set.entries(category::kDoubleNegative)) {
    const auto negatives = match_terms(pattern.surface, set, category::kNegative);
    if (negatives.size() < 2 || negatives.size() % 2 != 0) {
      throw Error(ErrorCode::InvalidLexicon,
                  "double negative '" + pattern.surface + "' must contain an even number (>= 2) of negative words");
    }
  }
  return set;
}

namespace {

IconTemplate icon_from_image(const std::string& id, const RgbImage& image) {
  if (image.width() != kIconSize || image.height() != kIconSize) {
    throw Error(ErrorCode::InvalidLexicon, "loading icon '" + id + "' must be 16x16");
  }
  IconTemplate t;
  t.id = id;
  for (int y = 0; y < kIconSize; ++y) {
    for (int x = 0; x < kIconSize; ++x) t.bits[y * kIconSize + x] = luminance(image.at(x, y)) < 128.0 ? 1 : 0;
  }
  return t;
}

template <typename Inside>
IconTemplate draw_icon(std::string id, Inside inside) {
  IconTemplate t;
  t.id = std::move(id);
  for (int y = 0; y < kIconSize; ++y) {
    for (int x = 0; x < kIconSize; ++x) {
      const double dx = x + 0.5 - kIconSize / 2.0;
      const double dy = y + 0.5 - kIconSize / 2.0;
      t.bits[y * kIconSize + x] = inside(x, y, dx, dy) ? 1 : 0;
    }
  }
  return t;
}

}  // namespace

std::vector<IconTemplate> default_loading_templates() {
  constexpr double kPi = 3.14159265358979323846;
  std::vector<IconTemplate> out;
  out.push_back(draw_icon("ring", [](int, int, double dx, double dy) {
    const double r = std::hypot(dx, dy);
    return r <= 8.0 && r >= 4.5;
  }));
  out.push_back(draw_icon("arc", [kPi](int, int, double dx, double dy) {
    const double r = std::hypot(dx, dy);
    if (r > 8.0 || r < 4.5) return false;
    // Gap in the upper-right diagonal keeps the glyph's full extent.
    const double angle = std::atan2(-dy, dx) * 180.0 / kPi;
    return !(angle > 20.0 && angle < 70.0);
  }));
  out.push_back(draw_icon("spinner", [kPi](int, int, double dx, double dy) {
    for (int k = 0; k < 8; ++k) {
      const double a = k * kPi / 4.0;
      const double cx = 5.6 * std::cos(a);
      const double cy = 5.6 * std::sin(a);
      if (std::hypot(dx - cx, dy - cy) <= 2.45) return true;
    }
    return false;
  }));
  out.push_back(draw_icon("hourglass", [](int, int y, double dx, double) {
    if (y <= 1 || y >= kIconSize - 2) return true;
    const double half = std::abs(y + 0.5 - kIconSize / 2.0);
    return std::abs(dx) <= half;
  }));
  return out;
}

LexiconSet load_lexicons(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::MissingCategory, "lexicon directory not found: " + dir.string());
  std::map<std::string, std::string> files;
  std::vector<std::string_view> names = required_categories();
  names.push_back(category::kAugmentation);
  for (const auto name : names) {
    const fs::path path = dir / (std::string(name) + ".txt");
    if (fs::exists(path)) files.emplace(std::string(name), read_text_file(path));
  }
  std::vector<IconTemplate> icons;
  const fs::path icon_dir = dir / "loading_icons";
  if (!fs::is_directory(icon_dir)) throw Error(ErrorCode::MissingCategory, "loading_icons");
  std::vector<fs::path> pngs;
  for (const auto& entry : fs::directory_iterator(icon_dir)) {
    if (entry.path().extension() == ".png") pngs.push_back(entry.path());
  }
  std::sort(pngs.begin(), pngs.end());
  for (const auto& p : pngs) icons.push_back(icon_from_image(p.stem().string(), load_png(p)));
  return build_lexicons(files, std::move(icons));
}

const LexiconSet& default_lexicons() {
  static const LexiconSet set = build_lexicons(detail::bundled_lexicon_files(), default_loading_templates());
  return set;
}

void export_lexicons(const LexiconSet& lexicons, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "loading_icons");
  for (const auto& name : lexicons.category_names()) {
    std::string body;
    for (const auto& e : lexicons.entries(name)) {
      body += e.canonical == e.surface ? e.surface : e.canonical + "\t" + e.surface;
      body += '\n';
    }
    write_text_file(dir / (name + ".txt"), body);
  }
  for (const auto& icon : lexicons.loading_icon_templates()) {
    RgbImage img(kIconSize, kIconSize);
    for (int y = 0; y < kIconSize; ++y) {
      for (int x = 0; x < kIconSize; ++x) {
        if (icon.bits[y * kIconSize + x]) img.at(x, y) = {0, 0, 0};
      }
    }
    save_png(dir / "loading_icons" / (icon.id + ".png"), img);
  }
}

namespace {

// Length of the match of `term` at `pos`, or 0.
std::size_t match_at(std::string_view text, std::size_t pos, std::string_view term) {
  if (is_ascii_alnum(term.front()) && pos > 0 && is_ascii_alnum(text[pos - 1])) return 0;
  std::size_t q = pos;
  for (std::size_t k = 0; k < term.size(); ++k) {
    if (term[k] == ' ') {
      if (q >= text.size() || !is_ascii_space(text[q])) return 0;
      while (q < text.size() && is_ascii_space(text[q])) ++q;
      continue;
    }
    if (q >= text.size() || ascii_lower(text[q]) != term[k]) return 0;
    ++q;
  }
  if (is_ascii_alnum(term.back()) && q < text.size() && is_ascii_alnum(text[q])) return 0;
  return q - pos;
}

}  // namespace

std::vector<TermMatch> match_terms(std::string_view text, const LexiconSet& lexicons, std::string_view cat) {
  const auto& entries = lexicons.entries_by_length(cat);
  std::vector<TermMatch> out;
  const auto cps = decode_utf8(text);
  std::size_t next_free = 0;
  for (const auto& cp : cps) {
    if (cp.offset < next_free) continue;
    std::size_t best_len = 0;
    const LexiconEntry* best = nullptr;
    for (const auto& e : entries) {
      // Entries are length-sorted, but whitespace runs can stretch a match,
      // so keep scanning for the longest consumed span.
      const std::size_t len = match_at(text, cp.offset, e.surface);
      if (len > best_len) {
        best_len = len;
        best = &e;
      }
    }
    if (best != nullptr) {
      out.push_back({std::string(cat), best->canonical, std::string(text.substr(cp.offset, best_len)), cp.offset,
                     cp.offset + best_len});
      next_free = cp.offset + best_len;
    }
  }
  return out;
}

}  // namespace recode
