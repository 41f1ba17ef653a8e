#include "recode/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recode/error.hpp"
#include "recode/rng.hpp"
#include "recode/screen.hpp"
#include "recode/text_util.hpp"

namespace recode {

namespace {

constexpr int kGlyphW = 4;
constexpr int kGlyphH = 8;
constexpr int kAdvance = 6;
constexpr int kSpaceExtra = 4;
constexpr int kBar = 40;

constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kInk{0, 0, 0};
constexpr Rgb kToolbar{33, 150, 243};
constexpr Rgb kDivider{200, 200, 200};
constexpr Rgb kNav{200, 200, 200};
constexpr Rgb kPlaceholder{150, 150, 150};
constexpr Rgb kOutline{90, 90, 90};
constexpr Rgb kIconInk{60, 60, 60};

// Screen vocabularies. None of these contains a lexicon term, and no wrong
// label is a substring of a screen label or the other way round.
const std::vector<std::string> kLabels = {"Login",  "Submit",  "Cancel", "Share",   "Profile", "Settings",
                                          "Orders", "Cart",    "Wallet", "Music",   "Notes",   "Friends",
                                          "Address", "Payment", "Help",  "Follow",  "Coupons", "Tickets",
                                          "Events", "Videos",  "Balance", "Points", "Inbox",   "Maps"};
const std::vector<std::string> kWrongLabels = {"Refund",  "Archive", "Ranking", "Invoice",  "Rewards", "Gallery",
                                               "Bookmark", "History", "Contacts", "Reviews", "Vouchers", "Tracking"};
const std::vector<std::string> kPlaceholders = {"Email", "Phone", "Nickname", "Password", "Username"};
const std::vector<std::string> kTitles = {"Account", "Messages", "Market", "Library", "Dashboard"};
const std::vector<std::string> kNavLabels = {"Home", "Discover", "Mine"};
const std::vector<std::string> kPages = {"settings", "cart", "profile", "orders", "wallet", "payment", "friends", "music"};
const std::vector<Color> kFillColors = {Color::Red,    Color::Orange, Color::Green, Color::Cyan,  Color::Blue,
                                        Color::Purple, Color::Pink,   Color::Brown, Color::Black, Color::Gray};

const std::vector<std::string> kCrashMessages = {"App stopped running", "App has stopped", "No response",
                                                 "App keeps stopping", "Abnormal exit"};
const std::vector<std::string> kErrorMessages = {"SQL ERROR", "Disk full", "Invalid input", "Permission denied",
                                                 "Operation failed", "Unknown error"};
// On-page HTTP errors and dialog-sized network messages.
const std::vector<std::string> kHttpPages = {"404 Not Found", "502 Bad Gateway", "503 Service Unavailable",
                                             "504 Gateway Timeout", "500 Internal Server Error"};
const std::vector<std::string> kNetworkDialogs = {"Server error", "Connection failed", "Network error"};

// ---- drawing ------------------------------------------------------------

struct Canvas {
  RgbImage image;
  std::vector<TextRegion> texts;
  std::vector<PlantedWidget> widgets;
  std::vector<std::size_t> targets;  // widgets a description may mention
  Rng* jitter = nullptr;             // glyph jitter in the noisy tier

  Box text(int x, int y, const std::string& s, Rgb color) {
    Box ink;
    if (jitter == nullptr) {
      ink = draw_text(image, x, y, s, color);
    } else {
      int cx = x;
      bool first = true;
      for (const auto& cp : decode_utf8(s)) {
        if (cp.value == U' ') {
          cx += kSpaceExtra + kAdvance;
          continue;
        }
        const int dy = jitter->range(-1, 1);
        const int w = jitter->range(3, 4);
        const Box g{cx, y + dy, w, kGlyphH};
        image.fill_rect(g, color);
        ink = first ? g : union_box(ink, g);
        first = false;
        cx += kAdvance;
      }
    }
    if (!ink.empty()) texts.push_back({ink, s});
    return ink;
  }
};

struct Layout {
  int w;
  int h;
  int top() const { return kBar + 4; }
  int bottom() const { return h - kBar - 4; }
  int row_height() const { return (bottom() - top()) / 4; }
  int row_center(int r) const { return top() + r * row_height() + row_height() / 2; }
  int col_center(int c) const { return w * (2 * c + 1) / 6; }
  int max_width() const { return w / 3 - 10; }
};

Rgb scaled(Rgb p, double f) {
  auto s = [f](std::uint8_t v) { return static_cast<std::uint8_t>(std::lround(v * f)); };
  return {s(p.r), s(p.g), s(p.b)};
}

void draw_toolbar(Canvas& c, const Layout& l, Rng& rng) {
  c.image.fill_rect({0, 0, l.w, kBar}, kToolbar);
  c.text(12, kBar / 2 - kGlyphH / 2, rng.pick(kTitles), kWhite);
}

void draw_nav(Canvas& c, const Layout& l) {
  c.image.fill_rect({0, l.h - kBar, l.w, kBar}, kNav);
  for (int i = 0; i < 3; ++i) {
    const auto& label = kNavLabels[static_cast<std::size_t>(i)];
    c.text(l.col_center(i) - text_width(label) / 2, l.h - kBar / 2 - kGlyphH / 2, label, kInk);
  }
}

void draw_dividers(Canvas& c, const Layout& l) {
  for (int r = 1; r < 4; ++r) c.image.fill_rect({0, l.top() + r * l.row_height(), l.w, 1}, kDivider);
}

void add_widget(Canvas& c, const Layout& l, Box box, WidgetKind kind, std::optional<std::string> text, Color color,
                bool target) {
  c.widgets.push_back({box, kind, std::move(text), color, grid_position(box, l.w, l.h)});
  if (target) c.targets.push_back(c.widgets.size() - 1);
}

// One content widget centred at (cx, cy).
void draw_widget(Canvas& c, const Layout& l, int cx, int cy, WidgetKind kind, const std::string& label, Rng& rng) {
  switch (kind) {
    case WidgetKind::Button: {
      const int bw = text_width(label) + 16;
      const Box box{cx - bw / 2, cy - 12, bw, 24};
      const Color fill = rng.pick(kFillColors);
      c.image.fill_rect(box, reference_rgb(fill));
      c.text(box.x + 8, cy - kGlyphH / 2, label, kWhite);
      add_widget(c, l, box, kind, label, fill, true);
      break;
    }
    case WidgetKind::EditText: {
      const int bw = l.max_width();
      const Box box{cx - bw / 2, cy - 11, bw, 22};
      c.image.outline_rect(box, kOutline);
      c.text(box.x + 6, cy - kGlyphH / 2, label, kPlaceholder);
      add_widget(c, l, box, kind, label, Color::White, true);
      break;
    }
    case WidgetKind::ImageView: {
      const Box box{cx - 14, cy - 14, 28, 28};
      const Color fill = rng.pick(kFillColors);
      c.image.fill_rect(box, reference_rgb(fill));
      add_widget(c, l, box, kind, std::nullopt, fill, false);
      break;
    }
    default: {
      const Box ink = c.text(cx - text_width(label) / 2, cy - kGlyphH / 2, label, kInk);
      add_widget(c, l, ink, WidgetKind::TextView, label, Color::Black, true);
      break;
    }
  }
}

// Toolbar, dividers, nav bar and 3-6 content widgets in a 4x3 slot grid.
Canvas normal_scene(const Layout& l, Rng& rng, Tier tier, Rng* jitter) {
  Canvas c{RgbImage(l.w, l.h, kWhite), {}, {}, {}, jitter};
  draw_toolbar(c, l, rng);
  draw_dividers(c, l);
  draw_nav(c, l);

  std::vector<int> slots(12);
  std::iota(slots.begin(), slots.end(), 0);
  rng.shuffle(slots);
  const int n = rng.range(3, 6);
  std::vector<std::string> labels = kLabels;
  rng.shuffle(labels);
  std::vector<std::string> holders = kPlaceholders;
  rng.shuffle(holders);
  std::size_t next_label = 0;
  std::size_t next_holder = 0;
  bool has_text = false;
  for (int i = 0; i < n; ++i) {
    const int slot = slots[static_cast<std::size_t>(i)];
    const double u = rng.unit();
    WidgetKind kind = u < 0.4 ? WidgetKind::Button : u < 0.7 ? WidgetKind::TextView
                      : u < 0.85                     ? WidgetKind::EditText
                                                     : WidgetKind::ImageView;
    // Guarantee at least one mentionable widget.
    if (i == n - 1 && !has_text && kind == WidgetKind::ImageView) kind = WidgetKind::Button;
    has_text = has_text || kind != WidgetKind::ImageView;
    const std::string& label = kind == WidgetKind::EditText ? holders[next_holder++ % holders.size()] : labels[next_label++];
    draw_widget(c, l, l.col_center(slot % 3), l.row_center(slot / 3), kind, label, rng);
  }
  if (tier == Tier::Noisy) {
    // Small distractor squares in free slots, off-centre.
    const int extra = rng.range(1, 2);
    for (int i = 0; i < extra && n + i < 12; ++i) {
      const int slot = slots[static_cast<std::size_t>(n + i)];
      const int cx = l.col_center(slot % 3) + rng.range(-12, 12);
      const int cy = l.row_center(slot / 3) + rng.range(-8, 8);
      const Color fill = rng.pick(kFillColors);
      const Box box{cx - 7, cy - 7, 14, 14};
      c.image.fill_rect(box, reference_rgb(fill));
      add_widget(c, l, box, WidgetKind::ImageView, std::nullopt, fill, false);
    }
  }
  return c;
}

Canvas skeleton(const Layout& l, Rng& rng, bool dividers, bool nav, Rng* jitter) {
  Canvas c{RgbImage(l.w, l.h, kWhite), {}, {}, {}, jitter};
  draw_toolbar(c, l, rng);
  if (dividers) draw_dividers(c, l);
  if (nav) draw_nav(c, l);
  return c;
}

void dim(Canvas& c) {
  for (int y = 0; y < c.image.height(); ++y) {
    for (int x = 0; x < c.image.width(); ++x) c.image.at(x, y) = scaled(c.image.at(x, y), 0.4);
  }
}

// Centred white dialog with one message line and an OK action.
void dialog(Canvas& c, const Layout& l, const std::string& message) {
  const int dw = l.w * 7 / 10;
  const int dh = l.h * 28 / 100;
  const Box box{(l.w - dw) / 2, (l.h - dh) / 2, dw, dh};
  c.image.fill_rect(box, kWhite);
  c.text(l.w / 2 - text_width(message) / 2, box.y + dh / 3, message, kInk);
  c.text(box.right() - 12 - text_width("OK"), box.bottom() - 16, "OK", kToolbar);
}

std::string garble(const std::string& label) {
  std::string out = label.substr(0, 1);
  out += "\xEF\xBF\xBD\xEF\xBF\xBD";  // two U+FFFD
  out += label.substr(std::min<std::size_t>(3, label.size()));
  return out;
}

// ---- descriptions -------------------------------------------------------

struct Target {
  std::string text;
  WidgetKind kind;
  Color color;
  Position position;
};

std::string type_surface(WidgetKind k, Rng& rng, Tier tier) {
  switch (k) {
    case WidgetKind::Button: return tier == Tier::Noisy && rng.chance(0.3) ? "btn" : "button";
    case WidgetKind::EditText: return tier == Tier::Noisy && rng.chance(0.5) ? "text field" : "input box";
    default: return "label";
  }
}

std::string position_phrase(Position p, Rng& rng, Tier tier) {
  const std::string name(to_string(p));
  if (tier == Tier::NoiseFree || rng.chance(0.4)) return "at the " + name;
  switch (p) {
    case Position::TopLeft: return "in the upper left corner";
    case Position::TopRight: return "in the upper right corner";
    case Position::BottomLeft: return "in the lower left corner";
    case Position::BottomRight: return "in the lower right corner";
    case Position::Left:
    case Position::Right: return "on the " + name + " side";
    case Position::Center: return "in the middle";
    default: return "near the " + name;
  }
}

std::string render_mention(const PlantedMention& m, Rng& rng, Tier tier) {
  std::string s = "the ";
  if (m.color) s += std::string(to_string(*m.color)) + " ";
  s += "'" + *m.text + "'";
  if (m.type) s += " " + type_surface(*m.type, rng, tier);
  if (m.position) s += " " + position_phrase(*m.position, rng, tier);
  return s;
}

std::string fill_template(std::string_view tmpl, std::string_view key, const std::string& value) {
  std::string out(tmpl);
  const auto pos = out.find(key);
  if (pos == std::string::npos) return out;
  std::string v = value;
  if (pos == 0 && !v.empty() && v.front() >= 'a' && v.front() <= 'z') v.front() = static_cast<char>(v.front() - 'a' + 'A');
  out.replace(pos, key.size(), v);
  return out;
}

const std::vector<std::string>& general_templates(BugType t, Tier tier) {
  static const std::map<BugType, std::vector<std::string>> base = {
      {BugType::FunctionalDefect,
       {"I tapped {M}, but nothing happened.", "After clicking {M}, the app did not respond.",
        "{M} does not work when I press it."}},
      {BugType::LayoutProblem, {"{M} overlaps with the item next to it.", "{M} is misaligned with the other items."}},
      {BugType::DisplayProblem, {"{M} is displayed incompletely.", "The characters of {M} are cut off."}},
      {BugType::TransitionProblem,
       {"After tapping {M}, the page did not jump to the next view.", "Clicking {M} does not navigate to the expected page."}},
  };
  static const std::map<BugType, std::vector<std::string>> noisy = [] {
    auto m = base;
    m[BugType::FunctionalDefect].push_back("Pressing {M} has no effect at all.");
    m[BugType::LayoutProblem].push_back("{M} sits in a strange spot and covers other items.");
    m[BugType::DisplayProblem].push_back("{M} looks incomplete on my phone.");
    m[BugType::TransitionProblem].push_back("{M} fails to redirect me to the next page.");
    return m;
  }();
  return (tier == Tier::Noisy ? noisy : base).at(t);
}

const std::string& meaningless_template(BugType t) {
  static const std::map<BugType, std::string> m = {
      {BugType::FunctionalDefect, "The feature does not work as expected."},
      {BugType::LayoutProblem, "The layout of this page looks messy."},
      {BugType::DisplayProblem, "Some content is displayed incorrectly."},
      {BugType::TransitionProblem, "The page transition is wrong."},
  };
  return m.at(t);
}

const std::vector<std::string>& specific_templates(BugType t, Tier tier) {
  static const std::map<BugType, std::vector<std::string>> base = {
      {BugType::Crash,
       {"The app crashes when I open the {P} page.", "The application stopped running after I tapped submit.",
        "The app crashed suddenly on the {P} page.", "An app crash happened after login."}},
      {BugType::NetworkError, {"The page says {N}.", "After refreshing, the app shows {N}."}},
      {BugType::NullScreen,
       {"The {P} page turns into a white screen.", "A blank page appears when I open the {P} page.",
        "The app becomes a black screen after login."}},
      {BugType::PerformanceProblem,
       {"The {P} list keeps loading for a long time.", "The app is very slow when I open the {P} page.",
        "The {P} page is stuck on loading."}},
      {BugType::ErrorPrompt, {"The app indicates the '{E}'.", "A dialog shows '{E}' after saving."}},
      {BugType::GarbledError,
       {"The characters on the {P} page are garbled.", "Garbled characters appear in the title.",
        "The labels on the {P} page contain messy code."}},
  };
  static const std::map<BugType, std::vector<std::string>> noisy = [] {
    auto m = base;
    m[BugType::Crash].push_back("Suddenly the app exits abnormally on the {P} page.");
    m[BugType::NetworkError].push_back("When I refresh the {P} page it says {N}.");
    m[BugType::NullScreen].push_back("Opening the {P} page gives me an empty screen.");
    m[BugType::PerformanceProblem].push_back("Scrolling the {P} page is lagging badly.");
    m[BugType::ErrorPrompt].push_back("A message pops up and says '{E}' when I save.");
    m[BugType::GarbledError].push_back("The {P} page title is mojibake.");
    return m;
  }();
  return (tier == Tier::Noisy ? noisy : base).at(t);
}

struct Description {
  std::string text;
  std::vector<PlantedMention> mentions;
};

// Feature plans: consistent mentions always carry text and position; a
// wrong mention carries an off-screen text and at most one other feature.
PlantedMention consistent_mention(const Target& t, Rng& rng) {
  PlantedMention m;
  m.text = t.text;
  m.position = t.position;
  if (rng.chance(0.6)) m.type = t.kind;
  if (t.kind == WidgetKind::Button && rng.chance(0.4)) m.color = t.color;
  return m;
}

bool on_screen(const std::string& literal, const std::vector<TextRegion>& texts) {
  return std::any_of(texts.begin(), texts.end(), [&literal](const TextRegion& t) {
    return contains_folded(t.text, literal) || contains_folded(literal, t.text);
  });
}

PlantedMention wrong_mention(const std::vector<TextRegion>& screen_texts, Rng& rng) {
  PlantedMention m;
  std::string literal = rng.pick(kWrongLabels);
  for (int guard = 0; guard < 64 && on_screen(literal, screen_texts); ++guard) literal = rng.pick(kWrongLabels);
  m.text = literal;
  switch (rng.index(4)) {
    case 1: m.position = static_cast<Position>(rng.index(9)); break;
    case 2: m.type = rng.chance(0.5) ? WidgetKind::Button : WidgetKind::TextView; break;
    case 3: m.color = rng.pick(kFillColors); break;
    default: break;
  }
  return m;
}

struct SignatureText {
  std::string screen;       // text planted on the screenshot
  std::string description;  // how the description quotes it
};

Description describe(BugType type, bool consistent, const std::vector<Target>& targets,
                     const std::vector<TextRegion>& screen_texts, const SignatureText& signature, Rng& rng, Tier tier) {
  Description d;
  if (uses_general_strategy(type)) {
    if (consistent && !targets.empty()) {
      std::vector<std::size_t> order(targets.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      rng.shuffle(order);
      const std::size_t count = targets.size() >= 2 && rng.chance(0.3) ? 2 : 1;
      for (std::size_t i = 0; i < count; ++i) d.mentions.push_back(consistent_mention(targets[order[i]], rng));
    } else if (!consistent && rng.chance(0.75)) {
      d.mentions.push_back(wrong_mention(screen_texts, rng));
    }
    if (d.mentions.empty()) {
      d.text = meaningless_template(type);
      return d;
    }
    d.text = fill_template(rng.pick(general_templates(type, tier)), "{M}", render_mention(d.mentions[0], rng, tier));
    if (d.mentions.size() > 1) d.text += " " + fill_template("{M} is also affected.", "{M}", render_mention(d.mentions[1], rng, tier));
    return d;
  }
  std::string text = rng.pick(specific_templates(type, tier));
  text = fill_template(text, "{P}", rng.pick(kPages));
  if (type == BugType::NetworkError) text = fill_template(text, "{N}", signature.description);
  if (type == BugType::ErrorPrompt) {
    text = fill_template(text, "{E}", signature.description);
    PlantedMention m;
    m.text = signature.description;
    d.mentions.push_back(m);
  }
  d.text = std::move(text);
  return d;
}

SignatureText pick_signature(BugType type, Rng& rng) {
  if (type == BugType::NetworkError) {
    const bool page = rng.chance(0.5);
    const std::string s = page ? rng.pick(kHttpPages) : rng.pick(kNetworkDialogs);
    return {s, to_lower(s)};
  }
  if (type == BugType::ErrorPrompt) {
    const std::string msg = rng.pick(kErrorMessages);
    return {msg + " (" + std::to_string(rng.range(1000, 9999)) + ")", msg};
  }
  if (type == BugType::Crash) {
    const std::string msg = rng.pick(kCrashMessages);
    return {msg, msg};
  }
  return {};
}

// The screenshot for a consistent report of a specific type carries the
// type's visual signature; everything else gets a plain widget scene.
Canvas signature_scene(BugType type, const SignatureText& sig, const Layout& l, Rng& rng, Tier tier, Rng* jitter) {
  switch (type) {
    case BugType::Crash:
    case BugType::ErrorPrompt: {
      Canvas c = skeleton(l, rng, true, true, jitter);
      dim(c);
      dialog(c, l, sig.screen);
      return c;
    }
    case BugType::NetworkError: {
      if (std::find(kNetworkDialogs.begin(), kNetworkDialogs.end(), sig.screen) != kNetworkDialogs.end()) {
        Canvas c = skeleton(l, rng, true, true, jitter);
        dim(c);
        dialog(c, l, sig.screen);
        return c;
      }
      Canvas c = skeleton(l, rng, false, true, jitter);
      c.text(l.w / 2 - text_width(sig.screen) / 2, l.h / 2 - kGlyphH / 2, sig.screen, kInk);
      return c;
    }
    case BugType::NullScreen: {
      switch (rng.index(3)) {
        case 0: return skeleton(l, rng, false, false, jitter);
        case 1: return Canvas{RgbImage(l.w, l.h, kWhite), {}, {}, {}, jitter};
        default: return Canvas{RgbImage(l.w, l.h, kInk), {}, {}, {}, jitter};
      }
    }
    case BugType::PerformanceProblem: {
      Canvas c = skeleton(l, rng, false, true, jitter);
      if (rng.chance(0.5)) {
        const auto& icons = default_loading_templates();
        draw_icon(c.image, icons[rng.index(icons.size())], l.w / 2 - kIconSize, l.h / 2 - kIconSize, 2, kIconInk);
      } else {
        const std::string s = "Loading...";
        c.text(l.w / 2 - text_width(s) / 2, l.h / 2 - kGlyphH / 2, s, kInk);
      }
      return c;
    }
    case BugType::GarbledError: {
      Canvas c = normal_scene(l, rng, tier, jitter);
      // Redraw one text-bearing widget with a garbled caption.
      for (const auto wi : c.targets) {
        auto& w = c.widgets[wi];
        if (w.kind != WidgetKind::TextView || !w.text) continue;
        const std::string garbled = garble(*w.text);
        c.image.fill_rect({w.box.x - 2, w.box.y - 2, w.box.w + 4, w.box.h + 4}, kWhite);
        std::erase_if(c.texts, [&w](const TextRegion& t) { return t.bbox == w.box; });
        const Box ink = c.text(w.box.x, w.box.y, garbled, kInk);
        w.box = ink;
        w.text = garbled;
        return c;
      }
      const std::string garbled = garble(rng.pick(kLabels));
      const int slot_y = l.row_center(0);
      // Free spot: left edge of the first row is never wider than a label.
      const Box ink = c.text(4, slot_y + 20, garbled, kInk);
      add_widget(c, l, ink, WidgetKind::TextView, garbled, Color::Black, false);
      return c;
    }
    default:
      return normal_scene(l, rng, tier, jitter);
  }
}

BugType sample_type(const std::map<BugType, double>& mix, Rng& rng) {
  double total = 0.0;
  for (const auto& [t, w] : mix) total += w;
  double u = rng.unit() * total;
  for (const auto& [t, w] : mix) {
    if (u < w) return t;
    u -= w;
  }
  // Rounding can leave u just past the last positive weight.
  for (auto it = mix.rbegin(); it != mix.rend(); ++it) {
    if (it->second > 0.0) return it->first;
  }
  return BugType::FunctionalDefect;
}

std::vector<bool> consistency_flags(const CorpusSpec& spec) {
  const auto n_consistent =
      static_cast<std::size_t>(std::llround(spec.consistent_fraction * static_cast<double>(spec.n_reports)));
  std::vector<bool> flags(spec.n_reports, false);
  std::fill(flags.begin(), flags.begin() + static_cast<std::ptrdiff_t>(n_consistent), true);
  Rng rng(derive_seed(spec.seed, "consistency"));
  rng.shuffle(flags);
  return flags;
}

std::string report_id(std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 5) digits.insert(0, 5 - digits.size(), '0');
  return "r" + digits;
}

GeneratedReport build_report(const CorpusSpec& spec, std::size_t index, bool consistent) {
  Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(index)));
  Rng jitter_rng(derive_seed(spec.seed, "jitter:" + std::to_string(index)));
  Rng* jitter = spec.tier == Tier::Noisy ? &jitter_rng : nullptr;
  const Layout layout{spec.width, spec.height};
  const BugType type = sample_type(spec.per_type_mix, rng);
  const SignatureText sig = pick_signature(type, rng);

  Canvas canvas = consistent && !uses_general_strategy(type) ? signature_scene(type, sig, layout, rng, spec.tier, jitter)
                                                            : normal_scene(layout, rng, spec.tier, jitter);
  std::vector<Target> targets;
  for (const auto wi : canvas.targets) {
    const auto& w = canvas.widgets[wi];
    if (w.text) targets.push_back({*w.text, w.kind, w.color, w.position});
  }
  // Inconsistent specific reports quote a signature that is not on screen.
  const Description desc = describe(type, consistent, targets, canvas.texts, sig, rng, spec.tier);

  GeneratedReport out{TestReport{}, type, consistent, std::move(canvas.widgets), desc.mentions};
  out.report.id = report_id(index);
  out.report.description = desc.text;
  out.report.screenshot = std::move(canvas.image);
  out.report.ocr_annotations = std::move(canvas.texts);
  out.report.ground_truth = GroundTruth{consistent, type};
  return out;
}

}  // namespace

std::string_view to_string(Tier t) { return t == Tier::Noisy ? "noisy" : "noise-free"; }

std::optional<Tier> parse_tier(std::string_view name) {
  if (name == "noise-free" || name == "noisefree") return Tier::NoiseFree;
  if (name == "noisy") return Tier::Noisy;
  return std::nullopt;
}

std::map<BugType, double> default_type_mix() {
  return {
      {BugType::FunctionalDefect, 63.36}, {BugType::Crash, 4.76},        {BugType::LayoutProblem, 4.87},
      {BugType::DisplayProblem, 9.84},    {BugType::NetworkError, 2.69}, {BugType::NullScreen, 1.16},
      {BugType::PerformanceProblem, 6.36}, {BugType::ErrorPrompt, 4.73}, {BugType::GarbledError, 0.37},
      {BugType::TransitionProblem, 1.86},
  };
}

void CorpusSpec::validate() const {
  if (n_reports == 0) throw Error(ErrorCode::InvalidArgument, "n_reports must be positive");
  double total = 0.0;
  for (const auto& [t, w] : per_type_mix) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidArgument, "type weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "type weights must sum to a positive value");
  if (!(consistent_fraction >= 0.0 && consistent_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "consistent_fraction must lie in [0,1]");
  }
  if (width < 180 || height < 300) throw Error(ErrorCode::InvalidArgument, "image must be at least 180x300");
}

GeneratedReport generate_report(const CorpusSpec& spec, std::size_t index) {
  spec.validate();
  if (index >= spec.n_reports) throw Error(ErrorCode::InvalidArgument, "report index out of range");
  return build_report(spec, index, consistency_flags(spec)[index]);
}

std::vector<GeneratedReport> generate_reports(const CorpusSpec& spec) {
  spec.validate();
  const auto flags = consistency_flags(spec);
  std::vector<std::optional<GeneratedReport>> slots(spec.n_reports);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < spec.n_reports; ++i) slots[i] = build_report(spec, i, flags[i]);
  std::vector<GeneratedReport> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

void generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::IoFailure, out.string() + ": " + ec.message());
  const auto flags = consistency_flags(spec);
  std::vector<std::string> failures(spec.n_reports);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < spec.n_reports; ++i) {
    try {
      const auto r = build_report(spec, i, flags[i]);
      write_report(out / r.report.id, r.report);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw Error(ErrorCode::IoFailure, f);
  }
}

std::vector<LabeledDescription> generate_training_corpus(std::size_t per_type, std::uint64_t seed, Tier tier) {
  std::vector<LabeledDescription> out;
  out.reserve(per_type * kBugTypeCount);
  for (const auto type : kAllBugTypes) {
    for (std::size_t i = 0; i < per_type; ++i) {
      Rng rng(derive_seed(derive_seed(seed, "train:" + std::string(to_string(type))), static_cast<std::uint64_t>(i)));
      std::vector<Target> targets;
      const int n = rng.range(1, 3);
      for (int k = 0; k < n; ++k) {
        const double u = rng.unit();
        const WidgetKind kind = u < 0.5 ? WidgetKind::Button : u < 0.8 ? WidgetKind::TextView : WidgetKind::EditText;
        targets.push_back({kind == WidgetKind::EditText ? rng.pick(kPlaceholders) : rng.pick(kLabels), kind,
                           kind == WidgetKind::Button ? rng.pick(kFillColors) : Color::Black,
                           static_cast<Position>(rng.index(9))});
      }
      const bool consistent = rng.chance(0.5);
      const auto sig = pick_signature(type, rng);
      const auto desc = describe(type, consistent, targets, {}, sig, rng, tier);
      LabeledDescription d;
      d.id = std::string(to_string(type)) + "-" + std::to_string(i);
      d.text = desc.text;
      d.bug_type = type;
      out.push_back(std::move(d));
    }
  }
  return out;
}

int text_width(std::string_view text) {
  int w = 0;
  int glyphs = 0;
  for (const auto& cp : decode_utf8(text)) {
    if (cp.value == U' ') {
      w += kSpaceExtra + kAdvance;
    } else {
      w += kAdvance;
      ++glyphs;
    }
  }
  return glyphs == 0 ? 0 : w - (kAdvance - kGlyphW);
}

Box draw_text(RgbImage& image, int x, int y, std::string_view text, Rgb color) {
  Box ink;
  bool first = true;
  int cx = x;
  for (const auto& cp : decode_utf8(text)) {
    if (cp.value == U' ') {
      cx += kSpaceExtra + kAdvance;
      continue;
    }
    const Box g{cx, y, kGlyphW, kGlyphH};
    image.fill_rect(g, color);
    ink = first ? g : union_box(ink, g);
    first = false;
    cx += kAdvance;
  }
  return ink;
}

void draw_icon(RgbImage& image, const IconTemplate& icon, int x, int y, int scale, Rgb color) {
  for (int j = 0; j < kIconSize; ++j) {
    for (int i = 0; i < kIconSize; ++i) {
      if (icon.bits[static_cast<std::size_t>(j * kIconSize + i)]) image.fill_rect({x + i * scale, y + j * scale, scale, scale}, color);
    }
  }
}

}  // namespace recode
