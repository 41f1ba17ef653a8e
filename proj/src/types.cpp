#include "recode/types.hpp"

namespace recode {

namespace {
constexpr std::array<std::string_view, kWidgetKindCount> kKindNames = {
    "Button",    "CheckBox",  "CheckTextView", "EditText", "ImageButton", "ImageView", "ProgressBarHorizontal",
    "ProgressBarVertical", "RadioButton", "RatingBar", "SeekBar", "Switch", "Spinner", "TextView",
};
constexpr std::array<std::string_view, 9> kPositionNames = {
    "top-left", "top", "top-right", "left", "center", "right", "bottom-left", "bottom", "bottom-right",
};
constexpr std::array<std::string_view, kColorCount> kColorNames = {
    "black", "white", "gray", "red", "orange", "yellow", "green", "cyan", "blue", "purple", "pink", "brown",
};
constexpr std::array<Rgb, kColorCount> kColorRgb = {{
    {0, 0, 0},       {255, 255, 255}, {128, 128, 128}, {255, 0, 0},   {255, 165, 0},  {255, 255, 0},
    {0, 255, 0},     {0, 255, 255},   {0, 0, 255},     {128, 0, 128}, {255, 192, 203}, {165, 42, 42},
}};

template <typename Enum, std::size_t N>
std::optional<Enum> parse_name(const std::array<std::string_view, N>& names, std::string_view name) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == name) return static_cast<Enum>(i);
  }
  return std::nullopt;
}
}  // namespace

std::string_view to_string(WidgetKind k) { return kKindNames[static_cast<std::size_t>(k)]; }
std::optional<WidgetKind> parse_widget_kind(std::string_view name) { return parse_name<WidgetKind>(kKindNames, name); }

std::string_view to_string(Position p) { return kPositionNames[static_cast<std::size_t>(p)]; }
std::optional<Position> parse_position(std::string_view name) { return parse_name<Position>(kPositionNames, name); }

std::string_view to_string(Color c) { return kColorNames[static_cast<std::size_t>(c)]; }
std::optional<Color> parse_color(std::string_view name) { return parse_name<Color>(kColorNames, name); }
Rgb reference_rgb(Color c) { return kColorRgb[static_cast<std::size_t>(c)]; }

}  // namespace recode
