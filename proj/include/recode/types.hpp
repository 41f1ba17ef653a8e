#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "recode/image.hpp"

namespace recode {

/// The 14-type widget vocabulary.
enum class WidgetKind {
  Button,
  CheckBox,
  CheckTextView,
  EditText,
  ImageButton,
  ImageView,
  ProgressBarHorizontal,
  ProgressBarVertical,
  RadioButton,
  RatingBar,
  SeekBar,
  Switch,
  Spinner,
  TextView,
};
inline constexpr std::size_t kWidgetKindCount = 14;
std::string_view to_string(WidgetKind k);
std::optional<WidgetKind> parse_widget_kind(std::string_view name);

/// Cells of the 3x3 screen grid, row-major.
enum class Position { TopLeft, Top, TopRight, Left, Center, Right, BottomLeft, Bottom, BottomRight };
std::string_view to_string(Position p);
std::optional<Position> parse_position(std::string_view name);

enum class Color { Black, White, Gray, Red, Orange, Yellow, Green, Cyan, Blue, Purple, Pink, Brown };
inline constexpr std::size_t kColorCount = 12;
std::string_view to_string(Color c);
std::optional<Color> parse_color(std::string_view name);
Rgb reference_rgb(Color c);

struct TextRegion {
  Box bbox;
  std::string text;
  friend bool operator==(const TextRegion&, const TextRegion&) = default;
};

struct WidgetRegion {
  Box bbox;
  std::optional<WidgetKind> kind;
  std::optional<std::string> text;
  Color color = Color::White;
  Position position = Position::Center;
  friend bool operator==(const WidgetRegion&, const WidgetRegion&) = default;
};

}  // namespace recode
