#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace recode {

struct CodePoint {
  char32_t value;
  std::size_t offset;  // byte offset into the source
  std::size_t length;  // encoded length in bytes
};

/// Lenient UTF-8 decoding: invalid sequences decode to U+FFFD, one byte each.
std::vector<CodePoint> decode_utf8(std::string_view text);
std::string encode_utf8(char32_t cp);

constexpr bool is_ascii_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
constexpr bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
constexpr char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_cjk(char32_t cp);

/// ASCII case folding; byte length is preserved so offsets stay valid.
std::string to_lower(std::string_view text);
std::string trim(std::string_view text);
/// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

/// Case-insensitive, whitespace-normalized containment test.
bool contains_folded(std::string_view haystack, std::string_view needle);

std::string read_text_file(const std::filesystem::path& path);
std::vector<unsigned char> read_binary_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);
void write_binary_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);

std::string base64_encode(const std::vector<unsigned char>& bytes);

/// Fixed-point formatting with the given number of decimals ("%.*f").
std::string format_fixed(double value, int decimals);

}  // namespace recode
