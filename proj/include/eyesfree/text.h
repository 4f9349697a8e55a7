// Small text helpers over UTF-8 byte strings.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace eyesfree::text {

// Byte range [begin, end) into the scanned string.
struct Piece {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Piece&, const Piece&) = default;
};

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
inline bool is_ascii_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}
inline bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline char to_lower(char c) {
  return is_ascii_upper(c) ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lowercase(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);
std::string_view trim(std::string_view s);

// Maximal runs of non-whitespace bytes. These are the spoken words.
std::vector<Piece> whitespace_words(std::string_view s);

// Maximal runs of ASCII letters and digits. These are the index terms.
std::vector<Piece> alnum_tokens(std::string_view s);

// Number of code points (continuation bytes are not counted).
std::size_t utf8_length(std::string_view s);

}  // namespace eyesfree::text
