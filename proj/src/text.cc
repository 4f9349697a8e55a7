#include "eyesfree/text.h"

namespace eyesfree::text {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (to_lower(a[i]) != to_lower(b[i])) return false;
  }
  return true;
}

bool istarts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && iequals(s.substr(0, prefix.size()), prefix);
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

namespace {

template <typename Pred>
std::vector<Piece> runs(std::string_view s, Pred in_run) {
  std::vector<Piece> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!in_run(s[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < s.size() && in_run(s[i])) ++i;
    out.push_back({start, i});
  }
  return out;
}

}  // namespace

std::vector<Piece> whitespace_words(std::string_view s) {
  return runs(s, [](char c) { return !is_space(c); });
}

std::vector<Piece> alnum_tokens(std::string_view s) {
  return runs(s, is_ascii_alnum);
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace eyesfree::text
