#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace anpr {

// Canonical plate form used for voting and evaluation: uppercase, spaces and
// hyphens removed. The out-of-vocab marker '^' is kept.
inline std::string normalize_plate(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == ' ' || c == '-') {
      continue;
    }
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) {
    std::swap(a, b);
  }
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) {
    row[j] = j;
  }
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[b.size()];
}

// Indian registration pattern: two letters, one or two digits, up to three
// letters, four digits (e.g. MH03CS0071, KA06N9659). Plates carrying the
// defense marker '^' are accepted as-is.
inline bool is_valid_plate(std::string_view s) {
  if (s.find('^') != std::string_view::npos) {
    return !s.empty();
  }
  std::size_t i = 0;
  auto take = [&](auto pred, std::size_t lo, std::size_t hi) {
    std::size_t n = 0;
    while (i < s.size() && n < hi && pred(static_cast<unsigned char>(s[i]))) {
      ++i;
      ++n;
    }
    return n >= lo;
  };
  auto upper = [](unsigned char c) { return c >= 'A' && c <= 'Z'; };
  auto digit = [](unsigned char c) { return c >= '0' && c <= '9'; };
  return take(upper, 2, 2) && take(digit, 1, 2) && take(upper, 0, 3) && take(digit, 4, 4) &&
         i == s.size();
}

} // namespace anpr
