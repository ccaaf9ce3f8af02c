#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "anpr/text.hpp"

namespace {

// Reference edit distance: plain recursion, for cross-checking the DP.
std::size_t edit_distance_slow(const std::string &a, const std::string &b, std::size_t i = 0,
                               std::size_t j = 0) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  const std::size_t sub = edit_distance_slow(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
  const std::size_t del = edit_distance_slow(a, b, i + 1, j) + 1;
  const std::size_t ins = edit_distance_slow(a, b, i, j + 1) + 1;
  return std::min({sub, del, ins});
}

} // namespace

TEST_CASE("normalize_plate uppercases and strips separators") {
  CHECK(anpr::normalize_plate("mh 03-cs 0071") == "MH03CS0071");
  CHECK(anpr::normalize_plate("MH03CS0071") == "MH03CS0071");
  CHECK(anpr::normalize_plate("^12 ab") == "^12AB");
  CHECK(anpr::normalize_plate("") == "");
}

TEST_CASE("levenshtein basics") {
  CHECK(anpr::levenshtein("", "") == 0);
  CHECK(anpr::levenshtein("abc", "abc") == 0);
  CHECK(anpr::levenshtein("abc", "") == 3);
  CHECK(anpr::levenshtein("MH03CS0071", "MH03CS0O71") == 1);
  CHECK(anpr::levenshtein("kitten", "sitting") == 3);
}

TEST_CASE("levenshtein agrees with the recursive reference") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> len(0, 7);
  std::uniform_int_distribution<int> ch(0, 2); // tiny alphabet forces collisions
  for (int i = 0; i < 300; ++i) {
    std::string a, b;
    for (int k = len(rng); k > 0; --k) a.push_back(static_cast<char>('a' + ch(rng)));
    for (int k = len(rng); k > 0; --k) b.push_back(static_cast<char>('a' + ch(rng)));
    CHECK(anpr::levenshtein(a, b) == edit_distance_slow(a, b));
  }
}

TEST_CASE("plate pattern") {
  CHECK(anpr::is_valid_plate("MH03CS0071"));
  CHECK(anpr::is_valid_plate("KA06N9659"));
  CHECK(anpr::is_valid_plate("DL8CAF5030"));
  CHECK(anpr::is_valid_plate("KA5Z0071"));
  CHECK(anpr::is_valid_plate("^B12345"));   // out-of-vocab marker
  CHECK_FALSE(anpr::is_valid_plate(""));
  CHECK_FALSE(anpr::is_valid_plate("MH03"));
  CHECK_FALSE(anpr::is_valid_plate("123456"));
  CHECK_FALSE(anpr::is_valid_plate("MH03CS00711"));
  CHECK_FALSE(anpr::is_valid_plate("mh03cs0071"));
}

TEST_CASE("trim") {
  CHECK(anpr::trim("  a b \t") == "a b");
  CHECK(anpr::trim("\r\n") == "");
  CHECK(anpr::trim("x") == "x");
}
