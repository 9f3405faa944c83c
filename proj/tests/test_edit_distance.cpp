#include <doctest.h>

#include <random>
#include <string>

#include "chartkit/edit_distance.hpp"
#include "chartkit/text.hpp"
#include "support/oracles.hpp"

using namespace chartkit;

TEST_CASE("edit distance basics") {
  CHECK(edit_distance("", "") == 0);
  CHECK(edit_distance("abc", "abc") == 0);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("sale", "sales") == 1);
  CHECK(edit_distance("q1\x1Fsale", "q1\x1Fsales") == 1);
}

TEST_CASE("edit distance counts unicode scalars, not bytes") {
  // Two-byte and three-byte characters count as single edits.
  CHECK(edit_distance("café", "cafe") == 1);
  CHECK(edit_distance("中文", "中") == 1);
  CHECK(edit_distance("中", "文") == 1);
}

TEST_CASE("invalid utf-8 bytes do not crash the decoder") {
  const std::string bad = "a\xFF\xFE b";
  CHECK(text::utf8_decode(bad).size() == 5);
  CHECK(edit_distance(bad, bad) == 0);
  CHECK(edit_distance(bad, "a b") == 2);
}

TEST_CASE("edit distance agrees with recursive reference on random strings") {
  std::mt19937_64 rng(41);
  const std::string alphabet = "abé";
  auto rand_str = [&] {
    std::string s;
    const auto len = std::uniform_int_distribution<int>(0, 8)(rng);
    for (int i = 0; i < len; ++i) {
      const auto k = std::uniform_int_distribution<int>(0, 2)(rng);
      if (k == 0) s += 'a';
      else if (k == 1) s += 'b';
      else s += "é";
    }
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    const std::string a = rand_str(), b = rand_str();
    CAPTURE(a);
    CAPTURE(b);
    CHECK(edit_distance(a, b) == oracle::edit_distance_ref(a, b));
  }
}

TEST_CASE("normalize_for_match") {
  CHECK(text::normalize_for_match("  Sales  ") == "sales");
  CHECK(text::normalize_for_match("a \t b") == "a b");
  CHECK(text::normalize_for_match("A  B\nC") == "a b c");
  CHECK(text::normalize_for_match("") == "");
}
