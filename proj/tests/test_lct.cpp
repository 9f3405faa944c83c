#include <doctest.h>

#include <random>
#include <string>

#include "chartkit/lct.hpp"
#include "support/generators.hpp"

using namespace chartkit;

TEST_CASE("parse_lct minimal grids") {
  const LctTable t = parse_lct("none,Q1,Q2\nSales,10,20\n");
  CHECK(t.col_entities == std::vector<std::string>{"Q1", "Q2"});
  CHECK(t.row_entities == std::vector<std::string>{"Sales"});
  REQUIRE(t.values.size() == 1);
  CHECK(t.values[0][0].raw == "10");
  CHECK(t.values[0][1].raw == "20");
  CHECK(t.values[0][0].numeric == 10.0);

  const LctTable t2 = parse_lct("none,A\nx,1\ny,2\n");
  CHECK(t2.rows() == 2);
  CHECK(t2.cols() == 1);
  CHECK(t2.values[0][0].raw == "1");
  CHECK(t2.values[1][0].raw == "2");
}

TEST_CASE("parse_lct error cases") {
  CHECK_THROWS_WITH_AS(parse_lct(""), "empty LCT input", Error);
  CHECK_THROWS_AS(parse_lct("   \n \n"), Error);

  try {
    parse_lct("none,A,B\nx,1\n");
    FAIL("expected RaggedRowError");
  } catch (const RaggedRowError& e) {
    CHECK(e.line_no == 2);
    CHECK(e.expected == 3);
    CHECK(e.got == 2);
  }

  CHECK_THROWS_AS(parse_lct("none\nx,1\n"), Error);         // header < 2 fields
  CHECK_THROWS_AS(parse_lct("title,A\nx,1\n"), Error);      // corner not none/empty
  CHECK_THROWS_AS(parse_lct("none,A,B\n"), Error);          // no data rows

  try {
    parse_lct("none\n");
    FAIL("expected missing_header");
  } catch (const Error& e) {
    CHECK(e.code() == errc::missing_header);
  }
}

TEST_CASE("parse_lct accepts alternate separators and corner spellings") {
  const LctTable a = parse_lct("none,Q1/nSales,10/n");
  CHECK(a.cols() == 1);
  CHECK(a.rows() == 1);
  CHECK(a.values[0][0].raw == "10");

  const LctTable b = parse_lct("NONE,Q1\r\nSales,10\r\n");
  CHECK(b.values[0][0].raw == "10");

  const LctTable c = parse_lct(",Q1\nSales,10");  // empty corner, no trailing newline
  CHECK(c.col_entities == std::vector<std::string>{"Q1"});
  CHECK(c.values[0][0].raw == "10");
}

TEST_CASE("parse_lct quoting") {
  const LctTable t = parse_lct("none,\"a,b\",c\nrow,\"1,000\",\"say \"\"hi\"\"\"\n");
  CHECK(t.col_entities[0] == "a,b");
  CHECK(t.values[0][0].raw == "1,000");
  CHECK(t.values[0][0].numeric == 1000.0);
  CHECK(t.values[0][1].raw == "say \"hi\"");

  // Quoted fields may contain real newlines and the literal "/n".
  const LctTable u = parse_lct("none,\"a\nb\"\nr,\"x/ny\"\n");
  CHECK(u.col_entities[0] == "a\nb");
  CHECK(u.values[0][0].raw == "x/ny");
}

TEST_CASE("empty interior cells are kept and flagged") {
  const LctTable t = parse_lct("none,A,B\nx,,2\n");
  CHECK(t.values[0][0].raw == "");
  const auto flagged = t.empty_cells();
  REQUIRE(flagged.size() == 1);
  CHECK(flagged[0] == std::pair<std::size_t, std::size_t>{0, 0});
}

TEST_CASE("serialize_lct emits the canonical layout") {
  LctTable t;
  t.col_entities = {"Q1"};
  t.row_entities = {"Sales"};
  t.values = {{Cell::from_raw("10")}};
  CHECK(serialize_lct(t) == "none,Q1\nSales,10\n");

  t.values = {{Cell::from_raw("1,000")}};
  CHECK(serialize_lct(t) == "none,Q1\nSales,\"1,000\"\n");
}

TEST_CASE("lct round trip on randomized tables") {
  testgen::Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    const LctTable t = testgen::table(rng);
    CAPTURE(serialize_lct(t));
    const LctTable back = parse_lct(serialize_lct(t));
    CHECK(back == t);
  }
}

TEST_CASE("normalize_numeric rules") {
  CHECK(normalize_numeric("1,234.5") == 1234.5);
  CHECK(normalize_numeric("45%") == 45.0);
  CHECK(normalize_numeric("abc") == std::nullopt);
  CHECK(normalize_numeric("$3.50") == 3.5);
  CHECK(normalize_numeric("€1,000") == 1000.0);
  CHECK(normalize_numeric("£7") == 7.0);
  CHECK(normalize_numeric(" -12.5 ") == -12.5);
  CHECK(normalize_numeric("+4") == 4.0);
  CHECK(normalize_numeric("1e3") == 1000.0);
  CHECK(normalize_numeric("") == std::nullopt);
  CHECK(normalize_numeric("%") == std::nullopt);
  CHECK(normalize_numeric("$") == std::nullopt);
  CHECK(normalize_numeric("1,23") == 123.0);  // commas between digits are stripped
  CHECK(normalize_numeric(",5") == std::nullopt);
  CHECK(normalize_numeric("12%x") == std::nullopt);
}

TEST_CASE("normalize_numeric is idempotent on its canonical rendering") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const double v = std::uniform_real_distribution<double>(-1e6, 1e6)(rng);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    const std::string rendered(buf, res.ptr);
    const auto parsed = normalize_numeric(rendered);
    REQUIRE(parsed.has_value());
    CHECK(*parsed == v);
  }
}
