#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "chartkit/str.hpp"
#include "support/generators.hpp"

using namespace chartkit;

namespace {

// Multiset equality: sort by all fields and compare.
bool same_multiset(const TripletSet& a, const TripletSet& b) {
  auto key = [](const Triplet& t) { return std::tie(t.row_entity, t.col_entity, t.value.raw); };
  std::vector<Triplet> xa = a.triplets, xb = b.triplets;
  auto lt = [&](const Triplet& l, const Triplet& r) { return key(l) < key(r); };
  std::sort(xa.begin(), xa.end(), lt);
  std::sort(xb.begin(), xb.end(), lt);
  return xa == xb;
}

bool same_multiset(const NTupleSet& a, const NTupleSet& b) {
  auto xa = a.tuples(), xb = b.tuples();
  auto lt = [](const NTuple& l, const NTuple& r) {
    return std::tie(l.entity_keys, l.value.raw) < std::tie(r.entity_keys, r.value.raw);
  };
  std::sort(xa.begin(), xa.end(), lt);
  std::sort(xb.begin(), xb.end(), lt);
  return xa == xb;
}

}  // namespace

TEST_CASE("to_str expands one triplet per grid position") {
  const LctTable t = parse_lct("none,Q1,Q2\nSales,10,20\n");
  const TripletSet s = to_str(t);
  REQUIRE(s.size() == 2);
  CHECK(s.triplets[0] == Triplet{"Sales", "Q1", Cell::from_raw("10")});
  CHECK(s.triplets[1] == Triplet{"Sales", "Q2", Cell::from_raw("20")});

  const LctTable t2 = parse_lct("none,A,B\nx,1,2\ny,3,4\n");
  CHECK(to_str(t2).size() == 4);
}

TEST_CASE("to_str of transpose swaps the entity pair") {
  testgen::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const LctTable t = testgen::table(rng);
    TripletSet swapped = to_str(transpose(t));
    for (Triplet& tr : swapped.triplets) std::swap(tr.row_entity, tr.col_entity);
    CHECK(same_multiset(swapped, to_str(t)));
  }
}

TEST_CASE("transpose is an involution") {
  testgen::Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const LctTable t = testgen::table(rng);
    CHECK(transpose(transpose(t)) == t);
  }
  const LctTable t = parse_lct("none,Q1,Q2\nSales,10,20\n");
  const LctTable tt = transpose(t);
  CHECK(tt.rows() == 2);
  CHECK(tt.cols() == 1);
  CHECK(tt.values[1][0].raw == "20");
}

TEST_CASE("from_str reconstructs complete grids") {
  TripletSet s;
  s.triplets.push_back({"Sales", "Q2", Cell::from_raw("20")});
  s.triplets.push_back({"Sales", "Q1", Cell::from_raw("10")});
  const LctTable t = from_str(s);
  CHECK(t.row_entities == std::vector<std::string>{"Sales"});
  CHECK(t.col_entities == std::vector<std::string>{"Q1", "Q2"});  // lexicographic
  CHECK(t.values[0][0].raw == "10");

  SUBCASE("conflicting duplicate") {
    s.triplets.push_back({"Sales", "Q1", Cell::from_raw("99")});
    CHECK_THROWS_AS(from_str(s), ConflictingDuplicateError);
  }
  SUBCASE("equal duplicate collapses") {
    s.triplets.push_back({"Sales", "Q1", Cell::from_raw("10")});
    CHECK(from_str(s).values[0][0].raw == "10");
  }
  SUBCASE("incomplete grid") {
    s.triplets.push_back({"Costs", "Q1", Cell::from_raw("5")});
    try {
      from_str(s);
      FAIL("expected IncompleteGridError");
    } catch (const IncompleteGridError& e) {
      REQUIRE(e.missing.size() == 1);
      CHECK(e.missing[0] == std::pair<std::string, std::string>{"Costs", "Q2"});
    }
  }
}

TEST_CASE("to_str / from_str round trips") {
  testgen::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const LctTable t = testgen::grid_table(rng);
    const TripletSet s = to_str(t);
    const LctTable back = from_str(s);
    CHECK(same_multiset(to_str(back), s));

    // from_str(to_str(t)) equals t up to canonical row/column ordering.
    std::vector<std::size_t> rp(t.rows()), cp(t.cols());
    for (std::size_t k = 0; k < rp.size(); ++k) rp[k] = k;
    for (std::size_t k = 0; k < cp.size(); ++k) cp[k] = k;
    std::sort(rp.begin(), rp.end(),
              [&](auto a, auto b) { return t.row_entities[a] < t.row_entities[b]; });
    std::sort(cp.begin(), cp.end(),
              [&](auto a, auto b) { return t.col_entities[a] < t.col_entities[b]; });
    CHECK(back == permute(t, rp, cp));
  }
}

TEST_CASE("permute preserves the triplet multiset") {
  testgen::Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const LctTable t = testgen::table(rng);
    const auto rp = testgen::permutation(rng, t.rows());
    const auto cp = testgen::permutation(rng, t.cols());
    CHECK(same_multiset(to_str(permute(t, rp, cp)), to_str(t)));
  }

  const LctTable t = parse_lct("none,A\nx,1\ny,2\n");
  const LctTable swapped = permute(t, {1, 0}, {0});
  CHECK(swapped.row_entities == std::vector<std::string>{"y", "x"});
  CHECK(same_multiset(to_str(swapped), to_str(t)));
  CHECK(permute(t, {0, 1}, {0}) == t);

  CHECK_THROWS_AS(permute(t, {0, 0}, {0}), Error);
  CHECK_THROWS_AS(permute(t, {0}, {0}), Error);
  CHECK_THROWS_AS(permute(t, {0, 2}, {0}), Error);
}

TEST_CASE("canonical_key normalizes, sorts, and joins") {
  using Entities = std::vector<std::string>;
  CHECK(canonical_key(Entities{"Sales", " Q1 "}) == std::string("q1\x1F") + "sales");
  CHECK(canonical_key(Entities{"Q1", "Sales"}) == canonical_key(Entities{"Sales", " Q1 "}));
  CHECK(canonical_key(Entities{"A", "a"}) == std::string("a\x1F") + "a");
  CHECK(canonical_key(Triplet{"Sales", "Q1", {}}) ==
        canonical_key(Triplet{"Q1", "Sales", {}}));
  CHECK(canonical_key(NTuple{{"b", "c", "a"}, {}}) == std::string("a\x1F") + "b\x1F" + "c");
}

TEST_CASE("serialize_str text form") {
  TripletSet s;
  s.triplets.push_back({"Sales", "Q1", Cell::from_raw("10")});
  CHECK(serialize_str(s, StrFormat::text) == "(Sales, Q1, 10)\n");
  CHECK(serialize_str(TripletSet{}, StrFormat::text) == "");
  CHECK(serialize_str(TripletSet{}, StrFormat::jsonl) == "");

  s.triplets.push_back({"a,b", "c(d)", Cell::from_raw("say \"hi\"")});
  const std::string out = serialize_str(s, StrFormat::text);
  CHECK(out == "(Sales, Q1, 10)\n(\"a,b\", \"c(d)\", \"say \"\"hi\"\"\")\n");
}

TEST_CASE("str text and jsonl round trips") {
  testgen::Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const TripletSet s = to_str(testgen::table(rng));
    const NTupleSet n = to_ntuples(s);
    CHECK(same_multiset(parse_str_text(serialize_str(n, StrFormat::text)), n));
    CHECK(same_multiset(parse_str_jsonl(serialize_str(n, StrFormat::jsonl)), n));
  }
}

TEST_CASE("n-tuple arity is uniform within a set") {
  NTupleSet s;
  s.add({{"x", "y", "z"}, Cell::from_raw("1")});
  CHECK(s.arity() == 3);
  CHECK_THROWS_AS(s.add({{"x", "y"}, Cell::from_raw("2")}), Error);
  CHECK_THROWS_AS(s.add({{"x"}, Cell::from_raw("2")}), Error);
  CHECK_THROWS_AS(to_triplets(s), Error);

  const std::string text = serialize_str(s, StrFormat::text);
  CHECK(text == "(x, y, z, 1)\n");
  CHECK(parse_str_text(text).arity() == 3);
  CHECK_THROWS_AS(parse_str_text("(a, b, 1)\n(a, b, c, 1)\n"), Error);
}

TEST_CASE("str parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_str_text("(a, b, 1)\nnot a tuple\n"),
                       "line 2: expected (entity, ..., value)", Error);
  CHECK_THROWS_AS(parse_str_text("(a)\n"), Error);
  CHECK_THROWS_AS(parse_str_text("(a, \"b, 1)\n"), Error);
  CHECK_THROWS_AS(parse_str_jsonl("{\"entities\": [\"a\",\"b\"]}\n"), Error);
  CHECK_THROWS_AS(parse_str_jsonl("garbage\n"), Error);
}
