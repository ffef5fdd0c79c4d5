/*
 * Copyright 2026 The latkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <functional>
#include <string>

#include "doctest.h"
#include "latkit/corpus.hpp"
#include "latkit/enumerate.hpp"
#include "latkit/error.hpp"
#include "temp_dir.hpp"

using namespace latkit;
using latkit::testing::TempDir;

namespace {

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse an exact lattice with known values") {
  CorpusEntry e = parse_lattice_json(
      R"({"name": "D2ish", "dim": 2, "basis": [[1, "1/2"], [0, "3/4"]], "known": {"lambda1": 1, "kissing": 2}})", "x.json");
  CHECK(e.name == "D2ish");
  CHECK(e.source == "x.json");
  CHECK(e.lattice.exact());
  CHECK(e.lattice.exact_basis()(0, 1) == Rational(1, 2));
  CHECK(e.lattice.exact_basis()(1, 1) == Rational(3, 4));
  // basis[i][j] is coordinate i of vector j
  CHECK(e.lattice.columns()(0, 1) == 0.5);
  CHECK(e.lattice.columns()(1, 0) == 0.0);
  CHECK(*e.known.lambda1 == 1.0);
  CHECK(!e.known.mu);
  CHECK(*e.known.kissing == 2);
}

TEST_CASE("number entries: dyadic stays exact, others switch to float mode") {
  CHECK(parse_lattice_json(R"({"name": "a", "basis": [[0.5, 0], [0, 0.25]]})", "a").lattice.exact());
  CHECK(!parse_lattice_json(R"({"name": "b", "basis": [[1, 0.5], [0, 0.8660254037844386]]})", "b").lattice.exact());
  CHECK(parse_lattice_json(R"({"name": "c", "basis": [["0.1", 0], [0, 1]]})", "c").lattice.exact());
}

TEST_CASE("validation errors name the file") {
  const std::string singular = error_message([] {
    parse_lattice_json(R"({"name": "s", "dim": 2, "basis": [[1, 2], [2, 4]]})", "bad/singular.json");
  });
  CHECK(singular.find("bad/singular.json") != std::string::npos);
  CHECK(singular.find("singular") != std::string::npos);

  CHECK(error_message([] { parse_lattice_json("{", "f.json"); }).find("f.json: invalid JSON") == 0);
  CHECK(error_message([] { parse_lattice_json(R"({"name": "x", "dim": 3, "basis": [[1]]})", "g.json"); })
            .find("g.json") == 0);
  CHECK(error_message([] { parse_lattice_json(R"({"name": "x", "basis": [[1, 0], [0]]})", "h.json"); })
            .find("square") != std::string::npos);
  CHECK(error_message([] { parse_lattice_json(R"({"basis": [[1]]})", "i.json"); }).find("name") != std::string::npos);
  CHECK(error_message([] { parse_lattice_json(R"({"name": "x", "basis": [["1/0"]]})", "j.json"); }) != "");
  try {
    parse_lattice_json(R"({"name": "s", "basis": [[1, 2], [2, 4]]})", "s.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularBasis);
  }
}

TEST_CASE("load a corpus directory") {
  TempDir dir("corpus");
  dir.write("b.json", R"({"name": "Z1", "basis": [[1]]})");
  dir.write("a.json", R"({"name": "Z2", "basis": [[1, 0], [0, 1]]})");
  dir.write("notes.txt", "ignored");
  Corpus c = load_corpus(dir.path());
  REQUIRE(c.entries.size() == 2);
  CHECK(c.entries[0].name == "Z2");
  CHECK(c.entries[1].name == "Z1");

  dir.write("c.json", R"({"name": "Z1", "basis": [[2]]})");
  CHECK(error_message([&] { load_corpus(dir.path()); }).find("duplicate") != std::string::npos);
}

TEST_CASE("empty corpus") {
  TempDir dir("empty");
  CHECK(error_message([&] { load_corpus(dir.path()); }) == "empty corpus");
  CHECK(error_message([&] { load_corpus(dir.path() / "missing"); }) != "");
}

TEST_CASE("JSON round trip") {
  const Lattice l = generate_random_lattice(3, 42, RandomStyle::kIntegerEntries);
  KnownValues k;
  k.mu = 1.25;
  const std::string text = lattice_to_json("r", l, k);
  CorpusEntry back = parse_lattice_json(text, "r.json");
  CHECK(back.lattice.exact());
  CHECK(back.lattice.columns() == l.columns());
  CHECK(*back.known.mu == 1.25);
  CHECK(lattice_to_json("r", back.lattice, back.known) == text);

  const Lattice f = parse_lattice_json(R"({"name": "f", "basis": [[1, 0.5], [0, 0.8660254037844386]]})", "f").lattice;
  CHECK(parse_lattice_json(lattice_to_json("f", f), "f").lattice.columns() == f.columns());
}

TEST_CASE("random generation") {
  for (int n : {1, 2, 3, 5}) {
    for (std::uint64_t seed : {1ULL, 7ULL, 123456789ULL}) {
      const Lattice u = generate_random_lattice(n, seed, RandomStyle::kUnimodularOfZn);
      CHECK(u.exact());
      CHECK(u.exact_det_sq() == 1);
      CHECK(is_lll_reduced(u, 0.99));
      CHECK(generate_random_lattice(n, seed, RandomStyle::kUnimodularOfZn).columns() == u.columns());

      const Lattice i = generate_random_lattice(n, seed, RandomStyle::kIntegerEntries);
      CHECK(sgn(i.exact_det_sq()) > 0);
      CHECK(is_lll_reduced(i, 0.99));
      CHECK(generate_random_lattice(n, seed, RandomStyle::kIntegerEntries).columns() == i.columns());
    }
  }
  CHECK(generate_random_lattice(3, 1, RandomStyle::kIntegerEntries).columns() !=
        generate_random_lattice(3, 2, RandomStyle::kIntegerEntries).columns());
  CHECK(parse_random_style("integer_entries") == RandomStyle::kIntegerEntries);
  CHECK(parse_random_style("unimodular_of_Zn") == RandomStyle::kUnimodularOfZn);
  CHECK(!parse_random_style("haar"));
}

TEST_CASE("integer_entries n=3 seed 42 has the brute-force minimum") {
  const Lattice l = generate_random_lattice(3, 42, RandomStyle::kIntegerEntries);
  const LatticePoint sv = shortest_vector(l);
  EnumerationRequest req;
  req.radius = sv.dist * 1.5;
  req.exclude_zero_offset = true;
  double best = 1e300;
  for (const LatticePoint& p : brute_force_within(l, req)) best = std::min(best, p.dist_sq);
  CHECK(best == sv.dist_sq);
}
