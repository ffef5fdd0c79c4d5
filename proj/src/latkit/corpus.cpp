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

#include "latkit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "latkit/error.hpp"

namespace latkit {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(ErrorCode code, const std::string& source, const std::string& what) {
  throw Error(code, source + ": " + what);
}

struct Entry {
  double value;
  std::optional<Rational> exact;
};

Entry parse_entry(const json& v, const std::string& source) {
  if (v.is_number_integer()) {
    const long long i = v.get<long long>();
    return {static_cast<double>(i), Rational(mpz_class(std::to_string(i), 10))};
  }
  if (v.is_number()) {
    const double d = v.get<double>();
    return {d, exact_dyadic(d)};
  }
  if (v.is_string()) {
    auto q = parse_rational(v.get<std::string>());
    if (!q) fail(ErrorCode::kParseError, source, "cannot parse basis entry \"" + v.get<std::string>() + "\"");
    return {q->get_d(), std::move(q)};
  }
  fail(ErrorCode::kParseError, source, "basis entries must be numbers or \"p/q\" strings");
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& source) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(ErrorCode::kParseError, source, std::string("known.") + key + " must be a number");
  return v.get<double>();
}

ordered_json entry_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return q.get_str();
}

// Uniform in [0, bound) without implementation-defined distributions.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

CorpusEntry parse_lattice_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, source, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kParseError, source, "expected a JSON object");
  if (!doc.contains("name") || !doc["name"].is_string()) fail(ErrorCode::kParseError, source, "missing string \"name\"");
  if (!doc.contains("basis") || !doc["basis"].is_array()) fail(ErrorCode::kParseError, source, "missing array \"basis\"");
  const json& rows = doc["basis"];
  const int n = static_cast<int>(rows.size());
  if (n < 1) fail(ErrorCode::kParseError, source, "empty basis");
  if (doc.contains("dim")) {
    if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() != n)
      fail(ErrorCode::kParseError, source, "\"dim\" does not match the basis size");
  }

  Matrix columns(n, n);
  RationalMatrix exact(n, n);
  bool all_exact = true;
  for (int r = 0; r < n; ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n)
      fail(ErrorCode::kParseError, source, "basis must be a square dim x dim matrix");
    for (int c = 0; c < n; ++c) {
      Entry e = parse_entry(rows[r][c], source);
      if (!std::isfinite(e.value)) fail(ErrorCode::kParseError, source, "non-finite basis entry");
      columns(r, c) = e.value;
      if (e.exact)
        exact(r, c) = *e.exact;
      else
        all_exact = false;
    }
  }

  KnownValues known;
  if (doc.contains("known")) {
    const json& k = doc["known"];
    if (!k.is_object()) fail(ErrorCode::kParseError, source, "\"known\" must be an object");
    known.lambda1 = optional_number(k, "lambda1", source);
    known.mu = optional_number(k, "mu", source);
    if (k.contains("kissing")) {
      if (!k["kissing"].is_number_integer() || k["kissing"].get<long long>() < 0)
        fail(ErrorCode::kParseError, source, "known.kissing must be a nonnegative integer");
      known.kissing = k["kissing"].get<std::uint64_t>();
    }
  }

  try {
    Basis basis;
    if (all_exact) {
      basis = Basis::from_exact(exact);
    } else {
      basis.columns = columns;
    }
    return CorpusEntry{doc["name"].get<std::string>(), source, Lattice::make(std::move(basis)), known};
  } catch (const Error& e) {
    fail(e.code(), source, e.what());
  }
}

CorpusEntry load_lattice_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, path.string() + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_lattice_json(text.str(), path.string());
}

Corpus load_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec))
    throw Error(ErrorCode::kIoError, dir.string() + ": not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& item : std::filesystem::directory_iterator(dir))
    if (item.is_regular_file() && item.path().extension() == ".json") files.push_back(item.path());
  if (files.empty()) throw Error(ErrorCode::kInvalidArgument, "empty corpus");
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

  Corpus corpus;
  std::set<std::string> names;
  for (const auto& f : files) {
    CorpusEntry e = load_lattice_file(f);
    if (!names.insert(e.name).second)
      throw Error(ErrorCode::kInvalidArgument, f.string() + ": duplicate lattice name \"" + e.name + "\"");
    corpus.entries.push_back(std::move(e));
  }
  return corpus;
}

std::string lattice_to_json(const std::string& name, const Lattice& lattice, const KnownValues& known) {
  const int n = lattice.dim();
  ordered_json doc;
  doc["name"] = name;
  doc["dim"] = n;
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < n; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < n; ++c) {
      if (lattice.exact())
        row.push_back(entry_json(lattice.exact_basis()(r, c)));
      else
        row.push_back(lattice.columns()(r, c));
    }
    rows.push_back(std::move(row));
  }
  doc["basis"] = std::move(rows);
  if (known.lambda1 || known.mu || known.kissing) {
    ordered_json k = ordered_json::object();
    if (known.lambda1) k["lambda1"] = *known.lambda1;
    if (known.mu) k["mu"] = *known.mu;
    if (known.kissing) k["kissing"] = *known.kissing;
    doc["known"] = std::move(k);
  }
  return doc.dump(2) + "\n";
}

std::string_view random_style_name(RandomStyle style) {
  return style == RandomStyle::kUnimodularOfZn ? "unimodular_of_Zn" : "integer_entries";
}

std::optional<RandomStyle> parse_random_style(std::string_view text) {
  if (text == "unimodular_of_Zn") return RandomStyle::kUnimodularOfZn;
  if (text == "integer_entries") return RandomStyle::kIntegerEntries;
  return std::nullopt;
}

Lattice generate_random_lattice(int dim, std::uint64_t seed, RandomStyle style) {
  if (dim < 1 || dim > 64) throw Error(ErrorCode::kInvalidArgument, "random lattice dimension must be in [1, 64]");
  std::mt19937_64 rng(seed);
  RationalMatrix b(dim, dim);
  if (style == RandomStyle::kUnimodularOfZn) {
    b = RationalMatrix::identity(dim);
    // 3n elementary operations col_j += m * col_i with 1 <= |m| <= 5.
    for (int k = 0; dim > 1 && k < 3 * dim; ++k) {
      const int i = static_cast<int>(draw(rng, dim));
      int j = static_cast<int>(draw(rng, dim - 1));
      if (j >= i) ++j;
      long m = static_cast<long>(draw(rng, 5)) + 1;
      if (draw(rng, 2)) m = -m;
      for (int r = 0; r < dim; ++r) b(r, j) += m * b(r, i);
    }
  } else {
    do {
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) b(r, c) = static_cast<long>(draw(rng, 19)) - 9;
    } while (sgn(determinant(b)) == 0);
  }
  return lll_reduce(Lattice::make(Basis::from_exact(b)));
}

}  // namespace latkit
