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

#ifndef LATKIT_CORPUS_HPP_
#define LATKIT_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latkit/invariants.hpp"
#include "latkit/lattice.hpp"

namespace latkit {

struct CorpusEntry {
  std::string name;
  std::string source;  // file the entry was read from
  Lattice lattice;
  KnownValues known;
};

// Parses {"name", "dim", "basis": [[...]], optional "known"}.  basis[i][j] is
// coordinate i of basis vector j.  Entries may be numbers or "p/q" strings.
// Errors carry `source` in their message.
CorpusEntry parse_lattice_json(const std::string& text, const std::string& source);
CorpusEntry load_lattice_file(const std::filesystem::path& path);

struct Corpus {
  std::vector<CorpusEntry> entries;  // sorted by file name
};

// Every *.json file in dir.  Throws kInvalidArgument("empty corpus") when none.
Corpus load_corpus(const std::filesystem::path& dir);

std::string lattice_to_json(const std::string& name, const Lattice& lattice, const KnownValues& known = {});

enum class RandomStyle { kUnimodularOfZn, kIntegerEntries };

std::string_view random_style_name(RandomStyle style);
std::optional<RandomStyle> parse_random_style(std::string_view text);

// LLL-reduced; identical output for identical (dim, seed, style) on every platform.
Lattice generate_random_lattice(int dim, std::uint64_t seed, RandomStyle style);

}  // namespace latkit

#endif  // LATKIT_CORPUS_HPP_
