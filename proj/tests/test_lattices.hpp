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

// Named lattices used across the test suites, built directly from bases so
// the tests do not depend on the corpus loader.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "latkit/lattice.hpp"

namespace latkit::testing {

// Rows of the list are basis vectors.
inline Lattice from_vectors(const std::vector<std::vector<double>>& vecs) {
  const int n = static_cast<int>(vecs.size());
  Matrix m(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) m(r, c) = vecs[c][r];
  return Lattice::make(Basis::from_columns(m));
}

inline Lattice zn(int n) { return integer_lattice(n); }

inline Lattice d3() { return from_vectors({{-1, -1, 0}, {1, -1, 0}, {0, 1, -1}}); }

inline Lattice d4() { return from_vectors({{1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}, {0, 0, 1, 1}}); }

inline Lattice a2() { return from_vectors({{1, 0}, {0.5, std::sqrt(3.0) / 2}}); }

inline Lattice e8() {
  std::vector<std::vector<double>> v(8, std::vector<double>(8, 0.0));
  v[0][0] = 2;
  for (int i = 1; i < 7; ++i) {
    v[i][i - 1] = -1;
    v[i][i] = 1;
  }
  for (int j = 0; j < 8; ++j) v[7][j] = 0.5;
  return from_vectors(v);
}

// Integer entries in [-3, 3]; rejects singular draws.
inline Lattice random_lattice(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (;;) {
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = static_cast<double>(static_cast<int>(rng() % 7) - 3);
    if (std::abs(m.determinant()) > 0.5) return lll_reduce(Lattice::make(Basis::from_columns(m)));
  }
}

}  // namespace latkit::testing
