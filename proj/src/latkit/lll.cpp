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

#include <cmath>
#include <utility>
#include <vector>

#include "latkit/error.hpp"
#include "latkit/lattice.hpp"

namespace latkit {

namespace {

constexpr long long kMaxTransformEntry = 1LL << 40;
constexpr int kMaxSwaps = 1'000'000;

double round_half_up(double x) { return std::floor(x + 0.5); }

Rational round_half_up(const Rational& x) {
  Rational shifted = x + Rational(1, 2);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return Rational(q);
}

long long to_ll(double x) {
  if (!(std::abs(x) < static_cast<double>(kMaxTransformEntry)))
    throw Error(ErrorCode::kReductionUnstable, "LLL multiplier out of range");
  return static_cast<long long>(x);
}

long long to_ll(const Rational& x) {
  const mpz_class& num = x.get_num();
  if (!num.fits_slong_p() || std::abs(num.get_si()) >= kMaxTransformEntry)
    throw Error(ErrorCode::kReductionUnstable, "LLL multiplier out of range");
  return num.get_si();
}

template <typename T>
using Columns = std::vector<std::vector<T>>;

template <typename T>
T inner(const std::vector<T>& a, const std::vector<T>& b) {
  T acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <typename T>
struct GramSchmidt {
  std::vector<std::vector<T>> mu;
  std::vector<T> norm_sq;  // |b*_i|^2
};

template <typename T>
GramSchmidt<T> gram_schmidt(const Columns<T>& b) {
  const size_t n = b.size();
  GramSchmidt<T> gs;
  gs.mu.assign(n, std::vector<T>(n, T(0)));
  gs.norm_sq.assign(n, T(0));
  Columns<T> star = b;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < i; ++j) {
      gs.mu[i][j] = inner(b[i], star[j]) / gs.norm_sq[j];
      for (size_t c = 0; c < star[i].size(); ++c) star[i][c] -= gs.mu[i][j] * star[j][c];
    }
    gs.mu[i][i] = 1;
    gs.norm_sq[i] = inner(star[i], star[i]);
  }
  return gs;
}

template <typename T>
void lll_core(Columns<T>& b, IntMatrix& transform, const T& delta) {
  const int n = static_cast<int>(b.size());
  GramSchmidt<T> gs = gram_schmidt(b);
  int k = 1;
  int swaps = 0;
  while (k < n) {
    for (int j = k - 1; j >= 0; --j) {
      T q = round_half_up(gs.mu[k][j]);
      if (q == 0) continue;
      const long long qi = to_ll(q);
      for (size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[j][c];
      transform.col(k) -= qi * transform.col(j);
      if (transform.col(k).cwiseAbs().maxCoeff() > kMaxTransformEntry)
        throw Error(ErrorCode::kReductionUnstable, "LLL transform entries diverged");
      for (int l = 0; l < j; ++l) gs.mu[k][l] -= q * gs.mu[j][l];
      gs.mu[k][j] -= q;
    }
    const T& m = gs.mu[k][k - 1];
    if (gs.norm_sq[k] >= (delta - m * m) * gs.norm_sq[k - 1]) {
      ++k;
      continue;
    }
    std::swap(b[k], b[k - 1]);
    transform.col(k).swap(transform.col(k - 1));
    gs = gram_schmidt(b);
    k = std::max(k - 1, 1);
    if (++swaps > kMaxSwaps) throw Error(ErrorCode::kReductionUnstable, "LLL did not terminate");
  }
}

template <typename T>
bool satisfies_lll(const Columns<T>& b, const T& delta, const T& size_slack, const T& lovasz_slack) {
  GramSchmidt<T> gs = gram_schmidt(b);
  const size_t n = b.size();
  const T half = T(1) / T(2);
  for (size_t i = 1; i < n; ++i) {
    for (size_t j = 0; j < i; ++j) {
      T a = gs.mu[i][j] < 0 ? T(-gs.mu[i][j]) : gs.mu[i][j];
      if (a > half + size_slack) return false;
    }
    const T& m = gs.mu[i][i - 1];
    if (gs.norm_sq[i] < (delta - m * m) * gs.norm_sq[i - 1] * (T(1) - lovasz_slack)) return false;
  }
  return true;
}

Columns<double> double_columns(const Matrix& m) {
  Columns<double> cols(m.cols(), std::vector<double>(m.rows()));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) cols[c][r] = m(r, c);
  return cols;
}

Columns<Rational> rational_columns(const RationalMatrix& m) {
  Columns<Rational> cols(m.cols(), std::vector<Rational>(m.rows()));
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) cols[c][r] = m(r, c);
  return cols;
}

void check_delta(double delta) {
  if (!(delta > 0.25 && delta < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "LLL delta must lie in (0.25, 1)");
}

Basis apply_transform(const Lattice& lattice, const IntMatrix& transform) {
  if (lattice.exact()) return Basis::from_exact(lattice.exact_basis() * transform);
  Basis basis;
  basis.columns = lattice.columns() * transform.cast<double>();
  return basis;
}

bool unimodular(const IntMatrix& transform) {
  RationalMatrix t(static_cast<int>(transform.rows()), static_cast<int>(transform.cols()));
  for (int r = 0; r < t.rows(); ++r)
    for (int c = 0; c < t.cols(); ++c) t(r, c) = Rational(static_cast<long>(transform(r, c)));
  return abs(determinant(t)) == 1;
}

}  // namespace

bool is_lll_reduced(const Lattice& lattice, double delta) {
  if (lattice.exact()) {
    return satisfies_lll(rational_columns(lattice.exact_basis()), Rational(delta), Rational(0), Rational(0));
  }
  return satisfies_lll(double_columns(lattice.columns()), delta, 1e-9, 1e-9);
}

Reduction lll_reduce_with_transform(const Lattice& lattice, double delta) {
  check_delta(delta);
  const int n = lattice.dim();
  IntMatrix transform = IntMatrix::Identity(n, n);
  bool double_ok = true;
  try {
    Columns<double> cols = double_columns(lattice.columns());
    lll_core(cols, transform, delta);
  } catch (const Error&) {
    double_ok = false;
  }
  if (double_ok) {
    Lattice reduced = Lattice::make(apply_transform(lattice, transform), true);
    if (is_lll_reduced(reduced, delta) && unimodular(transform))
      return Reduction{std::move(reduced), std::move(transform), false};
  }

  // Rational fallback; doubles convert exactly.
  RationalMatrix exact = lattice.exact() ? lattice.exact_basis() : RationalMatrix::from_double(lattice.columns());
  transform = IntMatrix::Identity(n, n);
  Columns<Rational> cols = rational_columns(exact);
  lll_core(cols, transform, Rational(delta));
  if (!unimodular(transform))
    throw Error(ErrorCode::kReductionUnstable, "LLL transform is not unimodular");
  Lattice reduced = Lattice::make(apply_transform(lattice, transform), true);
  return Reduction{std::move(reduced), std::move(transform), true};
}

Lattice lll_reduce(const Lattice& lattice, double delta) {
  return lll_reduce_with_transform(lattice, delta).lattice;
}

}  // namespace latkit
