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

#ifndef LATKIT_LATTICE_HPP_
#define LATKIT_LATTICE_HPP_

#include <gmpxx.h>

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace latkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = std::vector<long long>;
using Rational = mpq_class;

// Dense rational matrix for the small dimensions handled here.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  static RationalMatrix identity(int n);
  // Exact: every finite double is a dyadic rational.
  static RationalMatrix from_double(const Matrix& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int r, int c) { return data_[r * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return data_[r * cols_ + c]; }

  Matrix to_double() const;
  RationalMatrix transpose() const;
  RationalMatrix operator*(const RationalMatrix& rhs) const;
  RationalMatrix operator*(const IntMatrix& rhs) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

Rational determinant(RationalMatrix m);
// Throws kSingularBasis when `m` is singular.
RationalMatrix inverse(const RationalMatrix& m);

// Returns x as an exact rational when x * 2^32 is an integer.
std::optional<Rational> exact_dyadic(double x);

// Parses "p/q" or a plain integer; denominators above 2^32 are rejected.
std::optional<Rational> parse_rational(const std::string& text);

struct Basis {
  // n x n, one basis vector per column.
  Matrix columns;
  // Present when every entry is rational with denominator <= 2^32.
  std::optional<RationalMatrix> exact;

  int dim() const { return static_cast<int>(columns.cols()); }

  // Detects exactness entry by entry (see exact_dyadic).
  static Basis from_columns(const Matrix& columns);
  static Basis from_exact(const RationalMatrix& columns);
  // Row-major matrix with basis vectors as columns, the JSON layout.
  static Basis from_rows(int dim, const std::vector<double>& row_major);
};

// An immutable full-rank lattice with cached Gram matrix and determinant.
class Lattice {
 public:
  // Throws kSingularBasis for dependent columns and kInvalidArgument for
  // non-square or empty input.
  static Lattice make(Basis basis, bool reduced = false);

  int dim() const { return basis_.dim(); }
  const Basis& basis() const { return basis_; }
  const Matrix& columns() const { return basis_.columns; }
  const Matrix& gram() const { return gram_; }
  double det() const { return det_; }
  bool reduced() const { return reduced_; }

  bool exact() const { return basis_.exact.has_value(); }
  // Valid only when exact().
  const RationalMatrix& exact_basis() const { return *basis_.exact; }
  const RationalMatrix& exact_gram() const { return *exact_gram_; }
  const Rational& exact_det_sq() const { return *exact_det_sq_; }

 private:
  Lattice() = default;

  Basis basis_;
  Matrix gram_;
  double det_ = 0.0;
  bool reduced_ = false;
  std::optional<RationalMatrix> exact_gram_;
  std::optional<Rational> exact_det_sq_;
};

inline Lattice make_lattice(Basis basis) { return Lattice::make(std::move(basis)); }

// Basis B * gram^-1, i.e. (B^T)^-1.
Lattice dual(const Lattice& lattice);

Lattice scaled(const Lattice& lattice, double factor);
// Orthogonal direct sum; the ambient dimension is the sum of both.
Lattice direct_sum(const Lattice& a, const Lattice& b);
Lattice integer_lattice(int n);

struct Reduction {
  Lattice lattice;
  // reduced columns = original columns * transform; |det transform| = 1.
  IntMatrix transform;
  bool used_rational = false;
};

// LLL with Lovasz parameter delta in (0.25, 1).  Runs in double precision
// and falls back to rational arithmetic when the double result fails the
// reduction conditions on recheck.
Reduction lll_reduce_with_transform(const Lattice& lattice, double delta = 0.99);
Lattice lll_reduce(const Lattice& lattice, double delta = 0.99);

// Checks size reduction and the Lovasz condition on the lattice's basis.
bool is_lll_reduced(const Lattice& lattice, double delta);

// Compensated dot product.
double dot(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

}  // namespace latkit

#endif  // LATKIT_LATTICE_HPP_
