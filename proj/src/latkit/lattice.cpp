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

#include "latkit/lattice.hpp"

#include <cmath>
#include <regex>

#include "latkit/error.hpp"

namespace latkit {

namespace {

const mpz_class& max_denominator() {
  static const mpz_class kMax = mpz_class(1) << 32;
  return kMax;
}

}  // namespace

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_double(const Matrix& m) {
  RationalMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) = mpq_class(m(r, c));
  return out;
}

Matrix RationalMatrix::to_double() const {
  Matrix m(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c).get_d();
  return m;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  RationalMatrix out(rows_, rhs.cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < rhs.cols_; ++c) {
      Rational acc = 0;
      for (int k = 0; k < cols_; ++k) acc += (*this)(r, k) * rhs(k, c);
      out(r, c) = acc;
    }
  return out;
}

RationalMatrix RationalMatrix::operator*(const IntMatrix& rhs) const {
  RationalMatrix out(rows_, static_cast<int>(rhs.cols()));
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < out.cols(); ++c) {
      Rational acc = 0;
      for (int k = 0; k < cols_; ++k) {
        if (rhs(k, c) != 0) acc += (*this)(r, k) * Rational(static_cast<long>(rhs(k, c)));
      }
      out(r, c) = acc;
    }
  return out;
}

Rational determinant(RationalMatrix m) {
  const int n = m.rows();
  Rational det = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (sgn(m(r, col)) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return 0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (sgn(m(r, col)) == 0) continue;
      Rational f = m(r, col) / m(col, col);
      for (int c = col; c < n; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

RationalMatrix inverse(const RationalMatrix& input) {
  const int n = input.rows();
  RationalMatrix a = input;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (sgn(a(r, col)) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw Error(ErrorCode::kSingularBasis, "matrix is singular");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    }
    Rational p = a(col, col);
    for (int c = 0; c < n; ++c) {
      a(col, c) /= p;
      inv(col, c) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || sgn(a(r, col)) == 0) continue;
      Rational f = a(r, col);
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

std::optional<Rational> exact_dyadic(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  Rational q(x);
  q.canonicalize();
  if (q.get_den() > max_denominator()) return std::nullopt;
  return q;
}

std::optional<Rational> parse_rational(const std::string& text) {
  static const std::regex kFraction(R"(\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*)");
  static const std::regex kDecimal(R"(\s*([+-]?)(\d*)\.(\d+)\s*)");
  std::smatch m;
  Rational q;
  if (std::regex_match(text, m, kFraction)) {
    std::string num_text = m[1].str();
    if (num_text.front() == '+') num_text.erase(0, 1);
    mpz_class num(num_text, 10);
    mpz_class den = m[2].matched ? mpz_class(m[2].str(), 10) : mpz_class(1);
    if (den == 0) return std::nullopt;
    q = Rational(num, den);
  } else if (std::regex_match(text, m, kDecimal)) {
    std::string digits = m[2].str() + m[3].str();
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, m[3].length());
    if (m[1].str() == "-") num = -num;
    q = Rational(num, den);
  } else {
    return std::nullopt;
  }
  q.canonicalize();
  if (q.get_den() > max_denominator()) return std::nullopt;
  return q;
}

Basis Basis::from_columns(const Matrix& columns) {
  Basis b;
  b.columns = columns;
  RationalMatrix exact(static_cast<int>(columns.rows()), static_cast<int>(columns.cols()));
  for (int r = 0; r < exact.rows(); ++r) {
    for (int c = 0; c < exact.cols(); ++c) {
      auto q = exact_dyadic(columns(r, c));
      if (!q) return b;
      exact(r, c) = *q;
    }
  }
  b.exact = std::move(exact);
  return b;
}

Basis Basis::from_exact(const RationalMatrix& columns) {
  Basis b;
  b.columns = columns.to_double();
  b.exact = columns;
  return b;
}

Basis Basis::from_rows(int dim, const std::vector<double>& row_major) {
  if (dim < 1 || row_major.size() != static_cast<size_t>(dim) * dim)
    throw Error(ErrorCode::kInvalidArgument, "basis must be a square dim x dim matrix");
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = row_major[static_cast<size_t>(r) * dim + c];
  return from_columns(m);
}

double dot(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  // Neumaier summation.
  double sum = 0.0;
  double comp = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double term = a[i] * b[i];
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

Lattice Lattice::make(Basis basis, bool reduced) {
  const auto n = basis.columns.cols();
  if (n < 1 || basis.columns.rows() != n)
    throw Error(ErrorCode::kInvalidArgument, "basis must be square with dim >= 1");
  if (!basis.columns.allFinite())
    throw Error(ErrorCode::kInvalidArgument, "basis has non-finite entries");

  Lattice l;
  l.reduced_ = reduced;
  if (basis.exact) {
    const RationalMatrix& b = *basis.exact;
    RationalMatrix gram = b.transpose() * b;
    Rational det_sq = determinant(gram);
    if (sgn(det_sq) <= 0)
      throw Error(ErrorCode::kSingularBasis, "singular basis: columns are linearly dependent");
    l.gram_ = gram.to_double();
    l.det_ = std::sqrt(det_sq.get_d());
    l.exact_gram_ = std::move(gram);
    l.exact_det_sq_ = std::move(det_sq);
  } else {
    const Matrix& b = basis.columns;
    Matrix gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) gram(i, j) = gram(j, i) = dot(b.col(i), b.col(j));
    const double det_b = std::abs(b.fullPivLu().determinant());
    double hadamard = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) hadamard *= b.col(i).norm();
    if (!(det_b > 1e-12 * hadamard) || !(gram.determinant() > 0.0))
      throw Error(ErrorCode::kSingularBasis, "singular basis: columns are linearly dependent");
    l.gram_ = std::move(gram);
    l.det_ = det_b;
  }
  l.basis_ = std::move(basis);
  return l;
}

Lattice dual(const Lattice& lattice) {
  if (lattice.exact()) {
    RationalMatrix d = lattice.exact_basis() * inverse(lattice.exact_gram());
    return Lattice::make(Basis::from_exact(d));
  }
  const Matrix& b = lattice.columns();
  const auto n = b.cols();
  Matrix d = b.transpose().fullPivLu().solve(Matrix::Identity(n, n));
  Basis basis;
  basis.columns = std::move(d);
  return Lattice::make(std::move(basis));
}

Lattice scaled(const Lattice& lattice, double factor) {
  auto exact_factor = exact_dyadic(factor);
  if (lattice.exact() && exact_factor) {
    RationalMatrix b = lattice.exact_basis();
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c) b(r, c) *= *exact_factor;
    return Lattice::make(Basis::from_exact(b));
  }
  Basis basis;
  basis.columns = lattice.columns() * factor;
  return Lattice::make(std::move(basis));
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  const int na = a.dim();
  const int nb = b.dim();
  if (a.exact() && b.exact()) {
    RationalMatrix m(na + nb, na + nb);
    for (int r = 0; r < na; ++r)
      for (int c = 0; c < na; ++c) m(r, c) = a.exact_basis()(r, c);
    for (int r = 0; r < nb; ++r)
      for (int c = 0; c < nb; ++c) m(na + r, na + c) = b.exact_basis()(r, c);
    return Lattice::make(Basis::from_exact(m));
  }
  Matrix m = Matrix::Zero(na + nb, na + nb);
  m.topLeftCorner(na, na) = a.columns();
  m.bottomRightCorner(nb, nb) = b.columns();
  Basis basis;
  basis.columns = std::move(m);
  return Lattice::make(std::move(basis));
}

Lattice integer_lattice(int n) {
  return Lattice::make(Basis::from_exact(RationalMatrix::identity(n)));
}

}  // namespace latkit
