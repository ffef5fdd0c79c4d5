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

#include "latkit/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "latkit/error.hpp"

namespace latkit {

namespace {

constexpr double kFloatSlack = 1e-9;

mpz_class to_mpz(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(u >> 64));
  mpz_class lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL));
  mpz_class out = (hi << 64) + lo;
  return neg ? mpz_class(-out) : out;
}

double window(double r_sq, double center_sq) { return 1e-8 * (r_sq + center_sq + 1.0) + 4.0 * kFloatSlack * std::sqrt(r_sq); }

double compensated_norm_sq(const Vector& v) { return dot(v, v); }

bool lex_less(const IntVector& a, const IntVector& b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); }

void sort_points(std::vector<LatticePoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const LatticePoint& a, const LatticePoint& b) { return lex_less(a.coeffs, b.coeffs); });
}

Vector center_or_zero(const Vector& center, int n) {
  if (center.size() == 0) return Vector::Zero(n);
  if (center.size() != n) throw Error(ErrorCode::kInvalidArgument, "center dimension does not match lattice");
  return center;
}

struct Traversal {
  const std::vector<std::vector<double>>& mu;
  const std::vector<double>& norm_sq;
  const Vector& c;
  double bound;
  std::uint64_t budget;
  const std::function<void(std::span<const long long>, double)>& leaf;
  std::vector<long long> x;
  std::uint64_t nodes = 0;

  void descend(int i, double partial) {
    const int n = static_cast<int>(x.size());
    double ctr = c[i];
    for (int j = i + 1; j < n; ++j) ctr -= mu[j][i] * (static_cast<double>(x[j]) - c[j]);
    const long long x0 = static_cast<long long>(std::floor(ctr + 0.5));

    auto take = [&](long long v) {
      const double diff = static_cast<double>(v) - ctr;
      const double p = partial + norm_sq[i] * diff * diff;
      if (p > bound) return false;
      if (++nodes > budget)
        throw Error(ErrorCode::kBudgetExceeded, "enumeration node budget exceeded (radius too large for dimension)");
      x[i] = v;
      if (i == 0)
        leaf(x, p);
      else
        descend(i - 1, p);
      return true;
    };

    if (!take(x0)) return;
    // Schnorr-Euchner zig-zag: alternate sides, nearer side first.
    bool up_alive = true;
    bool down_alive = true;
    long long up = x0 + 1;
    long long down = x0 - 1;
    bool up_turn = ctr >= static_cast<double>(x0);
    while (up_alive || down_alive) {
      if (up_turn && up_alive) {
        up_alive = take(up++);
      } else if (!up_turn && down_alive) {
        down_alive = take(down--);
      }
      if (up_alive && down_alive)
        up_turn = !up_turn;
      else
        up_turn = up_alive;
    }
  }
};

}  // namespace

SquaredRadius SquaredRadius::of_radius(double r) {
  SquaredRadius s;
  s.value = r * r;
  Rational q(r);
  s.exact = q * q;
  return s;
}

Enumerator::Enumerator(const Lattice& lattice, EnumOptions options)
    : lattice_(lattice), reduction_(lll_reduce_with_transform(lattice, options.lll_delta)), options_(options) {
  const int n = lattice_.dim();
  const Matrix& b = reduction_.lattice.columns();
  mu_.assign(n, std::vector<double>(n, 0.0));
  norm_sq_.assign(n, 0.0);
  // Long double keeps the Gram-Schmidt data accurate to the last double bit.
  std::vector<std::vector<long double>> star(n, std::vector<long double>(n));
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < n; ++r) star[i][r] = b(r, i);
    for (int j = 0; j < i; ++j) {
      long double num = 0;
      for (int r = 0; r < n; ++r) num += static_cast<long double>(b(r, i)) * star[j][r];
      const long double m = num / static_cast<long double>(norm_sq_[j]);
      mu_[i][j] = static_cast<double>(m);
      for (int r = 0; r < n; ++r) star[i][r] -= m * star[j][r];
    }
    mu_[i][i] = 1.0;
    long double ns = 0;
    for (int r = 0; r < n; ++r) ns += star[i][r] * star[i][r];
    norm_sq_[i] = static_cast<double>(ns);
  }
  reduced_lu_ = Eigen::FullPivLU<Matrix>(b);

  if (exact()) {
    const RationalMatrix& g = reduction_.lattice.exact_gram();
    mpz_class scale = 1;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), g(r, c).get_den_mpz_t());
    IntMatrix scaled(n, n);
    bool fits = true;
    for (int r = 0; r < n && fits; ++r) {
      for (int c = 0; c < n; ++c) {
        mpz_class v = g(r, c).get_num() * (scale / g(r, c).get_den());
        if (!v.fits_slong_p() || std::abs(v.get_si()) > (1L << 40)) {
          fits = false;
          break;
        }
        scaled(r, c) = v.get_si();
      }
    }
    if (fits) {
      scaled_gram_ = std::move(scaled);
      gram_scale_ = scale;
    }
  }
}

Vector Enumerator::to_reduced_coords(const Vector& center) const {
  if (center.isZero(0.0)) return Vector::Zero(dim());
  return reduced_lu_.solve(center);
}

IntVector Enumerator::to_input_coeffs(std::span<const long long> x) const {
  const int n = dim();
  IntVector z(n, 0);
  for (int r = 0; r < n; ++r) {
    long long acc = 0;
    for (int c = 0; c < n; ++c) acc += reduction_.transform(r, c) * x[c];
    z[r] = acc;
  }
  return z;
}

Vector Enumerator::point(std::span<const long long> z) const {
  const int n = dim();
  Vector p(n);
  Vector zd(n);
  for (int i = 0; i < n; ++i) zd[i] = static_cast<double>(z[i]);
  for (int r = 0; r < n; ++r) p[r] = dot(lattice_.columns().row(r).transpose(), zd);
  return p;
}

double Enumerator::direct_dist_sq(std::span<const long long> x, const Vector& center) const {
  const int n = dim();
  const Matrix& b = reduction_.lattice.columns();
  Vector xd(n);
  for (int i = 0; i < n; ++i) xd[i] = static_cast<double>(x[i]);
  Vector diff(n);
  for (int r = 0; r < n; ++r) diff[r] = dot(b.row(r).transpose(), xd) - center[r];
  return compensated_norm_sq(diff);
}

IntVector Enumerator::nearest_plane(const Vector& target) const {
  const int n = dim();
  const Vector c = to_reduced_coords(target);
  IntVector x(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    double ctr = c[i];
    for (int j = i + 1; j < n; ++j) ctr -= mu_[j][i] * (static_cast<double>(x[j]) - c[j]);
    x[i] = static_cast<long long>(std::floor(ctr + 0.5));
  }
  return x;
}

std::optional<__int128> Enumerator::scaled_norm_sq(std::span<const long long> x) const {
  if (!scaled_gram_) return std::nullopt;
  const int n = dim();
  __int128 acc = 0;
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    __int128 row = 0;
    for (int j = 0; j < n; ++j) row += static_cast<__int128>((*scaled_gram_)(i, j)) * x[j];
    acc += row * x[i];
  }
  return acc;
}

Rational Enumerator::exact_norm_sq(std::span<const long long> x) const {
  if (auto scaled = scaled_norm_sq(x)) return Rational(to_mpz(*scaled), gram_scale_);
  return exact_dist_sq(x, Vector::Zero(dim()));
}

Rational Enumerator::exact_dist_sq(std::span<const long long> x, const Vector& center) const {
  const int n = dim();
  const RationalMatrix& b = reduction_.lattice.exact_basis();
  Rational total = 0;
  for (int r = 0; r < n; ++r) {
    Rational coord = -Rational(center[r]);
    for (int c = 0; c < n; ++c)
      if (x[c] != 0) coord += b(r, c) * Rational(static_cast<long>(x[c]));
    total += coord * coord;
  }
  return total;
}

bool Enumerator::inside_outer(std::span<const long long> x, double d2, const Vector& center,
                              const SquaredRadius& outer) const {
  const double w = window(outer.value, center.squaredNorm());
  if (d2 < outer.value - w) return true;
  if (d2 > outer.value + w) return false;
  if (exact()) {
    const Rational r2 = outer.exact ? *outer.exact : Rational(outer.value);
    return center.isZero(0.0) ? exact_norm_sq(x) <= r2 : exact_dist_sq(x, center) <= r2;
  }
  return std::sqrt(direct_dist_sq(x, center)) <= std::sqrt(outer.value) + kFloatSlack;
}

bool Enumerator::inside_inner(std::span<const long long> x, double d2, const Vector& center,
                              const SquaredRadius& inner) const {
  if (inner.value <= 0.0) return true;
  const double w = window(inner.value, center.squaredNorm());
  if (d2 > inner.value + w) return true;
  if (d2 < inner.value - w) return false;
  if (exact()) {
    const Rational r2 = inner.exact ? *inner.exact : Rational(inner.value);
    return center.isZero(0.0) ? exact_norm_sq(x) >= r2 : exact_dist_sq(x, center) >= r2;
  }
  return std::sqrt(direct_dist_sq(x, center)) >= std::sqrt(inner.value) - kFloatSlack;
}

void Enumerator::visit(const Vector& center_in, const SquaredRadius& outer, const std::optional<SquaredRadius>& inner,
                       bool exclude_zero_offset, const PointVisitor& visitor) const {
  const int n = dim();
  const Vector center = center_or_zero(center_in, n);
  if (!(outer.value >= 0.0) || !std::isfinite(outer.value))
    throw Error(ErrorCode::kInvalidArgument, "enumeration radius must be finite and nonnegative");
  const Vector c = to_reduced_coords(center);
  const double w = window(outer.value, center.squaredNorm());
  const double bound = outer.value + w + (exact() ? 0.0 : 2.0 * kFloatSlack * std::sqrt(outer.value) + 1e-17);
  const double zero_tol = 1e-18 * (1.0 + center.squaredNorm());

  std::function<void(std::span<const long long>, double)> leaf = [&](std::span<const long long> x, double d2) {
    if (!inside_outer(x, d2, center, outer)) return;
    if (inner && !inside_inner(x, d2, center, *inner)) return;
    if (exclude_zero_offset && d2 <= 1e-8 * (1.0 + center.squaredNorm())) {
      const bool is_zero =
          exact() ? sgn(exact_dist_sq(x, center)) == 0 : direct_dist_sq(x, center) <= zero_tol;
      if (is_zero) return;
    }
    visitor(x, d2);
  };
  Traversal t{mu_, norm_sq_, c, bound, options_.node_budget, leaf, std::vector<long long>(n, 0)};
  t.descend(n - 1, 0.0);
}

void Enumerator::visit_unchecked(const Vector& center_in, double radius_sq, const PointVisitor& visitor) const {
  const int n = dim();
  const Vector center = center_or_zero(center_in, n);
  if (!(radius_sq >= 0.0) || !std::isfinite(radius_sq))
    throw Error(ErrorCode::kInvalidArgument, "enumeration radius must be finite and nonnegative");
  const double bound = radius_sq + window(radius_sq, center.squaredNorm());
  Traversal t{mu_, norm_sq_, to_reduced_coords(center), bound, options_.node_budget, visitor, std::vector<long long>(n, 0)};
  t.descend(n - 1, 0.0);
}

std::vector<LatticePoint> Enumerator::within(const EnumerationRequest& req) const {
  if (!(req.radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "enumeration radius must be positive");
  const Vector center = center_or_zero(req.center, dim());
  SquaredRadius outer = SquaredRadius::of_radius(req.radius);
  if (req.radius_sq_exact) outer.exact = *req.radius_sq_exact;
  std::vector<LatticePoint> out;
  visit(center, outer, std::nullopt, req.exclude_zero_offset, [&](std::span<const long long> x, double) {
    LatticePoint p;
    p.coeffs = to_input_coeffs(x);
    p.point = point(p.coeffs);
    p.dist_sq = compensated_norm_sq(p.point - center);
    p.dist = std::sqrt(p.dist_sq);
    out.push_back(std::move(p));
  });
  sort_points(out);
  return out;
}

std::vector<LatticePoint> enumerate_within(const Lattice& lattice, const EnumerationRequest& request,
                                           EnumOptions options) {
  return Enumerator(lattice, options).within(request);
}

namespace {

struct Candidate {
  IntVector reduced;
  IntVector coeffs;
  double d2;
};

// Keeps the candidates at minimal distance, using exact norms when available.
std::vector<Candidate> minimal(const Enumerator& e, std::vector<Candidate> cands, const Vector& center,
                               std::optional<Rational>* exact_min) {
  if (cands.empty()) return cands;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cands) best = std::min(best, c.d2);
  const double tol = 1e-9 * best + 1e-12;
  std::erase_if(cands, [&](const Candidate& c) { return c.d2 > best + tol; });
  if (!e.exact()) {
    std::erase_if(cands, [&](const Candidate& c) { return c.d2 > best * (1.0 + 1e-12) + 1e-15; });
    return cands;
  }
  std::vector<Rational> keys;
  keys.reserve(cands.size());
  for (const auto& c : cands) keys.push_back(center.isZero(0.0) ? e.exact_norm_sq(c.reduced) : e.exact_dist_sq(c.reduced, center));
  Rational m = *std::min_element(keys.begin(), keys.end());
  std::vector<Candidate> out;
  for (size_t i = 0; i < cands.size(); ++i)
    if (keys[i] == m) out.push_back(std::move(cands[i]));
  *exact_min = m;
  return out;
}

LatticePoint finish(const Enumerator& e, const Candidate& c, const Vector& center, std::optional<Rational> exact) {
  LatticePoint p;
  p.coeffs = c.coeffs;
  p.point = e.point(p.coeffs);
  if (exact) {
    p.dist_sq = exact->get_d();
    p.dist_sq_exact = std::move(exact);
  } else {
    p.dist_sq = compensated_norm_sq(p.point - center);
  }
  p.dist = std::sqrt(p.dist_sq);
  return p;
}

bool first_nonzero_positive(const IntVector& z) {
  for (long long v : z)
    if (v != 0) return v > 0;
  return false;
}

}  // namespace

LatticePoint shortest_vector(const Enumerator& e) {
  const int n = e.dim();
  const Lattice& red = e.reduced();
  SquaredRadius bound;
  int best_col = 0;
  for (int i = 1; i < n; ++i)
    if (red.gram()(i, i) < red.gram()(best_col, best_col)) best_col = i;
  bound.value = red.gram()(best_col, best_col);
  if (e.exact()) bound.exact = red.exact_gram()(best_col, best_col);

  std::vector<Candidate> cands;
  const Vector zero = Vector::Zero(n);
  e.visit(zero, bound, std::nullopt, true, [&](std::span<const long long> x, double d2) {
    cands.push_back({IntVector(x.begin(), x.end()), e.to_input_coeffs(x), d2});
  });
  std::optional<Rational> exact_min;
  cands = minimal(e, std::move(cands), zero, &exact_min);
  std::erase_if(cands, [](const Candidate& c) { return !first_nonzero_positive(c.coeffs); });
  if (cands.empty()) throw Error(ErrorCode::kReductionUnstable, "shortest vector search found no candidate");
  auto it = std::min_element(cands.begin(), cands.end(),
                             [](const Candidate& a, const Candidate& b) { return lex_less(a.coeffs, b.coeffs); });
  return finish(e, *it, zero, exact_min);
}

LatticePoint shortest_vector(const Lattice& lattice, EnumOptions options) {
  return shortest_vector(Enumerator(lattice, options));
}

LatticePoint closest_vector(const Enumerator& e, const Vector& target) {
  const int n = e.dim();
  if (target.size() != n) throw Error(ErrorCode::kInvalidArgument, "target dimension does not match lattice");
  const IntVector babai = e.nearest_plane(target);
  SquaredRadius bound;
  bound.value = e.direct_dist_sq(babai, target);
  if (e.exact()) bound.exact = e.exact_dist_sq(babai, target);
  bound.value = bound.value * (1.0 + 1e-9) + 1e-12;

  std::vector<Candidate> cands;
  e.visit(target, bound, std::nullopt, false, [&](std::span<const long long> x, double d2) {
    cands.push_back({IntVector(x.begin(), x.end()), e.to_input_coeffs(x), d2});
  });
  if (cands.empty()) cands.push_back({babai, e.to_input_coeffs(babai), bound.value});
  std::optional<Rational> exact_min;
  cands = minimal(e, std::move(cands), target, &exact_min);
  auto it = std::min_element(cands.begin(), cands.end(),
                             [](const Candidate& a, const Candidate& b) { return lex_less(a.coeffs, b.coeffs); });
  return finish(e, *it, target, exact_min);
}

LatticePoint closest_vector(const Lattice& lattice, const Vector& target, EnumOptions options) {
  return closest_vector(Enumerator(lattice, options), target);
}

double distance_to_lattice(const Enumerator& e, const Vector& target) {
  const int n = e.dim();
  if (target.size() != n) throw Error(ErrorCode::kInvalidArgument, "target dimension does not match lattice");
  const IntVector babai = e.nearest_plane(target);
  const double babai_d2 = e.direct_dist_sq(babai, target);
  // Traversal distances pick the candidate; near-ties differ only by rounding.
  double best = std::numeric_limits<double>::infinity();
  IntVector arg = babai;
  e.visit_unchecked(target, babai_d2, [&](std::span<const long long> x, double d2) {
    if (d2 < best) {
      best = d2;
      arg.assign(x.begin(), x.end());
    }
  });
  return std::sqrt(std::min(babai_d2, e.direct_dist_sq(arg, target)));
}

std::uint64_t count_points(const Enumerator& e, double alpha, const LatticePoint& shortest) {
  if (!(alpha >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must be >= 1");
  SquaredRadius r;
  r.value = alpha * alpha * shortest.dist_sq;
  if (shortest.dist_sq_exact) {
    Rational a(alpha);
    r.exact = a * a * *shortest.dist_sq_exact;
  }
  std::uint64_t count = 0;
  e.visit(Vector::Zero(e.dim()), r, std::nullopt, true, [&](std::span<const long long>, double) { ++count; });
  return count;
}

std::uint64_t count_points(const Lattice& lattice, double alpha, EnumOptions options) {
  Enumerator e(lattice, options);
  return count_points(e, alpha, shortest_vector(e));
}

std::vector<Shell> shells_within(const Enumerator& e, const SquaredRadius& radius) {
  const Vector zero = Vector::Zero(e.dim());
  std::vector<Shell> shells;
  if (e.exact() && e.scaled_norm_sq(IntVector(e.dim(), 0))) {
    std::vector<__int128> keys;
    e.visit(zero, radius, std::nullopt, true,
            [&](std::span<const long long> x, double) { keys.push_back(*e.scaled_norm_sq(x)); });
    std::sort(keys.begin(), keys.end());
    for (size_t i = 0; i < keys.size(); ++i) {
      if (i == 0 || keys[i] != keys[i - 1])
        shells.push_back({Rational(to_mpz(keys[i]), e.scaled_gram_denominator()).get_d(), 0});
      ++shells.back().count;
    }
    return shells;
  }
  if (e.exact()) {
    std::vector<Rational> keys;
    e.visit(zero, radius, std::nullopt, true,
            [&](std::span<const long long> x, double) { keys.push_back(e.exact_norm_sq(x)); });
    std::sort(keys.begin(), keys.end());
    for (size_t i = 0; i < keys.size(); ++i) {
      if (i == 0 || keys[i] != keys[i - 1]) shells.push_back({keys[i].get_d(), 0});
      ++shells.back().count;
    }
    return shells;
  }
  std::vector<double> d2s;
  e.visit(zero, radius, std::nullopt, true, [&](std::span<const long long>, double d2) { d2s.push_back(d2); });
  std::sort(d2s.begin(), d2s.end());
  for (double d2 : d2s) {
    if (shells.empty() || d2 > shells.back().norm_sq * (1.0 + 1e-9) + 1e-15) shells.push_back({d2, 0});
    ++shells.back().count;
  }
  return shells;
}

std::vector<LatticePoint> brute_force_within(const Lattice& lattice, const EnumerationRequest& req,
                                             std::uint64_t box_budget) {
  const int n = lattice.dim();
  if (n > 6) throw Error(ErrorCode::kDimensionTooLarge, "brute-force oracle is limited to n <= 6");
  if (!(req.radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "enumeration radius must be positive");
  const Vector t = center_or_zero(req.center, n);
  const Matrix& b = lattice.columns();
  // Cramer's rule: z = B^-1 y, so |z_i - c_i| <= r * |row_i(B^-1)|.
  const Matrix inv = b.fullPivLu().inverse();
  const Vector c = inv * t;
  std::vector<long long> lo(n), hi(n);
  double volume = 1.0;
  for (int i = 0; i < n; ++i) {
    const double w = req.radius * inv.row(i).norm() * (1.0 + 1e-9) + 1e-9;
    lo[i] = static_cast<long long>(std::ceil(c[i] - w));
    hi[i] = static_cast<long long>(std::floor(c[i] + w));
    volume *= static_cast<double>(hi[i] - lo[i] + 1);
  }
  if (volume > static_cast<double>(box_budget)) throw Error(ErrorCode::kBudgetExceeded, "brute-force box too large");

  const double r2 = req.radius * req.radius;
  Rational r2_exact = req.radius_sq_exact ? *req.radius_sq_exact : Rational(req.radius) * Rational(req.radius);
  std::vector<LatticePoint> out;
  IntVector z(lo.begin(), lo.end());
  for (;;) {
    Vector zd(n);
    for (int i = 0; i < n; ++i) zd[i] = static_cast<double>(z[i]);
    Vector p(n);
    for (int r = 0; r < n; ++r) p[r] = dot(b.row(r).transpose(), zd);
    const Vector diff = p - t;
    const double d2 = dot(diff, diff);
    bool inside;
    bool zero;
    if (lattice.exact()) {
      const double w = 1e-8 * (r2 + t.squaredNorm() + 1.0);
      Rational exact_d2 = -1;
      if (std::abs(d2 - r2) <= w || d2 <= w) {
        exact_d2 = 0;
        for (int r = 0; r < n; ++r) {
          Rational coord = -Rational(t[r]);
          for (int col = 0; col < n; ++col) coord += lattice.exact_basis()(r, col) * Rational(static_cast<long>(z[col]));
          exact_d2 += coord * coord;
        }
      }
      inside = exact_d2 >= 0 ? exact_d2 <= r2_exact : d2 <= r2;
      zero = exact_d2 >= 0 && sgn(exact_d2) == 0;
    } else {
      inside = std::sqrt(d2) <= req.radius + kFloatSlack;
      zero = d2 <= 1e-18 * (1.0 + t.squaredNorm());
    }
    if (inside && !(req.exclude_zero_offset && zero)) {
      LatticePoint lp;
      lp.coeffs = z;
      lp.point = p;
      lp.dist_sq = d2;
      lp.dist = std::sqrt(d2);
      out.push_back(std::move(lp));
    }
    int i = n - 1;
    while (i >= 0 && z[i] == hi[i]) {
      z[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++z[i];
  }
  sort_points(out);
  return out;
}

}  // namespace latkit
