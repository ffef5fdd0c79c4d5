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

#include "latkit/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "latkit/error.hpp"

namespace latkit {

namespace {

constexpr double kUStep = 0.25;
constexpr int kMaxUSteps = 80;
constexpr double kEps = std::numeric_limits<double>::epsilon();

class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_params(const GaussianParams& p, double rel_tol) {
  if (!(p.s > 0.0) || !std::isfinite(p.s)) throw Error(ErrorCode::kInvalidArgument, "Gaussian parameter s must be > 0");
  if (!(p.r >= 0.0) || !std::isfinite(p.r)) throw Error(ErrorCode::kInvalidArgument, "inner radius r must be >= 0");
  if (!(rel_tol > 0.0 && rel_tol <= 0.1)) throw Error(ErrorCode::kInvalidArgument, "rel_tol must lie in (0, 0.1]");
}

Vector center_of(const Enumerator& e, const Vector& t) {
  if (t.size() == 0) return Vector::Zero(e.dim());
  if (t.size() != e.dim()) throw Error(ErrorCode::kInvalidArgument, "shift dimension does not match lattice");
  return t;
}

double exponent(double d2, double s) { return std::numbers::pi * d2 / (s * s); }

// Relative error of one term: exp() is within an ulp, the argument carries
// the enumeration's float distance error.
double term_error(double term, double arg) { return term * (1e-14 * (1.0 + arg) + 2.0 * kEps); }

// Smallest u on the grid 0.5 + k/4 whose certificate meets `ok`.
template <class Pred>
double grid_u(Pred ok) {
  double u = 0.5;
  for (int i = 0; i < kMaxUSteps; ++i, u += kUStep)
    if (ok(u)) return u;
  throw Error(ErrorCode::kToleranceUnreachable, "truncation radius growth capped before reaching tolerance");
}

}  // namespace

double tail_certificate(int n, double u, bool shifted) {
  if (!(u > 1.0 / std::sqrt(2.0 * std::numbers::pi))) return std::numeric_limits<double>::infinity();
  const double log_c = std::log(std::sqrt(2.0 * std::numbers::pi * std::numbers::e) * u) - std::numbers::pi * u * u;
  const double bound = std::exp(n * log_c);
  return shifted ? 2.0 * bound : bound;
}

MassResult gaussian_mass(const Enumerator& e, const GaussianParams& params, double rel_tol,
                         const MassResult* unshifted) {
  check_params(params, rel_tol);
  const int n = e.dim();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const Vector t = center_of(e, params.t);
  const bool shifted = !t.isZero(0.0);
  const double s = params.s;

  if (!shifted && params.r <= 0.0) {
    // Full mass: rho_s(L) <= partial / (1 - eps), so eps / (1 - eps) <= rel_tol
    // certifies the relative tolerance without knowing rho_s(L).
    double u = grid_u([&](double v) {
      const double eps = tail_certificate(n, v, false);
      return eps < 0.5 && eps / (1.0 - eps) <= rel_tol * (1.0 - 1e-6);
    });
    for (int step = 0; step < kMaxUSteps; ++step, u += kUStep) {
      const double radius = u * sqrt_n * s;
      std::vector<double> d2s;
      e.visit(t, SquaredRadius::of_radius(radius), std::nullopt, false,
              [&](std::span<const long long>, double d2) { d2s.push_back(d2); });
      std::sort(d2s.begin(), d2s.end());
      NeumaierSum sum;
      double err = 0.0;
      for (auto it = d2s.rbegin(); it != d2s.rend(); ++it) {
        const double arg = exponent(*it, s);
        const double term = std::exp(-arg);
        sum.add(term);
        err += term_error(term, arg);
      }
      MassResult out;
      out.value = sum.value();
      out.rounding = err + 4.0 * kEps * out.value;
      out.trunc_radius = radius;
      out.points = d2s.size();
      const double eps = tail_certificate(n, u, false);
      out.tail_bound = eps * (out.value + out.rounding) / (1.0 - eps);
      if (out.tail_bound <= rel_tol * std::max(out.value, 1.0)) return out;
    }
    throw Error(ErrorCode::kToleranceUnreachable, "truncation radius growth capped before reaching tolerance");
  }

  // Shifted or annular mass: the certificate is relative to rho_s(L).
  MassResult base;
  if (unshifted == nullptr) {
    base = gaussian_mass(e, GaussianParams{s, Vector(), 0.0}, rel_tol);
    unshifted = &base;
  }
  const double rho_upper = unshifted->hi();
  const double u = grid_u([&](double v) { return tail_certificate(n, v, shifted) * rho_upper <= rel_tol; });
  // The truncation radius does not depend on r, so truncations for
  // different r are nested.
  const double radius = u * sqrt_n * s;
  const SquaredRadius inner = SquaredRadius::of_radius(params.r);
  std::vector<double> d2s;
  if (params.r <= radius) {
    e.visit(t, SquaredRadius::of_radius(radius), inner, false,
            [&](std::span<const long long>, double d2) { d2s.push_back(d2); });
  }
  std::sort(d2s.begin(), d2s.end());
  NeumaierSum sum;
  double err = 0.0;
  for (auto it = d2s.rbegin(); it != d2s.rend(); ++it) {
    const double arg = exponent(*it, s);
    const double term = std::exp(-arg);
    sum.add(term);
    err += term_error(term, arg);
  }
  MassResult out;
  out.value = sum.value();
  out.rounding = err + 4.0 * kEps * out.value;
  out.trunc_radius = radius;
  out.points = d2s.size();
  const double u_tail = std::max(u, params.r / (sqrt_n * s));
  out.tail_bound = tail_certificate(n, u_tail, shifted) * rho_upper;
  return out;
}

MassResult gaussian_mass(const Lattice& lattice, const GaussianParams& params, double rel_tol, EnumOptions options) {
  return gaussian_mass(Enumerator(lattice, options), params, rel_tol);
}

std::vector<MassResult> gaussian_mass_profile(const Enumerator& e, double s, const Vector& t_in,
                                              std::span<const double> radii, double rel_tol) {
  check_params(GaussianParams{s, Vector(), 0.0}, rel_tol);
  const int n = e.dim();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const Vector t = center_of(e, t_in);
  const bool shifted = !t.isZero(0.0);
  for (double r : radii)
    if (!(r >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "profile radii must be >= 0");

  const MassResult base = gaussian_mass(e, GaussianParams{s, Vector(), 0.0}, rel_tol);
  const double rho_upper = base.hi();
  const double u = grid_u([&](double v) { return tail_certificate(n, v, shifted) * rho_upper <= rel_tol; });
  const double radius = u * sqrt_n * s;

  struct Point {
    IntVector x;
    double d2;
  };
  std::vector<Point> pts;
  e.visit(t, SquaredRadius::of_radius(radius), std::nullopt, false, [&](std::span<const long long> x, double d2) {
    pts.push_back({IntVector(x.begin(), x.end()), d2});
  });
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.d2 < b.d2; });

  std::vector<MassResult> out;
  out.reserve(radii.size());
  for (double r : radii) {
    const SquaredRadius inner = SquaredRadius::of_radius(r);
    // Plain extended-precision suffix sum, smallest terms first: adding
    // nonnegative terms is monotone, so nested subsets give ordered sums.
    long double sum = 0.0L;
    double err = 0.0;
    std::uint64_t count = 0;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      if (r > 0.0 && !e.inside_inner(it->x, it->d2, t, inner)) continue;
      const double arg = exponent(it->d2, s);
      const double term = std::exp(-arg);
      sum += term;
      err += term_error(term, arg);
      ++count;
    }
    MassResult m;
    m.value = static_cast<double>(sum);
    m.rounding = err + 4.0 * kEps * m.value;
    m.tail_bound = tail_certificate(n, std::max(u, r / (sqrt_n * s)), shifted) * rho_upper;
    m.trunc_radius = radius;
    m.points = count;
    out.push_back(m);
  }
  return out;
}

SmoothingResult smoothing_parameter_from_dual(const Enumerator& dual_e, double eta_tol, double mass_tol) {
  if (!(eta_tol > 0.0 && eta_tol <= 0.01)) throw Error(ErrorCode::kInvalidArgument, "eta tolerance must lie in (0, 0.01]");
  SmoothingResult res;
  auto mass = [&](double eta, double tol) {
    ++res.evaluations;
    return gaussian_mass(dual_e, GaussianParams{1.0 / eta, Vector(), 0.0}, tol);
  };
  const int n = dual_e.dim();
  const double dual_l1 = shortest_vector(dual_e).dist;

  double hi = std::sqrt(static_cast<double>(n)) / dual_l1;
  MassResult m_hi = mass(hi, mass_tol);
  for (int i = 0; m_hi.hi() >= kSmoothingMass; ++i) {
    if (i > 60) throw Error(ErrorCode::kToleranceUnreachable, "could not bracket the smoothing parameter");
    hi *= 2.0;
    m_hi = mass(hi, mass_tol);
  }
  double lo = hi / 2.0;
  MassResult m_lo = mass(lo, mass_tol);
  for (int i = 0; m_lo.lo() <= kSmoothingMass; ++i) {
    if (i > 60) throw Error(ErrorCode::kToleranceUnreachable, "could not bracket the smoothing parameter");
    if (m_lo.hi() < kSmoothingMass) {
      hi = lo;
      m_hi = m_lo;
    }
    lo /= 2.0;
    m_lo = mass(lo, mass_tol);
  }

  while (hi - lo > eta_tol * 0.5 * (lo + hi)) {
    const double mid = 0.5 * (lo + hi);
    MassResult m = mass(mid, mass_tol);
    if (m.lo() <= kSmoothingMass && m.hi() >= kSmoothingMass) m = mass(mid, mass_tol * 1e-3);
    if (m.lo() > kSmoothingMass) {
      lo = mid;
      m_lo = m;
    } else if (m.hi() < kSmoothingMass) {
      hi = mid;
      m_hi = m;
    } else {
      break;  // 3/2 lies inside the certified window; the bracket cannot shrink further.
    }
  }
  res.lo = lo;
  res.hi = hi;
  res.eta = 0.5 * (lo + hi);
  res.mass_at_lo = m_lo;
  res.mass_at_hi = m_hi;
  res.mass_at_eta = mass(res.eta, mass_tol);
  return res;
}

SmoothingResult smoothing_parameter(const Lattice& lattice, double eta_tol, double mass_tol, EnumOptions options) {
  return smoothing_parameter_from_dual(Enumerator(dual(lattice), options), eta_tol, mass_tol);
}

double poisson_residual(const Lattice& lattice, double s, double mass_tol, EnumOptions options) {
  const double primal = gaussian_mass(lattice, GaussianParams{s, Vector(), 0.0}, mass_tol, options).mid();
  const double dual_mass = gaussian_mass(dual(lattice), GaussianParams{1.0 / s, Vector(), 0.0}, mass_tol, options).mid();
  const double predicted = std::pow(s, lattice.dim()) / lattice.det() * dual_mass;
  return std::abs(primal - predicted) / primal;
}

}  // namespace latkit
