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

#include "latkit/transference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "latkit/error.hpp"
#include "latkit/format.hpp"

namespace latkit {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677940;  // 1/sqrt(2 pi)
constexpr double kThm3Tol = 1e-12;
constexpr double kIdentityResidual = 1e-6;

class Details {
 public:
  Details& add(std::string_view key, double value) { return add(key, format_number(value)); }
  Details& add(std::string_view key, std::string_view value) {
    if (!text_.empty()) text_ += "; ";
    text_.append(key).append("=").append(value);
    return *this;
  }
  std::string str() const { return text_; }

 private:
  std::string text_;
};

VerificationRecord make_record(const std::string& name, CheckId id, CheckStatus status, double lhs, double rhs,
                               std::string details) {
  return {name, id, status, lhs, rhs, rhs - lhs, std::move(details)};
}

Vector uniform_in_cell(const Matrix& basis, std::mt19937_64& rng) {
  const int n = static_cast<int>(basis.cols());
  Vector u(n);
  for (int i = 0; i < n; ++i) u[i] = static_cast<double>(rng() >> 11) * 0x1p-53;
  return basis * u;
}

}  // namespace

std::string_view check_id_name(CheckId id) {
  switch (id) {
    case CheckId::kSandwichEq2: return "SANDWICH_EQ2";
    case CheckId::kTailEq3Report: return "TAIL_EQ3_REPORT";
    case CheckId::kMuEtaEq4Report: return "MU_ETA_EQ4_REPORT";
    case CheckId::kEtaLambdaEq5: return "ETA_LAMBDA_EQ5";
    case CheckId::kThm3Identity: return "THM3_IDENTITY";
    case CheckId::kThm3Bound: return "THM3_BOUND";
    case CheckId::kCorEq6: return "COR_EQ6";
    case CheckId::kLowerHalf: return "LOWER_HALF";
    case CheckId::kProductReport: return "PRODUCT_REPORT";
  }
  return "UNKNOWN";
}

std::string_view check_status_name(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kReportOnly: return "report-only";
  }
  return "unknown";
}

RatioWindow shifted_mass_ratio(const Enumerator& e, double s, const Vector& t, double mass_tol) {
  const MassResult base = gaussian_mass(e, GaussianParams{s, {}, 0.0}, mass_tol);
  const MassResult shifted = gaussian_mass(e, GaussianParams{s, t, 0.0}, mass_tol, &base);
  return {shifted.lo() / base.hi(), shifted.hi() / base.lo()};
}

VerificationRecord check_sandwich(const Enumerator& e, const SmoothingResult& eta, const std::string& name,
                                  const SandwichConfig& config) {
  const double s = std::max(eta.eta * (1.0 + 1e-6), eta.hi);
  const MassResult base = gaussian_mass(e, GaussianParams{s, {}, 0.0}, config.mass_tol);
  std::optional<MassResult> tight_base;
  std::mt19937_64 rng(config.seed);

  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  int lower_fail = 0;
  int upper_fail = 0;
  for (int k = 0; k < config.shifts; ++k) {
    const Vector t = uniform_in_cell(e.lattice().columns(), rng);
    if (t.isZero(0.0)) continue;  // rho_s(L - 0) = rho_s(L); the upper inequality is an equality
    const MassResult* b = &base;
    MassResult m = gaussian_mass(e, GaussianParams{s, t, 0.0}, config.mass_tol, b);
    auto lower_ok = [&] { return m.lo() > b->hi() / 3.0; };
    auto upper_ok = [&] { return m.hi() <= b->lo(); };
    if (!lower_ok() || !upper_ok()) {
      // Undecided at this tolerance; tighten both sides once.
      if (!tight_base) tight_base = gaussian_mass(e, GaussianParams{s, {}, 0.0}, config.mass_tol * 1e-3);
      b = &*tight_base;
      m = gaussian_mass(e, GaussianParams{s, t, 0.0}, config.mass_tol * 1e-3, b);
    }
    if (!lower_ok()) ++lower_fail;
    if (!upper_ok()) ++upper_fail;
    min_ratio = std::min(min_ratio, m.lo() / b->hi());
    max_ratio = std::max(max_ratio, m.hi() / b->lo());
  }
  const CheckStatus status = lower_fail == 0 && upper_fail == 0 ? CheckStatus::kPass : CheckStatus::kFail;
  Details d;
  d.add("s", s)
      .add("shifts", std::to_string(config.shifts))
      .add("min_ratio_lo", min_ratio)
      .add("max_ratio_hi", max_ratio)
      .add("lower_failures", std::to_string(lower_fail))
      .add("upper_failures", std::to_string(upper_fail));
  return make_record(name, CheckId::kSandwichEq2, status, 1.0 / 3.0, min_ratio, d.str());
}

std::vector<double> tail_radius_grid(int n, double s, int points, double max_factor) {
  if (points < 2) throw Error(ErrorCode::kInvalidArgument, "tail grid needs at least two points");
  const double top = max_factor * std::sqrt(static_cast<double>(n)) * s;
  std::vector<double> radii(points);
  for (int k = 0; k < points; ++k) radii[k] = top * k / (points - 1);
  return radii;
}

TailProfile tail_profile_values(const Enumerator& e, double s, const Vector& t, std::span<const double> radii,
                                double mass_tol) {
  if (radii.empty()) throw Error(ErrorCode::kInvalidArgument, "empty radius grid");
  TailProfile out;
  out.radii.assign(radii.begin(), radii.end());
  const std::vector<MassResult> profile = gaussian_mass_profile(e, s, t, radii, mass_tol);
  const double full = radii[0] <= 0.0 ? profile[0].mid() : gaussian_mass(e, GaussianParams{s, t, 0.0}, mass_tol).mid();
  for (size_t k = 0; k < profile.size(); ++k) {
    const double ratio = profile[k].mid() / full;
    if (k > 0 && ratio > out.ratios.back()) out.monotone = false;
    if (!out.r_star && ratio <= 1.0 / 3.0) out.r_star = radii[k];
    out.ratios.push_back(ratio);
  }
  return out;
}

VerificationRecord tail_profile(const Enumerator& e, double s, const Vector& t, std::span<const double> radii,
                                const std::string& name, double mass_tol) {
  const TailProfile p = tail_profile_values(e, s, t, radii, mass_tol);
  const double scale = std::sqrt(static_cast<double>(e.dim())) * s;
  const double lhs = p.r_star ? *p.r_star / scale : std::numeric_limits<double>::quiet_NaN();
  Details d;
  d.add("s", s)
      .add("grid_points", std::to_string(radii.size()))
      .add("r_star", p.r_star ? format_number(*p.r_star) : "not reached")
      .add("ratio_at_max_r", p.ratios.back())
      .add("monotone", p.monotone ? "yes" : "no");
  return make_record(name, CheckId::kTailEq3Report, p.monotone ? CheckStatus::kReportOnly : CheckStatus::kFail, lhs,
                     kInvSqrt2Pi, d.str());
}

std::vector<VerificationRecord> check_eta_lambda(const Enumerator& dual_e, const SmoothingResult& eta,
                                                 const std::string& name, double alpha_max, double mass_tol) {
  const int n = dual_e.dim();
  const double dual_l1 = shortest_vector(dual_e).dist;
  std::vector<VerificationRecord> out;

  // Recompute the bracket masses independently of the bisection.
  const MassResult at_lo = gaussian_mass(dual_e, GaussianParams{1.0 / eta.lo, {}, 0.0}, mass_tol * 1e-3);
  const MassResult at_hi = gaussian_mass(dual_e, GaussianParams{1.0 / eta.hi, {}, 0.0}, mass_tol * 1e-3);
  const bool consistent = at_lo.lo() > kSmoothingMass && at_hi.hi() < kSmoothingMass && eta.lo <= eta.eta &&
                          eta.eta <= eta.hi;
  const double classical = std::sqrt(n / (2.0 * std::numbers::pi)) / dual_l1;
  Details d5;
  d5.add("eta_lo", eta.lo)
      .add("eta_hi", eta.hi)
      .add("rho_dual_at_lo", at_lo.lo())
      .add("rho_dual_at_hi", at_hi.hi())
      .add("bracket", consistent ? "consistent" : "inconsistent")
      .add("classical_bound", eta.hi < classical ? "holds" : (eta.lo > classical ? "violated" : "undecided"));
  out.push_back(make_record(name, CheckId::kEtaLambdaEq5, consistent ? CheckStatus::kPass : CheckStatus::kFail,
                            eta.eta, classical, d5.str()));

  const double beta_dual = beta_estimate(dual_e, alpha_max).beta_hat;
  const double s0 = std::sqrt(n / (2.0 * std::numbers::pi * std::numbers::e)) * std::exp2(beta_dual) / dual_l1;
  const MassResult at_s0 = gaussian_mass(dual_e, GaussianParams{1.0 / s0, {}, 0.0}, mass_tol);
  const char* verdict = at_s0.hi() < kSmoothingMass ? "below" : (at_s0.lo() > kSmoothingMass ? "above" : "undecided");
  // A certified mass below 3/2 at s0 puts eta at or below s0; anything else
  // contradicts the bracket.
  const bool contradiction = (at_s0.hi() < kSmoothingMass && s0 <= eta.lo) ||
                             (at_s0.lo() > kSmoothingMass && s0 >= eta.hi);
  Details d6;
  d6.add("beta_hat_dual", beta_dual).add("alpha_max", alpha_max).add("rho_dual_at_s0", at_s0.mid()).add("rho_vs_3_2", verdict);
  out.push_back(make_record(name, CheckId::kCorEq6, contradiction ? CheckStatus::kFail : CheckStatus::kReportOnly,
                            eta.eta, s0, d6.str()));
  return out;
}

Thm3Integral thm3_integral(const Enumerator& e, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::kInvalidArgument, "Gaussian parameter s must be > 0");
  const int n = e.dim();
  const LatticePoint sv = shortest_vector(e);
  const double l1 = sv.dist;
  Thm3Integral out;
  out.mass_result = gaussian_mass(e, GaussianParams{s, {}, 0.0}, kThm3Tol);
  // beta_hat needs at least the first shell even when the mass truncates below it.
  SquaredRadius range = SquaredRadius::of_radius(out.mass_result.trunc_radius);
  if (range.value < sv.dist_sq) range = SquaredRadius{sv.dist_sq, sv.dist_sq_exact};
  out.alpha_range = std::sqrt(range.value) / l1;
  const std::vector<Shell> shells = shells_within(e, range);

  // N_alpha is constant on [a_k, a_{k+1}); each piece integrates in closed form
  // through F(a) = -exp(-c a^2) / (2c).  Past the last shell the count is held.
  const double c = std::numbers::pi * l1 * l1 / (s * s);
  auto F = [c](double a) { return std::isinf(a) ? 0.0L : -std::exp(-static_cast<long double>(c) * a * a) / (2.0L * c); };
  std::vector<double> alpha(shells.size());
  for (size_t k = 0; k < shells.size(); ++k) alpha[k] = std::sqrt(shells[k].norm_sq) / l1;
  long double integral = 0.0L;
  std::uint64_t count = 0;
  std::vector<long double> pieces;
  out.beta_hat = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < shells.size(); ++k) {
    count += shells[k].count;
    const double next = k + 1 < shells.size() ? alpha[k + 1] : std::numeric_limits<double>::infinity();
    pieces.push_back(2.0L * c * static_cast<long double>(count) * (F(next) - F(alpha[k])));
    out.beta_hat = std::max(out.beta_hat, std::log2(static_cast<double>(count)) / n - std::log2(alpha[k]));
  }
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) integral += *it;
  out.integral = static_cast<double>(1.0L + integral);
  out.mass = out.mass_result.mid();
  out.residual = std::abs(out.integral - out.mass) / out.mass;
  return out;
}

VerificationRecord check_thm3_identity(const Enumerator& e, double s, const std::string& name) {
  return check_thm3_identity(thm3_integral(e, s), s, name);
}

VerificationRecord check_thm3_identity(const Thm3Integral& r, double s, const std::string& name) {
  // The mass window is part of the residual's uncertainty.
  const double err = (r.mass_result.hi() - r.mass_result.lo()) / r.mass;
  const bool pass = r.residual + err < kIdentityResidual;
  Details d;
  d.add("s", s).add("integral", r.integral).add("mass", r.mass).add("alpha_range", r.alpha_range);
  return make_record(name, CheckId::kThm3Identity, pass ? CheckStatus::kPass : CheckStatus::kFail, r.residual,
                     kIdentityResidual, d.str());
}

double thm3_gamma_bound(int n, double beta_hat, double s, double lambda1) {
  const double half_n = 0.5 * n;
  const double log_base = 2.0 * beta_hat * std::numbers::ln2 + 2.0 * std::log(s / lambda1) - std::log(std::numbers::pi);
  return 1.0 + std::exp(half_n * log_base + std::lgamma(half_n + 1.0));
}

VerificationRecord check_thm3_bound(const Enumerator& e, double s, const std::string& name) {
  return check_thm3_bound(thm3_integral(e, s), e.dim(), shortest_vector(e).dist, s, name);
}

VerificationRecord check_thm3_bound(const Thm3Integral& r, int n, double lambda1, double s, const std::string& name) {
  const double bound = thm3_gamma_bound(n, r.beta_hat, s, lambda1);
  // Mass beyond the enumerated range is not covered by beta_hat; it enters as slack.
  const double rhs = bound + r.mass_result.tail_bound;
  const double lhs = r.mass_result.hi();
  const bool pass = lhs < rhs * (1.0 - 1e-12);
  Details d;
  d.add("s", s).add("beta_hat", r.beta_hat).add("alpha_range", r.alpha_range).add("gamma_bound", bound)
      .add("slack", r.mass_result.tail_bound);
  return make_record(name, CheckId::kThm3Bound, pass ? CheckStatus::kPass : CheckStatus::kFail, lhs, rhs, d.str());
}

VerificationRecord mu_eta_report(const InvariantReport& r) {
  Details d;
  d.add("mu_lo", r.mu_lo).add("eta", r.eta).add("n", std::to_string(r.dim));
  return make_record(r.name, CheckId::kMuEtaEq4Report, CheckStatus::kReportOnly, r.mu_eta_ratio(), kInvSqrt2Pi,
                     d.str());
}

std::vector<VerificationRecord> product_report(const InvariantReport& r) {
  std::vector<VerificationRecord> out;
  const double upper = r.mu_hi * r.lambda1_dual;
  Details lower;
  lower.add("mu_hi", r.mu_hi).add("lambda1_dual", r.lambda1_dual);
  out.push_back(make_record(r.name, CheckId::kLowerHalf,
                            upper >= 0.5 * (1.0 - 1e-12) ? CheckStatus::kPass : CheckStatus::kFail, 0.5, upper,
                            lower.str()));

  const double n = r.dim;
  Details d;
  if (r.mu_exact) d.add("exact_normalized", *r.mu_exact * r.lambda1_dual / n);
  d.add("inv_2pi_e", 1.0 / (2.0 * std::numbers::pi * std::numbers::e))
      .add("thm_constant", 0.1275)
      .add("inv_2pi", 1.0 / (2.0 * std::numbers::pi));
  out.push_back(make_record(r.name, CheckId::kProductReport, CheckStatus::kReportOnly, r.mu_lo * r.lambda1_dual / n,
                            upper / n, d.str()));
  return out;
}

LatticeVerification verify_lattice(const Lattice& lattice, const std::string& name, const KnownValues& known,
                                   const CheckConfig& config) {
  const Enumerator primal(lattice, config.report.enum_options);
  const Enumerator dual_e(dual(lattice), config.report.enum_options);
  LatticeVerification out;
  out.analysis = analyze(primal, dual_e, name, known, config.report);
  const LatticeAnalysis& a = out.analysis;
  const InvariantReport& r = a.report;
  const double mass_tol = config.report.mass_tol;
  auto& rec = out.records;

  SandwichConfig sandwich = config.sandwich;
  sandwich.mass_tol = mass_tol;
  rec.push_back(check_sandwich(primal, a.smoothing, name, sandwich));

  const std::vector<double> grid = tail_radius_grid(r.dim, r.eta, config.tail_points);
  rec.push_back(tail_profile(primal, r.eta, r.deep_hole, grid, name, mass_tol));
  if (!std::isnan(rec.back().lhs)) out.tail_r_star_normalized = rec.back().lhs;

  rec.push_back(mu_eta_report(r));
  for (auto& v : check_eta_lambda(dual_e, a.smoothing, name, config.report.alpha_max, mass_tol)) rec.push_back(std::move(v));
  std::vector<std::pair<double, Thm3Integral>> integrals;
  auto integral_at = [&](double s) -> const Thm3Integral& {
    for (const auto& [key, value] : integrals)
      if (key == s) return value;
    integrals.emplace_back(s, thm3_integral(primal, s));
    return integrals.back().second;
  };
  for (double f : config.identity_s) {
    const double s = f * r.lambda1;
    rec.push_back(check_thm3_identity(integral_at(s), s, name));
  }
  for (double f : config.bound_s) {
    const double s = f * r.lambda1;
    rec.push_back(check_thm3_bound(integral_at(s), r.dim, r.lambda1, s, name));
  }
  for (auto& v : product_report(r)) rec.push_back(std::move(v));
  return out;
}

}  // namespace latkit
