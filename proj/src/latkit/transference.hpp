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

#ifndef LATKIT_TRANSFERENCE_HPP_
#define LATKIT_TRANSFERENCE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latkit/enumerate.hpp"
#include "latkit/gaussian.hpp"
#include "latkit/invariants.hpp"

namespace latkit {

enum class CheckId {
  kSandwichEq2,
  kTailEq3Report,
  kMuEtaEq4Report,
  kEtaLambdaEq5,
  kThm3Identity,
  kThm3Bound,
  kCorEq6,
  kLowerHalf,
  kProductReport,
};

enum class CheckStatus { kPass, kFail, kReportOnly };

std::string_view check_id_name(CheckId id);
std::string_view check_status_name(CheckStatus status);

struct VerificationRecord {
  std::string lattice_name;
  CheckId check_id = CheckId::kSandwichEq2;
  CheckStatus status = CheckStatus::kReportOnly;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::string details;
};

// Certified window for rho_s(L - t) / rho_s(L).
struct RatioWindow {
  double lo = 0.0;
  double hi = 0.0;
};

RatioWindow shifted_mass_ratio(const Enumerator& enumerator, double s, const Vector& t,
                               double mass_tol = kDefaultMassTol);

struct SandwichConfig {
  int shifts = 200;
  std::uint64_t seed = 1;
  double mass_tol = kDefaultMassTol;
};

VerificationRecord check_sandwich(const Enumerator& enumerator, const SmoothingResult& eta, const std::string& name,
                                  const SandwichConfig& config = {});

struct TailProfile {
  std::vector<double> radii;
  std::vector<double> ratios;  // rho_{s,r}(L - t) / rho_s(L - t)
  std::optional<double> r_star;
  bool monotone = true;
};

// Grid of `points` radii evenly spaced over [0, max_factor * sqrt(n) * s].
std::vector<double> tail_radius_grid(int n, double s, int points = 61, double max_factor = 3.0);

TailProfile tail_profile_values(const Enumerator& enumerator, double s, const Vector& t, std::span<const double> radii,
                                double mass_tol = kDefaultMassTol);
VerificationRecord tail_profile(const Enumerator& enumerator, double s, const Vector& t, std::span<const double> radii,
                                const std::string& name, double mass_tol = kDefaultMassTol);

// ETA_LAMBDA_EQ5 followed by COR_EQ6, both evaluated on the dual lattice.
std::vector<VerificationRecord> check_eta_lambda(const Enumerator& dual_enumerator, const SmoothingResult& eta,
                                                 const std::string& name, double alpha_max = 2.0,
                                                 double mass_tol = kDefaultMassTol);

struct Thm3Integral {
  double integral = 0.0;  // right-hand side of the N_alpha integral identity
  double mass = 0.0;
  double residual = 0.0;
  double alpha_range = 0.0;  // enumeration reached alpha_range * lambda1
  double beta_hat = 0.0;     // over the same range
  MassResult mass_result;
};

Thm3Integral thm3_integral(const Enumerator& enumerator, double s);

VerificationRecord check_thm3_identity(const Enumerator& enumerator, double s, const std::string& name);
VerificationRecord check_thm3_identity(const Thm3Integral& integral, double s, const std::string& name);
VerificationRecord check_thm3_bound(const Enumerator& enumerator, double s, const std::string& name);
VerificationRecord check_thm3_bound(const Thm3Integral& integral, int n, double lambda1, double s,
                                    const std::string& name);

// 1 + (2^{2 beta} s^2 / (pi lambda1^2))^{n/2} Gamma(n/2 + 1).
double thm3_gamma_bound(int n, double beta_hat, double s, double lambda1);

VerificationRecord mu_eta_report(const InvariantReport& report);
// LOWER_HALF followed by PRODUCT_REPORT.
std::vector<VerificationRecord> product_report(const InvariantReport& report);

struct CheckConfig {
  ReportConfig report;
  SandwichConfig sandwich;
  std::vector<double> identity_s = {0.5, 0.8, 1.0};  // multiples of lambda1
  std::vector<double> bound_s = {0.7, 1.0};          // multiples of lambda1
  int tail_points = 61;
};

struct LatticeVerification {
  LatticeAnalysis analysis;
  std::vector<VerificationRecord> records;
  std::optional<double> tail_r_star_normalized;  // r* / (sqrt(n) s)
};

LatticeVerification verify_lattice(const Lattice& lattice, const std::string& name, const KnownValues& known,
                                   const CheckConfig& config);

}  // namespace latkit

#endif  // LATKIT_TRANSFERENCE_HPP_
