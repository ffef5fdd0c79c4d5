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
#include <numbers>

#include "doctest.h"
#include "latkit/error.hpp"
#include "latkit/transference.hpp"
#include "test_lattices.hpp"

using namespace latkit;
using namespace latkit::testing;

namespace {

double theta_z(double s) {
  double sum = 0.0;
  for (int k = 40; k >= -40; --k) sum += std::exp(-std::numbers::pi * k * k / (s * s));
  return sum;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("check names") {
  CHECK(check_id_name(CheckId::kSandwichEq2) == "SANDWICH_EQ2");
  CHECK(check_id_name(CheckId::kTailEq3Report) == "TAIL_EQ3_REPORT");
  CHECK(check_id_name(CheckId::kMuEtaEq4Report) == "MU_ETA_EQ4_REPORT");
  CHECK(check_id_name(CheckId::kEtaLambdaEq5) == "ETA_LAMBDA_EQ5");
  CHECK(check_id_name(CheckId::kThm3Identity) == "THM3_IDENTITY");
  CHECK(check_id_name(CheckId::kThm3Bound) == "THM3_BOUND");
  CHECK(check_id_name(CheckId::kCorEq6) == "COR_EQ6");
  CHECK(check_id_name(CheckId::kLowerHalf) == "LOWER_HALF");
  CHECK(check_id_name(CheckId::kProductReport) == "PRODUCT_REPORT");
  CHECK(check_status_name(CheckStatus::kReportOnly) == "report-only");
}

TEST_CASE("sandwich on Z2") {
  const Lattice l = zn(2);
  Enumerator e(l);
  const SmoothingResult eta = smoothing_parameter(l);
  VerificationRecord r = check_sandwich(e, eta, "Z2", SandwichConfig{200, 17});
  CHECK(r.status == CheckStatus::kPass);
  CHECK(r.lhs == doctest::Approx(1.0 / 3.0));
  CHECK(r.rhs > r.lhs);
  CHECK(r.margin == doctest::Approx(r.rhs - r.lhs));

  const double s = eta.eta * (1.0 + 1e-6);
  RatioWindow zero = shifted_mass_ratio(e, s, Vector::Zero(2));
  CHECK(zero.lo <= 1.0);
  CHECK(zero.hi >= 1.0);
  CHECK(zero.hi - zero.lo < 1e-8);

  RatioWindow hole = shifted_mass_ratio(e, s, Vector::Constant(2, 0.5));
  CHECK(hole.lo > 1.0 / 3.0);
  CHECK(hole.hi < 1.0);
  // rho_s(Z^2 - (1/2,1/2)) = rho_s(Z - 1/2)^2
  double half = 0.0;
  for (int k = -40; k <= 40; ++k) half += std::exp(-std::numbers::pi * (k - 0.5) * (k - 0.5) / (s * s));
  const double ratio = half * half / (theta_z(s) * theta_z(s));
  CHECK(hole.lo <= ratio);
  CHECK(ratio <= hole.hi);
}

TEST_CASE("sandwich passes on small named lattices") {
  for (const Lattice& l : {zn(1), zn(3), d3(), d4(), a2(), random_lattice(3, 8)}) {
    Enumerator e(l);
    const SmoothingResult eta = smoothing_parameter(l);
    CHECK(check_sandwich(e, eta, "l", SandwichConfig{200, 5}).status == CheckStatus::kPass);
  }
}

TEST_CASE("tail profile") {
  const Lattice l = zn(4);
  Enumerator e(l);
  const SmoothingResult eta = smoothing_parameter(l);
  const double s = eta.eta;
  const Vector hole = Vector::Constant(4, 0.5);
  const std::vector<double> grid = tail_radius_grid(4, s);
  REQUIRE(grid.size() == 61);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(3.0 * 2.0 * s));

  TailProfile p = tail_profile_values(e, s, hole, grid);
  CHECK(p.ratios.front() == 1.0);
  CHECK(p.ratios.back() < p.ratios.front());
  CHECK(p.monotone);
  for (size_t k = 1; k < p.ratios.size(); ++k) CHECK(p.ratios[k] <= p.ratios[k - 1]);
  REQUIRE(p.r_star.has_value());

  VerificationRecord r = tail_profile(e, s, hole, grid, "Z4");
  CHECK(r.status == CheckStatus::kReportOnly);
  CHECK(r.lhs > 0.2);
  CHECK(r.lhs < 1.5);
  CHECK(r.rhs == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
}

TEST_CASE("eta versus dual minimum") {
  {
    const Lattice l = zn(2);
    Enumerator d(dual(l));
    const SmoothingResult eta = smoothing_parameter_from_dual(d);
    std::vector<VerificationRecord> r = check_eta_lambda(d, eta, "Z2");
    REQUIRE(r.size() == 2);
    CHECK(r[0].check_id == CheckId::kEtaLambdaEq5);
    CHECK(r[0].status == CheckStatus::kPass);
    CHECK(r[1].check_id == CheckId::kCorEq6);
    CHECK(r[1].status == CheckStatus::kReportOnly);
  }
  {
    Enumerator d(dual(zn(4)));
    std::vector<VerificationRecord> r = check_eta_lambda(d, smoothing_parameter_from_dual(d), "Z4");
    CHECK(r[0].status == CheckStatus::kPass);
    CHECK(r[0].rhs == doctest::Approx(std::sqrt(4.0 / (2.0 * std::numbers::pi))).epsilon(1e-12));
    CHECK(r[0].lhs == doctest::Approx(0.965935152810859).epsilon(1e-5));
    CHECK(r[0].margin == doctest::Approx(r[0].rhs - r[0].lhs));
  }
  {
    Enumerator d(dual(e8()));
    std::vector<VerificationRecord> r = check_eta_lambda(d, smoothing_parameter_from_dual(d), "E8");
    CHECK(r[0].status == CheckStatus::kPass);
    CHECK(r[0].rhs == doctest::Approx(std::sqrt(8.0 / (2.0 * std::numbers::pi)) / std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("point-count integral identity") {
  {
    Thm3Integral r = thm3_integral(Enumerator(zn(1)), 0.8);
    CHECK(r.integral == doctest::Approx(theta_z(0.8)).epsilon(1e-12));
    CHECK(check_thm3_identity(Enumerator(zn(1)), 0.8, "Z1").status == CheckStatus::kPass);
  }
  {
    Thm3Integral r = thm3_integral(Enumerator(zn(2)), 1.0);
    CHECK(r.integral == doctest::Approx(theta_z(1.0) * theta_z(1.0)).epsilon(1e-12));
    CHECK(r.residual < 1e-6);
  }
  {
    VerificationRecord r = check_thm3_identity(Enumerator(d4()), std::sqrt(2.0) / 10, "D4");
    CHECK(r.status == CheckStatus::kPass);
    CHECK(r.lhs < 1e-12);
  }
  for (const Lattice& l : {zn(3), d3(), a2(), random_lattice(4, 3)}) {
    Enumerator e(l);
    const double l1 = shortest_vector(e).dist;
    for (double f : {0.5, 0.8, 1.0}) CHECK(check_thm3_identity(e, f * l1, "l").status == CheckStatus::kPass);
  }
}

TEST_CASE("gamma function against factorial recurrences") {
  for (int k = 0; k <= 30; ++k) {
    CHECK(std::exp(std::lgamma(k + 1.0)) == doctest::Approx(factorial(k)).epsilon(1e-12));
    // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
    const double half = factorial(2 * k) / (std::pow(4.0, k) * factorial(k)) * std::sqrt(std::numbers::pi);
    if (2 * k <= 170) CHECK(std::exp(std::lgamma(k + 0.5)) == doctest::Approx(half).epsilon(1e-12));
  }
  // n = 2, beta = 0: 1 + s^2 / (pi lambda1^2)
  CHECK(thm3_gamma_bound(2, 0.0, 0.9, 1.0) == doctest::Approx(1.0 + 0.81 / std::numbers::pi).epsilon(1e-14));
  // n = 1: Gamma(3/2) = sqrt(pi)/2
  CHECK(thm3_gamma_bound(1, 1.0, 1.0, 1.0) == doctest::Approx(1.0 + 2.0 / std::sqrt(std::numbers::pi) *
                                                                        std::sqrt(std::numbers::pi) / 2.0));
}

TEST_CASE("Gamma-form mass bound") {
  VerificationRecord z2 = check_thm3_bound(Enumerator(zn(2)), 0.9, "Z2");
  CHECK(z2.status == CheckStatus::kPass);
  VerificationRecord d = check_thm3_bound(Enumerator(d4()), 0.8, "D4");
  CHECK(d.status == CheckStatus::kPass);

  VerificationRecord tiny = check_thm3_bound(Enumerator(zn(2)), 0.05, "Z2");
  CHECK(tiny.status == CheckStatus::kPass);
  CHECK(tiny.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tiny.rhs < 1.01);
  CHECK(tiny.lhs < tiny.rhs);

  for (const Lattice& l : {zn(1), zn(4), d3(), a2(), random_lattice(3, 6)}) {
    Enumerator e(l);
    const double l1 = shortest_vector(e).dist;
    for (double f : {0.7, 1.0}) CHECK(check_thm3_bound(e, f * l1, "l").status == CheckStatus::kPass);
  }
}

TEST_CASE("product report") {
  InvariantReport z4 = full_report(zn(4), "Z4", KnownValues{1.0, 1.0, 8});
  std::vector<VerificationRecord> r = product_report(z4);
  REQUIRE(r.size() == 2);
  CHECK(r[0].check_id == CheckId::kLowerHalf);
  CHECK(r[0].status == CheckStatus::kPass);
  CHECK(r[0].rhs >= 1.0);
  CHECK(r[1].status == CheckStatus::kReportOnly);
  CHECK(r[1].lhs == doctest::Approx(0.25));

  InvariantReport z16;
  z16.name = "Z16";
  z16.dim = 16;
  z16.mu_lo = z16.mu_hi = 2.0;
  z16.lambda1_dual = 1.0;
  CHECK(product_report(z16)[1].lhs == doctest::Approx(0.125));

  InvariantReport e = full_report(e8(), "E8", KnownValues{std::sqrt(2.0), 1.0, 240});
  REQUIRE(e.mu_exact.has_value());
  std::vector<VerificationRecord> er = product_report(e);
  CHECK(er[0].status == CheckStatus::kPass);
  CHECK(er[1].lhs == doctest::Approx(std::sqrt(2.0) / 8).epsilon(1e-10));
  CHECK(er[1].lhs > 0.1275);

  InvariantReport bad = z16;
  bad.mu_hi = 0.4;
  CHECK(product_report(bad)[0].status == CheckStatus::kFail);
}

TEST_CASE("full verification of Z2") {
  LatticeVerification v = verify_lattice(zn(2), "Z2", KnownValues{1.0, std::sqrt(0.5), 4}, CheckConfig{});
  CHECK(v.records.size() == 12);
  for (const VerificationRecord& r : v.records) {
    CHECK(r.lattice_name == "Z2");
    CHECK(r.status != CheckStatus::kFail);
  }
  REQUIRE(v.tail_r_star_normalized.has_value());
  CHECK(v.analysis.report.mu_exact.has_value());
}
