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

#ifndef LATKIT_INVARIANTS_HPP_
#define LATKIT_INVARIANTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latkit/enumerate.hpp"
#include "latkit/gaussian.hpp"
#include "latkit/lattice.hpp"

namespace latkit {

struct SearchBudget {
  int random_starts = 64;
  int refine_rounds = 50;
  int refined_corners = 8;  // best corners that also get refined
  int max_corner_dim = 12;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct CoveringBounds {
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  Vector deep_hole;  // best point found; dist(deep_hole, L) = mu_lo
  int deep_hole_start = -1;
  double gs_bound = 0.0;             // (1/2) sqrt(sum |b*_i|^2)
  std::optional<double> eta_bound;   // sqrt(n) * eta, when certifiable
  int starts = 0;
};

// mu_lo from a multi-start deep-hole search, mu_hi from the Gram-Schmidt
// bound and, given a certified smoothing bracket, from sqrt(n) * eta.hi.
CoveringBounds covering_radius_bounds(const Enumerator& enumerator, const SearchBudget& budget = {},
                                      const SmoothingResult* eta = nullptr);
CoveringBounds covering_radius_bounds(const Lattice& lattice, const SearchBudget& budget = {},
                                      EnumOptions options = {});

struct BetaSample {
  double alpha = 0.0;
  std::uint64_t count = 0;  // N_alpha
};

struct BetaEstimate {
  double beta_hat = 0.0;
  double alpha_at_max = 1.0;
  std::vector<BetaSample> samples;  // one per distinct norm up to alpha_max * lambda1
};

BetaEstimate beta_estimate(const Enumerator& enumerator, double alpha_max);
BetaEstimate beta_estimate(const Lattice& lattice, double alpha_max, EnumOptions options = {});

struct KnownValues {
  std::optional<double> lambda1;
  std::optional<double> mu;
  std::optional<std::uint64_t> kissing;
};

struct ReportConfig {
  double mass_tol = kDefaultMassTol;
  double eta_tol = kDefaultEtaTol;
  double alpha_max = 2.0;
  SearchBudget search;
  EnumOptions enum_options;
};

struct InvariantReport {
  std::string name;
  int dim = 0;
  double lambda1 = 0.0;
  double lambda1_dual = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  std::optional<double> mu_exact;
  double eta = 0.0;
  double beta_hat = 0.0;
  double alpha_max = 0.0;

  double eta_lo = 0.0;
  double eta_hi = 0.0;
  std::uint64_t kissing = 0;
  Vector deep_hole;

  // mu_lo / (sqrt(n) * eta), compared against 1/sqrt(2 pi) in reports.
  double mu_eta_ratio() const;
};

struct LatticeAnalysis {
  InvariantReport report;
  CoveringBounds covering;
  SmoothingResult smoothing;
  BetaEstimate beta;
  LatticePoint shortest;
  LatticePoint shortest_dual;
};

// The full set of invariants; primal and dual must enumerate L and L*.
LatticeAnalysis analyze(const Enumerator& primal, const Enumerator& dual, const std::string& name,
                        const KnownValues& known, const ReportConfig& config);

InvariantReport full_report(const Lattice& lattice, const std::string& name, const KnownValues& known = {},
                            const ReportConfig& config = {});

}  // namespace latkit

#endif  // LATKIT_INVARIANTS_HPP_
