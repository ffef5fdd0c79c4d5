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

#include "latkit/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "latkit/error.hpp"

namespace latkit {

namespace {

struct Start {
  Vector point;
  bool refine = false;
};

struct Found {
  double dist = -1.0;
  Vector point;
};

// Budget exhaustion only loosens mu_lo: such a probe counts as "no information".
std::optional<double> dist_to_lattice(const Enumerator& e, const Vector& t) {
  try {
    return distance_to_lattice(e, t);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kBudgetExceeded) throw;
    return std::nullopt;
  }
}

// Coordinate-wise hill climbing on dist(., L); the step halves after a round
// without improvement.
Found refine(const Enumerator& e, Vector cur, double best, double step, int rounds) {
  const int n = e.dim();
  const double min_step = step * 1e-12;
  for (int round = 0; round < rounds && step > min_step; ++round) {
    bool improved = false;
    for (int i = 0; i < n; ++i) {
      for (double sign : {1.0, -1.0}) {
        Vector cand = cur;
        cand[i] += sign * step;
        const std::optional<double> d = dist_to_lattice(e, cand);
        if (d && *d > best) {
          best = *d;
          cur = std::move(cand);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {best, std::move(cur)};
}

void add_corners(const Matrix& basis, std::vector<Start>& out) {
  const int n = static_cast<int>(basis.cols());
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    Vector p = Vector::Zero(n);
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) p += 0.5 * basis.col(i);
    out.push_back({std::move(p), false});
  }
}

template <class Fn>
void parallel_for(int count, int threads, Fn fn) {
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += threads) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace

CoveringBounds covering_radius_bounds(const Enumerator& e, const SearchBudget& budget, const SmoothingResult* eta) {
  const int n = e.dim();
  CoveringBounds out;

  double gs_sum = 0.0;
  for (double b : e.gs_norm_sq()) gs_sum += b;
  out.gs_bound = 0.5 * std::sqrt(gs_sum);
  out.mu_hi = out.gs_bound;
  // The sandwich at s >= eta together with the shifted tail at u = 1 gives
  // mu <= sqrt(n) * s as soon as the tail certificate drops below 1/3.
  if (eta && eta->hi > 0.0 && tail_certificate(n, 1.0, true) < 1.0 / 3.0) {
    out.eta_bound = std::sqrt(static_cast<double>(n)) * eta->hi;
    out.mu_hi = std::min(out.mu_hi, *out.eta_bound);
  }
  out.mu_hi *= 1.0 + 1e-12;  // rounding in the sums above

  std::vector<Start> starts;
  if (n <= budget.max_corner_dim) {
    add_corners(e.lattice().columns(), starts);
    if (e.reduced().columns() != e.lattice().columns()) add_corners(e.reduced().columns(), starts);
  }
  const int corners = static_cast<int>(starts.size());
  std::mt19937_64 rng(budget.seed);
  const Matrix& red = e.reduced().columns();
  for (int k = 0; k < budget.random_starts; ++k) {
    Vector u(n);
    for (int i = 0; i < n; ++i) u[i] = static_cast<double>(rng() >> 11) * 0x1p-53;
    starts.push_back({red * u, true});
  }
  out.starts = static_cast<int>(starts.size());
  if (starts.empty()) {
    out.deep_hole = Vector::Zero(n);
    out.mu_lo = 0.0;
    return out;
  }

  std::vector<Found> found(starts.size());
  parallel_for(corners, budget.threads,
               [&](int i) { found[i] = {dist_to_lattice(e, starts[i].point).value_or(-1.0), starts[i].point}; });

  // Refine the most promising corners along with every random start.
  std::vector<int> order(corners);
  for (int i = 0; i < corners; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return found[a].dist > found[b].dist; });
  for (int k = 0; k < std::min(corners, budget.refined_corners); ++k) starts[order[k]].refine = true;

  const double step = 0.5 * shortest_vector(e).dist;
  std::vector<int> work;
  for (int i = 0; i < static_cast<int>(starts.size()); ++i)
    if (starts[i].refine) work.push_back(i);
  parallel_for(static_cast<int>(work.size()), budget.threads, [&](int k) {
    const int i = work[k];
    const double d0 = i < corners ? found[i].dist : dist_to_lattice(e, starts[i].point).value_or(-1.0);
    if (d0 < 0.0) return;
    found[i] = refine(e, starts[i].point, d0, step, budget.refine_rounds);
  });

  int best = 0;
  for (int i = 1; i < static_cast<int>(found.size()); ++i)
    if (found[i].dist > found[best].dist) best = i;
  out.mu_lo = std::max(found[best].dist, 0.0);
  out.deep_hole = found[best].dist >= 0.0 ? found[best].point : Vector::Zero(n);
  out.deep_hole_start = best;
  return out;
}

CoveringBounds covering_radius_bounds(const Lattice& lattice, const SearchBudget& budget, EnumOptions options) {
  return covering_radius_bounds(Enumerator(lattice, options), budget, nullptr);
}

BetaEstimate beta_estimate(const Enumerator& e, double alpha_max) {
  if (!(alpha_max >= 1.0) || !std::isfinite(alpha_max))
    throw Error(ErrorCode::kInvalidArgument, "alpha_max must be >= 1");
  const int n = e.dim();
  const LatticePoint sv = shortest_vector(e);
  SquaredRadius radius;
  radius.value = alpha_max * alpha_max * sv.dist_sq;
  if (sv.dist_sq_exact) {
    const Rational a(alpha_max);
    radius.exact = a * a * *sv.dist_sq_exact;
  }
  BetaEstimate out;
  out.beta_hat = -std::numeric_limits<double>::infinity();
  std::uint64_t total = 0;
  for (const Shell& shell : shells_within(e, radius)) {
    total += shell.count;
    const double alpha = std::sqrt(shell.norm_sq / sv.dist_sq);
    out.samples.push_back({alpha, total});
    const double value = std::log2(static_cast<double>(total)) / n - std::log2(alpha);
    if (value > out.beta_hat) {
      out.beta_hat = value;
      out.alpha_at_max = alpha;
    }
  }
  return out;
}

BetaEstimate beta_estimate(const Lattice& lattice, double alpha_max, EnumOptions options) {
  return beta_estimate(Enumerator(lattice, options), alpha_max);
}

double InvariantReport::mu_eta_ratio() const { return mu_lo / (std::sqrt(static_cast<double>(dim)) * eta); }

LatticeAnalysis analyze(const Enumerator& primal, const Enumerator& dual_e, const std::string& name,
                        const KnownValues& known, const ReportConfig& config) {
  LatticeAnalysis a;
  a.shortest = shortest_vector(primal);
  a.shortest_dual = shortest_vector(dual_e);
  a.smoothing = smoothing_parameter_from_dual(dual_e, config.eta_tol, config.mass_tol);
  a.covering = covering_radius_bounds(primal, config.search, &a.smoothing);
  a.beta = beta_estimate(primal, config.alpha_max);

  InvariantReport& r = a.report;
  r.name = name;
  r.dim = primal.dim();
  r.lambda1 = a.shortest.dist;
  r.lambda1_dual = a.shortest_dual.dist;
  r.mu_lo = a.covering.mu_lo;
  r.mu_hi = a.covering.mu_hi;
  r.eta = a.smoothing.eta;
  r.eta_lo = a.smoothing.lo;
  r.eta_hi = a.smoothing.hi;
  r.beta_hat = a.beta.beta_hat;
  r.alpha_max = config.alpha_max;
  r.kissing = count_points(primal, 1.0, a.shortest);
  r.deep_hole = a.covering.deep_hole;
  // A stated covering radius counts only once the search reaches it.
  if (known.mu && std::abs(r.mu_lo - *known.mu) <= 1e-8 * std::max(1.0, *known.mu) && *known.mu <= r.mu_hi)
    r.mu_exact = r.mu_lo;
  return a;
}

InvariantReport full_report(const Lattice& lattice, const std::string& name, const KnownValues& known,
                            const ReportConfig& config) {
  const Enumerator primal(lattice, config.enum_options);
  const Enumerator dual_e(dual(lattice), config.enum_options);
  return analyze(primal, dual_e, name, known, config).report;
}

}  // namespace latkit
