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

// Acceptance suite.  `acceptance AC3` runs one criterion, `acceptance all`
// runs every criterion.  Each prints one line: "<id> PASS|FAIL <details>".

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "latkit/corpus.hpp"
#include "latkit/enumerate.hpp"
#include "latkit/error.hpp"
#include "latkit/format.hpp"
#include "latkit/gaussian.hpp"
#include "latkit/invariants.hpp"
#include "latkit/transference.hpp"
#include "latkit/verify.hpp"
#include "temp_dir.hpp"
#include "test_lattices.hpp"

using namespace latkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> problems;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      problems.push_back(what);
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

const Corpus& corpus() {
  static const Corpus c = load_corpus(LATKIT_CORPUS_DIR);
  return c;
}

std::vector<const CorpusEntry*> corpus_upto(int max_dim) {
  std::vector<const CorpusEntry*> out;
  for (const CorpusEntry& e : corpus().entries)
    if (e.lattice.dim() <= max_dim) out.push_back(&e);
  return out;
}

const CorpusEntry& named(const std::string& name) {
  for (const CorpusEntry& e : corpus().entries)
    if (e.name == name) return e;
  throw Error(ErrorCode::kInvalidArgument, "corpus has no lattice " + name);
}

// Coefficient vectors as a set, for exact comparisons of enumeration output.
std::set<std::vector<long long>> coeff_set(const std::vector<LatticePoint>& pts) {
  std::set<std::vector<long long>> out;
  for (const LatticePoint& p : pts) out.insert(std::vector<long long>(p.coeffs.begin(), p.coeffs.end()));
  return out;
}

// 1. enumerate_within against the brute-force box scan.
void ac1(Outcome& o) {
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, Lattice>> cases = {
      {"Z2", named("Z2").lattice}, {"Z3", named("Z3").lattice}, {"D3", named("D3").lattice}, {"A2", named("A2").lattice}};
  for (int seed = 1; seed <= 20; ++seed) {
    const int n = 2 + seed % 3;
    cases.emplace_back("random n=" + std::to_string(n) + " seed=" + std::to_string(seed),
                       generate_random_lattice(n, seed, RandomStyle::kIntegerEntries));
  }
  size_t points = 0;
  for (const auto& [name, lattice] : cases) {
    const double l1 = shortest_vector(lattice).dist;
    for (double f : {1.0, 1.5, 2.5}) {
      EnumerationRequest req;
      req.radius = f * l1;
      const auto fast = coeff_set(enumerate_within(lattice, req));
      const auto slow = coeff_set(brute_force_within(lattice, req));
      points += slow.size();
      o.expect(fast == slow, name + " at " + num(f) + " lambda1: " + std::to_string(fast.size()) + " vs " +
                                 std::to_string(slow.size()) + " points");
    }
  }
  const double secs = seconds_since(t0);
  o.expect(secs < 60.0, "runtime " + num(secs) + " s");
  o.detail << cases.size() << " lattices x 3 radii, " << points << " points, identical sets, " << num(secs) << " s";
}

// E8 minimal vectors by direct search over (Z/2)^8 coordinates, membership
// decided by solving B c = x.
std::uint64_t e8_min_vectors_oracle(const Lattice& e8) {
  const Matrix inv = e8.columns().inverse();
  const double vals[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  std::uint64_t count = 0;
  Vector x(8);
  for (int code = 0; code < 390625; ++code) {
    int c = code;
    double norm = 0.0;
    for (int i = 0; i < 8; ++i) {
      x[i] = vals[c % 5];
      c /= 5;
      norm += x[i] * x[i];
    }
    if (norm != 2.0) continue;
    const Vector coeffs = inv * x;
    bool integral = true;
    for (int i = 0; i < 8; ++i) integral = integral && std::abs(coeffs[i] - std::round(coeffs[i])) < 1e-9;
    count += integral;
  }
  return count;
}

// 2. lambda1 and N_1 of Z4, D4, E8.
void ac2(Outcome& o) {
  struct Case {
    std::string name;
    long lambda1_sq;
    std::uint64_t kissing;
  };
  for (const Case& c : {Case{"Z4", 1, 8}, Case{"D4", 2, 24}, Case{"E8", 2, 240}}) {
    const auto t0 = Clock::now();
    const Lattice& l = named(c.name).lattice;
    const LatticePoint sv = shortest_vector(l);
    o.expect(sv.dist_sq_exact.has_value() && *sv.dist_sq_exact == Rational(c.lambda1_sq),
             c.name + " lambda1^2 = " + num(sv.dist_sq));
    const std::uint64_t n1 = count_points(l, 1.0);
    o.expect(n1 == c.kissing, c.name + " N_1 = " + std::to_string(n1));
    std::uint64_t oracle = 0;
    if (l.dim() <= 6) {
      EnumerationRequest req;
      req.radius = std::sqrt(static_cast<double>(c.lambda1_sq));
      req.radius_sq_exact = Rational(c.lambda1_sq);
      oracle = brute_force_within(l, req).size() - 1;
    } else {
      oracle = e8_min_vectors_oracle(l);
    }
    o.expect(oracle == c.kissing, c.name + " oracle N_1 = " + std::to_string(oracle));
    const double secs = seconds_since(t0);
    if (c.name == "E8") o.expect(secs < 120.0, "E8 took " + num(secs) + " s");
    o.detail << c.name << ": lambda1^2=" << c.lambda1_sq << " N_1=" << n1 << " (oracle " << oracle << ", " << num(secs)
             << " s); ";
  }
}

// 3. rho_1(Z) against direct summation, and the product structure on Z^2.
// Masses are computed at rel tol 1e-12 so the whole certified window must lie
// within 1e-10 of the oracle.
void ac3(Outcome& o) {
  constexpr double kTol = 1e-12;
  double direct = 0.0;
  for (int k = 20; k >= 1; --k) direct += 2.0 * std::exp(-M_PI * k * k);
  direct += 1.0;
  const MassResult z1 = gaussian_mass(named("Z1").lattice, GaussianParams{}, kTol);
  const MassResult z2 = gaussian_mass(named("Z2").lattice, GaussianParams{}, kTol);
  const double err1 = std::max(std::abs(z1.lo() - direct), std::abs(z1.hi() - direct));
  const double rel2 = std::abs(z2.mid() - z1.mid() * z1.mid()) / (z1.mid() * z1.mid());
  o.expect(err1 <= 1e-10, "rho_1(Z) window reaches " + num(err1) + " from the oracle");
  o.expect(z1.lo() <= direct && direct <= z1.hi(), "oracle outside certified window");
  o.expect(rel2 <= 1e-9, "rho_1(Z^2) relative error " + num(rel2));
  o.detail << "rho_1(Z) in [" << format_number(z1.lo(), 17) << ", " << format_number(z1.hi(), 17)
           << "], oracle " << format_number(direct, 17) << ", max deviation " << num(err1)
           << "; rho_1(Z^2)/rho_1(Z)^2-1=" << num(rel2);
}

// 4. Poisson summation residual.
void ac4(Outcome& o) {
  double worst = 0.0;
  std::string worst_at;
  int evaluated = 0;
  for (const CorpusEntry* e : corpus_upto(6)) {
    for (double s : {0.7, 1.0, 1.6}) {
      const double r = poisson_residual(e->lattice, s);
      ++evaluated;
      o.expect(r < 1e-8, e->name + " s=" + num(s) + " residual " + num(r));
      if (r >= worst) {
        worst = r;
        worst_at = e->name + " s=" + num(s);
      }
    }
  }
  o.detail << evaluated << " evaluations, worst residual " << num(worst) << " (" << worst_at << ")";
}

// Scalar bisection for eta(Z): 1 + 2 sum exp(-pi eta^2 k^2) = 3/2.
double eta_z_oracle() {
  auto rho = [](double eta) {
    double sum = 0.0;
    for (int k = 60; k >= 1; --k) sum += std::exp(-M_PI * eta * eta * k * k);
    return 1.0 + 2.0 * sum;
  };
  double lo = 0.1, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rho(mid) > 1.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// 5. Smoothing parameter: oracle, bracket invariant and the scaling clause as
// stated (eta(2L) = eta(L)/2).
void ac5(Outcome& o) {
  const double tol = kDefaultEtaTol;
  const double oracle = eta_z_oracle();
  const SmoothingResult z = smoothing_parameter(named("Z1").lattice, tol);
  o.expect(std::abs(z.eta - oracle) <= 1e-3, "eta(Z)=" + num(z.eta) + " vs oracle " + num(oracle));

  auto bracket_ok = [&](const SmoothingResult& r) {
    return r.lo <= r.eta && r.eta <= r.hi && r.hi - r.lo <= tol * 0.5 * (r.lo + r.hi) &&
           r.mass_at_lo.lo() > kSmoothingMass && r.mass_at_hi.hi() < kSmoothingMass;
  };
  o.expect(bracket_ok(z), "eta(Z) bracket invariant");

  const Lattice& z2 = named("Z2").lattice;
  const SmoothingResult base = smoothing_parameter(z2, tol);
  const SmoothingResult twice = smoothing_parameter(scaled(z2, 2.0), tol);
  o.expect(bracket_ok(base) && bracket_ok(twice), "Z^2 bracket invariant");
  const double expected = base.eta / 2.0;
  const double gap = std::abs(twice.eta - expected);
  o.expect(gap <= 2.0 * tol * expected, "scaling: eta(2Z^2)=" + num(twice.eta) + ", eta(Z^2)/2=" + num(expected) +
                                            ", measured ratio eta(2Z^2)/eta(Z^2)=" + num(twice.eta / base.eta));
  o.detail << "eta(Z)=" << num(z.eta) << " oracle=" << num(oracle) << "; bracket [" << num(z.lo) << ", " << num(z.hi)
           << "]; eta(Z^2)=" << num(base.eta) << " eta(2Z^2)=" << num(twice.eta);
}

// 6. Sandwich at s = eta(1 + 1e-6), 200 shifts.
void ac6(Outcome& o) {
  int lattices = 0;
  double worst_margin = 1e300;
  for (const CorpusEntry* e : corpus_upto(6)) {
    const Enumerator primal(e->lattice);
    const SmoothingResult eta = smoothing_parameter(e->lattice);
    SandwichConfig cfg;
    cfg.shifts = 200;
    cfg.seed = lattice_seed(1, e->name);
    const VerificationRecord r = check_sandwich(primal, eta, e->name, cfg);
    ++lattices;
    worst_margin = std::min(worst_margin, r.margin);
    o.expect(r.status == CheckStatus::kPass, e->name + ": " + r.details);
  }
  o.detail << lattices << " lattices x 200 shifts, smallest margin min ratio - 1/3 = " << num(worst_margin);
}

// 7. Integral identity residual.
void ac7(Outcome& o) {
  double worst = 0.0;
  int evaluated = 0;
  for (const CorpusEntry* e : corpus_upto(4)) {
    const Enumerator en(e->lattice);
    const double l1 = shortest_vector(en).dist;
    for (double f : {0.5, 0.8, 1.0}) {
      const Thm3Integral t = thm3_integral(en, f * l1);
      const VerificationRecord r = check_thm3_identity(t, f * l1, e->name);
      ++evaluated;
      worst = std::max(worst, t.residual);
      o.expect(t.residual < 1e-6 && r.status == CheckStatus::kPass,
               e->name + " s=" + num(f) + " lambda1 residual " + num(t.residual));
    }
  }
  o.detail << evaluated << " evaluations, worst relative residual " << num(worst);
}

// 8. Gamma-form bound with the empirical beta.
void ac8(Outcome& o) {
  double tightest = 1e300;
  int evaluated = 0;
  for (const CorpusEntry* e : corpus_upto(4)) {
    const Enumerator en(e->lattice);
    const double l1 = shortest_vector(en).dist;
    for (double f : {0.7, 1.0}) {
      const VerificationRecord r = check_thm3_bound(en, f * l1, e->name);
      ++evaluated;
      tightest = std::min(tightest, r.rhs / r.lhs);
      o.expect(r.status == CheckStatus::kPass && r.lhs < r.rhs, e->name + " s=" + num(f) + " lambda1: " + r.details);
    }
  }
  o.detail << evaluated << " evaluations, smallest bound/mass ratio " << num(tightest);
}

// 9. Lower transference bound, and exact mu for Z^n from a half-sum corner.
void ac9(Outcome& o) {
  double smallest = 1e300;
  int zn = 0;
  for (const CorpusEntry& e : corpus().entries) {
    const Enumerator primal(e.lattice);
    const Enumerator dual_e(dual(e.lattice));
    const LatticeAnalysis a = analyze(primal, dual_e, e.name, e.known, ReportConfig{});
    const InvariantReport& r = a.report;
    const double product = r.mu_hi * r.lambda1_dual;
    smallest = std::min(smallest, product);
    o.expect(product >= 0.5, e.name + ": mu_hi lambda1(L*) = " + num(product));
    const bool is_zn = e.name.size() == 2 && e.name[0] == 'Z' && std::isdigit(static_cast<unsigned char>(e.name[1]));
    if (!is_zn) continue;
    ++zn;
    const int n = r.dim;
    const double target = std::sqrt(static_cast<double>(n)) / 2.0;
    o.expect(r.mu_exact.has_value(), e.name + ": no exact mu");
    if (r.mu_exact) {
      const double p = *r.mu_exact * r.lambda1_dual;
      o.expect(std::abs(p - target) <= 1e-8, e.name + ": mu_exact lambda1(L*) = " + num(p));
    }
    bool corner = a.covering.deep_hole_start >= 0 && a.covering.deep_hole_start < (2 << n);
    for (int i = 0; i < n; ++i) {
      const double frac = a.covering.deep_hole[i] - std::floor(a.covering.deep_hole[i]);
      corner = corner && std::abs(frac - 0.5) < 1e-12;
    }
    o.expect(corner, e.name + ": deep hole is not a half-sum corner");
  }
  o.detail << corpus().entries.size() << " lattices, smallest mu_hi lambda1(L*) = " << num(smallest) << "; " << zn
           << " Z^n lattices exact at sqrt(n)/2 via corner deep holes";
}

unsigned worker_count() { return std::clamp(std::thread::hardware_concurrency(), 1u, 8u); }

// 10. Tail profile monotonicity and r* in summary.md.
void ac10(Outcome& o) {
  latkit::testing::TempDir dir("acceptance_tail");
  RunConfig cfg;
  cfg.out_dir = dir.path();
  cfg.workers = static_cast<int>(worker_count());
  RunResult result;
  run_verify(corpus(), cfg, &result);
  const std::string summary = latkit::testing::read_file(dir.path() / "summary.md");
  const size_t section = summary.find("## Tail radius");
  o.expect(section != std::string::npos, "summary.md has no tail radius section");
  int profiles = 0;
  for (const LatticeVerification& v : result.lattices) {
    const std::string& name = v.analysis.report.name;
    for (const VerificationRecord& r : v.records) {
      if (r.check_id != CheckId::kTailEq3Report) continue;
      ++profiles;
      o.expect(r.status != CheckStatus::kFail && r.details.find("monotone=yes") != std::string::npos,
               name + ": " + r.details);
    }
    o.expect(v.tail_r_star_normalized.has_value(), name + ": no r*");
    if (section != std::string::npos && v.tail_r_star_normalized) {
      const std::string row = "| " + name + " | " + std::to_string(v.analysis.report.dim) + " | " +
                              format_number(*v.tail_r_star_normalized) + " |";
      o.expect(summary.find(row, section) != std::string::npos, name + ": r* row missing from summary.md");
    }
  }
  o.detail << profiles << " profiles nonincreasing on 61-point grids; r*/(sqrt(n) s) recorded in summary.md";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LATKIT_CLI) + " " + args + " >/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 11. Byte-identical reports across runs and worker counts.
void ac11(Outcome& o) {
  latkit::testing::TempDir dir("acceptance_det");
  const unsigned w = std::max(2u, worker_count());
  const std::vector<std::pair<std::string, int>> runs = {{"a", 1}, {"b", static_cast<int>(w)}, {"c", static_cast<int>(w)}};
  for (const auto& [tag, workers] : runs) {
    const int code = run_cli("verify --corpus " + std::string(LATKIT_CORPUS_DIR) + " --seed 1 --out " +
                             (dir.path() / tag).string() + " --workers " + std::to_string(workers));
    o.expect(code == 0, "run " + tag + " exited with " + std::to_string(code));
  }
  for (const char* f : {"report.csv", "invariants.csv"}) {
    const std::string a = latkit::testing::read_file(dir.path() / "a" / f);
    o.expect(!a.empty(), std::string(f) + " is empty");
    for (const char* tag : {"b", "c"})
      o.expect(a == latkit::testing::read_file(dir.path() / tag / f), std::string(f) + " differs in run " + tag);
  }
  o.detail << "3 CLI runs (workers 1, " << w << ", " << w << "): report.csv and invariants.csv byte-identical";
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"AC1", "enumeration equals brute force", ac1},
      {"AC2", "named lambda1 and kissing numbers", ac2},
      {"AC3", "theta value and product structure", ac3},
      {"AC4", "Poisson residual", ac4},
      {"AC5", "smoothing parameter", ac5},
      {"AC6", "shifted-mass sandwich", ac6},
      {"AC7", "point-count integral identity", ac7},
      {"AC8", "Gamma-form mass bound", ac8},
      {"AC9", "lower transference bound", ac9},
      {"AC10", "tail monotonicity", ac10},
      {"AC11", "determinism", ac11},
  };
  return all;
}

bool run_one(const Criterion& c) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    c.run(o);
  } catch (const std::exception& e) {
    o.expect(false, std::string("exception: ") + e.what());
  }
  std::cout << c.id << " " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << ": " << o.detail.str() << " ["
            << num(seconds_since(t0)) << " s]\n";
  for (const std::string& p : o.problems) std::cout << "    " << p << "\n";
  std::cout.flush();
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  bool ok = true;
  bool matched = false;
  for (const Criterion& c : criteria()) {
    if (which != "all" && which != c.id) continue;
    matched = true;
    ok = run_one(c) && ok;
  }
  if (!matched) {
    std::cerr << "acceptance: unknown criterion " << which << "\n";
    return 2;
  }
  return ok ? 0 : 1;
}
