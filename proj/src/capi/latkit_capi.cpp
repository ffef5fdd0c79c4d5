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

#include "latkit/latkit.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "latkit/corpus.hpp"
#include "latkit/error.hpp"
#include "latkit/gaussian.hpp"
#include "latkit/invariants.hpp"
#include "latkit/verify.hpp"

struct latkit_lattice {
  std::string name;
  latkit::Lattice lattice;
};

struct latkit_beta {
  latkit::BetaEstimate estimate;
};

namespace {

thread_local std::string last_error;

latkit_status to_status(latkit::ErrorCode code) {
  switch (code) {
    case latkit::ErrorCode::kSingularBasis: return LATKIT_SINGULAR_BASIS;
    case latkit::ErrorCode::kBudgetExceeded: return LATKIT_BUDGET_EXCEEDED;
    case latkit::ErrorCode::kToleranceUnreachable: return LATKIT_TOLERANCE_UNREACHABLE;
    case latkit::ErrorCode::kDimensionTooLarge: return LATKIT_DIMENSION_TOO_LARGE;
    case latkit::ErrorCode::kReductionUnstable: return LATKIT_REDUCTION_UNSTABLE;
    case latkit::ErrorCode::kInvalidArgument: return LATKIT_INVALID_ARGUMENT;
    case latkit::ErrorCode::kParseError: return LATKIT_PARSE_ERROR;
    case latkit::ErrorCode::kIoError: return LATKIT_IO_ERROR;
  }
  return LATKIT_INTERNAL_ERROR;
}

template <class Fn>
latkit_status guard(Fn fn) {
  try {
    fn();
    last_error.clear();
    return LATKIT_OK;
  } catch (const latkit::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return LATKIT_INTERNAL_ERROR;
}

void require(bool ok, const char* what) {
  if (!ok) throw latkit::Error(latkit::ErrorCode::kInvalidArgument, what);
}

latkit_config config_or_default(const latkit_config* config) {
  latkit_config c;
  latkit_config_default(&c);
  return config ? *config : c;
}

latkit::EnumOptions enum_options(const latkit_config& c) {
  latkit::EnumOptions o;
  o.node_budget = c.enum_budget;
  return o;
}

latkit::Vector vector_from(const double* data, int n) {
  latkit::Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = data[i];
  return v;
}

latkit_lattice* wrap(std::string name, latkit::Lattice lattice) {
  return new latkit_lattice{std::move(name), std::move(lattice)};
}

}  // namespace

extern "C" {

const char* latkit_last_error(void) { return last_error.c_str(); }

const char* latkit_status_name(latkit_status status) {
  switch (status) {
    case LATKIT_OK: return "ok";
    case LATKIT_SINGULAR_BASIS: return "singular basis";
    case LATKIT_BUDGET_EXCEEDED: return "budget exceeded";
    case LATKIT_TOLERANCE_UNREACHABLE: return "tolerance unreachable";
    case LATKIT_DIMENSION_TOO_LARGE: return "dimension too large";
    case LATKIT_REDUCTION_UNSTABLE: return "reduction unstable";
    case LATKIT_INVALID_ARGUMENT: return "invalid argument";
    case LATKIT_PARSE_ERROR: return "parse error";
    case LATKIT_IO_ERROR: return "i/o error";
    case LATKIT_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

void latkit_config_default(latkit_config* config) {
  if (!config) return;
  config->mass_tol = latkit::kDefaultMassTol;
  config->eta_tol = latkit::kDefaultEtaTol;
  config->enum_budget = latkit::kDefaultNodeBudget;
  config->alpha_max = 2.0;
  config->seed = 1;
  config->shifts = 200;
  config->workers = 1;
}

latkit_status latkit_lattice_load(const char* path, latkit_lattice** out) {
  return guard([&] {
    require(path && out, "null argument");
    latkit::CorpusEntry e = latkit::load_lattice_file(path);
    *out = wrap(std::move(e.name), std::move(e.lattice));
  });
}

latkit_status latkit_lattice_from_json(const char* text, latkit_lattice** out) {
  return guard([&] {
    require(text && out, "null argument");
    latkit::CorpusEntry e = latkit::parse_lattice_json(text, "<json>");
    *out = wrap(std::move(e.name), std::move(e.lattice));
  });
}

latkit_status latkit_lattice_from_rows(int dim, const double* row_major, latkit_lattice** out) {
  return guard([&] {
    require(row_major && out && dim >= 1, "invalid argument");
    std::vector<double> rows(row_major, row_major + static_cast<size_t>(dim) * dim);
    *out = wrap("", latkit::make_lattice(latkit::Basis::from_rows(dim, rows)));
  });
}

latkit_status latkit_lattice_dual(const latkit_lattice* lattice, latkit_lattice** out) {
  return guard([&] {
    require(lattice && out, "null argument");
    *out = wrap(lattice->name.empty() ? "" : lattice->name + "*", latkit::dual(lattice->lattice));
  });
}

void latkit_lattice_free(latkit_lattice* lattice) { delete lattice; }

int latkit_lattice_dim(const latkit_lattice* lattice) { return lattice ? lattice->lattice.dim() : 0; }

const char* latkit_lattice_name(const latkit_lattice* lattice) { return lattice ? lattice->name.c_str() : ""; }

int latkit_lattice_is_exact(const latkit_lattice* lattice) { return lattice && lattice->lattice.exact() ? 1 : 0; }

double latkit_lattice_det(const latkit_lattice* lattice) {
  return lattice ? lattice->lattice.det() : std::numeric_limits<double>::quiet_NaN();
}

void latkit_lattice_basis(const latkit_lattice* lattice, double* row_major) {
  if (!lattice || !row_major) return;
  const int n = lattice->lattice.dim();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) row_major[r * n + c] = lattice->lattice.columns()(r, c);
}

latkit_status latkit_lattice_to_json(const latkit_lattice* lattice, char** out) {
  return guard([&] {
    require(lattice && out, "null argument");
    const std::string text = latkit::lattice_to_json(lattice->name, lattice->lattice);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void latkit_string_free(char* text) { std::free(text); }

latkit_status latkit_generate_random(int dim, uint64_t seed, const char* style, latkit_lattice** out) {
  return guard([&] {
    require(style && out, "null argument");
    auto parsed = latkit::parse_random_style(style);
    require(parsed.has_value(), "style must be unimodular_of_Zn or integer_entries");
    std::string name = "rand" + std::to_string(dim) + "_" + std::string(latkit::random_style_name(*parsed)) + "_" +
                       std::to_string(seed);
    *out = wrap(std::move(name), latkit::generate_random_lattice(dim, seed, *parsed));
  });
}

latkit_status latkit_shortest_vector(const latkit_lattice* lattice, const latkit_config* config, double* norm,
                                     long long* coeffs, double* vector) {
  return guard([&] {
    require(lattice && norm, "null argument");
    const latkit::LatticePoint p = latkit::shortest_vector(lattice->lattice, enum_options(config_or_default(config)));
    *norm = p.dist;
    for (size_t i = 0; coeffs && i < p.coeffs.size(); ++i) coeffs[i] = p.coeffs[i];
    for (int i = 0; vector && i < p.point.size(); ++i) vector[i] = p.point[i];
  });
}

latkit_status latkit_closest_vector(const latkit_lattice* lattice, const latkit_config* config, const double* target,
                                    double* distance, long long* coeffs) {
  return guard([&] {
    require(lattice && target && distance, "null argument");
    const latkit::LatticePoint p = latkit::closest_vector(
        lattice->lattice, vector_from(target, lattice->lattice.dim()), enum_options(config_or_default(config)));
    *distance = p.dist;
    for (size_t i = 0; coeffs && i < p.coeffs.size(); ++i) coeffs[i] = p.coeffs[i];
  });
}

latkit_status latkit_count_points(const latkit_lattice* lattice, const latkit_config* config, double alpha,
                                  uint64_t* count) {
  return guard([&] {
    require(lattice && count, "null argument");
    *count = latkit::count_points(lattice->lattice, alpha, enum_options(config_or_default(config)));
  });
}

latkit_status latkit_gaussian_mass(const latkit_lattice* lattice, const latkit_config* config, double s,
                                   const double* t, double r, latkit_mass* out) {
  return guard([&] {
    require(lattice && out, "null argument");
    const latkit_config c = config_or_default(config);
    latkit::GaussianParams p;
    p.s = s;
    p.r = r;
    if (t) p.t = vector_from(t, lattice->lattice.dim());
    const latkit::MassResult m = latkit::gaussian_mass(lattice->lattice, p, c.mass_tol, enum_options(c));
    *out = latkit_mass{m.value, m.lo(), m.hi(), m.mid(), m.tail_bound, m.rounding, m.trunc_radius, m.points};
  });
}

latkit_status latkit_smoothing_parameter(const latkit_lattice* lattice, const latkit_config* config,
                                         latkit_smoothing* out) {
  return guard([&] {
    require(lattice && out, "null argument");
    const latkit_config c = config_or_default(config);
    const latkit::SmoothingResult s =
        latkit::smoothing_parameter(lattice->lattice, c.eta_tol, c.mass_tol, enum_options(c));
    *out = latkit_smoothing{s.eta, s.lo, s.hi, s.mass_at_lo.lo(), s.mass_at_hi.hi(), s.evaluations};
  });
}

latkit_status latkit_covering_radius(const latkit_lattice* lattice, const latkit_config* config, latkit_covering* out,
                                     double* deep_hole) {
  return guard([&] {
    require(lattice && out, "null argument");
    const latkit_config c = config_or_default(config);
    const latkit::EnumOptions opts = enum_options(c);
    const latkit::Enumerator primal(lattice->lattice, opts);
    const latkit::Enumerator dual_e(latkit::dual(lattice->lattice), opts);
    const latkit::SmoothingResult eta = latkit::smoothing_parameter_from_dual(dual_e, c.eta_tol, c.mass_tol);
    latkit::SearchBudget budget;
    budget.seed = c.seed;
    const latkit::CoveringBounds b = latkit::covering_radius_bounds(primal, budget, &eta);
    *out = latkit_covering{b.mu_lo, b.mu_hi, b.gs_bound,
                           b.eta_bound ? *b.eta_bound : std::numeric_limits<double>::quiet_NaN(), b.starts};
    for (int i = 0; deep_hole && i < b.deep_hole.size(); ++i) deep_hole[i] = b.deep_hole[i];
  });
}

latkit_status latkit_beta_estimate(const latkit_lattice* lattice, const latkit_config* config, double alpha_max,
                                   latkit_beta** out) {
  return guard([&] {
    require(lattice && out, "null argument");
    *out = new latkit_beta{latkit::beta_estimate(lattice->lattice, alpha_max, enum_options(config_or_default(config)))};
  });
}

double latkit_beta_value(const latkit_beta* beta) { return beta ? beta->estimate.beta_hat : 0.0; }

double latkit_beta_alpha_at_max(const latkit_beta* beta) { return beta ? beta->estimate.alpha_at_max : 0.0; }

size_t latkit_beta_sample_count(const latkit_beta* beta) { return beta ? beta->estimate.samples.size() : 0; }

void latkit_beta_sample(const latkit_beta* beta, size_t index, double* alpha, uint64_t* count) {
  if (!beta || index >= beta->estimate.samples.size()) return;
  if (alpha) *alpha = beta->estimate.samples[index].alpha;
  if (count) *count = beta->estimate.samples[index].count;
}

void latkit_beta_free(latkit_beta* beta) { delete beta; }

latkit_status latkit_run_verify(const char* corpus_dir, const char* out_dir, const latkit_config* config,
                                int* exit_code, latkit_verify_summary* summary) {
  return guard([&] {
    require(corpus_dir && out_dir && exit_code, "null argument");
    const latkit_config c = config_or_default(config);
    latkit::RunConfig rc;
    rc.mass_tol = c.mass_tol;
    rc.eta_tol = c.eta_tol;
    rc.enum_budget = c.enum_budget;
    rc.alpha_max = c.alpha_max;
    rc.seed = c.seed;
    rc.shifts = c.shifts;
    rc.workers = c.workers;
    rc.out_dir = out_dir;
    latkit::validate(rc);
    const latkit::Corpus corpus = latkit::load_corpus(corpus_dir);
    latkit::RunResult result;
    *exit_code = latkit::run_verify(corpus, rc, &result);
    if (summary)
      *summary = latkit_verify_summary{static_cast<int>(result.lattices.size()), result.passed, result.failed,
                                       result.report_only};
  });
}

}  // extern "C"
