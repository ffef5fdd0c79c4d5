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

#ifndef LATKIT_VERIFY_HPP_
#define LATKIT_VERIFY_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "latkit/corpus.hpp"
#include "latkit/transference.hpp"

namespace latkit {

struct RunConfig {
  double mass_tol = kDefaultMassTol;
  double eta_tol = kDefaultEtaTol;
  std::uint64_t enum_budget = kDefaultNodeBudget;
  int shifts = 200;
  double alpha_max = 2.0;
  std::vector<double> identity_s = {0.5, 0.8, 1.0};
  std::vector<double> bound_s = {0.7, 1.0};
  std::uint64_t seed = 1;
  int workers = 1;
  std::filesystem::path out_dir = "latkit-out";
};

// Throws kInvalidArgument on nonsensical settings.
void validate(const RunConfig& config);

// Per-lattice seed; independent of processing order.
std::uint64_t lattice_seed(std::uint64_t seed, const std::string& name);

struct RunResult {
  std::vector<LatticeVerification> lattices;  // corpus order
  int passed = 0;
  int failed = 0;
  int report_only = 0;
  int exit_code() const { return failed == 0 ? 0 : 1; }
};

// Verifies every entry on a pool of config.workers threads.
RunResult verify_corpus(const Corpus& corpus, const RunConfig& config);

void write_report_csv(std::ostream& out, const RunResult& result);
void write_invariants_csv(std::ostream& out, const RunResult& result);
void write_summary_md(std::ostream& out, const Corpus& corpus, const RunResult& result, const RunConfig& config);
void write_chart_svg(std::ostream& out, const RunResult& result);

// verify_corpus plus all four files in config.out_dir; returns the exit code.
int run_verify(const Corpus& corpus, const RunConfig& config, RunResult* result = nullptr);

}  // namespace latkit

#endif  // LATKIT_VERIFY_HPP_
