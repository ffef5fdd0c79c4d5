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

#include "latkit/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <fstream>
#include <numbers>
#include <ostream>
#include <thread>

#include "latkit/error.hpp"
#include "latkit/format.hpp"

namespace latkit {

namespace {

constexpr double kInv2PiE = 1.0 / (2.0 * std::numbers::pi * std::numbers::e);
constexpr double kThmConstant = 0.1275;
constexpr double kInv2Pi = 1.0 / (2.0 * std::numbers::pi);

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double x) { return format_number(x); }

double normalized(double mu, const InvariantReport& r) { return mu * r.lambda1_dual / r.dim; }

bool is_random_entry(const std::string& name) { return name.rfind("rand", 0) == 0; }

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, path.string() + ": cannot write file");
  fn(out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, path.string() + ": write failed");
}

}  // namespace

void validate(const RunConfig& c) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (!(c.mass_tol > 0.0 && c.mass_tol <= 0.1)) bad("mass tolerance must lie in (0, 0.1]");
  if (!(c.eta_tol > 0.0 && c.eta_tol <= 0.01)) bad("eta tolerance must lie in (0, 0.01]");
  if (c.enum_budget == 0) bad("enumeration budget must be positive");
  if (c.shifts < 1) bad("shift count must be positive");
  if (!(c.alpha_max >= 1.0) || !std::isfinite(c.alpha_max)) bad("alpha_max must be >= 1");
  if (c.workers < 1) bad("worker count must be positive");
  for (double f : c.identity_s)
    if (!(f > 0.0) || !std::isfinite(f)) bad("s multiples must be positive");
  for (double f : c.bound_s)
    if (!(f > 0.0) || !std::isfinite(f)) bad("s multiples must be positive");
}

std::uint64_t lattice_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;  // splitmix64 finaliser
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RunResult verify_corpus(const Corpus& corpus, const RunConfig& config) {
  validate(config);
  if (corpus.entries.empty()) throw Error(ErrorCode::kInvalidArgument, "empty corpus");
  const size_t count = corpus.entries.size();
  std::vector<std::optional<LatticeVerification>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> next{0};

  auto work = [&] {
    for (size_t i = next++; i < count; i = next++) {
      const CorpusEntry& entry = corpus.entries[i];
      try {
        CheckConfig cc;
        cc.report.mass_tol = config.mass_tol;
        cc.report.eta_tol = config.eta_tol;
        cc.report.alpha_max = config.alpha_max;
        cc.report.enum_options.node_budget = config.enum_budget;
        cc.report.search.seed = lattice_seed(config.seed, entry.name);
        cc.sandwich.shifts = config.shifts;
        cc.sandwich.seed = lattice_seed(config.seed ^ 0x5a5a5a5a5a5a5a5aULL, entry.name);
        cc.identity_s = config.identity_s;
        cc.bound_s = config.bound_s;
        slots[i] = verify_lattice(entry.lattice, entry.name, entry.known, cc);
      } catch (const Error& e) {
        errors[i] = std::make_exception_ptr(Error(e.code(), entry.source + " (" + entry.name + "): " + e.what()));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(config.workers, static_cast<int>(count));
  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  RunResult result;
  for (auto& slot : slots) {
    for (const VerificationRecord& r : slot->records) {
      if (r.status == CheckStatus::kPass) ++result.passed;
      if (r.status == CheckStatus::kFail) ++result.failed;
      if (r.status == CheckStatus::kReportOnly) ++result.report_only;
    }
    result.lattices.push_back(std::move(*slot));
  }
  return result;
}

void write_report_csv(std::ostream& out, const RunResult& result) {
  out << "lattice_name,check_id,status,lhs,rhs,margin,details\n";
  for (const auto& lv : result.lattices) {
    for (const VerificationRecord& r : lv.records) {
      out << csv_field(r.lattice_name) << ',' << check_id_name(r.check_id) << ',' << check_status_name(r.status) << ','
          << num(r.lhs) << ',' << num(r.rhs) << ',' << num(r.margin) << ',' << csv_field(r.details) << '\n';
    }
  }
}

void write_invariants_csv(std::ostream& out, const RunResult& result) {
  out << "name,dim,lambda1,lambda1_dual,mu_lo,mu_hi,mu_exact,eta,beta_hat,alpha_max,eta_lo,eta_hi,kissing,"
         "mu_eta_ratio\n";
  for (const auto& lv : result.lattices) {
    const InvariantReport& r = lv.analysis.report;
    out << csv_field(r.name) << ',' << r.dim << ',' << num(r.lambda1) << ',' << num(r.lambda1_dual) << ','
        << num(r.mu_lo) << ',' << num(r.mu_hi) << ',' << (r.mu_exact ? num(*r.mu_exact) : "") << ',' << num(r.eta)
        << ',' << num(r.beta_hat) << ',' << num(r.alpha_max) << ',' << num(r.eta_lo) << ',' << num(r.eta_hi) << ','
        << r.kissing << ',' << num(r.mu_eta_ratio()) << '\n';
  }
}

void write_summary_md(std::ostream& out, const Corpus& corpus, const RunResult& result, const RunConfig& config) {
  out << "# latkit verification summary\n\n";
  out << "- lattices: " << result.lattices.size() << "\n";
  out << "- seed: " << config.seed << "\n";
  out << "- mass tolerance: " << num(config.mass_tol) << ", eta tolerance: " << num(config.eta_tol)
      << ", alpha_max: " << num(config.alpha_max) << ", shifts per lattice: " << config.shifts << "\n";
  out << "- checks: " << result.passed << " pass, " << result.failed << " fail, " << result.report_only
      << " report-only\n";
  out << "- exit code: " << result.exit_code() << "\n\n";

  out << "## Invariants\n\n";
  out << "| lattice | n | lambda1 | lambda1(L*) | mu interval | eta | beta_hat | mu_lo lambda1(L*)/n |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& lv : result.lattices) {
    const InvariantReport& r = lv.analysis.report;
    out << "| " << r.name << " | " << r.dim << " | " << num(r.lambda1) << " | " << num(r.lambda1_dual) << " | ["
        << num(r.mu_lo) << ", " << num(r.mu_hi) << "] | " << num(r.eta) << " | " << num(r.beta_hat) << " | "
        << num(normalized(r.mu_lo, r)) << " |\n";
  }

  out << "\n## Failed checks\n\n";
  if (result.failed == 0) out << "None.\n";
  for (const auto& lv : result.lattices)
    for (const VerificationRecord& r : lv.records)
      if (r.status == CheckStatus::kFail)
        out << "- " << r.lattice_name << " " << check_id_name(r.check_id) << ": lhs " << num(r.lhs) << ", rhs "
            << num(r.rhs) << " (" << r.details << ")\n";

  out << "\n## Tail radius\n\n";
  out << "Least grid radius r* with rho_{s,r}(L - t) <= rho_s(L - t)/3 at s = eta and t = the deep hole found, "
         "normalised as r*/(sqrt(n) s). The asymptotic constant is 1/sqrt(2 pi) = "
      << num(1.0 / std::sqrt(2.0 * std::numbers::pi)) << ".\n\n";
  out << "| lattice | n | r*/(sqrt(n) s) |\n|---|---|---|\n";
  for (const auto& lv : result.lattices) {
    const InvariantReport& r = lv.analysis.report;
    out << "| " << r.name << " | " << r.dim << " | "
        << (lv.tail_r_star_normalized ? num(*lv.tail_r_star_normalized) : "not reached") << " |\n";
  }

  out << "\n## Normalised covering products\n\n";
  out << "mu lambda1(L*)/n against 1/(2 pi e) = " << num(kInv2PiE) << ", " << num(kThmConstant)
      << " and 1/(2 pi) = " << num(kInv2Pi)
      << ". These constants are asymptotic; finite-n values are reported, not asserted. chart.svg plots the same "
         "data.\n\n";
  out << "| lattice | n | lower | upper | above 0.1275 |\n|---|---|---|---|---|\n";
  for (const auto& lv : result.lattices) {
    const InvariantReport& r = lv.analysis.report;
    out << "| " << r.name << " | " << r.dim << " | " << num(normalized(r.mu_lo, r)) << " | "
        << num(normalized(r.mu_hi, r)) << " | " << (normalized(r.mu_lo, r) > kThmConstant ? "yes" : "no") << " |\n";
  }

  out << "\n## Known values\n\n";
  out << "Corpus values are oracles only; they never enter a computation.\n\n";
  out << "| lattice | lambda1 | kissing | mu |\n|---|---|---|---|\n";
  for (size_t i = 0; i < result.lattices.size(); ++i) {
    const KnownValues& k = corpus.entries[i].known;
    const InvariantReport& r = result.lattices[i].analysis.report;
    auto verdict = [](bool ok) { return ok ? "match" : "MISMATCH"; };
    out << "| " << r.name << " | "
        << (k.lambda1 ? verdict(std::abs(*k.lambda1 - r.lambda1) <= 1e-9 * std::max(1.0, *k.lambda1)) : "-")
        << " | " << (k.kissing ? verdict(*k.kissing == r.kissing) : "-") << " | "
        << (k.mu ? (r.mu_exact ? "confirmed" : (r.mu_lo <= *k.mu && *k.mu <= r.mu_hi ? "inside interval" : "MISMATCH"))
                 : "-")
        << " |\n";
  }

  bool any_random = false;
  for (const auto& lv : result.lattices) any_random |= is_random_entry(lv.analysis.report.name);
  if (any_random) {
    out << "\n## Random lattices\n\n";
    out << "Entries named rand* come from a seeded generator (unimodular transforms of Z^n or bounded integer "
           "entries, then LLL). They stand in for Haar-random lattices; comparing them with the random-lattice "
           "value 1/(2 pi e) is heuristic.\n";
  }
}

void write_chart_svg(std::ostream& out, const RunResult& result) {
  const double width = 720, height = 440, left = 70, right = 150, top = 40, bottom = 50;
  int max_n = 1;
  double y_max = 0.2;
  for (const auto& lv : result.lattices) {
    const InvariantReport& r = lv.analysis.report;
    max_n = std::max(max_n, r.dim);
    y_max = std::max(y_max, normalized(r.mu_hi, r));
  }
  y_max = std::ceil(y_max * 10.0 + 0.5) / 10.0;
  const double pw = width - left - right, ph = height - top - bottom;
  auto X = [&](double n) { return left + (n - 0.5) / max_n * pw; };
  auto Y = [&](double v) { return top + ph * (1.0 - v / y_max); };
  auto f = [](double v) { return format_number(v, 6); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(width) << "\" height=\"" << f(height)
      << "\" viewBox=\"0 0 " << f(width) << ' ' << f(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << f(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << "normalised covering product mu lambda1(L*)/n</text>\n";
  out << "<line x1=\"" << f(left) << "\" y1=\"" << f(top + ph) << "\" x2=\"" << f(left + pw) << "\" y2=\""
      << f(top + ph) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << f(left) << "\" y1=\"" << f(top) << "\" x2=\"" << f(left) << "\" y2=\"" << f(top + ph)
      << "\" stroke=\"black\"/>\n";
  for (int n = 1; n <= max_n; ++n)
    out << "<text x=\"" << f(X(n)) << "\" y=\"" << f(top + ph + 18) << "\" text-anchor=\"middle\">" << n
        << "</text>\n";
  out << "<text x=\"" << f(left + pw / 2) << "\" y=\"" << f(height - 10) << "\" text-anchor=\"middle\">n</text>\n";
  for (int k = 0; k * 0.1 <= y_max + 1e-9; ++k) {
    const double v = k * 0.1;
    out << "<text x=\"" << f(left - 8) << "\" y=\"" << f(Y(v) + 4) << "\" text-anchor=\"end\">" << format_number(v, 2)
        << "</text>\n";
  }

  const struct {
    double value;
    const char* label;
    const char* color;
  } refs[] = {{kInv2PiE, "1/(2 pi e)", "#2a7"}, {kThmConstant, "0.1275", "#c33"}, {kInv2Pi, "1/(2 pi)", "#36c"}};
  for (const auto& ref : refs) {
    out << "<line x1=\"" << f(left) << "\" y1=\"" << f(Y(ref.value)) << "\" x2=\"" << f(left + pw) << "\" y2=\""
        << f(Y(ref.value)) << "\" stroke=\"" << ref.color << "\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"" << f(left + pw + 6) << "\" y=\"" << f(Y(ref.value) + 4) << "\" fill=\"" << ref.color << "\">"
        << ref.label << " = " << format_number(ref.value, 4) << "</text>\n";
  }

  for (const auto& lv : result.lattices) {
    const InvariantReport& r = lv.analysis.report;
    const double lo = normalized(r.mu_lo, r), hi = normalized(r.mu_hi, r);
    out << "<g><title>" << r.name << ": [" << num(lo) << ", " << num(hi) << "]</title>";
    out << "<line x1=\"" << f(X(r.dim)) << "\" y1=\"" << f(Y(hi)) << "\" x2=\"" << f(X(r.dim)) << "\" y2=\""
        << f(Y(lo)) << "\" stroke=\"#555\"/>";
    out << "<circle cx=\"" << f(X(r.dim)) << "\" cy=\"" << f(Y(lo)) << "\" r=\"3.5\" fill=\""
        << (is_random_entry(r.name) ? "#999" : "black") << "\"/></g>\n";
  }
  out << "</svg>\n";
}

int run_verify(const Corpus& corpus, const RunConfig& config, RunResult* result_out) {
  RunResult result = verify_corpus(corpus, config);
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, config.out_dir.string() + ": " + ec.message());
  write_file(config.out_dir / "report.csv", [&](std::ostream& o) { write_report_csv(o, result); });
  write_file(config.out_dir / "invariants.csv", [&](std::ostream& o) { write_invariants_csv(o, result); });
  write_file(config.out_dir / "summary.md", [&](std::ostream& o) { write_summary_md(o, corpus, result, config); });
  write_file(config.out_dir / "chart.svg", [&](std::ostream& o) { write_chart_svg(o, result); });
  const int code = result.exit_code();
  if (result_out) *result_out = std::move(result);
  return code;
}

}  // namespace latkit
