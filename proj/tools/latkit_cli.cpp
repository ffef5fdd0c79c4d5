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

// latkit command-line front end. Talks to the library only through latkit.h.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latkit/latkit.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;

struct Failure {
  std::string message;
};

void check(latkit_status status) {
  if (status != LATKIT_OK) throw Failure{latkit_last_error()};
}

struct LatticeDeleter {
  void operator()(latkit_lattice* l) const { latkit_lattice_free(l); }
};
using LatticePtr = std::unique_ptr<latkit_lattice, LatticeDeleter>;

struct Options {
  std::string basis;
  std::string corpus;
  std::string out;
  std::string t;
  std::string style = "unimodular_of_Zn";
  uint64_t seed = 1;
  double s = 1.0;
  double r = 0.0;
  int dim = 3;
  latkit_config config{};
};

LatticePtr load(const Options& o) {
  if (o.basis.empty()) throw Failure{"--basis is required"};
  latkit_lattice* l = nullptr;
  check(latkit_lattice_load(o.basis.c_str(), &l));
  return LatticePtr(l);
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> v;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream field(item);
    field.imbue(std::locale::classic());
    double x = 0;
    if (!(field >> x) || !(field >> std::ws).eof()) throw Failure{"--t: cannot parse '" + item + "'"};
    v.push_back(x);
  }
  return v;
}

json num(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

json header(const latkit_lattice* l) {
  json j;
  j["name"] = latkit_lattice_name(l);
  j["dim"] = latkit_lattice_dim(l);
  return j;
}

json mass_json(const latkit_mass& m) {
  json j;
  j["value"] = m.value;
  j["lo"] = m.lo;
  j["hi"] = m.hi;
  j["mid"] = m.mid;
  j["tail_bound"] = m.tail_bound;
  j["rounding"] = m.rounding;
  j["trunc_radius"] = m.trunc_radius;
  j["points"] = m.points;
  return j;
}

int cmd_lambda1(const Options& o) {
  LatticePtr l = load(o);
  const int n = latkit_lattice_dim(l.get());
  double norm = 0;
  std::vector<long long> coeffs(n);
  std::vector<double> vec(n);
  check(latkit_shortest_vector(l.get(), &o.config, &norm, coeffs.data(), vec.data()));
  json j = header(l.get());
  j["lambda1"] = norm;
  j["coeffs"] = coeffs;
  j["vector"] = vec;
  j["exact_basis"] = latkit_lattice_is_exact(l.get()) != 0;
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_eta(const Options& o) {
  LatticePtr l = load(o);
  latkit_smoothing s{};
  check(latkit_smoothing_parameter(l.get(), &o.config, &s));
  json j = header(l.get());
  j["eta"] = s.eta;
  j["eta_lo"] = s.lo;
  j["eta_hi"] = s.hi;
  j["dual_mass_at_lo"] = s.mass_at_lo;
  j["dual_mass_at_hi"] = s.mass_at_hi;
  j["target"] = 1.5;
  j["evaluations"] = s.evaluations;
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_mass(const Options& o) {
  LatticePtr l = load(o);
  std::vector<double> t;
  if (!o.t.empty()) {
    t = parse_vector(o.t);
    if (static_cast<int>(t.size()) != latkit_lattice_dim(l.get()))
      throw Failure{"--t has " + std::to_string(t.size()) + " entries, lattice dimension is " +
                    std::to_string(latkit_lattice_dim(l.get()))};
  }
  latkit_mass m{};
  check(latkit_gaussian_mass(l.get(), &o.config, o.s, t.empty() ? nullptr : t.data(), o.r, &m));
  json j = header(l.get());
  j["s"] = o.s;
  j["r"] = o.r;
  j["t"] = t;
  j["mass"] = mass_json(m);
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_mu(const Options& o) {
  LatticePtr l = load(o);
  latkit_covering c{};
  std::vector<double> hole(latkit_lattice_dim(l.get()));
  check(latkit_covering_radius(l.get(), &o.config, &c, hole.data()));
  json j = header(l.get());
  j["mu_lo"] = c.mu_lo;
  j["mu_hi"] = c.mu_hi;
  j["gs_bound"] = c.gs_bound;
  j["eta_bound"] = num(c.eta_bound);
  j["deep_hole"] = hole;
  j["starts"] = c.starts;
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_beta(const Options& o) {
  LatticePtr l = load(o);
  latkit_beta* raw = nullptr;
  check(latkit_beta_estimate(l.get(), &o.config, o.config.alpha_max, &raw));
  std::unique_ptr<latkit_beta, void (*)(latkit_beta*)> b(raw, latkit_beta_free);
  json j = header(l.get());
  j["beta_hat"] = num(latkit_beta_value(b.get()));
  j["alpha_at_max"] = latkit_beta_alpha_at_max(b.get());
  j["alpha_max"] = o.config.alpha_max;
  json samples = json::array();
  for (size_t i = 0; i < latkit_beta_sample_count(b.get()); ++i) {
    double alpha = 0;
    uint64_t count = 0;
    latkit_beta_sample(b.get(), i, &alpha, &count);
    samples.push_back({{"alpha", alpha}, {"count", count}});
  }
  j["samples"] = samples;
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o) {
  if (o.corpus.empty()) throw Failure{"--corpus is required"};
  const std::string out = o.out.empty() ? "latkit-out" : o.out;
  int code = 0;
  latkit_verify_summary s{};
  check(latkit_run_verify(o.corpus.c_str(), out.c_str(), &o.config, &code, &s));
  json j;
  j["out"] = out;
  j["lattices"] = s.lattices;
  j["passed"] = s.passed;
  j["failed"] = s.failed;
  j["report_only"] = s.report_only;
  j["exit_code"] = code;
  std::cout << j.dump() << "\n";
  return code;
}

int cmd_gen(const Options& o) {
  latkit_lattice* raw = nullptr;
  check(latkit_generate_random(o.dim, o.seed, o.style.c_str(), &raw));
  LatticePtr l(raw);
  char* text = nullptr;
  check(latkit_lattice_to_json(l.get(), &text));
  std::string body(text);
  latkit_string_free(text);
  if (o.out.empty()) {
    std::cout << body;
    return kExitOk;
  }
  const std::string path = o.out + "/" + latkit_lattice_name(l.get()) + ".json";
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw Failure{path + ": cannot open for writing"};
  const bool ok = std::fwrite(body.data(), 1, body.size(), f) == body.size();
  if (std::fclose(f) != 0 || !ok) throw Failure{path + ": write failed"};
  json j = header(l.get());
  j["path"] = path;
  j["seed"] = o.seed;
  j["style"] = o.style;
  std::cout << j.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  latkit_config_default(&o.config);

  CLI::App app{"latkit: lattice invariants and transference checks"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "latkit 0.1.0");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--mass-tol", o.config.mass_tol, "relative tolerance of Gaussian masses")
        ->check(CLI::PositiveNumber);
    sub->add_option("--eta-tol", o.config.eta_tol, "relative width of the smoothing bracket")
        ->check(CLI::PositiveNumber);
    sub->add_option("--enum-budget", o.config.enum_budget, "enumeration node budget")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "random seed");
  };
  auto with_basis = [&](CLI::App* sub) {
    sub->add_option("--basis", o.basis, "lattice JSON file")->required();
    common(sub);
  };

  struct Cmd {
    CLI::App* app;
    int (*run)(const Options&);
  };
  std::vector<Cmd> cmds;

  CLI::App* lambda1 = app.add_subcommand("lambda1", "shortest vector length");
  with_basis(lambda1);
  cmds.push_back({lambda1, cmd_lambda1});

  CLI::App* eta = app.add_subcommand("eta", "smoothing parameter bracket");
  with_basis(eta);
  cmds.push_back({eta, cmd_eta});

  CLI::App* mass = app.add_subcommand("mass", "certified Gaussian mass rho_{s,r}(L - t)");
  with_basis(mass);
  mass->add_option("--s", o.s, "Gaussian width")->check(CLI::PositiveNumber);
  mass->add_option("--r", o.r, "exclude points with norm below r")->check(CLI::NonNegativeNumber);
  mass->add_option("--t", o.t, "shift as comma separated coordinates");
  cmds.push_back({mass, cmd_mass});

  CLI::App* mu = app.add_subcommand("mu", "covering radius interval");
  with_basis(mu);
  cmds.push_back({mu, cmd_mu});

  CLI::App* beta = app.add_subcommand("beta", "empirical point-count exponent");
  with_basis(beta);
  beta->add_option("--alpha-max", o.config.alpha_max, "largest alpha, in units of lambda1")
      ->check(CLI::Range(1.0, 1e6));
  cmds.push_back({beta, cmd_beta});

  CLI::App* verify = app.add_subcommand("verify", "run every check over a corpus directory");
  verify->add_option("--corpus", o.corpus, "directory of lattice JSON files")->required();
  verify->add_option("--out", o.out, "output directory (default latkit-out)");
  verify->add_option("--alpha-max", o.config.alpha_max, "largest alpha of the beta estimate")
      ->check(CLI::Range(1.0, 1e6));
  verify->add_option("--workers", o.config.workers, "worker threads")->check(CLI::Range(1, 256));
  common(verify);
  cmds.push_back({verify, cmd_verify});

  CLI::App* gen = app.add_subcommand("gen", "generate a seeded random lattice");
  gen->add_option("--dim", o.dim, "dimension")->check(CLI::Range(1, 64));
  gen->add_option("--style", o.style, "unimodular_of_Zn or integer_entries");
  gen->add_option("--out", o.out, "write <name>.json into this directory instead of stdout");
  gen->add_option("--seed", o.seed, "random seed");
  cmds.push_back({gen, cmd_gen});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  o.config.seed = o.seed;

  try {
    for (const Cmd& c : cmds)
      if (c.app->parsed()) return c.run(o);
  } catch (const Failure& f) {
    std::cerr << "latkit: " << f.message << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "latkit: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
