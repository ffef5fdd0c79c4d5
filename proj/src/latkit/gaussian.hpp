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

#ifndef LATKIT_GAUSSIAN_HPP_
#define LATKIT_GAUSSIAN_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "latkit/enumerate.hpp"
#include "latkit/lattice.hpp"

namespace latkit {

inline constexpr double kDefaultMassTol = 1e-9;
inline constexpr double kDefaultEtaTol = 1e-6;

// Discrete Gaussian mass rho_{s,r}(L - t): the sum of exp(-pi |y - t|^2 / s^2)
// over lattice points y with |y - t| >= r.
struct GaussianParams {
  double s = 1.0;
  Vector t;  // empty = origin
  double r = 0.0;
};

// The true mass lies in [lo(), hi()].
struct MassResult {
  double value = 0.0;       // truncated sum over r <= |y - t| <= trunc_radius
  double tail_bound = 0.0;  // certified bound on the mass beyond trunc_radius
  double trunc_radius = 0.0;
  double rounding = 0.0;    // floating-point error bound on value
  std::uint64_t points = 0;

  double lo() const { return value > rounding ? value - rounding : 0.0; }
  double hi() const { return value + tail_bound + rounding; }
  double mid() const { return value + 0.5 * tail_bound; }
};

// Bound on rho_{s, u sqrt(n) s}(L - t) / rho_s(L):
// (sqrt(2 pi e) u exp(-pi u^2))^n, doubled for nonzero shifts.  Infinite for
// u <= 1/sqrt(2 pi), where the bound does not apply.
double tail_certificate(int n, double u, bool shifted);

// Sums over the ball of radius R = u sqrt(n) s, with u the first point on the
// grid 0.5, 0.75, ... whose tail certificate gives
// tail_bound <= rel_tol * max(value, 1).  R does not depend on r.  For shifted
// or annular masses the certificate needs rho_s(L): pass the certified
// r = 0, t = 0 result at the same s as `unshifted`, or it is computed here.
MassResult gaussian_mass(const Enumerator& enumerator, const GaussianParams& params, double rel_tol = kDefaultMassTol,
                         const MassResult* unshifted = nullptr);
MassResult gaussian_mass(const Lattice& lattice, const GaussianParams& params, double rel_tol = kDefaultMassTol,
                         EnumOptions options = {});

// rho_{s,r}(L - t) for every r in `radii` from a single enumeration.  Values
// are nonincreasing in r by construction when radii are ascending.
std::vector<MassResult> gaussian_mass_profile(const Enumerator& enumerator, double s, const Vector& t,
                                              std::span<const double> radii, double rel_tol = kDefaultMassTol);

struct SmoothingResult {
  double eta = 0.0;
  double lo = 0.0;  // rho_{1/lo}(L*) > 3/2, certified
  double hi = 0.0;  // rho_{1/hi}(L*) < 3/2, certified
  MassResult mass_at_eta;
  MassResult mass_at_lo;
  MassResult mass_at_hi;
  int evaluations = 0;
};

inline constexpr double kSmoothingMass = 1.5;

// eta(L): the parameter with rho_{1/eta}(L*) = 3/2, found by bisection on
// certified masses of the dual.  `dual_enumerator` must be prepared on L*.
SmoothingResult smoothing_parameter_from_dual(const Enumerator& dual_enumerator, double eta_tol = kDefaultEtaTol,
                                              double mass_tol = kDefaultMassTol);
SmoothingResult smoothing_parameter(const Lattice& lattice, double eta_tol = kDefaultEtaTol,
                                    double mass_tol = kDefaultMassTol, EnumOptions options = {});

// |rho_s(L) - s^n det(L)^-1 rho_{1/s}(L*)| / rho_s(L), from certified midpoints.
double poisson_residual(const Lattice& lattice, double s, double mass_tol = kDefaultMassTol, EnumOptions options = {});

}  // namespace latkit

#endif  // LATKIT_GAUSSIAN_HPP_
