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

#ifndef LATKIT_ENUMERATE_HPP_
#define LATKIT_ENUMERATE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "latkit/lattice.hpp"

namespace latkit {

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

struct EnumOptions {
  std::uint64_t node_budget = kDefaultNodeBudget;
  double lll_delta = 0.99;
};

// A squared radius; `exact` is used for boundary rechecks on exact lattices.
struct SquaredRadius {
  double value = 0.0;
  std::optional<Rational> exact;

  // The exact square of the double r.
  static SquaredRadius of_radius(double r);
};

struct EnumerationRequest {
  Vector center;  // empty = origin
  double radius = 0.0;
  bool exclude_zero_offset = false;
  // Overrides radius^2 in exact boundary rechecks.
  std::optional<Rational> radius_sq_exact;
};

struct LatticePoint {
  IntVector coeffs;  // in the lattice's own basis
  Vector point;
  double dist = 0.0;
  double dist_sq = 0.0;
  std::optional<Rational> dist_sq_exact;
};

// Coefficients in the reduced basis and the squared distance to the center.
using PointVisitor = std::function<void(std::span<const long long> reduced_coeffs, double dist_sq)>;

// A lattice prepared for repeated enumeration: LLL-reduced basis, the
// unimodular transform back to the input basis, and Gram-Schmidt data.
// Immutable after construction.
class Enumerator {
 public:
  explicit Enumerator(const Lattice& lattice, EnumOptions options = {});

  const Lattice& lattice() const { return lattice_; }
  const Lattice& reduced() const { return reduction_.lattice; }
  const IntMatrix& transform() const { return reduction_.transform; }
  const EnumOptions& options() const { return options_; }
  int dim() const { return lattice_.dim(); }
  bool exact() const { return lattice_.exact(); }
  // |b*_i|^2 of the reduced basis.
  const std::vector<double>& gs_norm_sq() const { return norm_sq_; }
  // Integer numerator of |B'x|^2 over scaled_gram_denominator(); empty when
  // the scaled Gram matrix does not fit in 64 bits.
  std::optional<__int128> scaled_norm_sq(std::span<const long long> reduced_coeffs) const;
  const mpz_class& scaled_gram_denominator() const { return gram_scale_; }

  // Visits every y with inner <= |y - center| <= outer exactly once, in
  // Schnorr-Euchner traversal order.  Boundary cases are rechecked in
  // rational arithmetic on exact lattices; float lattices use a 1e-9 slack
  // on both radii.  Throws kBudgetExceeded past options().node_budget.
  void visit(const Vector& center, const SquaredRadius& outer, const std::optional<SquaredRadius>& inner,
             bool exclude_zero_offset, const PointVisitor& visitor) const;

  // Float-only traversal of every y with |y - center|^2 <= radius_sq, plus
  // points within rounding of the boundary; no exact rechecks.
  void visit_unchecked(const Vector& center, double radius_sq, const PointVisitor& visitor) const;

  // Sorted lexicographically by coefficient vector.
  std::vector<LatticePoint> within(const EnumerationRequest& request) const;

  IntVector to_input_coeffs(std::span<const long long> reduced_coeffs) const;
  Vector point(std::span<const long long> input_coeffs) const;
  // Valid only when exact().
  Rational exact_dist_sq(std::span<const long long> reduced_coeffs, const Vector& center) const;
  Rational exact_norm_sq(std::span<const long long> reduced_coeffs) const;
  // Compensated |B'x - center|^2 from the reduced basis coordinates.
  double direct_dist_sq(std::span<const long long> reduced_coeffs, const Vector& center) const;
  // Boundary-aware radius tests for a visited point with float distance d2.
  bool inside_outer(std::span<const long long> x, double d2, const Vector& center, const SquaredRadius& outer) const;
  bool inside_inner(std::span<const long long> x, double d2, const Vector& center, const SquaredRadius& inner) const;
  // Babai nearest-plane rounding; reduced-basis coefficients.
  IntVector nearest_plane(const Vector& target) const;

 private:
  Vector to_reduced_coords(const Vector& center) const;

  Lattice lattice_;
  Reduction reduction_;
  EnumOptions options_;
  std::vector<std::vector<double>> mu_;  // mu_[i][j] = <b_i, b*_j> / |b*_j|^2
  std::vector<double> norm_sq_;          // |b*_i|^2
  Eigen::FullPivLU<Matrix> reduced_lu_;
  // Integral multiple of the reduced exact Gram matrix, when it fits.
  std::optional<IntMatrix> scaled_gram_;
  mpz_class gram_scale_;
};

std::vector<LatticePoint> enumerate_within(const Lattice& lattice, const EnumerationRequest& request,
                                           EnumOptions options = {});

// lambda1 witness; ties go to the lexicographically smallest coefficient
// vector whose first nonzero entry is positive.
LatticePoint shortest_vector(const Enumerator& enumerator);
LatticePoint shortest_vector(const Lattice& lattice, EnumOptions options = {});

// Ties go to the lexicographically smallest coefficient vector.
LatticePoint closest_vector(const Enumerator& enumerator, const Vector& target);
LatticePoint closest_vector(const Lattice& lattice, const Vector& target, EnumOptions options = {});

// dist(target, L) without selecting a particular closest point; compensated
// float distances only, no rational recheck.
double distance_to_lattice(const Enumerator& enumerator, const Vector& target);

// N_alpha: nonzero points of norm at most alpha * lambda1.
std::uint64_t count_points(const Enumerator& enumerator, double alpha, const LatticePoint& shortest);
std::uint64_t count_points(const Lattice& lattice, double alpha, EnumOptions options = {});

// One shell of equal-norm points around the origin.
struct Shell {
  double norm_sq = 0.0;
  std::uint64_t count = 0;
};

// Nonzero shells with norm <= radius, ascending.  Norms are grouped exactly
// on exact lattices and within 1e-9 relative otherwise.
std::vector<Shell> shells_within(const Enumerator& enumerator, const SquaredRadius& radius);

// Test oracle: scans the coefficient box |z_i - c_i| <= r * |row_i(B^-1)| of
// the unreduced basis.  Throws kDimensionTooLarge for n > 6.
std::vector<LatticePoint> brute_force_within(const Lattice& lattice, const EnumerationRequest& request,
                                             std::uint64_t box_budget = kDefaultNodeBudget);

}  // namespace latkit

#endif  // LATKIT_ENUMERATE_HPP_
