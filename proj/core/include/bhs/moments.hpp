#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bhs/model.hpp"

namespace bhs {

/// Normally ordered operator moments of the three wells at one instant.
///
/// Wells are indexed 0, 1, 2 (the physical wells 1, 2, 3). All entries are
/// complex because positive-P averages are only Hermitian in expectation.
/// The flat storage lets ensembles accumulate every moment in one loop.
class Moments {
 public:
  static constexpr std::size_t kSize = 42;

  Complex& a(std::size_t j) { return v_[j]; }
  Complex a(std::size_t j) const { return v_[j]; }
  Complex& a_dag(std::size_t j) { return v_[3 + j]; }
  Complex a_dag(std::size_t j) const { return v_[3 + j]; }

  /// <a_i^dag a_j>
  Complex& adag_a(std::size_t i, std::size_t j) { return v_[6 + 3 * i + j]; }
  Complex adag_a(std::size_t i, std::size_t j) const { return v_[6 + 3 * i + j]; }
  /// <a_i a_j>
  Complex& a_a(std::size_t i, std::size_t j) { return v_[15 + 3 * i + j]; }
  Complex a_a(std::size_t i, std::size_t j) const { return v_[15 + 3 * i + j]; }
  /// <a_i^dag a_j^dag>
  Complex& adag_adag(std::size_t i, std::size_t j) { return v_[24 + 3 * i + j]; }
  Complex adag_adag(std::size_t i, std::size_t j) const { return v_[24 + 3 * i + j]; }
  /// i != j: <a_i^dag a_i a_j^dag a_j>; i == j: <a_j^dag^2 a_j^2>
  Complex& nn(std::size_t i, std::size_t j) { return v_[33 + 3 * i + j]; }
  Complex nn(std::size_t i, std::size_t j) const { return v_[33 + 3 * i + j]; }

  Complex& operator[](std::size_t k) { return v_[k]; }
  Complex operator[](std::size_t k) const { return v_[k]; }

  Moments& operator+=(const Moments& o) {
    for (std::size_t k = 0; k < kSize; ++k) v_[k] += o.v_[k];
    return *this;
  }
  Moments& operator-=(const Moments& o) {
    for (std::size_t k = 0; k < kSize; ++k) v_[k] -= o.v_[k];
    return *this;
  }
  Moments& operator*=(double s) {
    for (auto& x : v_) x *= s;
    return *this;
  }
  friend Moments operator+(Moments l, const Moments& r) { return l += r; }
  friend Moments operator-(Moments l, const Moments& r) { return l -= r; }
  friend Moments operator*(Moments l, double s) { return l *= s; }

 private:
  std::array<Complex, kSize> v_{};
};

/// Ensemble (or exact) moments at one grid time.
///
/// `replicas` holds independent batch means with their trajectory counts;
/// derived quantities get first-order standard errors from their spread.
/// Exact sources leave `replicas` empty and all errors zero.
struct MomentSet {
  double t = 0.0;
  Moments mean;
  Moments se;  // real part: SE of Re, imaginary part: SE of Im
  std::vector<Moments> replicas;
  std::vector<std::uint64_t> replica_counts;
  std::uint64_t n_traj_used = 0;
  std::uint64_t n_diverged = 0;

  bool exact() const { return replicas.size() < 2; }
};

/// Sets `se` from the replica spread.
void update_standard_errors(MomentSet& m);

/// Standard error of a mean estimated from batch means `values` with
/// trajectory counts `counts` (weighted batch-means estimator).
double replica_standard_error(std::span<const double> values,
                              std::span<const std::uint64_t> counts, double mean);

}  // namespace bhs
