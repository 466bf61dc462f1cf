#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bhs {

using Complex = std::complex<double>;

/// Carrier for one phase-space amplitude (alpha or alpha^+).
using ComplexAmplitude = Complex;

inline constexpr std::size_t kWells = 3;

/// Thrown for invalid physical or numerical parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when more than the tolerated fraction of trajectories diverge.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a Reid conditioning variance is (numerically) zero.
class DegenerateVarianceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialState { kFock, kCoherent };

std::string_view to_string(InitialState s);
InitialState parse_initial_state(std::string_view s);

/// Physical and numerical parameters of a three-well run.
///
/// Wells 1 and 3 always start in vacuum; well 2 holds `n_atoms` atoms in a
/// number state or a coherent state with that mean. Time is measured in the
/// same units as 1/J.
struct SystemConfig {
  double J = 0.0;
  double chi = 0.0;
  double n_atoms = 0.0;
  InitialState initial_state = InitialState::kFock;
  double t_max = 0.0;
  double dt = 1e-3;
  double grid_dt = 1e-2;  // output spacing
  std::uint64_t n_traj = 100000;
  std::uint64_t seed = 0;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  /// Number of output grid points in [0, t_max].
  std::size_t grid_size() const;
  double grid_time(std::size_t k) const { return static_cast<double>(k) * grid_dt; }
};

/// Normal-mode frequency of the symmetric three-well chain.
struct OmegaRate {
  double omega;

  static OmegaRate from_tunneling(double J) { return OmegaRate{std::sqrt(2.0) * J}; }
  double period() const;  // 2 pi / omega, infinite for omega = 0
};

/// Second-order statistics of the initial state (well 2 only is occupied).
struct InitialMoments {
  double mean_n = 0.0;
  double var_n = 0.0;
  // V(X1), V(Y1), V(X2), V(Y2), V(X3), V(Y3)
  std::array<double, 6> quad_vars{1, 1, 1, 1, 1, 1};

  double var_x(std::size_t well) const { return quad_vars[2 * well]; }
  double var_y(std::size_t well) const { return quad_vars[2 * well + 1]; }
};

InitialMoments initial_moments(const SystemConfig& config);

}  // namespace bhs
