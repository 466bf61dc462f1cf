#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include <boost/random/mersenne_twister.hpp>

#include "bhs/model.hpp"
#include "bhs/moments.hpp"

// Positive-P integration of the three-well Bose-Hubbard model.

namespace bhs::ppsim {

/// One trajectory in the doubled phase space.
struct TrajectoryState {
  std::array<ComplexAmplitude, 3> alpha{};
  std::array<ComplexAmplitude, 3> alpha_plus{};
  double t = 0.0;
  bool diverged = false;
};

/// Six independent standard normal draws for one step, ordered
/// (alpha_1, alpha_1^+, alpha_2, alpha_2^+, alpha_3, alpha_3^+).
struct NoiseVector {
  std::array<double, 6> eta{};
};

/// Derivatives or noise factors in the same ordering as NoiseVector.
using PhaseVector = std::array<Complex, 6>;

using Engine = boost::random::mt19937_64;

/// Trajectory k's generator; its stream depends only on (seed, k).
Engine trajectory_engine(std::uint64_t seed, std::uint64_t k);

NoiseVector draw_noise(Engine& rng);

/// Coherent input is a delta at alpha_2 = sqrt(N). Fock input uses the
/// canonical positive-P form: gamma from the Husimi Q function of |N>,
/// alpha = gamma + delta, alpha^+ = conj(gamma - delta), delta complex
/// Gaussian with <|delta|^2> = 1.
TrajectoryState sample_initial(const SystemConfig& config, Engine& rng);

PhaseVector drift(const TrajectoryState& s, const SystemConfig& config);
PhaseVector noise_amplitudes(const TrajectoryState& s, const SystemConfig& config);

/// |component| bound above which a trajectory is flagged as diverged.
double divergence_bound(const SystemConfig& config);

/// Plain Ito Euler-Maruyama step of the full equations.
TrajectoryState step(const TrajectoryState& s, double dt, const NoiseVector& noise,
                     const SystemConfig& config);

/// Exact propagator of the tunnelling term over one step.
struct LinearPropagator {
  Complex diag;    // U11 = U33
  Complex outer;   // U13 = U31
  Complex hop;     // U12 = U21 = U23 = U32
  Complex centre;  // U22

  static LinearPropagator make(double dt, OmegaRate omega);
};

/// Ito Euler-Maruyama step of the on-site collision terms followed by the
/// exact tunnelling propagator (Lie splitting). Exact when chi = 0.
/// Holds the per-run constants so the step itself does no setup work.
struct SplitStepper {
  LinearPropagator lin{};
  double dt = 0.0, sdt = 0.0, chi = 0.0, bound = 0.0;
  Complex drift_minus, noise_minus, noise_plus;  // -2i chi dt, sqrt(-2i chi), sqrt(2i chi)

  static SplitStepper make(double dt, const SystemConfig& config);
  TrajectoryState operator()(const TrajectoryState& s, const NoiseVector& noise) const;
};

/// One split step; convenience wrapper around SplitStepper.
TrajectoryState split_step(const TrajectoryState& s, double dt, const NoiseVector& noise,
                           const SystemConfig& config);

enum class Scheme { kSplit, kEulerMaruyama };

struct EnsembleOptions {
  Scheme scheme = Scheme::kSplit;
  int threads = 0;                 // 0: OpenMP default
  std::size_t n_batches = 100;     // error-estimation replicas
  double max_diverged_fraction = 0.01;
};

/// Single-trajectory moment sample (products of phase-space variables).
Moments trajectory_sample(const TrajectoryState& s);

/// Integrates `config.n_traj` trajectories and returns moments on the
/// output grid. The result is bit-identical for a given config and batch
/// count regardless of thread count. Throws DivergenceError when the
/// diverged fraction exceeds `options.max_diverged_fraction`.
std::vector<MomentSet> run_ensemble(const SystemConfig& config,
                                    const EnsembleOptions& options = {});

}  // namespace bhs::ppsim
