#include "bhs/ppsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bhs::ppsim {
namespace {

constexpr Complex kI{0.0, 1.0};

bool out_of_bounds(const TrajectoryState& s, double bound) {
  const double bound2 = bound * bound;
  for (std::size_t j = 0; j < 3; ++j) {
    const double na = std::norm(s.alpha[j]);
    const double np = std::norm(s.alpha_plus[j]);
    // negated comparison so NaN is caught as well
    if (!(na <= bound2) || !(np <= bound2)) return true;
  }
  return false;
}

/// Neumaier-compensated running sums over a flat array of doubles.
class CompensatedSums {
 public:
  explicit CompensatedSums(std::size_t n) : sum_(n, 0.0), comp_(n, 0.0) {}

  void add(std::size_t k, double x) {
    const double s = sum_[k];
    const double t = s + x;
    comp_[k] += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    sum_[k] = t;
  }
  double total(std::size_t k) const { return sum_[k] + comp_[k]; }

 private:
  std::vector<double> sum_;
  std::vector<double> comp_;
};

struct BatchResult {
  std::vector<Moments> sums;  // per grid point, compensated totals
  std::uint64_t used = 0;
  std::uint64_t diverged = 0;
};

}  // namespace

Engine trajectory_engine(std::uint64_t seed, std::uint64_t k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  return Engine(seq);
}

NoiseVector draw_noise(Engine& rng) {
  boost::random::normal_distribution<double> normal;
  NoiseVector n;
  for (auto& e : n.eta) e = normal(rng);
  return n;
}

TrajectoryState sample_initial(const SystemConfig& config, Engine& rng) {
  TrajectoryState s;
  const double n = config.n_atoms;
  if (config.initial_state == InitialState::kCoherent) {
    s.alpha[1] = s.alpha_plus[1] = std::sqrt(n);
    return s;
  }
  if (n == 0.0) return s;  // vacuum is a delta at the origin

  // Q function of |N>: |gamma|^2 ~ Gamma(N + 1), uniform phase.
  boost::random::gamma_distribution<double> radial(n + 1.0);
  boost::random::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  boost::random::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const Complex gamma = std::polar(std::sqrt(radial(rng)), phase(rng));
  const double dre = normal(rng);
  const double dim = normal(rng);
  const Complex delta(dre, dim);
  s.alpha[1] = gamma + delta;
  s.alpha_plus[1] = std::conj(gamma - delta);
  return s;
}

PhaseVector drift(const TrajectoryState& s, const SystemConfig& config) {
  const auto& a = s.alpha;
  const auto& p = s.alpha_plus;
  const double chi = config.chi, J = config.J;
  const std::array<Complex, 3> hop_a{a[1], a[0] + a[2], a[1]};
  const std::array<Complex, 3> hop_p{p[1], p[0] + p[2], p[1]};
  PhaseVector d;
  for (std::size_t j = 0; j < 3; ++j) {
    const Complex n = p[j] * a[j];
    d[2 * j] = -2.0 * kI * chi * n * a[j] - kI * J * hop_a[j];
    d[2 * j + 1] = 2.0 * kI * chi * n * p[j] + kI * J * hop_p[j];
  }
  return d;
}

PhaseVector noise_amplitudes(const TrajectoryState& s, const SystemConfig& config) {
  // principal roots of -2i chi and 2i chi
  const Complex cm = std::sqrt(Complex(0.0, -2.0 * config.chi));
  const Complex cp = std::sqrt(Complex(0.0, 2.0 * config.chi));
  PhaseVector b;
  for (std::size_t j = 0; j < 3; ++j) {
    b[2 * j] = cm * s.alpha[j];
    b[2 * j + 1] = cp * s.alpha_plus[j];
  }
  return b;
}

double divergence_bound(const SystemConfig& config) {
  return 1e6 * std::sqrt(std::max(config.n_atoms, 1.0));
}

TrajectoryState step(const TrajectoryState& s, double dt, const NoiseVector& noise,
                     const SystemConfig& config) {
  const PhaseVector d = drift(s, config);
  const PhaseVector b = noise_amplitudes(s, config);
  const double sdt = std::sqrt(dt);
  TrajectoryState out = s;
  for (std::size_t j = 0; j < 3; ++j) {
    out.alpha[j] += d[2 * j] * dt + b[2 * j] * (noise.eta[2 * j] * sdt);
    out.alpha_plus[j] += d[2 * j + 1] * dt + b[2 * j + 1] * (noise.eta[2 * j + 1] * sdt);
  }
  out.t = s.t + dt;
  out.diverged = s.diverged || out_of_bounds(out, divergence_bound(config));
  return out;
}

LinearPropagator LinearPropagator::make(double dt, OmegaRate omega) {
  // exp(-i dt K) for the tridiagonal hopping matrix K, via its eigenbasis
  const double J = omega.omega / std::sqrt(2.0);
  Eigen::Matrix3d k = Eigen::Matrix3d::Zero();
  k(0, 1) = k(1, 0) = k(1, 2) = k(2, 1) = J;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(k);
  Eigen::Vector3cd phases;
  for (int i = 0; i < 3; ++i) phases(i) = std::exp(-kI * es.eigenvalues()(i) * dt);
  const Eigen::Matrix3cd v = es.eigenvectors().cast<Complex>();
  const Eigen::Matrix3cd u = v * phases.asDiagonal() * v.adjoint();
  return {u(0, 0), u(0, 2), u(0, 1), u(1, 1)};
}

SplitStepper SplitStepper::make(double dt, const SystemConfig& config) {
  SplitStepper st;
  st.lin = LinearPropagator::make(dt, OmegaRate::from_tunneling(config.J));
  st.dt = dt;
  st.sdt = std::sqrt(dt);
  st.chi = config.chi;
  st.drift_minus = Complex(0.0, -2.0 * config.chi * dt);
  st.noise_minus = std::sqrt(Complex(0.0, -2.0 * config.chi));
  st.noise_plus = std::sqrt(Complex(0.0, 2.0 * config.chi));
  st.bound = divergence_bound(config);
  return st;
}

TrajectoryState SplitStepper::operator()(const TrajectoryState& s, const NoiseVector& noise) const {
  std::array<Complex, 3> a = s.alpha;
  std::array<Complex, 3> p = s.alpha_plus;
  if (chi != 0.0) {
    for (std::size_t j = 0; j < 3; ++j) {
      const Complex n = p[j] * a[j];
      const Complex na = a[j] + drift_minus * n * a[j] + noise_minus * a[j] * (noise.eta[2 * j] * sdt);
      const Complex np =
          p[j] - drift_minus * n * p[j] + noise_plus * p[j] * (noise.eta[2 * j + 1] * sdt);
      a[j] = na;
      p[j] = np;
    }
  }

  TrajectoryState out;
  out.alpha = {lin.diag * a[0] + lin.hop * a[1] + lin.outer * a[2],
               lin.hop * (a[0] + a[2]) + lin.centre * a[1],
               lin.outer * a[0] + lin.hop * a[1] + lin.diag * a[2]};
  // alpha^+ obeys the conjugate linear equations
  const Complex d = std::conj(lin.diag), o = std::conj(lin.outer), h = std::conj(lin.hop),
                c = std::conj(lin.centre);
  out.alpha_plus = {d * p[0] + h * p[1] + o * p[2], h * (p[0] + p[2]) + c * p[1],
                    o * p[0] + h * p[1] + d * p[2]};
  out.t = s.t + dt;
  out.diverged = s.diverged || out_of_bounds(out, bound);
  return out;
}

TrajectoryState split_step(const TrajectoryState& s, double dt, const NoiseVector& noise,
                           const SystemConfig& config) {
  return SplitStepper::make(dt, config)(s, noise);
}

Moments trajectory_sample(const TrajectoryState& s) {
  Moments m;
  std::array<Complex, 3> n;
  for (std::size_t j = 0; j < 3; ++j) {
    m.a(j) = s.alpha[j];
    m.a_dag(j) = s.alpha_plus[j];
    n[j] = s.alpha_plus[j] * s.alpha[j];
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      m.adag_a(i, j) = s.alpha_plus[i] * s.alpha[j];
      m.a_a(i, j) = s.alpha[i] * s.alpha[j];
      m.adag_adag(i, j) = s.alpha_plus[i] * s.alpha_plus[j];
      m.nn(i, j) = n[i] * n[j];
    }
  }
  return m;
}

namespace {

BatchResult run_batch(const SystemConfig& config, const EnsembleOptions& options,
                      std::uint64_t first, std::uint64_t last) {
  const std::size_t n_out = config.grid_size();
  const auto steps_per_out = static_cast<std::size_t>(std::llround(config.grid_dt / config.dt));
  const SplitStepper split = SplitStepper::make(config.dt, config);
  const bool noisy = config.chi != 0.0;

  CompensatedSums acc(n_out * Moments::kSize * 2);
  std::vector<Moments> samples(n_out);
  BatchResult result;

  for (std::uint64_t k = first; k < last; ++k) {
    Engine rng = trajectory_engine(config.seed, k);
    TrajectoryState s = sample_initial(config, rng);
    samples[0] = trajectory_sample(s);
    NoiseVector noise;
    for (std::size_t g = 1; g < n_out && !s.diverged; ++g) {
      for (std::size_t i = 0; i < steps_per_out && !s.diverged; ++i) {
        if (noisy) noise = draw_noise(rng);
        s = options.scheme == Scheme::kSplit ? split(s, noise) : step(s, config.dt, noise, config);
      }
      samples[g] = trajectory_sample(s);
    }
    if (s.diverged) {
      ++result.diverged;
      continue;
    }
    ++result.used;
    for (std::size_t g = 0; g < n_out; ++g) {
      const std::size_t base = g * Moments::kSize * 2;
      for (std::size_t c = 0; c < Moments::kSize; ++c) {
        acc.add(base + 2 * c, samples[g][c].real());
        acc.add(base + 2 * c + 1, samples[g][c].imag());
      }
    }
  }

  result.sums.resize(n_out);
  for (std::size_t g = 0; g < n_out; ++g) {
    const std::size_t base = g * Moments::kSize * 2;
    for (std::size_t c = 0; c < Moments::kSize; ++c) {
      result.sums[g][c] = Complex(acc.total(base + 2 * c), acc.total(base + 2 * c + 1));
    }
  }
  return result;
}

}  // namespace

std::vector<MomentSet> run_ensemble(const SystemConfig& config, const EnsembleOptions& options) {
  config.validate();
  if (options.n_batches == 0) throw ConfigError("n_batches must be >= 1");

  const std::uint64_t n_traj = config.n_traj;
  const auto n_batches =
      static_cast<std::uint64_t>(std::min<std::uint64_t>(options.n_batches, n_traj));
  std::vector<BatchResult> batches(n_batches);

  // Fixed batch partition and per-trajectory streams: the thread count
  // only changes which worker runs a batch, never the arithmetic.
  const auto nb = static_cast<std::int64_t>(n_batches);
#ifdef _OPENMP
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (std::int64_t b = 0; b < nb; ++b) {
    const std::uint64_t first = static_cast<std::uint64_t>(b) * n_traj / n_batches;
    const std::uint64_t last = static_cast<std::uint64_t>(b + 1) * n_traj / n_batches;
    batches[static_cast<std::size_t>(b)] = run_batch(config, options, first, last);
  }

  std::uint64_t used = 0, diverged = 0;
  for (const auto& b : batches) {
    used += b.used;
    diverged += b.diverged;
  }
  if (static_cast<double>(diverged) > options.max_diverged_fraction * static_cast<double>(n_traj) ||
      used == 0) {
    throw DivergenceError(std::to_string(diverged) + " of " + std::to_string(n_traj) +
                          " trajectories diverged");
  }

  const std::size_t n_out = config.grid_size();
  std::vector<MomentSet> out(n_out);
  for (std::size_t g = 0; g < n_out; ++g) {
    MomentSet& ms = out[g];
    ms.t = config.grid_time(g);
    ms.n_traj_used = used;
    ms.n_diverged = diverged;
    CompensatedSums total(Moments::kSize * 2);
    for (const auto& b : batches) {
      if (b.used == 0) continue;
      for (std::size_t c = 0; c < Moments::kSize; ++c) {
        total.add(2 * c, b.sums[g][c].real());
        total.add(2 * c + 1, b.sums[g][c].imag());
      }
      ms.replicas.push_back(b.sums[g] * (1.0 / static_cast<double>(b.used)));
      ms.replica_counts.push_back(b.used);
    }
    for (std::size_t c = 0; c < Moments::kSize; ++c) {
      ms.mean[c] = Complex(total.total(2 * c), total.total(2 * c + 1)) / static_cast<double>(used);
    }
    update_standard_errors(ms);
  }
  return out;
}

}  // namespace bhs::ppsim
