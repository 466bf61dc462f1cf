#pragma once

#include <array>
#include <cstddef>
#include <unordered_map>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "bhs/columns.hpp"
#include "bhs/model.hpp"
#include "bhs/moments.hpp"

// Exact evolution in the fixed-total-number sector of the three-well model,
// plus an exact two-mode beamsplitter on a truncated number basis.

namespace bhs::oracle {

using Occupation = std::array<int, 3>;
using StateVector = Eigen::VectorXcd;

class FockBasis {
 public:
  explicit FockBasis(int n_total);

  int total() const { return n_; }
  std::size_t dim() const { return states_.size(); }
  const Occupation& operator[](std::size_t k) const { return states_[k]; }
  /// Throws std::out_of_range for occupations outside the sector.
  std::size_t index(const Occupation& occ) const;

 private:
  static std::uint64_t key(const Occupation& occ);

  int n_;
  std::vector<Occupation> states_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

struct FockState {
  const FockBasis* basis;
  StateVector amp;

  static FockState basis_state(const FockBasis& basis, const Occupation& occ);
  double norm() const { return amp.norm(); }
};

/// H psi with hbar = 1: chi sum_j n_j (n_j - 1) plus hopping on (1,2), (2,3).
StateVector apply_hamiltonian(const FockState& psi, double J, double chi);
/// d psi / dt = -i H psi
StateVector time_derivative(const FockState& psi, double J, double chi);

Eigen::MatrixXcd hamiltonian_matrix(const FockBasis& basis, double J, double chi);

enum class Method { kAuto, kDense, kOde };

/// Time propagator for fixed (J, chi). Dense eigendecomposition for small
/// sectors, adaptive Dormand-Prince integration above `kDenseLimit`.
class Propagator {
 public:
  static constexpr std::size_t kDenseLimit = 2000;

  Propagator(const FockBasis& basis, double J, double chi, Method method = Method::kAuto);

  FockState evolve(const FockState& psi0, double t) const;
  Method method() const { return method_; }

 private:
  const FockBasis* basis_;
  double J_, chi_;
  Method method_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd eigvecs_;
};

FockState evolve(const FockState& psi0, double t, double J, double chi);

/// Exact moments; first moments and <a_i a_j> vanish in a fixed-N sector.
MomentSet moments(const FockState& psi, double t = 0.0);

/// Witness table from exact evolution of |0, N, 0>.
CriteriaReport report(const SystemConfig& config);

// --- beamsplitter --------------------------------------------------------

struct FockInput {
  int n;
};
struct CoherentInput {
  Complex beta;
};
struct SqueezedInput {
  double r;  // V(X) = exp(-r), V(Y) = exp(r)
};
using BsInput = std::variant<FockInput, CoherentInput, SqueezedInput>;

struct BsExactResult {
  Moments moments;  // modes 0 = a_out, 1 = b_out, 2 = vacuum
  double tail_mass = 0.0;
  int cutoff = 0;
};

/// Input `a` mixed with vacuum `b` on a beamsplitter of reflectivity eta,
/// a_out = sqrt(eta) a + sqrt(1-eta) b, b_out = -sqrt(1-eta) a + sqrt(eta) b.
BsExactResult bs_exact(const BsInput& input, double eta = 0.5,
                       double max_tail = 1e-10);

/// Number-basis amplitudes of the input state, truncated once the
/// neglected probability drops below `max_tail`.
std::vector<Complex> input_amplitudes(const BsInput& input, double max_tail,
                                      double* tail_mass = nullptr);

}  // namespace bhs::oracle
