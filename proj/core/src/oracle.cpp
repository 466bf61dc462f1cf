#include "bhs/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <boost/numeric/odeint.hpp>

#include "bhs/criteria.hpp"

namespace bhs::oracle {
namespace {

constexpr Complex kI{0.0, 1.0};

// (i, j) pairs of a_i^dag a_j hopping terms
constexpr std::array<std::array<std::size_t, 2>, 4> kHops{{{0, 1}, {1, 0}, {1, 2}, {2, 1}}};

double diagonal_energy(const Occupation& occ, double chi) {
  double e = 0.0;
  for (int n : occ) e += static_cast<double>(n) * (n - 1);
  return chi * e;
}

/// Applies a_i^dag a_j to basis element `occ`; returns false if it vanishes.
bool transfer(Occupation occ, std::size_t i, std::size_t j, Occupation& target, double& amp) {
  if (occ[j] == 0) return false;
  amp = std::sqrt(static_cast<double>(occ[j]) * (occ[i] + (i == j ? 0 : 1)));
  if (i != j) {
    occ[j] -= 1;
    occ[i] += 1;
  }
  target = occ;
  return true;
}

Eigen::SparseMatrix<double> sparse_hamiltonian(const FockBasis& basis, double J, double chi) {
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    entries.emplace_back(k, k, diagonal_energy(basis[k], chi));
    for (auto [i, j] : kHops) {
      Occupation target;
      double amp;
      if (transfer(basis[k], i, j, target, amp)) {
        entries.emplace_back(basis.index(target), k, J * amp);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(basis.dim());
  Eigen::SparseMatrix<double> h(n, n);
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

}  // namespace

FockBasis::FockBasis(int n_total) : n_(n_total) {
  if (n_total < 0) throw ConfigError("total atom number must be >= 0");
  for (int n1 = 0; n1 <= n_total; ++n1) {
    for (int n2 = 0; n2 <= n_total - n1; ++n2) {
      Occupation occ{n1, n2, n_total - n1 - n2};
      index_.emplace(key(occ), states_.size());
      states_.push_back(occ);
    }
  }
}

std::uint64_t FockBasis::key(const Occupation& occ) {
  return (static_cast<std::uint64_t>(occ[0]) << 42) | (static_cast<std::uint64_t>(occ[1]) << 21) |
         static_cast<std::uint64_t>(occ[2]);
}

std::size_t FockBasis::index(const Occupation& occ) const {
  if (occ[0] < 0 || occ[1] < 0 || occ[2] < 0 || occ[0] + occ[1] + occ[2] != n_) {
    throw std::out_of_range("occupation outside the fixed-N sector");
  }
  return index_.at(key(occ));
}

FockState FockState::basis_state(const FockBasis& basis, const Occupation& occ) {
  FockState s{&basis, StateVector::Zero(static_cast<Eigen::Index>(basis.dim()))};
  s.amp(static_cast<Eigen::Index>(basis.index(occ))) = 1.0;
  return s;
}

StateVector apply_hamiltonian(const FockState& psi, double J, double chi) {
  const FockBasis& basis = *psi.basis;
  StateVector out = StateVector::Zero(psi.amp.size());
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const Complex c = psi.amp(static_cast<Eigen::Index>(k));
    if (c == 0.0) continue;
    out(static_cast<Eigen::Index>(k)) += diagonal_energy(basis[k], chi) * c;
    for (auto [i, j] : kHops) {
      Occupation target;
      double amp;
      if (transfer(basis[k], i, j, target, amp)) {
        out(static_cast<Eigen::Index>(basis.index(target))) += J * amp * c;
      }
    }
  }
  return out;
}

StateVector time_derivative(const FockState& psi, double J, double chi) {
  return -kI * apply_hamiltonian(psi, J, chi);
}

Eigen::MatrixXcd hamiltonian_matrix(const FockBasis& basis, double J, double chi) {
  return Eigen::MatrixXd(sparse_hamiltonian(basis, J, chi)).cast<Complex>();
}

Propagator::Propagator(const FockBasis& basis, double J, double chi, Method method)
    : basis_(&basis), J_(J), chi_(chi), method_(method) {
  if (method_ == Method::kAuto) {
    method_ = basis.dim() <= kDenseLimit ? Method::kDense : Method::kOde;
  }
  if (method_ == Method::kDense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        Eigen::MatrixXd(sparse_hamiltonian(basis, J, chi)));
    energies_ = es.eigenvalues();
    eigvecs_ = es.eigenvectors().cast<Complex>();
  }
}

FockState Propagator::evolve(const FockState& psi0, double t) const {
  if (psi0.basis->total() != basis_->total()) {
    throw std::invalid_argument("state and propagator live in different sectors");
  }
  FockState out{basis_, {}};
  if (method_ == Method::kDense) {
    StateVector coeffs = eigvecs_.adjoint() * psi0.amp;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::exp(-kI * energies_(k) * t);
    out.amp = eigvecs_ * coeffs;
    return out;
  }

  namespace odeint = boost::numeric::odeint;
  using State = std::vector<Complex>;
  const Eigen::SparseMatrix<double> h = sparse_hamiltonian(*basis_, J_, chi_);
  State x(psi0.amp.data(), psi0.amp.data() + psi0.amp.size());
  auto rhs = [&h](const State& psi, State& dpsi, double) {
    Eigen::Map<const StateVector> in(psi.data(), static_cast<Eigen::Index>(psi.size()));
    Eigen::Map<StateVector> out(dpsi.data(), static_cast<Eigen::Index>(dpsi.size()));
    out = -kI * (h * in);
  };
  if (t != 0.0) {
    auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, x, 0.0, t, t / 1000.0);
  }
  out.amp = Eigen::Map<StateVector>(x.data(), static_cast<Eigen::Index>(x.size()));
  return out;
}

FockState evolve(const FockState& psi0, double t, double J, double chi) {
  return Propagator(*psi0.basis, J, chi).evolve(psi0, t);
}

MomentSet moments(const FockState& psi, double t) {
  const FockBasis& basis = *psi.basis;
  MomentSet ms;
  ms.t = t;
  Moments& m = ms.mean;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const Complex c = psi.amp(static_cast<Eigen::Index>(k));
    const double p = std::norm(c);
    const Occupation& occ = basis[k];
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        m.nn(i, j) += p * (i == j ? static_cast<double>(occ[j]) * (occ[j] - 1)
                                  : static_cast<double>(occ[i]) * occ[j]);
        Occupation target;
        double amp;
        if (transfer(occ, i, j, target, amp)) {
          m.adag_a(i, j) +=
              std::conj(psi.amp(static_cast<Eigen::Index>(basis.index(target)))) * amp * c;
        }
      }
    }
  }
  // a_j, a_i a_j and their adjoints change N, so they vanish in the sector.
  return ms;
}

CriteriaReport report(const SystemConfig& config) {
  config.validate();
  if (config.initial_state != InitialState::kFock) {
    throw ConfigError("the exact oracle needs a Fock initial state");
  }
  const FockBasis basis(static_cast<int>(config.n_atoms));
  const FockState psi0 = FockState::basis_state(basis, {0, basis.total(), 0});
  const Propagator prop(basis, config.J, config.chi);
  CriteriaReport r;
  for (std::size_t k = 0; k < config.grid_size(); ++k) {
    const double t = config.grid_time(k);
    r.t.push_back(t);
    r.value.push_back(criteria::row(moments(prop.evolve(psi0, t), t).mean));
  }
  return r;
}

// --- beamsplitter --------------------------------------------------------

std::vector<Complex> input_amplitudes(const BsInput& input, double max_tail, double* tail_mass) {
  constexpr std::size_t kMaxCutoff = 200000;
  std::vector<Complex> c;
  double tail = 0.0;
  // <a^dag^2 a^2> weights neglected terms by ~n^2 and its square by ~n^4,
  // so the last kept term is held small on that scale as well.
  auto converged = [max_tail](double tail_now, std::size_t n, Complex amp) {
    const double w = static_cast<double>(n + 2);
    return tail_now < max_tail && w * w * w * w * std::norm(amp) < 1e-3 * max_tail;
  };

  if (const auto* f = std::get_if<FockInput>(&input)) {
    if (f->n < 0) throw ConfigError("Fock input needs n >= 0");
    c.assign(static_cast<std::size_t>(f->n) + 1, 0.0);
    c.back() = 1.0;
  } else if (const auto* coh = std::get_if<CoherentInput>(&input)) {
    const Complex beta = coh->beta;
    const double mag = std::abs(beta);
    const auto hint = static_cast<std::size_t>(mag * mag + 10.0 * mag + 20.0);
    Complex amp = std::exp(-0.5 * mag * mag);
    double mass = 0.0;
    for (std::size_t n = 0; n < kMaxCutoff; ++n) {
      if (n > 0) amp *= beta / std::sqrt(static_cast<double>(n));
      c.push_back(amp);
      mass += std::norm(amp);
      tail = std::max(0.0, 1.0 - mass);
      if (n >= hint && converged(tail, n, amp)) break;
    }
  } else {
    const double r = std::get<SqueezedInput>(input).r;
    if (!(r >= 0.0)) throw ConfigError("squeezing needs r >= 0");
    // S(r/2)|0>: V(X) = exp(-r)
    const double s = 0.5 * r;
    const double th = std::tanh(s);
    const double sh = std::sinh(s);
    const auto hint = static_cast<std::size_t>(20.0 + 10.0 * sh * sh);
    Complex amp = 1.0 / std::sqrt(std::cosh(s));
    double mass = 0.0;
    for (std::size_t n = 0; n < kMaxCutoff; n += 2) {
      if (n > 0) {
        const double m = static_cast<double>(n / 2 - 1);
        amp *= -th * std::sqrt((2.0 * m + 1.0) * (2.0 * m + 2.0)) / (2.0 * (m + 1.0));
        c.push_back(0.0);
      }
      c.push_back(amp);
      mass += std::norm(amp);
      tail = std::max(0.0, 1.0 - mass);
      if (n >= hint && converged(tail, n, amp)) break;
    }
  }
  if (tail >= max_tail) throw std::runtime_error("number-basis cutoff limit reached");
  if (tail_mass) *tail_mass = tail;
  return c;
}

namespace {

using Grid = Eigen::MatrixXcd;  // psi(k, m): k quanta in a_out, m in b_out

Grid lower_a(const Grid& g) {
  Grid out = Grid::Zero(g.rows(), g.cols());
  for (Eigen::Index k = 1; k < g.rows(); ++k) {
    out.row(k - 1) = std::sqrt(static_cast<double>(k)) * g.row(k);
  }
  return out;
}

Grid lower_b(const Grid& g) {
  Grid out = Grid::Zero(g.rows(), g.cols());
  for (Eigen::Index m = 1; m < g.cols(); ++m) {
    out.col(m - 1) = std::sqrt(static_cast<double>(m)) * g.col(m);
  }
  return out;
}

Complex inner(const Grid& l, const Grid& r) { return (l.conjugate().cwiseProduct(r)).sum(); }

}  // namespace

BsExactResult bs_exact(const BsInput& input, double eta, double max_tail) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
  BsExactResult res;
  std::vector<Complex> c = input_amplitudes(input, max_tail, &res.tail_mass);
  double norm2 = 0.0;
  for (auto& x : c) norm2 += std::norm(x);
  for (auto& x : c) x /= std::sqrt(norm2);

  const auto cutoff = static_cast<Eigen::Index>(c.size()) - 1;
  res.cutoff = static_cast<int>(cutoff);
  const double ra = std::sqrt(eta), rb = -std::sqrt(1.0 - eta);
  // a_in^dag = sqrt(eta) a_out^dag - sqrt(1-eta) b_out^dag
  Grid psi = Grid::Zero(cutoff + 1, cutoff + 1);
  for (Eigen::Index n = 0; n <= cutoff; ++n) {
    const Complex cn = c[static_cast<std::size_t>(n)];
    if (cn == 0.0) continue;
    for (Eigen::Index k = 0; k <= n; ++k) {
      const Eigen::Index m = n - k;
      const double binom = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                           std::lgamma(m + 1.0)));
      psi(k, m) = cn * binom * std::pow(ra, static_cast<double>(k)) *
                  std::pow(rb, static_cast<double>(m));
    }
  }

  const Grid a = lower_a(psi), b = lower_b(psi);
  const Grid aa = lower_a(a), bb = lower_b(b), ab = lower_b(a);
  Moments& m = res.moments;
  m.a(0) = inner(psi, a);
  m.a(1) = inner(psi, b);
  for (std::size_t j = 0; j < 2; ++j) m.a_dag(j) = std::conj(m.a(j));
  m.adag_a(0, 0) = inner(a, a);
  m.adag_a(1, 1) = inner(b, b);
  m.adag_a(0, 1) = inner(a, b);
  m.adag_a(1, 0) = std::conj(m.adag_a(0, 1));
  m.a_a(0, 0) = inner(psi, aa);
  m.a_a(1, 1) = inner(psi, bb);
  m.a_a(0, 1) = m.a_a(1, 0) = inner(psi, ab);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) m.adag_adag(i, j) = std::conj(m.a_a(i, j));
  }
  m.nn(0, 0) = inner(aa, aa);
  m.nn(1, 1) = inner(bb, bb);
  m.nn(0, 1) = m.nn(1, 0) = inner(ab, ab);
  return res;
}

}  // namespace bhs::oracle
