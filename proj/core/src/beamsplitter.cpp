#include "bhs/beamsplitter.hpp"

#include <cmath>

namespace bhs::beamsplitter {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_balanced(const BsConfig& config) {
  config.validate();
  if (std::abs(config.eta - 0.5) > 1e-12) {
    throw ConfigError("closed-form beamsplitter witnesses need eta = 1/2");
  }
}

}  // namespace

void BsConfig::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
  std::visit(Overloaded{
                 [](const Fock& f) {
                   if (!(f.n >= 0.0) || f.n != std::floor(f.n)) {
                     throw ConfigError("Fock input needs an integer n >= 0");
                   }
                 },
                 [](const Coherent& c) {
                   if (!(c.mean_n >= 0.0)) throw ConfigError("coherent mean must be >= 0");
                 },
                 [](const Squeezed& s) {
                   if (!(s.r >= 0.0)) throw ConfigError("squeezing needs r >= 0");
                 },
             },
             input_a);
}

InputStats input_stats(const Input& in) {
  return std::visit(Overloaded{
                        [](const Fock& f) {
                          return InputStats{f.n, 0.0, 2.0 * f.n + 1.0, 2.0 * f.n + 1.0};
                        },
                        [](const Coherent& c) { return InputStats{c.mean_n, c.mean_n, 1.0, 1.0}; },
                        [](const Squeezed& s) {
                          // squeeze parameter r/2 in the usual S(z) convention
                          const double sh = std::sinh(0.5 * s.r);
                          const double n = sh * sh;
                          return InputStats{n, 2.0 * n * (n + 1.0), std::exp(-s.r), std::exp(s.r)};
                        },
                    },
                    in);
}

QuadratureTable transform_quadratures(const BsConfig& config) {
  config.validate();
  const InputStats in = input_stats(config.input_a);
  const double eta = config.eta;
  const double mix = std::sqrt(eta * (1.0 - eta));
  constexpr double kVacuum = 1.0;
  QuadratureTable q{};
  q.var_xa = eta * in.var_x + (1.0 - eta) * kVacuum;
  q.var_ya = eta * in.var_y + (1.0 - eta) * kVacuum;
  q.var_xb = (1.0 - eta) * in.var_x + eta * kVacuum;
  q.var_yb = (1.0 - eta) * in.var_y + eta * kVacuum;
  q.cov_x = mix * (kVacuum - in.var_x);
  q.cov_y = mix * (kVacuum - in.var_y);
  q.var_x_sum = q.var_xa + q.var_xb + 2.0 * q.cov_x;
  q.var_x_diff = q.var_xa + q.var_xb - 2.0 * q.cov_x;
  q.var_y_sum = q.var_ya + q.var_yb + 2.0 * q.cov_y;
  q.var_y_diff = q.var_ya + q.var_yb - 2.0 * q.cov_y;
  return q;
}

Populations output_populations(const BsConfig& config) {
  config.validate();
  const double n = input_stats(config.input_a).mean_n;
  return {config.eta * n, (1.0 - config.eta) * n};
}

double bs_xi(const BsConfig& config) {
  require_balanced(config);
  const InputStats in = input_stats(config.input_a);
  return 0.25 * (in.mean_n - in.var_n);
}

double bs_sigma(const BsConfig& config) {
  // xi_ab - <N_a,out>/2, identical for both orderings at eta = 1/2
  require_balanced(config);
  return -0.25 * input_stats(config.input_a).var_n;
}

DuanSimon bs_duan_simon(const BsConfig& config) {
  require_balanced(config);
  const QuadratureTable q = transform_quadratures(config);
  return {q.var_x_sum + q.var_y_diff, q.var_x_diff + q.var_y_sum};
}

double bs_reid_gamma(const BsConfig& config) {
  require_balanced(config);
  const QuadratureTable q = transform_quadratures(config);
  const double inf_x = q.var_xa - q.cov_x * q.cov_x / q.var_xb;
  const double inf_y = q.var_ya - q.cov_y * q.cov_y / q.var_yb;
  return inf_x * inf_y;
}

}  // namespace bhs::beamsplitter
