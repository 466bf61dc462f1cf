#pragma once

#include <variant>

#include "bhs/model.hpp"

// Closed forms for a lossless beamsplitter with a vacuum second port.

namespace bhs::beamsplitter {

struct Fock {
  double n;
};
struct Coherent {
  double mean_n;
};
/// Amplitude-squeezed vacuum: V(X) = exp(-r), V(Y) = exp(r).
struct Squeezed {
  double r;
};
using Input = std::variant<Fock, Coherent, Squeezed>;

struct BsConfig {
  double eta = 0.5;
  Input input_a = Coherent{0.0};

  void validate() const;
};

/// Number and quadrature statistics of the `a` input.
struct InputStats {
  double mean_n, var_n, var_x, var_y;
};
InputStats input_stats(const Input& in);

struct QuadratureTable {
  double var_xa, var_ya, var_xb, var_yb;  // output single-mode variances
  double cov_x, cov_y;                    // V(X_a, X_b), V(Y_a, Y_b)
  double var_x_sum, var_x_diff;           // V(X_a +- X_b)
  double var_y_sum, var_y_diff;           // V(Y_a +- Y_b)
};

/// Output quadrature moments for any eta.
QuadratureTable transform_quadratures(const BsConfig& config);

struct Populations {
  double n_a, n_b;
};
Populations output_populations(const BsConfig& config);

// The witnesses below require eta = 1/2 and throw ConfigError otherwise.

double bs_xi(const BsConfig& config);
double bs_sigma(const BsConfig& config);

struct DuanSimon {
  double plus;   // V(X_a + X_b) + V(Y_a - Y_b)
  double minus;  // V(X_a - X_b) + V(Y_a + Y_b)
};
DuanSimon bs_duan_simon(const BsConfig& config);

double bs_reid_gamma(const BsConfig& config);

}  // namespace bhs::beamsplitter
