#pragma once

#include <span>
#include <string>
#include <vector>

#include "bhs/columns.hpp"
#include "bhs/moments.hpp"

namespace bhs::criteria {

/// Conditioning variances below this are treated as degenerate.
inline constexpr double kDegenerateVariance = 1e-12;

double population(const Moments& m, std::size_t j);
double number_variance(const Moments& m, std::size_t j);
/// V(N_i - N_j)
double number_difference_variance(const Moments& m, std::size_t i, std::size_t j);

/// Hillery-Zubairy: positive means modes i and j are entangled.
double hz_xi(const Moments& m, std::size_t i, std::size_t j);
/// Cavalcanti steering witness: positive means j steers i.
double steering_sigma(const Moments& m, std::size_t i, std::size_t j);
/// Cavalcanti Bell witness.
double bell_zeta(const Moments& m, std::size_t i, std::size_t j);

double quadrature_var_x(const Moments& m, std::size_t j);
double quadrature_var_y(const Moments& m, std::size_t j);
double quadrature_cov_x(const Moments& m, std::size_t i, std::size_t j);
double quadrature_cov_y(const Moments& m, std::size_t i, std::size_t j);

struct QuadratureBlock {
  double var_x_i, var_y_i, var_x_j, var_y_j;
  double cov_x, cov_y;
  double ds_plus;   // V(X_i + X_j) + V(Y_i - Y_j)
  double ds_minus;  // V(X_i - X_j) + V(Y_i + Y_j)
  double gamma;     // Reid product of inferred variances of i given j
};

/// Throws DegenerateVarianceError if V(X_j) or V(Y_j) is degenerate.
QuadratureBlock quadrature_block(const Moments& m, std::size_t i, std::size_t j);

/// All witness columns from one moment set (no error propagation).
/// Throws DegenerateVarianceError like quadrature_block.
Row row(const Moments& m);

/// Witness values with first-order standard errors from batch replicas.
/// For stochastic input a degenerate Reid conditioning variance yields
/// NaN in the gamma columns rather than an exception.
CriteriaReport evaluate(std::span<const MomentSet> series);

/// Invariant violations of a stochastic report: variances or DS values
/// more than 3 SE below zero. Empty when clean.
std::vector<std::string> check_invariants(const CriteriaReport& report);

}  // namespace bhs::criteria
