#pragma once

#include <array>
#include <vector>

#include "bhs/columns.hpp"
#include "bhs/model.hpp"
#include "bhs/moments.hpp"

// Closed-form non-interacting (chi = 0) evolution with wells 1 and 3
// initially in vacuum. Every function here ignores SystemConfig::chi.

namespace bhs::analytic {

/// U(t) with a(t) = U(t) a(0); row/column indices are wells 0..2.
struct ModeCoeffs {
  std::array<std::array<Complex, 3>, 3> u{};

  Complex operator()(std::size_t i, std::size_t j) const { return u[i][j]; }
  /// max |(U^dag U - I)_{ij}|
  double unitarity_residual() const;
};

ModeCoeffs mode_coeffs(double t, OmegaRate omega);

struct Populations {
  double n1, n2, n3;
};
Populations populations(double t, OmegaRate omega, const InitialMoments& m);

struct NumberVariances {
  double vn1, vn2, vn3, vn1_minus_n3;
};
NumberVariances number_variances(double t, OmegaRate omega, const InitialMoments& m);

double xi13(double t, OmegaRate omega, const InitialMoments& m);
double sigma13(double t, OmegaRate omega, const InitialMoments& m);

/// V(X1), V(Y1), V(X2), V(Y2), V(X3), V(Y3)
std::array<double, 6> quadrature_variances(double t, OmegaRate omega, const InitialMoments& m);

struct QuadratureCovariances {
  double xx13, yy13;
};
QuadratureCovariances quadrature_covariances(double t, OmegaRate omega,
                                             const InitialMoments& m);

struct DuanSimon {
  double plus, minus;
};
DuanSimon duan_simon(double t, OmegaRate omega, const InitialMoments& m);

/// Product of Reid inferred variances of well 1 conditioned on well 3.
double reid_gamma13(double t, OmegaRate omega, const InitialMoments& m);

/// 6x6 covariance of (X1, Y1, X2, Y2, X3, Y3) propagated through U(t),
/// assuming initially uncorrelated quadratures. Used for pairs the closed
/// forms do not cover.
using QuadCovariance = std::array<std::array<double, 6>, 6>;
QuadCovariance quadrature_covariance_matrix(double t, OmegaRate omega, const InitialMoments& m);

/// Every witness column at one time, from the closed forms above.
Row row(double t, OmegaRate omega, const InitialMoments& m);

/// Normally ordered moments implied by U(t) and the initial well-2 state.
Moments synthesized_moments(double t, const SystemConfig& config);

struct AnalyticSeries {
  std::vector<double> t;
  std::vector<Row> rows;
};

AnalyticSeries series(const SystemConfig& config);
CriteriaReport report(const SystemConfig& config);

}  // namespace bhs::analytic
