#include "bhs/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "bhs/criteria.hpp"

namespace bhs::analytic {
namespace {

struct Trig {
  double s, c;
  Trig(double t, OmegaRate omega) : s(std::sin(omega.omega * t)), c(std::cos(omega.omega * t)) {}
};

double inferred(double var_a, double cov, double var_b) {
  if (var_b < criteria::kDegenerateVariance) {
    throw DegenerateVarianceError("Reid conditioning variance is degenerate");
  }
  return var_a - cov * cov / var_b;
}

}  // namespace

double ModeCoeffs::unitarity_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < 3; ++k) acc += std::conj(u[k][i]) * u[k][j];
      worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

ModeCoeffs mode_coeffs(double t, OmegaRate omega) {
  const Trig w(t, omega);
  const Complex diag = 0.5 * (w.c + 1.0);
  const Complex outer = 0.5 * (w.c - 1.0);
  const Complex hop(0.0, -w.s / std::sqrt(2.0));
  ModeCoeffs m;
  m.u = {{{diag, hop, outer}, {hop, Complex(w.c), hop}, {outer, hop, diag}}};
  return m;
}

Populations populations(double t, OmegaRate omega, const InitialMoments& m) {
  const Trig w(t, omega);
  const double side = 0.5 * w.s * w.s * m.mean_n;
  return {side, w.c * w.c * m.mean_n, side};
}

NumberVariances number_variances(double t, OmegaRate omega, const InitialMoments& m) {
  const Trig w(t, omega);
  const double s2 = w.s * w.s, c2 = w.c * w.c;
  const double side = 0.25 * (s2 * s2 * m.var_n + (1.0 - c2 * c2) * m.mean_n);
  const double centre = c2 * c2 * m.var_n + s2 * c2 * m.mean_n;
  // N1 - N3 only sees partition noise of the atoms that left well 2.
  const double diff = s2 * m.mean_n;
  return {side, centre, side, diff};
}

double xi13(double t, OmegaRate omega, const InitialMoments& m) {
  const Trig w(t, omega);
  const double s2 = w.s * w.s;
  return 0.25 * s2 * s2 * (m.mean_n - m.var_n);
}

double sigma13(double t, OmegaRate omega, const InitialMoments& m) {
  // xi13 - <N1>/2
  const Trig w(t, omega);
  const double s2 = w.s * w.s;
  return 0.25 * s2 * s2 * (m.mean_n - m.var_n) - 0.25 * s2 * m.mean_n;
}

std::array<double, 6> quadrature_variances(double t, OmegaRate omega, const InitialMoments& m) {
  const Trig w(t, omega);
  const double near = 0.25 * (w.c + 1.0) * (w.c + 1.0);
  const double far = 0.25 * (w.c - 1.0) * (w.c - 1.0);
  const double hop = 0.5 * w.s * w.s;
  const double c2 = w.c * w.c;
  return {
      near * m.var_x(0) + hop * m.var_y(1) + far * m.var_x(2),
      near * m.var_y(0) + hop * m.var_x(1) + far * m.var_y(2),
      hop * m.var_y(0) + c2 * m.var_x(1) + hop * m.var_y(2),
      hop * m.var_x(0) + c2 * m.var_y(1) + hop * m.var_x(2),
      far * m.var_x(0) + hop * m.var_y(1) + near * m.var_x(2),
      far * m.var_y(0) + hop * m.var_x(1) + near * m.var_y(2),
  };
}

QuadratureCovariances quadrature_covariances(double t, OmegaRate omega,
                                             const InitialMoments& m) {
  const Trig w(t, omega);
  const double edge = 0.25 * (w.c * w.c - 1.0);
  const double hop = 0.5 * w.s * w.s;
  return {edge * (m.var_x(0) + m.var_x(2)) + hop * m.var_y(1),
          edge * (m.var_y(0) + m.var_y(2)) + hop * m.var_x(1)};
}

DuanSimon duan_simon(double t, OmegaRate omega, const InitialMoments& m) {
  const Trig w(t, omega);
  const double c2 = w.c * w.c, s2 = w.s * w.s;
  return {m.var_y(0) + m.var_y(2) + c2 * (m.var_x(0) + m.var_x(2)) + 2.0 * s2 * m.var_y(1),
          m.var_x(0) + m.var_x(2) + c2 * (m.var_y(0) + m.var_y(2)) + 2.0 * s2 * m.var_x(1)};
}

double reid_gamma13(double t, OmegaRate omega, const InitialMoments& m) {
  const auto v = quadrature_variances(t, omega, m);
  const auto cov = quadrature_covariances(t, omega, m);
  return inferred(v[0], cov.xx13, v[4]) * inferred(v[1], cov.yy13, v[5]);
}

QuadCovariance quadrature_covariance_matrix(double t, OmegaRate omega, const InitialMoments& m) {
  // a_i = sum_j (p + iq)_ij a_j(0)  =>  X_i = p X_j - q Y_j,  Y_i = q X_j + p Y_j
  const ModeCoeffs u = mode_coeffs(t, omega);
  std::array<std::array<double, 6>, 6> r{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double p = u(i, j).real(), q = u(i, j).imag();
      r[2 * i][2 * j] = p;
      r[2 * i][2 * j + 1] = -q;
      r[2 * i + 1][2 * j] = q;
      r[2 * i + 1][2 * j + 1] = p;
    }
  }
  QuadCovariance out{};
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 6; ++k) acc += r[a][k] * m.quad_vars[k] * r[b][k];
      out[a][b] = acc;
    }
  }
  return out;
}

Row row(double t, OmegaRate omega, const InitialMoments& m) {
  Row r{};
  const auto pop = populations(t, omega, m);
  const auto nv = number_variances(t, omega, m);
  r[kN1] = pop.n1;
  r[kN2] = pop.n2;
  r[kN3] = pop.n3;
  r[kVN1] = nv.vn1;
  r[kVN2] = nv.vn2;
  r[kVN3] = nv.vn3;
  r[kVN1m3] = nv.vn1_minus_n3;
  r[kXi13] = xi13(t, omega, m);
  r[kSigma13] = sigma13(t, omega, m);
  r[kSigma31] = r[kSigma13];  // mirror symmetry of wells 1 and 3
  r[kZeta13] = r[kSigma13] - 0.5 * pop.n3 - 0.25;

  const auto qv = quadrature_variances(t, omega, m);
  for (std::size_t k = 0; k < 6; ++k) r[kVX1 + k] = qv[k];
  const auto ds = duan_simon(t, omega, m);
  r[kDSp13] = ds.plus;
  r[kDSm13] = ds.minus;
  r[kGamma13] = reid_gamma13(t, omega, m);

  const auto cov = quadrature_covariance_matrix(t, omega, m);
  const double cx12 = cov[0][2], cy12 = cov[1][3];
  r[kDSp12] = qv[0] + qv[2] + 2.0 * cx12 + qv[1] + qv[3] - 2.0 * cy12;
  r[kDSm12] = qv[0] + qv[2] - 2.0 * cx12 + qv[1] + qv[3] + 2.0 * cy12;
  r[kGamma12] = inferred(qv[0], cx12, qv[2]) * inferred(qv[1], cy12, qv[3]);
  return r;
}

Moments synthesized_moments(double t, const SystemConfig& config) {
  const auto u = mode_coeffs(t, OmegaRate::from_tunneling(config.J));
  const InitialMoments init = initial_moments(config);
  const double n = init.mean_n;
  const double pair = init.var_n - n + n * n;  // <a^dag^2 a^2>
  const bool coherent = config.initial_state == InitialState::kCoherent;
  const Complex amp = coherent ? std::sqrt(n) : 0.0;
  const Complex amp2 = amp * amp;

  Moments m;
  for (std::size_t i = 0; i < 3; ++i) {
    const Complex ui = u(i, 1);
    m.a(i) = ui * amp;
    m.a_dag(i) = std::conj(m.a(i));
    for (std::size_t j = 0; j < 3; ++j) {
      const Complex uj = u(j, 1);
      m.adag_a(i, j) = std::conj(ui) * uj * n;
      m.a_a(i, j) = ui * uj * amp2;
      m.adag_adag(i, j) = std::conj(m.a_a(i, j));
      m.nn(i, j) = std::norm(ui) * std::norm(uj) * pair;
    }
  }
  return m;
}

AnalyticSeries series(const SystemConfig& config) {
  const OmegaRate omega = OmegaRate::from_tunneling(config.J);
  const InitialMoments init = initial_moments(config);
  AnalyticSeries out;
  const std::size_t n = config.grid_size();
  out.t.reserve(n);
  out.rows.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = config.grid_time(k);
    out.t.push_back(t);
    out.rows.push_back(row(t, omega, init));
  }
  return out;
}

CriteriaReport report(const SystemConfig& config) {
  auto s = series(config);
  CriteriaReport r;
  r.t = std::move(s.t);
  r.value = std::move(s.rows);
  return r;
}

}  // namespace bhs::analytic
