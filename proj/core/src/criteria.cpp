#include "bhs/criteria.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace bhs::criteria {
namespace {

double mean_x(const Moments& m, std::size_t j) { return (m.a(j) + m.a_dag(j)).real(); }
// <-i(a - a^dag)> = Im(a - a^dag)
double mean_y(const Moments& m, std::size_t j) { return (m.a(j) - m.a_dag(j)).imag(); }

double inferred(double var_a, double cov, double var_b) {
  if (!(var_b >= kDegenerateVariance)) {
    throw DegenerateVarianceError("Reid conditioning variance is degenerate");
  }
  return var_a - cov * cov / var_b;
}

// Step for the central-difference directional derivative used in the
// delta method. Exact for witnesses quadratic in the moments.
constexpr double kDeltaStep = 1e-3;

}  // namespace

double population(const Moments& m, std::size_t j) { return m.adag_a(j, j).real(); }

double number_variance(const Moments& m, std::size_t j) {
  const double n = population(m, j);
  return m.nn(j, j).real() + n - n * n;
}

double number_difference_variance(const Moments& m, std::size_t i, std::size_t j) {
  const double cov = m.nn(i, j).real() - population(m, i) * population(m, j);
  return number_variance(m, i) + number_variance(m, j) - 2.0 * cov;
}

double hz_xi(const Moments& m, std::size_t i, std::size_t j) {
  // <a_i^dag a_j><a_i a_j^dag> - <N_i N_j>
  return (m.adag_a(i, j) * m.adag_a(j, i)).real() - m.nn(i, j).real();
}

double steering_sigma(const Moments& m, std::size_t i, std::size_t j) {
  return hz_xi(m, i, j) - 0.5 * population(m, i);
}

double bell_zeta(const Moments& m, std::size_t i, std::size_t j) {
  return hz_xi(m, i, j) - 0.5 * population(m, i) - 0.5 * population(m, j) - 0.25;
}

double quadrature_var_x(const Moments& m, std::size_t j) {
  const double x = mean_x(m, j);
  const double xx = (m.a_a(j, j) + m.adag_adag(j, j) + 2.0 * m.adag_a(j, j)).real();
  return 1.0 + xx - x * x;
}

double quadrature_var_y(const Moments& m, std::size_t j) {
  const double y = mean_y(m, j);
  const double yy = (2.0 * m.adag_a(j, j) - m.a_a(j, j) - m.adag_adag(j, j)).real();
  return 1.0 + yy - y * y;
}

double quadrature_cov_x(const Moments& m, std::size_t i, std::size_t j) {
  if (i == j) return quadrature_var_x(m, j);
  const double xx =
      (m.a_a(i, j) + m.adag_adag(i, j) + m.adag_a(i, j) + m.adag_a(j, i)).real();
  return xx - mean_x(m, i) * mean_x(m, j);
}

double quadrature_cov_y(const Moments& m, std::size_t i, std::size_t j) {
  if (i == j) return quadrature_var_y(m, j);
  const double yy =
      (m.adag_a(i, j) + m.adag_a(j, i) - m.a_a(i, j) - m.adag_adag(i, j)).real();
  return yy - mean_y(m, i) * mean_y(m, j);
}

QuadratureBlock quadrature_block(const Moments& m, std::size_t i, std::size_t j) {
  QuadratureBlock q{};
  q.var_x_i = quadrature_var_x(m, i);
  q.var_y_i = quadrature_var_y(m, i);
  q.var_x_j = quadrature_var_x(m, j);
  q.var_y_j = quadrature_var_y(m, j);
  q.cov_x = quadrature_cov_x(m, i, j);
  q.cov_y = quadrature_cov_y(m, i, j);
  const double sum = q.var_x_i + q.var_x_j + q.var_y_i + q.var_y_j;
  q.ds_plus = sum + 2.0 * q.cov_x - 2.0 * q.cov_y;
  q.ds_minus = sum - 2.0 * q.cov_x + 2.0 * q.cov_y;
  q.gamma = inferred(q.var_x_i, q.cov_x, q.var_x_j) * inferred(q.var_y_i, q.cov_y, q.var_y_j);
  return q;
}

namespace {

// Ensemble rows keep going when sampling noise drives a conditioning
// variance to zero or below; the Reid columns become NaN instead.
enum class OnDegenerate { kThrow, kNaN };

Row make_row(const Moments& m, OnDegenerate policy) {
  Row r{};
  r[kN1] = population(m, 0);
  r[kN2] = population(m, 1);
  r[kN3] = population(m, 2);
  r[kVN1] = number_variance(m, 0);
  r[kVN2] = number_variance(m, 1);
  r[kVN3] = number_variance(m, 2);
  r[kVN1m3] = number_difference_variance(m, 0, 2);
  r[kXi13] = hz_xi(m, 0, 2);
  r[kSigma13] = steering_sigma(m, 0, 2);
  r[kSigma31] = steering_sigma(m, 2, 0);
  r[kZeta13] = bell_zeta(m, 0, 2);
  for (std::size_t j = 0; j < 3; ++j) {
    r[kVX1 + 2 * j] = quadrature_var_x(m, j);
    r[kVY1 + 2 * j] = quadrature_var_y(m, j);
  }
  auto fill = [&](std::size_t j, Column ds_plus, Column ds_minus, Column gamma) {
    const double vxi = quadrature_var_x(m, 0), vyi = quadrature_var_y(m, 0);
    const double vxj = quadrature_var_x(m, j), vyj = quadrature_var_y(m, j);
    const double cx = quadrature_cov_x(m, 0, j), cy = quadrature_cov_y(m, 0, j);
    r[ds_plus] = vxi + vxj + vyi + vyj + 2.0 * cx - 2.0 * cy;
    r[ds_minus] = vxi + vxj + vyi + vyj - 2.0 * cx + 2.0 * cy;
    if (policy == OnDegenerate::kNaN &&
        !(vxj >= kDegenerateVariance && vyj >= kDegenerateVariance)) {
      r[gamma] = std::numeric_limits<double>::quiet_NaN();
    } else {
      r[gamma] = inferred(vxi, cx, vxj) * inferred(vyi, cy, vyj);
    }
  };
  fill(2, kDSp13, kDSm13, kGamma13);
  fill(1, kDSp12, kDSm12, kGamma12);
  return r;
}

}  // namespace

Row row(const Moments& m) { return make_row(m, OnDegenerate::kThrow); }

CriteriaReport evaluate(std::span<const MomentSet> series) {
  CriteriaReport out;
  bool stochastic = !series.empty();
  for (const auto& ms : series) stochastic = stochastic && !ms.exact();

  for (const auto& ms : series) {
    out.t.push_back(ms.t);
    out.value.push_back(make_row(ms.mean, stochastic ? OnDegenerate::kNaN : OnDegenerate::kThrow));
    if (!stochastic) continue;

    // Delta method over batch replicas: linearise each witness along the
    // replica's deviation from the mean.
    const std::size_t b = ms.replicas.size();
    Row ss{};
    double total = 0.0;
    for (std::size_t k = 0; k < b; ++k) {
      const Moments dev = (ms.replicas[k] - ms.mean) * kDeltaStep;
      const Row up = make_row(ms.mean + dev, OnDegenerate::kNaN);
      const Row down = make_row(ms.mean - dev, OnDegenerate::kNaN);
      const double w = static_cast<double>(ms.replica_counts[k]);
      total += w;
      for (std::size_t c = 0; c < kColumnCount; ++c) {
        const double d = (up[c] - down[c]) / (2.0 * kDeltaStep);
        ss[c] += w * d * d;
      }
    }
    Row se{};
    for (std::size_t c = 0; c < kColumnCount; ++c) {
      se[c] = std::sqrt(ss[c] / (static_cast<double>(b - 1) * total));
    }
    out.se.push_back(se);
  }
  return out;
}

std::vector<std::string> check_invariants(const CriteriaReport& report) {
  static constexpr Column kNonNegative[] = {kVN1, kVN2, kVN3, kVN1m3, kVX1,  kVY1,  kVX2,
                                            kVY2, kVX3, kVY3, kDSp13, kDSm13, kDSp12, kDSm12};
  std::vector<std::string> issues;
  for (std::size_t k = 0; k < report.size(); ++k) {
    for (Column c : kNonNegative) {
      const double v = report.value[k][c];
      const double se = report.has_se() ? report.se[k][c] : 0.0;
      if (v < -3.0 * se) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "t=%.6g: %s = %.6g below -3 SE (SE %.3g)", report.t[k],
                      kColumnNames[c].data(), v, se);
        issues.emplace_back(buf);
      }
    }
  }
  return issues;
}

}  // namespace bhs::criteria
