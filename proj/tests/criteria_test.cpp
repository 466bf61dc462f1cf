#include "bhs/criteria.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "bhs/analytic.hpp"
#include "test_states.hpp"

namespace bhs::criteria {
namespace {

using test::coherent;
using test::fock;
using test::product;
using test::vacuum;

SystemConfig well2(InitialState state, double n) {
  SystemConfig c;
  c.J = 1.0;
  c.n_atoms = n;
  c.initial_state = state;
  return c;
}

TEST(NumberVariance, FockAndCoherent) {
  const Moments f = product(vacuum(), fock(200), vacuum());
  EXPECT_EQ(number_variance(f, 1), 0.0);
  EXPECT_EQ(number_variance(f, 0), 0.0);
  const Moments c = product(vacuum(), coherent(std::sqrt(200.0)), vacuum());
  EXPECT_NEAR(number_variance(c, 1), 200.0, 1e-10);
}

TEST(NumberDifferenceVariance, IndependentModesAdd) {
  const Moments m = product(coherent(2.0), vacuum(), coherent(Complex(0.0, 3.0)));
  EXPECT_NEAR(number_difference_variance(m, 0, 2), 4.0 + 9.0, 1e-12);
}

TEST(HzXi, IndependentStates) {
  EXPECT_NEAR(hz_xi(product(coherent(3.0), vacuum(), coherent(Complex(1.0, 2.0))), 0, 2), 0.0,
              1e-12);
  EXPECT_EQ(hz_xi(product(fock(3), vacuum(), fock(5)), 0, 2), -15.0);
}

TEST(SteeringSigma, Vacuum) {
  EXPECT_EQ(steering_sigma(product(vacuum(), vacuum(), vacuum()), 0, 2), 0.0);
}

TEST(BellZeta, Examples) {
  EXPECT_EQ(bell_zeta(product(vacuum(), vacuum(), vacuum()), 0, 2), -0.25);
  const double n = 7.0;
  const Moments m = product(coherent(std::sqrt(n)), vacuum(), coherent(std::sqrt(n)));
  EXPECT_NEAR(bell_zeta(m, 0, 2), n * n - (n + 0.5) * (n + 0.5), 1e-10);
}

TEST(BellZeta, IsSigmaMinusHalfPopulationMinusQuarter) {
  // |<a_i a_j^dag>|^2 - <(N_i + 1/2)(N_j + 1/2)> expanded
  const Moments m = analytic::synthesized_moments(0.9, well2(InitialState::kFock, 12));
  EXPECT_NEAR(bell_zeta(m, 0, 2), steering_sigma(m, 0, 2) - 0.5 * population(m, 2) - 0.25,
              1e-12);
  EXPECT_LT(bell_zeta(m, 0, 2), steering_sigma(m, 0, 2));
}

TEST(Quadratures, VacuumAndCoherent) {
  const Moments m = product(vacuum(), coherent(Complex(2.0, -1.5)), vacuum());
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(quadrature_var_x(m, j), 1.0, 1e-12);
    EXPECT_NEAR(quadrature_var_y(m, j), 1.0, 1e-12);
  }
  const auto q = quadrature_block(m, 0, 1);
  EXPECT_NEAR(q.ds_plus, 4.0, 1e-12);
  EXPECT_NEAR(q.ds_minus, 4.0, 1e-12);
  EXPECT_NEAR(q.gamma, 1.0, 1e-12);
}

TEST(Quadratures, FockVariance) {
  const Moments m = product(vacuum(), fock(200), vacuum());
  EXPECT_EQ(quadrature_var_x(m, 1), 401.0);
  EXPECT_EQ(quadrature_var_y(m, 1), 401.0);
}

TEST(Quadratures, DegenerateConditioningVarianceThrows) {
  Moments m = product(vacuum(), vacuum(), vacuum());
  m.a_a(2, 2) = -0.5;  // V(X3) = 1 + 2 Re<a^2> = 0
  m.adag_adag(2, 2) = -0.5;
  EXPECT_THROW(quadrature_block(m, 0, 2), DegenerateVarianceError);
  EXPECT_THROW(row(m), DegenerateVarianceError);
}

// Witnesses evaluated on moments built from U(t) reproduce the closed forms.
TEST(Row, SynthesizedMomentsMatchClosedForms) {
  const OmegaRate omega = OmegaRate::from_tunneling(1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> time(0.0, 10.0);
  for (InitialState state : {InitialState::kFock, InitialState::kCoherent}) {
    const SystemConfig c = well2(state, 200);
    const InitialMoments init = initial_moments(c);
    for (int k = 0; k < 200; ++k) {
      const double t = time(rng);
      const Row got = row(analytic::synthesized_moments(t, c));
      const Row want = analytic::row(t, omega, init);
      for (std::size_t col = 0; col < kColumnCount; ++col) {
        // the Fock Gamma divides two large nearly equal numbers
        const double scale = col == kGamma13 || col == kGamma12 ? 1e3 : 1.0;
        EXPECT_NEAR(got[col], want[col], 1e-10 * scale * std::max(1.0, std::abs(want[col])))
            << kColumnNames[col] << " t=" << t << " " << to_string(state);
      }
    }
  }
}

MomentSet replicated(const std::vector<Moments>& reps, const std::vector<std::uint64_t>& counts) {
  MomentSet ms;
  double total = 0.0;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    ms.mean += reps[k] * static_cast<double>(counts[k]);
    total += static_cast<double>(counts[k]);
  }
  ms.mean *= 1.0 / total;
  ms.replicas = reps;
  ms.replica_counts = counts;
  update_standard_errors(ms);
  return ms;
}

TEST(Evaluate, LinearWitnessErrorEqualsReplicaError) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Moments> reps;
  std::vector<std::uint64_t> counts;
  for (int k = 0; k < 20; ++k) {
    Moments m = product(coherent(3.0 + 0.1 * noise(rng)), vacuum(), fock(2));
    reps.push_back(m);
    counts.push_back(10 + k % 3);
  }
  const MomentSet ms = replicated(reps, counts);
  const std::vector<MomentSet> series{ms};
  const CriteriaReport r = evaluate(series);
  ASSERT_TRUE(r.has_se());

  std::vector<double> n1;
  for (const auto& m : reps) n1.push_back(m.adag_a(0, 0).real());
  const double expected = replica_standard_error(n1, counts, ms.mean.adag_a(0, 0).real());
  EXPECT_NEAR(r.se[0][kN1], expected, 1e-12);
  EXPECT_NEAR(r.se[0][kN1], ms.se.adag_a(0, 0).real(), 1e-12);
  EXPECT_GT(r.se[0][kVN1], 0.0);
}

TEST(Evaluate, ExactInputHasNoErrors) {
  MomentSet ms;
  ms.mean = product(vacuum(), fock(3), vacuum());
  const std::vector<MomentSet> series{ms, ms};
  const CriteriaReport r = evaluate(series);
  EXPECT_FALSE(r.has_se());
  EXPECT_EQ(r.size(), 2u);
}

TEST(CheckInvariants, FlagsNegativeVariance) {
  CriteriaReport r;
  r.t = {0.0, 1.0};
  r.value.resize(2);
  r.se.resize(2);
  r.value[0].fill(1.0);
  r.value[1].fill(1.0);
  r.se[0].fill(0.1);
  r.se[1].fill(0.1);
  EXPECT_TRUE(check_invariants(r).empty());
  r.value[1][kVN1m3] = -0.2;  // within 3 SE
  EXPECT_TRUE(check_invariants(r).empty());
  r.value[1][kVN1m3] = -0.5;
  const auto issues = check_invariants(r);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].find("VN1m3"), std::string::npos);
}

TEST(ReplicaStandardError, EqualWeightsMatchTextbook) {
  const std::vector<double> v{1.0, 2.0, 4.0, 7.0};
  const std::vector<std::uint64_t> w{5, 5, 5, 5};
  const double mean = 3.5;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(replica_standard_error(v, w, mean), std::sqrt(ss / 3.0 / 4.0), 1e-14);
}

}  // namespace
}  // namespace bhs::criteria
