#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace bhs {

/// Witness columns shared by the analytic, stochastic and exact paths.
/// The order is the output table order.
enum Column : std::size_t {
  kN1,
  kN2,
  kN3,
  kVN1,
  kVN2,
  kVN3,
  kVN1m3,
  kXi13,
  kSigma13,
  kSigma31,
  kZeta13,
  kVX1,
  kVY1,
  kVX2,
  kVY2,
  kVX3,
  kVY3,
  kDSp13,
  kDSm13,
  kDSp12,
  kDSm12,
  kGamma13,
  kGamma12,
  kColumnCount
};

inline constexpr std::array<std::string_view, kColumnCount> kColumnNames{
    "N1",     "N2",     "N3",      "VN1",     "VN2",     "VN3",
    "VN1m3",  "xi13",   "sigma13", "sigma31", "zeta13",  "VX1",
    "VY1",    "VX2",    "VY2",     "VX3",     "VY3",     "DSp13",
    "DSm13",  "DSp12",  "DSm12",   "gamma13", "gamma12"};

using Row = std::array<double, kColumnCount>;

/// A witness table on a time grid. `se` is empty for exact sources.
struct CriteriaReport {
  std::vector<double> t;
  std::vector<Row> value;
  std::vector<Row> se;

  bool has_se() const { return !se.empty(); }
  std::size_t size() const { return t.size(); }
};

}  // namespace bhs
