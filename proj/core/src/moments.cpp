#include "bhs/moments.hpp"

#include <cmath>

namespace bhs {

double replica_standard_error(std::span<const double> values,
                              std::span<const std::uint64_t> counts, double mean) {
  const std::size_t b = values.size();
  if (b < 2) return 0.0;
  double total = 0.0;
  double ss = 0.0;
  for (std::size_t k = 0; k < b; ++k) {
    const double w = static_cast<double>(counts[k]);
    const double d = values[k] - mean;
    total += w;
    ss += w * d * d;
  }
  return std::sqrt(ss / (static_cast<double>(b - 1) * total));
}

void update_standard_errors(MomentSet& m) {
  if (m.exact()) {
    m.se = Moments{};
    return;
  }
  const std::size_t b = m.replicas.size();
  std::vector<double> re(b), im(b);
  for (std::size_t k = 0; k < Moments::kSize; ++k) {
    for (std::size_t r = 0; r < b; ++r) {
      re[r] = m.replicas[r][k].real();
      im[r] = m.replicas[r][k].imag();
    }
    m.se[k] = Complex(replica_standard_error(re, m.replica_counts, m.mean[k].real()),
                      replica_standard_error(im, m.replica_counts, m.mean[k].imag()));
  }
}

}  // namespace bhs
