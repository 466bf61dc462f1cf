#include "bhs/model.hpp"

#include <limits>
#include <numbers>

namespace bhs {

std::string_view to_string(InitialState s) {
  return s == InitialState::kFock ? "fock" : "coherent";
}

InitialState parse_initial_state(std::string_view s) {
  if (s == "fock" || s == "Fock") return InitialState::kFock;
  if (s == "coherent" || s == "Coherent") return InitialState::kCoherent;
  throw ConfigError("unknown initial state '" + std::string(s) + "' (expected fock|coherent)");
}

void SystemConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(std::isfinite(J) && J >= 0.0, "J must be finite and >= 0");
  require(std::isfinite(chi), "chi must be finite");
  require(std::isfinite(n_atoms) && n_atoms >= 0.0, "n_atoms must be finite and >= 0");
  require(initial_state != InitialState::kFock || n_atoms == std::floor(n_atoms),
          "n_atoms must be an integer for a Fock input");
  require(std::isfinite(t_max) && t_max >= 0.0, "t_max must be finite and >= 0");
  require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
  require(std::isfinite(grid_dt) && grid_dt > 0.0, "grid_dt must be > 0");
  require(n_traj >= 1, "n_traj must be >= 1");
  double ratio = grid_dt / dt;
  require(std::abs(ratio - std::round(ratio)) < 1e-9 * ratio && std::round(ratio) >= 1.0,
          "grid_dt must be a positive integer multiple of dt");
}

std::size_t SystemConfig::grid_size() const {
  return static_cast<std::size_t>(std::floor(t_max / grid_dt + 1e-9)) + 1;
}

double OmegaRate::period() const {
  if (omega == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::pi / omega;
}

InitialMoments initial_moments(const SystemConfig& config) {
  InitialMoments m;
  m.mean_n = config.n_atoms;
  if (config.initial_state == InitialState::kFock) {
    m.var_n = 0.0;
    // <(a + a^dag)^2> = 2N + 1 for |N>
    m.quad_vars[2] = m.quad_vars[3] = 2.0 * config.n_atoms + 1.0;
  } else {
    m.var_n = config.n_atoms;
  }
  return m;
}

}  // namespace bhs
