#include "bhs/app/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bhs/analytic.hpp"
#include "bhs/app/run_spec.hpp"
#include "bhs/app/table.hpp"
#include "bhs/criteria.hpp"
#include "bhs/oracle.hpp"

namespace bhs::app {
namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trajectories;
  std::optional<double> dt;
  std::optional<double> t_max;
  std::optional<double> grid_dt;
  std::optional<int> threads;
  std::string scheme;
  std::string out;
  std::string format = "csv";
  std::string preset;
  bool full_scale = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "flat key = value settings file");
  cmd->add_option("--set", o.overrides, "override one setting, key=value (repeatable)");
  cmd->add_option("--seed", o.seed, "ensemble seed");
  cmd->add_option("--trajectories", o.trajectories, "number of stochastic trajectories");
  cmd->add_option("--dt", o.dt, "integration step");
  cmd->add_option("--tmax", o.t_max, "final time");
  cmd->add_option("--grid-dt", o.grid_dt, "output spacing (multiple of dt)");
  cmd->add_option("--threads", o.threads, "worker threads (0: all)");
  cmd->add_option("--scheme", o.scheme, "split | euler");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

KeyValues gather(const Options& o, KeyValues kv) {
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw IoError("cannot read config file '" + o.config_path + "'");
    for (auto& [k, v] : parse_key_values(in, o.config_path)) kv[k] = v;
  }
  for (const auto& text : o.overrides) {
    auto [k, v] = parse_assignment(text);
    kv[k] = v;
  }
  auto put = [&kv](const char* key, const auto& value) {
    if (!value) return;
    std::ostringstream s;
    s.precision(17);
    s << *value;
    kv[key] = s.str();
  };
  put("seed", o.seed);
  put("n_traj", o.trajectories);
  put("dt", o.dt);
  put("t_max", o.t_max);
  put("grid_dt", o.grid_dt);
  put("threads", o.threads);
  if (!o.scheme.empty()) kv["scheme"] = o.scheme;
  return kv;
}

CriteriaReport stochastic_report(const RunSpec& spec, std::ostream& err) {
  const auto moments = ppsim::run_ensemble(spec.system, spec.ensemble);
  if (!moments.empty() && moments.front().n_diverged > 0) {
    err << "warning: " << moments.front().n_diverged << " diverged trajectories excluded\n";
  }
  CriteriaReport report = criteria::evaluate(moments);
  for (const auto& issue : criteria::check_invariants(report)) err << "warning: " << issue << '\n';
  return report;
}

CriteriaReport reference_report(const RunSpec& spec) {
  const SystemConfig& c = spec.system;
  if (c.chi == 0.0) return analytic::report(c);
  if (c.initial_state == InitialState::kFock) return oracle::report(c);
  throw ConfigError("compare needs chi = 0 or a Fock input (no exact reference otherwise)");
}

Table beamsplitter_table(const beamsplitter::BsConfig& bs) {
  Table t;
  t.columns = {"eta", "N_a", "N_b", "xi", "sigma", "DSp", "DSm", "gamma"};
  const auto pop = beamsplitter::output_populations(bs);
  if (std::abs(bs.eta - 0.5) <= 1e-12) {
    const auto ds = beamsplitter::bs_duan_simon(bs);
    t.rows.push_back({bs.eta, pop.n_a, pop.n_b, beamsplitter::bs_xi(bs),
                      beamsplitter::bs_sigma(bs), ds.plus, ds.minus,
                      beamsplitter::bs_reid_gamma(bs)});
    return t;
  }
  // closed forms are balanced-only; other splittings use the exact state
  oracle::BsInput in;
  if (const auto* f = std::get_if<beamsplitter::Fock>(&bs.input_a)) {
    in = oracle::FockInput{static_cast<int>(f->n)};
  } else if (const auto* c = std::get_if<beamsplitter::Coherent>(&bs.input_a)) {
    in = oracle::CoherentInput{std::sqrt(c->mean_n)};
  } else {
    in = oracle::SqueezedInput{std::get<beamsplitter::Squeezed>(bs.input_a).r};
  }
  const Moments m = oracle::bs_exact(in, bs.eta).moments;
  const auto q = criteria::quadrature_block(m, 0, 1);
  t.rows.push_back({bs.eta, pop.n_a, pop.n_b, criteria::hz_xi(m, 0, 1),
                    criteria::steering_sigma(m, 0, 1), q.ds_plus, q.ds_minus, q.gamma});
  return t;
}

Table run_mode(const RunSpec& spec, std::ostream& err) {
  switch (spec.mode) {
    case Mode::kAnalytic:
      if (spec.system.chi != 0.0) err << "note: analytic mode ignores chi\n";
      return report_table(analytic::report(spec.system));
    case Mode::kOracle:
      return report_table(oracle::report(spec.system));
    case Mode::kStochastic:
      return report_table(stochastic_report(spec, err));
    case Mode::kCompare: {
      const CriteriaReport ref = reference_report(spec);
      return compare_table(stochastic_report(spec, err), ref);
    }
    case Mode::kBeamsplitter:
      return beamsplitter_table(spec.bs);
  }
  throw std::logic_error("unhandled mode");
}

std::string suffixed(const std::string& path, const std::string& suffix) {
  if (suffix.empty()) return path;
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "_" + suffix;
  }
  return path.substr(0, dot) + "_" + suffix + path.substr(dot);
}

void emit(const Table& table, const RunSpec& spec, const std::string& path, Format format,
          std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (format == Format::kCsv) {
      write_csv(os, table);
    } else {
      write_json(os, table, describe(spec));
    }
  };
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  write(file);
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
}

int execute(const std::string& command, const Options& o, std::ostream& out, std::ostream& err) {
  const Format format = parse_format(o.format);
  std::vector<PresetSeries> series;
  Mode mode = Mode::kStochastic;
  if (command == "preset") {
    series = preset(o.preset, o.full_scale);
  } else {
    mode = parse_mode(command);
    series.push_back({"", {}});
  }
  if (series.size() > 1 && o.out.empty()) {
    throw ConfigError("preset '" + o.preset + "' writes several series; give --out");
  }
  // resolve every series before running any of them
  std::vector<RunSpec> specs;
  for (const auto& s : series) specs.push_back(resolve(mode, gather(o, s.settings)));
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const Table table = run_mode(specs[k], err);
    emit(table, specs[k], o.out.empty() ? o.out : suffixed(o.out, series[k].suffix), format, out);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Three-well Bose-Hubbard entanglement and steering calculator", "bhsplit"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"analytic", "closed-form non-interacting evolution"},
      {"stochastic", "positive-P ensemble"},
      {"oracle", "exact fixed-N evolution (Fock input)"},
      {"compare", "stochastic run against the exact or closed-form reference"},
      {"beamsplitter", "balanced beamsplitter witnesses"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), o);
  CLI::App* pre = app.add_subcommand("preset", "named parameter sets fig1..fig5");
  add_common(pre, o);
  pre->add_option("name", o.preset, "fig1 | fig2 | fig3 | fig4 | fig5")->required();
  pre->add_flag("--full-scale", o.full_scale, "use the production trajectory counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, o, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace bhs::app
