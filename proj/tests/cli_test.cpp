#include "bhs/app/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bhs/app/run_spec.hpp"
#include "bhs/app/table.hpp"

namespace bhs::app {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "bhsplit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

double cell(const std::string& csv, std::size_t row, const std::string& column) {
  const auto ls = lines(csv);
  const auto header = split(ls.at(0));
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw std::out_of_range(column);
  return std::stod(split(ls.at(row + 1)).at(static_cast<std::size_t>(it - header.begin())));
}

const std::vector<std::string> kSmallFock{
    "--set", "J=1", "--set", "chi=0.1", "--set", "n_atoms=3", "--set", "initial_state=fock",
    "--tmax", "1", "--grid-dt", "0.25"};

std::vector<std::string> with(std::vector<std::string> base, std::vector<std::string> more) {
  base.insert(base.end(), more.begin(), more.end());
  return base;
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("bhsplit_cli_test_" + name);
}

TEST(Cli, BeamsplitterSqueezedRow) {
  const Result r = run({"beamsplitter", "--set", "eta=0.5", "--set", "input=squeezed", "--set", "r=1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  ASSERT_EQ(lines(r.out).size(), 2u);
  EXPECT_NEAR(cell(r.out, 0, "DSm"), 2.0 * (1.0 + std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(cell(r.out, 0, "gamma"), 2.0 / (1.0 + std::cosh(1.0)), 1e-15);
}

TEST(Cli, BeamsplitterUnbalancedUsesExactState) {
  const Result r = run({"beamsplitter", "--set", "eta=0.3", "--set", "input=fock", "--set", "n=4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(cell(r.out, 0, "N_a"), 1.2, 1e-12);
  // <N_a N_b> = eta (1 - eta) N (N - 1), |<a^dag b>|^2 = eta (1 - eta) N^2
  const double p = 0.3 * 0.7;
  EXPECT_NEAR(cell(r.out, 0, "xi"), p * 16 - p * 12, 1e-10);
}

TEST(Cli, AnalyticCoherentDuanSimonIsFour) {
  const Result r = run({"analytic", "--set", "J=1", "--set", "chi=0", "--set", "n_atoms=200",
                        "--set", "initial_state=coherent", "--tmax", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 302u);
  EXPECT_EQ(split(ls[0]).size(), 1 + kColumnCount);
  for (std::size_t k = 0; k < 301; k += 17) {
    EXPECT_NEAR(cell(r.out, k, "DSp13"), 4.0, 1e-12);
    EXPECT_NEAR(cell(r.out, k, "DSm12"), 4.0, 1e-12);
  }
}

TEST(Cli, AnalyticNotesIgnoredChi) {
  const Result r = run(with({"analytic", "--set", "initial_state=fock"},
                            {"--set", "J=1", "--set", "chi=0.1", "--set", "n_atoms=3", "--tmax", "1"}));
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("ignores chi"), std::string::npos);
}

TEST(Cli, StochasticHasErrorColumns) {
  const Result r = run(with({"stochastic", "--trajectories", "400", "--seed", "9"}, kSmallFock));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto header = split(lines(r.out)[0]);
  EXPECT_EQ(header.size(), 1 + 2 * kColumnCount);
  EXPECT_EQ(header.back(), "gamma12_se");
  EXPECT_EQ(lines(r.out).size(), 6u);
  EXPECT_GT(cell(r.out, 4, "N1_se"), 0.0);
}

TEST(Cli, StochasticIdenticalAcrossThreads) {
  const auto args = with({"stochastic", "--trajectories", "300", "--seed", "4"}, kSmallFock);
  const Result a = run(with(args, {"--threads", "1"}));
  const Result b = run(with(args, {"--threads", "2"}));
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OracleMatchesCompareReference) {
  const Result o = run(with({"oracle"}, kSmallFock));
  const Result c = run(with({"compare", "--trajectories", "2000"}, kSmallFock));
  ASSERT_EQ(o.code, kExitOk) << o.err;
  ASSERT_EQ(c.code, kExitOk) << c.err;
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(cell(o.out, k, "xi13"), cell(c.out, k, "ref_xi13"));
    EXPECT_NEAR(cell(c.out, k, "diff_N1"), cell(c.out, k, "N1") - cell(c.out, k, "ref_N1"), 1e-12);
  }
  EXPECT_LT(std::abs(cell(c.out, 4, "z_N1")), 5.0);
}

TEST(Cli, CompareWithoutReferenceIsConfigError) {
  const Result r = run({"compare", "--set", "J=1", "--set", "chi=0.1", "--set", "n_atoms=3",
                        "--set", "initial_state=coherent", "--tmax", "1"});
  EXPECT_EQ(r.code, kExitConfig);
}

TEST(Cli, JsonCarriesResolvedConfig) {
  const Result r = run(with({"stochastic", "--trajectories", "100", "--format", "json"}, kSmallFock));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["config"]["mode"], "stochastic");
  EXPECT_EQ(doc["config"]["n_traj"], 100);
  EXPECT_EQ(doc["config"]["dt"], 1e-3);  // default filled in
  EXPECT_EQ(doc["config"]["scheme"], "split");
  EXPECT_EQ(doc["columns"]["t"].size(), 5u);
  EXPECT_EQ(doc["columns"]["N1_se"].size(), 5u);
}

TEST(Cli, ConfigFileAndOverrides) {
  const fs::path cfg = temp_path("run.cfg");
  {
    std::ofstream f(cfg);
    f << "# three wells\nJ = 1\nchi = 0\nn_atoms = 10   # atoms\ninitial_state = fock\nt_max = 2\n";
  }
  const Result r = run({"analytic", "--config", cfg.string(), "--set", "n_atoms=20"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  // override wins over the file: N1 = 20 sin^2(Omega t) / 2
  EXPECT_NEAR(cell(r.out, 111, "N1"), 10.0 * std::pow(std::sin(std::sqrt(2.0) * 1.11), 2), 1e-9);
  fs::remove(cfg);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"analytic", "--set", "J=1"}).code, kExitConfig);  // missing physics
  EXPECT_EQ(run(with({"analytic", "--set", "bogus=1"}, kSmallFock)).code, kExitConfig);
  EXPECT_EQ(run(with({"analytic", "--dt", "0.3"}, kSmallFock)).code, kExitConfig);
  EXPECT_EQ(run({"nonsense"}).code, kExitConfig);
  EXPECT_EQ(run(with({"analytic", "--format", "xml"}, kSmallFock)).code, kExitConfig);
  EXPECT_EQ(run({"analytic", "--config", "/nonexistent/file.cfg"}).code, kExitIo);
  EXPECT_EQ(run(with({"analytic", "--out", "/nonexistent/dir/x.csv"}, kSmallFock)).code, kExitIo);
  const Result d = run({"stochastic", "--set", "J=0", "--set", "chi=20", "--set", "n_atoms=400",
                        "--set", "initial_state=coherent", "--tmax", "1", "--dt", "0.01",
                        "--grid-dt", "0.01", "--trajectories", "200", "--scheme", "euler"});
  EXPECT_EQ(d.code, kExitDivergence) << d.err;
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, PresetWritesSuffixedSeries) {
  const fs::path out = temp_path("fig4.csv");
  const Result r = run({"preset", "fig4", "--trajectories", "50", "--tmax", "0.2", "--out",
                        out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const fs::path fock = temp_path("fig4_fock.csv"), coh = temp_path("fig4_coherent.csv");
  EXPECT_TRUE(fs::exists(fock));
  EXPECT_TRUE(fs::exists(coh));
  fs::remove(fock);
  fs::remove(coh);
  EXPECT_EQ(run({"preset", "fig4", "--trajectories", "50", "--tmax", "0.2"}).code, kExitConfig);
  EXPECT_EQ(run({"preset", "fig9"}).code, kExitConfig);
}

TEST(RunSpec, PresetsAndFullScale) {
  for (auto name : preset_names()) {
    for (const auto& s : preset(name, false)) {
      EXPECT_EQ(s.settings.at("n_traj"), "100000");
      EXPECT_NO_THROW(resolve(Mode::kStochastic, s.settings));
    }
  }
  EXPECT_EQ(preset("fig1", true).front().settings.at("n_traj"), "1080000");
  const auto fig4 = preset("fig4", true);
  ASSERT_EQ(fig4.size(), 2u);
  EXPECT_EQ(fig4[0].settings.at("n_traj"), "1690000");
  EXPECT_EQ(fig4[1].settings.at("initial_state"), "coherent");
  EXPECT_EQ(fig4[1].settings.at("n_traj"), "1250000");
  EXPECT_EQ(preset("fig5", true).front().settings.at("n_traj"), "945000");
}

TEST(RunSpec, KeyValueParsing) {
  std::istringstream ok("a = 1\n\n  # note\nb=two # trailing\n");
  const KeyValues kv = parse_key_values(ok, "t");
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "two");
  std::istringstream dup("a = 1\na = 2\n");
  EXPECT_THROW(parse_key_values(dup, "t"), ConfigError);
  std::istringstream bad("just words\n");
  EXPECT_THROW(parse_key_values(bad, "t"), ConfigError);
  EXPECT_THROW(parse_assignment("novalue="), ConfigError);
  EXPECT_EQ(parse_assignment(" chi = 0.5 ").second, "0.5");
}

TEST(RunSpec, ResolveValidates) {
  KeyValues kv{{"J", "1"}, {"chi", "0"}, {"n_atoms", "5"}, {"initial_state", "fock"}, {"t_max", "1"}};
  const RunSpec s = resolve(Mode::kStochastic, kv);
  EXPECT_EQ(s.system.n_traj, 100000u);
  EXPECT_EQ(s.ensemble.n_batches, 100u);
  kv["n_traj"] = "1e4";
  EXPECT_EQ(resolve(Mode::kStochastic, kv).system.n_traj, 10000u);
  kv["n_traj"] = "2.5";
  EXPECT_THROW(resolve(Mode::kStochastic, kv), ConfigError);
  kv.erase("n_traj");
  kv["chi"] = "abc";
  EXPECT_THROW(resolve(Mode::kStochastic, kv), ConfigError);
  EXPECT_THROW(resolve(Mode::kBeamsplitter, {{"eta", "0.5"}, {"input", "fock"}}), ConfigError);
  EXPECT_THROW(resolve(Mode::kBeamsplitter, {{"eta", "0.5"}, {"input", "thermal"}, {"n", "1"}}),
               ConfigError);
}

TEST(Table, CsvRoundTripsDoubles) {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{0.1, 1.0 / 3.0}};
  std::ostringstream out;
  write_csv(out, t);
  EXPECT_EQ(out.str(), "a,b\n0.10000000000000001,0.33333333333333331\n");
  EXPECT_EQ(std::stod("0.33333333333333331"), 1.0 / 3.0);
}

}  // namespace
}  // namespace bhs::app
