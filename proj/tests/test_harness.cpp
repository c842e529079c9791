#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "relay_ofdma/relay_ofdma.hpp"

using namespace relay_ofdma;
namespace fs = std::filesystem;

namespace {

ExperimentSpec small_gap_spec() {
  ExperimentSpec s;
  s.kind = ExperimentKind::GapPdf;
  s.trials = 12;
  s.protocols = {Protocol::Proposed, Protocol::Benchmark1};
  s.k_values = {8, 16};
  return s;
}

ExperimentSpec small_sweep_spec() {
  ExperimentSpec s;
  s.kind = ExperimentKind::SweepDistance;
  s.trials = 5;
  s.protocols = {Protocol::Proposed, Protocol::Benchmark1, Protocol::Benchmark2};
  s.base.num_subcarriers = 8;
  s.d_values = {0.2, 0.6};
  return s;
}

std::string csv_of(const std::vector<TrialRecord>& r) {
  std::ostringstream os;
  write_records_csv(os, r);
  return os.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("relay_ofdma_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& f) const { return path_ / f; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Harness, GapPdfIsDeterministic) {
  const auto spec = small_gap_spec();
  const std::string a = csv_of(run_gap_pdf(spec));
  const std::string b = csv_of(run_gap_pdf(spec));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), kRecordCsvHeader);
}

TEST(Harness, SeedChangesRecords) {
  auto spec = small_gap_spec();
  const std::string a = csv_of(run_gap_pdf(spec));
  spec.base.seed = 99;
  EXPECT_NE(a, csv_of(run_gap_pdf(spec)));
}

TEST(Harness, WallTimeOnlyWithTiming) {
  auto spec = small_gap_spec();
  for (const auto& r : run_gap_pdf(spec)) EXPECT_EQ(r.wall_time_ms, 0.0);
}

TEST(Harness, GapRecordsRespectRanges) {
  const auto spec = small_gap_spec();
  const auto rec = run_gap_pdf(spec);
  ASSERT_EQ(rec.size(), spec.trials * spec.protocols.size());
  for (const auto& r : rec) {
    EXPECT_GE(r.d_km, spec.d_min);
    EXPECT_LE(r.d_km, spec.d_max);
    EXPECT_TRUE(r.K == 8 || r.K == 16);
    EXPECT_GE(r.ptot_db, spec.snr_db_min);
    EXPECT_LE(r.ptot_db, spec.snr_db_max);
  }
}

TEST(Harness, HistogramIsNormalized) {
  auto spec = small_gap_spec();
  spec.trials = 40;
  const auto h = gap_histogram(run_gap_pdf(spec));
  double mass = 0.0;
  std::size_t n = 0;
  for (const auto& b : h.bins) {
    mass += b.density * (b.hi_db - b.lo_db);
    n += b.count;
  }
  EXPECT_NEAR(mass, 1.0, 1e-12);
  EXPECT_EQ(n + h.zero_delta, h.approx_exits);
}

TEST(Harness, SweepAggregatesMatchRaw) {
  const auto res = run_sweep_distance(small_sweep_spec());
  ASSERT_EQ(res.rows.size(), 6u);
  for (const auto& row : res.rows) {
    double wsr = 0.0, nsp = 0.0;
    std::size_t n = 0, it = 0;
    for (const auto& r : res.records)
      if (r.d_km == row.d_km && r.protocol == row.protocol) {
        wsr += r.wsr;
        nsp += r.n_sp_over_k;
        it = std::max(it, r.iterations);
        ++n;
      }
    ASSERT_EQ(n, row.trials);
    EXPECT_NEAR(row.mean_wsr, wsr / n, 1e-12 * std::max(1.0, wsr));
    EXPECT_NEAR(row.mean_n_sp_over_k, nsp / n, 1e-15);
    EXPECT_EQ(row.max_iterations, it);
  }
}

TEST(Harness, SweepCsvIsDeterministic) {
  auto render = [] {
    std::ostringstream os;
    write_sweep_csv(os, run_sweep_distance(small_sweep_spec()).rows);
    return os.str();
  };
  EXPECT_EQ(render(), render());
}

TEST(Harness, EmptyProtocolSetIsConfigError) {
  auto gap = small_gap_spec();
  gap.protocols.clear();
  EXPECT_THROW(run_gap_pdf(gap), ConfigError);
  auto sweep = small_sweep_spec();
  sweep.protocols.clear();
  EXPECT_THROW(run_sweep_distance(sweep), ConfigError);
  ExperimentSpec v;
  v.kind = ExperimentKind::Validate;
  v.protocols.clear();
  EXPECT_THROW(run_validate(v), ConfigError);
}

TEST(Harness, ValidateRejectsOversizedInstances) {
  ExperimentSpec v;
  v.kind = ExperimentKind::Validate;
  v.validate_max_k = 5;
  EXPECT_THROW(validate(v), ConfigError);
}

TEST(Harness, ValidatePasses) {
  ExperimentSpec v;
  v.kind = ExperimentKind::Validate;
  v.trials = 30;
  v.protocols = {Protocol::Proposed, Protocol::Benchmark1, Protocol::Benchmark2};
  const auto rep = run_validate(v);
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.checks.size(), 90u);
}

TEST(Harness, InjectedFailureIsNamed) {
  ExperimentSpec v;
  v.kind = ExperimentKind::Validate;
  v.trials = 5;
  v.inject_failure = true;
  const auto rep = run_validate(v);
  EXPECT_FALSE(rep.passed);
  std::size_t budget = 0;
  for (const auto& c : rep.checks)
    if (c.violation && c.violation->constraint == "total power budget") ++budget;
  EXPECT_GT(budget, 0u);
}

TEST(Harness, ConfigFileRoundTrip) {
  TempDir dir;
  const auto path = dir / "cfg.json";
  std::ofstream(path) << R"({"system": {"k": 16, "users": 3, "snr_db": 30, "seed": 7},
    "experiment": {"trials": 4, "protocols": ["bp1", "bp2"], "eps": 1e-5,
                   "d_values": [0.3], "refill": true}})";
  ExperimentSpec s;
  apply_config(load_config_file(path.string()), s);
  EXPECT_EQ(s.base.num_subcarriers, 16u);
  EXPECT_EQ(s.base.num_users, 3u);
  EXPECT_EQ(s.base.ptot_over_sigma2_db, 30.0);
  EXPECT_EQ(s.base.seed, 7u);
  EXPECT_EQ(s.trials, 4u);
  EXPECT_EQ(s.protocols, (std::vector<Protocol>{Protocol::Benchmark1, Protocol::Benchmark2}));
  EXPECT_EQ(s.eps, 1e-5);
  EXPECT_EQ(s.d_values, std::vector<double>{0.3});
  EXPECT_TRUE(s.refill);
}

TEST(Harness, BadConfigFiles) {
  TempDir dir;
  EXPECT_THROW(load_config_file((dir / "missing.json").string()), IoError);
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_THROW(load_config_file((dir / "broken.json").string()), ConfigError);
  ExperimentSpec s;
  EXPECT_THROW(apply_config(nlohmann::json::parse(R"({"experiment": {"protocols": ["bp3"]}})"), s),
               ConfigError);
  EXPECT_THROW(apply_config(nlohmann::json::parse(R"({"system": {"k": "many"}})"), s),
               ConfigError);
}

TEST(Harness, ReportJsonHasCertificate) {
  SystemConfig cfg;
  cfg.num_subcarriers = 8;
  SplitMix64 r(3);
  cfg.weights = draw_weights(cfg.num_users, r);
  const auto real = realize(cfg, r);
  const auto res = solve(real.gains, real.cfg.weights, power_budget(cfg), Protocol::Proposed);
  const auto j = to_json(res.report);
  for (const char* key : {"wsr", "mode", "delta", "n_sp", "mu_final", "iterations"})
    EXPECT_TRUE(j.contains(key)) << key;
}

#ifdef RELAY_RA_PATH
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RELAY_RA_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run_cli("solve --k 8 --users 2"), 0);
  EXPECT_EQ(run_cli("solve --protocol bogus"), 2);
  EXPECT_EQ(run_cli("solve --k 0"), 2);
  EXPECT_EQ(run_cli("solve --config " + (dir / "nope.json").string()), 3);
  EXPECT_EQ(run_cli("solve --out " + (dir / "no/such/dir/out.json").string()), 3);
  EXPECT_EQ(run_cli("validate --trials 3 --inject-failure"), 1);
  EXPECT_EQ(run_cli("validate --trials 3"), 0);
  std::ofstream(dir / "empty.json") << R"({"experiment": {"protocols": []}})";
  EXPECT_EQ(run_cli("validate --config " + (dir / "empty.json").string()), 2);
}

TEST(Cli, OutputFilesAreRepeatable) {
  TempDir dir;
  const auto a = dir / "a.csv", b = dir / "b.csv";
  ASSERT_EQ(run_cli("sweep --k 8 --trials 3 --d 0.2 --d 0.7 --raw --out " + a.string()), 0);
  ASSERT_EQ(run_cli("sweep --k 8 --trials 3 --d 0.2 --d 0.7 --raw --out " + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a.string() + ".raw.csv"), slurp(b.string() + ".raw.csv"));
  EXPECT_TRUE(fs::exists(a.string() + ".spec.json"));
  EXPECT_EQ(slurp(a).substr(0, slurp(a).find('\n')), kSweepCsvHeader);
}
#endif

TEST(Harness, FixedWeightsAreKept) {
  auto spec = small_gap_spec();
  spec.base.weights = {1.0, 2.0, 1.0, 1.0, 1.0};
  auto redraw = small_gap_spec();
  EXPECT_NE(csv_of(run_gap_pdf(spec)), csv_of(run_gap_pdf(redraw)));
  auto sweep = small_sweep_spec();
  sweep.base.weights = {1.0, 1.0, 1.0, 1.0, 1.0};
  EXPECT_NO_THROW(run_sweep_distance(sweep));
}
