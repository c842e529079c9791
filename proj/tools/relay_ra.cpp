// relay_ra: resource allocation for relay-aided downlink OFDMA.
//
//   relay_ra solve     single instance, prints the report as JSON
//   relay_ra gap-pdf   randomized ensemble, per-trial CSV + gap histogram
//   relay_ra sweep     relay-position sweep, aggregated CSV
//   relay_ra validate  solver vs brute-force oracle on tiny instances
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 I/O error.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relay_ofdma/relay_ofdma.hpp"

namespace ro = relay_ofdma;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Flags {
  std::string config_path;
  std::vector<std::string> protocols;
  std::size_t k = 0;
  std::size_t users = 0;
  double d_km = 0.0;
  double snr_db = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  bool refill = false;
  bool bp2_same_user = true;
  bool raw = false;
  bool timing = false;
  bool inject_failure = false;
  std::string out;
  std::vector<double> d_values;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file (flags override it)");
  cmd->add_option("--protocol", f.protocols, "proposed, bp1 or bp2 (repeatable)")
      ->check(CLI::IsMember({"proposed", "bp1", "bp2"}));
  cmd->add_option("--k", f.k, "number of subcarriers K");
  cmd->add_option("--users", f.users, "number of users U");
  cmd->add_option("--d-km", f.d_km, "source-to-relay distance in km");
  cmd->add_option("--snr-db", f.snr_db, "P_tot / sigma^2 in dB");
  cmd->add_option("--trials", f.trials, "number of realizations");
  cmd->add_option("--seed", f.seed, "base RNG seed");
  cmd->add_option("--eps", f.eps, "bisection tolerance on mu (default 1e-6)");
  cmd->add_flag("--refill", f.refill, "spend leftover budget at the final assignment");
  cmd->add_option("--bp2-same-user", f.bp2_same_user,
                  "BP-2: force one user per direct diagonal couple (default true)");
  cmd->add_flag("--raw", f.raw, "also write per-trial records (sweep)");
  cmd->add_flag("--timing", f.timing, "fill the wall_time_ms column");
  cmd->add_option("--out", f.out, "output path (default: stdout)");
}

// Config file first, then any flag the user actually passed.
ro::ExperimentSpec build_spec(CLI::App* cmd, const Flags& f, ro::ExperimentKind kind) {
  ro::ExperimentSpec spec;
  spec.kind = kind;
  if (kind == ro::ExperimentKind::GapPdf)
    spec.protocols = {ro::Protocol::Proposed, ro::Protocol::Benchmark1};
  if (kind == ro::ExperimentKind::SweepDistance || kind == ro::ExperimentKind::Validate)
    spec.protocols = {ro::Protocol::Proposed, ro::Protocol::Benchmark1,
                      ro::Protocol::Benchmark2};
  if (kind == ro::ExperimentKind::Validate) spec.trials = 200;
  if (kind == ro::ExperimentKind::SweepDistance) spec.trials = 1000;
  if (kind == ro::ExperimentKind::GapPdf) spec.trials = 10000;

  if (!f.config_path.empty()) {
    ro::apply_config(ro::load_config_file(f.config_path), spec);
    spec.kind = kind;
  }
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (given("--protocol")) {
    spec.protocols.clear();
    for (const auto& p : f.protocols) spec.protocols.push_back(ro::parse_protocol(p));
  }
  if (given("--k")) spec.base.num_subcarriers = f.k;
  if (given("--users")) spec.base.num_users = f.users;
  if (given("--d-km")) spec.base.d_km = f.d_km;
  if (given("--snr-db")) spec.base.ptot_over_sigma2_db = f.snr_db;
  if (given("--trials")) spec.trials = f.trials;
  if (given("--seed")) spec.base.seed = f.seed;
  if (given("--eps")) spec.eps = f.eps;
  if (given("--refill")) spec.refill = f.refill;
  if (given("--bp2-same-user")) spec.bp2_same_user = f.bp2_same_user;
  if (given("--raw")) spec.raw = f.raw;
  if (given("--timing")) spec.timing = f.timing;
  if (given("--out")) spec.output_path = f.out;
  if (cmd->get_option_no_throw("--d") && given("--d")) spec.d_values = f.d_values;
  if (cmd->get_option_no_throw("--inject-failure") && given("--inject-failure"))
    spec.inject_failure = f.inject_failure;
  if (kind == ro::ExperimentKind::GapPdf && given("--k"))
    spec.k_values = {spec.base.num_subcarriers};
  if (kind == ro::ExperimentKind::GapPdf && given("--snr-db"))
    spec.snr_db_min = spec.snr_db_max = spec.base.ptot_over_sigma2_db;
  if (kind == ro::ExperimentKind::GapPdf && given("--d-km"))
    spec.d_min = spec.d_max = spec.base.d_km;
  ro::validate(spec);
  return spec;
}

// Writes to --out if set, otherwise stdout.
void emit(const ro::ExperimentSpec& spec, const std::string& text) {
  if (spec.output_path.empty()) {
    std::cout << text;
    return;
  }
  ro::write_text_file(spec.output_path, text);
}

void write_sidecar(const ro::ExperimentSpec& spec) {
  if (spec.output_path.empty()) return;
  ro::write_text_file(spec.output_path + ".spec.json", ro::to_json(spec).dump(2) + "\n");
}

int cmd_solve(const ro::ExperimentSpec& spec) {
  ro::SplitMix64 trial(spec.base.seed);
  ro::SplitMix64 scenario = trial.split();
  ro::SplitMix64 channel = trial.split();
  ro::SystemConfig cfg = spec.base;
  if (cfg.weights.empty()) cfg.weights = ro::draw_weights(cfg.num_users, scenario);
  const ro::Realization r = ro::realize(cfg, channel);

  nlohmann::json out = nlohmann::json::array();
  for (ro::Protocol p : spec.protocols) {
    const auto res = ro::solve(r.gains, r.cfg.weights, ro::power_budget(r.cfg), p,
                               spec.solver_options());
    nlohmann::json j = ro::to_json(res.report);
    j["protocol"] = std::string(ro::to_string(p));
    j["allocation"] = ro::to_json(res.allocation);
    out.push_back(std::move(j));
  }
  nlohmann::json doc = {{"config", ro::to_json(r.cfg)},
                        {"bp2_same_user", spec.bp2_same_user},
                        {"results", out}};
  emit(spec, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_gap_pdf(const ro::ExperimentSpec& spec) {
  const auto records = ro::run_gap_pdf(spec);
  std::ostringstream csv;
  ro::write_records_csv(csv, records);
  emit(spec, csv.str());
  const auto hist = ro::gap_histogram(records);
  if (!spec.output_path.empty()) {
    std::ostringstream h;
    ro::write_histogram_csv(h, hist);
    ro::write_text_file(spec.output_path + ".hist.csv", h.str());
    write_sidecar(spec);
  }
  std::cerr << "gap-pdf: " << records.size() << " solves, " << hist.approx_exits
            << " eps-branch exits, " << hist.exact_exits
            << " exact exits, max delta " << hist.max_delta << "\n";
  return kExitOk;
}

int cmd_sweep(const ro::ExperimentSpec& spec) {
  const auto res = ro::run_sweep_distance(spec);
  std::ostringstream csv;
  ro::write_sweep_csv(csv, res.rows);
  emit(spec, csv.str());
  if (!spec.output_path.empty()) {
    if (spec.raw) {
      std::ostringstream raw;
      ro::write_records_csv(raw, res.records);
      ro::write_text_file(spec.output_path + ".raw.csv", raw.str());
    }
    write_sidecar(spec);
  }
  return kExitOk;
}

int cmd_validate(const ro::ExperimentSpec& spec) {
  const auto rep = ro::run_validate(spec);
  emit(spec, ro::to_json(rep).dump(2) + "\n");
  std::size_t failed = 0;
  for (const auto& c : rep.checks) {
    if (c.passed) continue;
    if (++failed > 10) continue;
    std::cerr << "FAIL trial " << c.trial << " " << ro::to_string(c.protocol);
    if (c.violation)
      std::cerr << ": " << c.violation->constraint << " (" << c.violation->detail << ")";
    std::cerr << "\n";
  }
  std::cerr << "validate: " << rep.checks.size() << " checks, " << failed
            << " failed, max relative discrepancy " << rep.max_rel_discrepancy << "\n";
  return rep.passed ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resource allocation for relay-aided downlink OFDMA"};
  app.require_subcommand(1);

  Flags solve_f, gap_f, sweep_f, val_f;
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance, print JSON report");
  add_common(solve_cmd, solve_f);
  auto* gap_cmd = app.add_subcommand("gap-pdf", "randomized ensemble of gap certificates");
  add_common(gap_cmd, gap_f);
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep the relay position");
  add_common(sweep_cmd, sweep_f);
  sweep_cmd->add_option("--d", sweep_f.d_values, "relay distances to visit (km)");
  auto* val_cmd = app.add_subcommand("validate", "compare solver with brute-force oracle");
  add_common(val_cmd, val_f);
  val_cmd->add_flag("--inject-failure", val_f.inject_failure,
                    "overspend every audited allocation by 1% (negative test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*solve_cmd)
      return cmd_solve(build_spec(solve_cmd, solve_f, ro::ExperimentKind::SingleSolve));
    if (*gap_cmd)
      return cmd_gap_pdf(build_spec(gap_cmd, gap_f, ro::ExperimentKind::GapPdf));
    if (*sweep_cmd)
      return cmd_sweep(build_spec(sweep_cmd, sweep_f, ro::ExperimentKind::SweepDistance));
    if (*val_cmd)
      return cmd_validate(build_spec(val_cmd, val_f, ro::ExperimentKind::Validate));
  } catch (const ro::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ro::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ro::InfeasibleAllocation& e) {
    std::cerr << "infeasible allocation: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitConfig;
}
