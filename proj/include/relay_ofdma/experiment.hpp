#pragma once

// Monte-Carlo experiment orchestration and result emission.
//
// Seeding: trial i of an experiment runs off SplitMix64(base_seed + i). The
// first child stream of that generator draws the scenario (random d, K and
// P_tot where the experiment varies them, then the U user weights in
// [0.8, 1.2] unless the base config fixes them); the second child feeds
// build_gain_table. Every protocol in a trial sees the same channel
// realization. Validation always draws weights since U varies per trial.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relay_ofdma/channel.hpp"
#include "relay_ofdma/dual_solver.hpp"
#include "relay_ofdma/errors.hpp"
#include "relay_ofdma/oracle.hpp"
#include "relay_ofdma/protocol.hpp"
#include "relay_ofdma/rng.hpp"

namespace relay_ofdma {

enum class ExperimentKind { GapPdf, SweepDistance, SingleSolve, Validate };

inline std::string_view to_string(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::GapPdf: return "gap-pdf";
    case ExperimentKind::SweepDistance: return "sweep";
    case ExperimentKind::SingleSolve: return "solve";
    case ExperimentKind::Validate: return "validate";
  }
  return "?";
}

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::SingleSolve;
  std::size_t trials = 1;
  std::vector<Protocol> protocols{Protocol::Proposed};
  SystemConfig base;

  // SweepDistance: the relay positions visited.
  std::vector<double> d_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  // GapPdf: realizations draw d, K and P_tot/sigma^2 from these.
  double d_min = 0.1, d_max = 0.9;
  std::vector<std::size_t> k_values{8, 16, 32, 64, 128};
  double snr_db_min = 0.0, snr_db_max = 45.0;
  // Validate: instance sizes are drawn from 1..max.
  std::size_t validate_max_k = 4;
  std::size_t validate_max_users = 2;
  bool inject_failure = false;

  double eps = 1e-6;
  bool refill = false;
  bool bp2_same_user = true;
  bool raw = false;
  bool timing = false;
  std::string output_path;

  SolverOptions solver_options() const { return {eps, refill, bp2_same_user}; }
};

inline void validate(const ExperimentSpec& spec) {
  if (spec.protocols.empty()) throw ConfigError("protocol set is empty");
  if (spec.trials < 1) throw ConfigError("trials must be >= 1");
  if (!(spec.eps > 0.0)) throw ConfigError("eps must be positive");
  switch (spec.kind) {
    case ExperimentKind::SweepDistance:
      if (spec.d_values.empty()) throw ConfigError("sweep: no d values");
      for (double d : spec.d_values)
        if (!(d > 0.0)) throw ConfigError("sweep: d values must be positive");
      break;
    case ExperimentKind::GapPdf:
      if (spec.k_values.empty()) throw ConfigError("gap-pdf: no K values");
      if (!(spec.d_min > 0.0) || spec.d_max < spec.d_min)
        throw ConfigError("gap-pdf: bad d range");
      if (spec.snr_db_max < spec.snr_db_min)
        throw ConfigError("gap-pdf: bad SNR range");
      break;
    case ExperimentKind::Validate:
      if (spec.validate_max_k < 1 || spec.validate_max_k > 4 ||
          spec.validate_max_users < 1 || spec.validate_max_users > 2)
        throw ConfigError("validate: requires K <= 4 and U <= 2");
      break;
    case ExperimentKind::SingleSolve:
      break;
  }
  SystemConfig probe = spec.base;
  if (spec.kind == ExperimentKind::GapPdf) {
    probe.num_subcarriers = *std::ranges::min_element(spec.k_values);
    probe.d_km = spec.d_min;
  }
  if (spec.kind == ExperimentKind::Validate) {
    probe.taps = 1;  // run_validate clamps taps to the drawn K
    probe.num_users = 1;
    probe.weights.clear();
  }
  relay_ofdma::validate(probe);
}

struct TrialRecord {
  std::uint64_t seed = 0;
  Protocol protocol = Protocol::Proposed;
  double d_km = 0.0;
  std::size_t K = 0;
  double ptot_db = 0.0;
  double wsr = 0.0;
  double delta = 0.0;
  SolveMode mode = SolveMode::ApproxUpperBound;
  double n_sp_over_k = 0.0;
  std::size_t iterations = 0;
  double wall_time_ms = 0.0;
};

inline std::vector<double> draw_weights(std::size_t U, SplitMix64& rng) {
  std::vector<double> w(U);
  for (auto& x : w) x = rng.uniform(0.8, 1.2);
  return w;
}

/// One realized scenario: config (with weights filled) plus its channels.
struct Realization {
  SystemConfig cfg;
  GainTable gains;
};

inline Realization realize(SystemConfig cfg, SplitMix64& channel_rng) {
  auto [geo, gains] = build_gain_table(cfg, channel_rng);
  return {std::move(cfg), std::move(gains)};
}

namespace detail {

inline TrialRecord solve_record(const Realization& r, std::uint64_t seed,
                                Protocol protocol, const ExperimentSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult res = solve(r.gains, r.cfg.weights, power_budget(r.cfg),
                                protocol, spec.solver_options());
  const auto t1 = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.seed = seed;
  rec.protocol = protocol;
  rec.d_km = r.cfg.d_km;
  rec.K = r.cfg.num_subcarriers;
  rec.ptot_db = r.cfg.ptot_over_sigma2_db;
  rec.wsr = res.report.wsr;
  rec.delta = res.report.delta;
  rec.mode = res.report.mode;
  rec.n_sp_over_k = static_cast<double>(res.report.n_sp) /
                    static_cast<double>(r.cfg.num_subcarriers);
  rec.iterations = res.report.iterations;
  if (spec.timing)
    rec.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rec;
}

}  // namespace detail

using RecordSink = std::function<void(const TrialRecord&)>;

/// Randomized ensemble for the gap-certificate distribution. Records are
/// returned in (trial, protocol) order and also passed to `sink` if given.
inline std::vector<TrialRecord> run_gap_pdf(const ExperimentSpec& spec,
                                            const RecordSink& sink = {}) {
  validate(spec);
  std::vector<TrialRecord> out;
  for (std::size_t t = 0; t < spec.trials; ++t) {
    const std::uint64_t seed = spec.base.seed + t;
    SplitMix64 trial(seed);
    SplitMix64 scenario = trial.split();
    SplitMix64 channel = trial.split();

    SystemConfig cfg = spec.base;
    cfg.seed = seed;
    cfg.d_km = scenario.uniform(spec.d_min, spec.d_max);
    cfg.num_subcarriers = spec.k_values[scenario.below(spec.k_values.size())];
    cfg.ptot_over_sigma2_db = scenario.uniform(spec.snr_db_min, spec.snr_db_max);
    if (cfg.weights.empty()) cfg.weights = draw_weights(cfg.num_users, scenario);
    const Realization r = realize(std::move(cfg), channel);
    for (Protocol p : spec.protocols) {
      out.push_back(detail::solve_record(r, seed, p, spec));
      if (sink) sink(out.back());
    }
  }
  return out;
}

struct HistogramBin {
  double lo_db = 0.0;
  double hi_db = 0.0;
  std::size_t count = 0;
  double density = 0.0;  // per dB, normalized over eps-branch exits
};

struct GapHistogram {
  std::vector<HistogramBin> bins;
  std::size_t approx_exits = 0;
  std::size_t exact_exits = 0;
  std::size_t zero_delta = 0;  // eps-branch exits with delta == 0 (no dB value)
  double max_delta = 0.0;
};

/// Histogram of 10 log10(delta) over eps-branch exits, `width_db` wide bins
/// spanning the observed range.
inline GapHistogram gap_histogram(const std::vector<TrialRecord>& records,
                                  double width_db = 1.0) {
  GapHistogram h;
  std::vector<double> db;
  for (const auto& r : records) {
    if (r.mode == SolveMode::ExactStationary) {
      ++h.exact_exits;
      continue;
    }
    ++h.approx_exits;
    h.max_delta = std::max(h.max_delta, r.delta);
    if (r.delta > 0.0) db.push_back(10.0 * std::log10(r.delta));
    else ++h.zero_delta;
  }
  if (db.empty()) return h;
  const double lo = std::floor(*std::ranges::min_element(db) / width_db) * width_db;
  const double hi = std::floor(*std::ranges::max_element(db) / width_db) * width_db + width_db;
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / width_db));
  for (std::size_t i = 0; i < n; ++i)
    h.bins.push_back({lo + width_db * static_cast<double>(i),
                      lo + width_db * static_cast<double>(i + 1), 0, 0.0});
  for (double x : db) {
    auto i = static_cast<std::size_t>(std::floor((x - lo) / width_db));
    h.bins[std::min(i, n - 1)].count++;
  }
  for (auto& b : h.bins)
    b.density = static_cast<double>(b.count) /
                (static_cast<double>(db.size()) * width_db);
  return h;
}

struct SweepRow {
  double d_km = 0.0;
  Protocol protocol = Protocol::Proposed;
  std::size_t K = 0;
  double ptot_db = 0.0;
  std::size_t trials = 0;
  double mean_wsr = 0.0;
  double mean_n_sp_over_k = 0.0;
  double mean_delta = 0.0;
  double max_delta = 0.0;
  std::size_t max_iterations = 0;
  std::size_t exact_exits = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;        // (d, protocol) order
  std::vector<TrialRecord> records;  // (d, trial, protocol) order
};

/// Aggregates records into one row per (d, protocol), in first-seen order.
inline std::vector<SweepRow> aggregate(const std::vector<TrialRecord>& records) {
  std::vector<SweepRow> rows;
  std::map<std::pair<double, int>, std::size_t> index;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.d_km, static_cast<int>(r.protocol));
    auto [it, fresh] = index.try_emplace(key, rows.size());
    if (fresh) {
      SweepRow row;
      row.d_km = r.d_km;
      row.protocol = r.protocol;
      row.K = r.K;
      row.ptot_db = r.ptot_db;
      rows.push_back(row);
    }
    SweepRow& row = rows[it->second];
    ++row.trials;
    row.mean_wsr += r.wsr;
    row.mean_n_sp_over_k += r.n_sp_over_k;
    if (r.mode == SolveMode::ExactStationary) ++row.exact_exits;
    else row.max_delta = std::max(row.max_delta, r.delta);
    row.mean_delta += r.delta;
    row.max_iterations = std::max(row.max_iterations, r.iterations);
  }
  for (auto& row : rows) {
    const auto n = static_cast<double>(row.trials);
    row.mean_wsr /= n;
    row.mean_n_sp_over_k /= n;
    row.mean_delta /= n;
  }
  return rows;
}

/// Relay-position sweep at fixed K and P_tot. Trial t uses the same seed at
/// every d, so the user drop and fading differ across d only through the
/// relay position.
inline SweepResult run_sweep_distance(const ExperimentSpec& spec) {
  validate(spec);
  SweepResult res;
  for (double d : spec.d_values) {
    for (std::size_t t = 0; t < spec.trials; ++t) {
      const std::uint64_t seed = spec.base.seed + t;
      SplitMix64 trial(seed);
      SplitMix64 scenario = trial.split();
      SplitMix64 channel = trial.split();
      SystemConfig cfg = spec.base;
      cfg.seed = seed;
      cfg.d_km = d;
      if (cfg.weights.empty()) cfg.weights = draw_weights(cfg.num_users, scenario);
      const Realization r = realize(std::move(cfg), channel);
      for (Protocol p : spec.protocols)
        res.records.push_back(detail::solve_record(r, seed, p, spec));
    }
  }
  res.rows = aggregate(res.records);
  return res;
}

// ---------------------------------------------------------------------------
// Solver-versus-oracle validation

struct ValidationCheck {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Protocol protocol = Protocol::Proposed;
  std::size_t K = 0;
  std::size_t U = 0;
  double ptot_db = 0.0;
  double solver_wsr = 0.0;
  double oracle_wsr = 0.0;
  double delta = 0.0;
  double rel_discrepancy = 0.0;  // (oracle - solver) / oracle
  bool subgrad_monotone = true;
  std::optional<Violation> violation;
  bool passed = true;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  double max_rel_discrepancy = 0.0;
  bool passed = true;
};

/// Absolute slack on WSR comparisons against the oracle.
inline constexpr double kOracleTolerance = 1e-6;

/// Subgradients at `count` increasing prices spread geometrically over
/// (0, mu_upper_bound].
inline std::vector<double> subgradient_profile(const GainTable& gains,
                                               std::span<const double> weights,
                                               double p_tot, Protocol protocol,
                                               std::size_t count,
                                               const SolverOptions& opts = {}) {
  const PairGainTable table(gains, protocol);
  const double hi = mu_upper_bound(gains.num_subcarriers(),
                                   *std::ranges::max_element(weights), p_tot);
  std::vector<double> g;
  for (std::size_t i = 0; i < count; ++i) {
    const double mu = hi * std::pow(1e-4, 1.0 - static_cast<double>(i) /
                                                   static_cast<double>(count - 1));
    g.push_back(solve_lrp(table, weights, mu, p_tot, opts).subgrad);
  }
  return g;
}

inline bool is_monotone(std::span<const double> g, double tol) {
  for (std::size_t i = 1; i < g.size(); ++i)
    if (g[i] < g[i - 1] - tol) return false;
  return true;
}

inline ValidationReport run_validate(const ExperimentSpec& spec) {
  validate(spec);
  ValidationReport rep;
  for (std::size_t t = 0; t < spec.trials; ++t) {
    const std::uint64_t seed = spec.base.seed + t;
    SplitMix64 trial(seed);
    SplitMix64 scenario = trial.split();
    SplitMix64 channel = trial.split();
    SystemConfig cfg = spec.base;
    cfg.seed = seed;
    cfg.num_subcarriers = 1 + scenario.below(spec.validate_max_k);
    cfg.num_users = 1 + scenario.below(spec.validate_max_users);
    cfg.taps = std::min(cfg.taps, cfg.num_subcarriers);
    cfg.d_km = scenario.uniform(spec.d_min, spec.d_max);
    cfg.ptot_over_sigma2_db = scenario.uniform(spec.snr_db_min, spec.snr_db_max);
    cfg.weights = draw_weights(cfg.num_users, scenario);
    const Realization r = realize(std::move(cfg), channel);
    const double p_tot = power_budget(r.cfg);

    for (Protocol p : spec.protocols) {
      ValidationCheck c;
      c.trial = t;
      c.seed = seed;
      c.protocol = p;
      c.K = r.cfg.num_subcarriers;
      c.U = r.cfg.num_users;
      c.ptot_db = r.cfg.ptot_over_sigma2_db;

      SolverOptions opts = spec.solver_options();
      const SolveResult sol = solve(r.gains, r.cfg.weights, p_tot, p, opts);
      const OracleResult orc =
          oracle_solve(r.gains, r.cfg.weights, p_tot, p, {spec.bp2_same_user});
      c.solver_wsr = sol.report.wsr;
      c.oracle_wsr = orc.wsr;
      c.delta = sol.report.delta;
      c.rel_discrepancy =
          orc.wsr > 0.0 ? (orc.wsr - sol.report.wsr) / orc.wsr : 0.0;

      Allocation audited = sol.allocation;
      if (spec.inject_failure) {
        audited = refill_budget(audited, r.gains, r.cfg.weights, p, p_tot);
        for (auto& pr : audited.pairs) {
          pr.p_s1 *= 1.01;
          pr.p_s2 *= 1.01;
          pr.p_r *= 1.01;
        }
        for (auto& d : audited.directs_1) d.power *= 1.01;
        for (auto& d : audited.directs_2) d.power *= 1.01;
      }
      c.violation = audit(audited, r.gains, r.cfg.weights, p, p_tot);
      if (auto ov = audit(orc.allocation, r.gains, r.cfg.weights, p, p_tot))
        c.violation = Violation{"oracle " + ov->constraint, ov->detail};

      const auto g = subgradient_profile(r.gains, r.cfg.weights, p_tot, p, 20, opts);
      c.subgrad_monotone = is_monotone(g, kStationaryTolerance * p_tot);

      const double slack = std::max(c.delta * orc.wsr, kOracleTolerance);
      const bool within = sol.report.wsr >= orc.wsr - slack &&
                          sol.report.wsr <= orc.wsr + kOracleTolerance;
      c.passed = within && !c.violation && c.subgrad_monotone;
      rep.max_rel_discrepancy = std::max(rep.max_rel_discrepancy, c.rel_discrepancy);
      rep.passed = rep.passed && c.passed;
      rep.checks.push_back(std::move(c));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline std::string fmt_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// JSON has no infinity; map it to null.
inline nlohmann::json json_real(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace detail

inline constexpr const char* kRecordCsvHeader =
    "seed,protocol,d_km,K,ptot_db,wsr,delta,mode,n_sp_over_k,iterations,wall_time_ms";

inline void write_record_csv(std::ostream& os, const TrialRecord& r) {
  using detail::fmt_real;
  os << r.seed << ',' << to_string(r.protocol) << ',' << fmt_real(r.d_km) << ','
     << r.K << ',' << fmt_real(r.ptot_db) << ',' << fmt_real(r.wsr) << ','
     << fmt_real(r.delta) << ',' << to_string(r.mode) << ','
     << fmt_real(r.n_sp_over_k) << ',' << r.iterations << ','
     << fmt_real(r.wall_time_ms) << '\n';
}

inline void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << kRecordCsvHeader << '\n';
  for (const auto& r : records) write_record_csv(os, r);
}

inline constexpr const char* kSweepCsvHeader =
    "d_km,protocol,K,ptot_db,trials,mean_wsr,mean_n_sp_over_k,mean_delta,"
    "max_delta,max_iterations,exact_exits";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  using detail::fmt_real;
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows)
    os << fmt_real(r.d_km) << ',' << to_string(r.protocol) << ',' << r.K << ','
       << fmt_real(r.ptot_db) << ',' << r.trials << ',' << fmt_real(r.mean_wsr)
       << ',' << fmt_real(r.mean_n_sp_over_k) << ',' << fmt_real(r.mean_delta)
       << ',' << fmt_real(r.max_delta) << ',' << r.max_iterations << ','
       << r.exact_exits << '\n';
}

inline void write_histogram_csv(std::ostream& os, const GapHistogram& h) {
  using detail::fmt_real;
  os << "lo_db,hi_db,count,density\n";
  for (const auto& b : h.bins)
    os << fmt_real(b.lo_db) << ',' << fmt_real(b.hi_db) << ',' << b.count << ','
       << fmt_real(b.density) << '\n';
}

inline nlohmann::json to_json(const SystemConfig& c) {
  return {{"k", c.num_subcarriers},
          {"users", c.num_users},
          {"d_km", c.d_km},
          {"center_km", c.center_km},
          {"region_radius_km", c.region_radius_km},
          {"snr_db", c.ptot_over_sigma2_db},
          {"weights", c.weights},
          {"seed", c.seed},
          {"taps", c.taps},
          {"pathloss_exp", c.pathloss_exp},
          {"d_ref_km", c.d_ref_km}};
}

inline nlohmann::json to_json(const ExperimentSpec& s) {
  nlohmann::json protocols = nlohmann::json::array();
  for (Protocol p : s.protocols) protocols.push_back(std::string(to_string(p)));
  return {{"system", to_json(s.base)},
          {"experiment",
           {{"kind", std::string(to_string(s.kind))},
            {"trials", s.trials},
            {"protocols", protocols},
            {"d_values", s.d_values},
            {"d_range", {s.d_min, s.d_max}},
            {"k_values", s.k_values},
            {"snr_db_range", {s.snr_db_min, s.snr_db_max}},
            {"validate_max_k", s.validate_max_k},
            {"validate_max_users", s.validate_max_users},
            {"eps", s.eps},
            {"refill", s.refill},
            {"bp2_same_user", s.bp2_same_user},
            {"raw", s.raw},
            {"timing", s.timing},
            {"out", s.output_path}}}};
}

inline nlohmann::json to_json(const Allocation& a) {
  nlohmann::json pairs = nlohmann::json::array(), d1 = nlohmann::json::array(),
                 d2 = nlohmann::json::array();
  for (const auto& p : a.pairs)
    pairs.push_back({{"k", p.k}, {"l", p.l}, {"user", p.user},
                     {"p_s1", p.p_s1}, {"p_s2", p.p_s2}, {"p_r", p.p_r}});
  for (const auto& d : a.directs_1)
    d1.push_back({{"k", d.subcarrier}, {"user", d.user}, {"power", d.power}});
  for (const auto& d : a.directs_2)
    d2.push_back({{"l", d.subcarrier}, {"user", d.user}, {"power", d.power}});
  return {{"pairs", pairs}, {"directs_1", d1}, {"directs_2", d2}};
}

inline nlohmann::json to_json(const SolveReport& r, bool with_trace = true) {
  nlohmann::json j = {{"wsr", r.wsr},
                      {"mode", std::string(to_string(r.mode))},
                      {"delta", detail::json_real(r.delta)},
                      {"n_sp", r.n_sp},
                      {"mu_final", r.mu_final},
                      {"iterations", r.iterations},
                      {"dual_bound", r.dual_bound},
                      {"total_power", r.total_power}};
  if (with_trace) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : r.trace) trace.push_back({{"mu", t.mu}, {"subgrad", t.subgrad}});
    j["trace"] = trace;
  }
  return j;
}

inline nlohmann::json to_json(const ValidationReport& rep) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    nlohmann::json j = {{"trial", c.trial},
                        {"seed", c.seed},
                        {"protocol", std::string(to_string(c.protocol))},
                        {"K", c.K},
                        {"U", c.U},
                        {"ptot_db", c.ptot_db},
                        {"solver_wsr", c.solver_wsr},
                        {"oracle_wsr", c.oracle_wsr},
                        {"delta", detail::json_real(c.delta)},
                        {"rel_discrepancy", c.rel_discrepancy},
                        {"subgrad_monotone", c.subgrad_monotone},
                        {"passed", c.passed}};
    if (c.violation)
      j["violation"] = {{"constraint", c.violation->constraint},
                        {"detail", c.violation->detail}};
    checks.push_back(std::move(j));
  }
  return {{"passed", rep.passed},
          {"checks_run", rep.checks.size()},
          {"max_rel_discrepancy", rep.max_rel_discrepancy},
          {"checks", checks}};
}

// ---------------------------------------------------------------------------
// Config file
//
// A JSON document with two optional objects; every key is optional and
// missing keys keep their defaults:
//
//   {
//     "system": {"k": 32, "users": 5, "d_km": 0.5, "center_km": 1.0,
//                "region_radius_km": 0.05, "snr_db": 20, "weights": [...],
//                "seed": 1, "taps": 6, "pathloss_exp": 2.5, "d_ref_km": 1.0},
//     "experiment": {"kind": "sweep", "trials": 1000,
//                    "protocols": ["proposed", "bp1", "bp2"],
//                    "d_values": [0.1, ...], "d_range": [0.1, 0.9],
//                    "k_values": [8, 16, 32, 64, 128],
//                    "snr_db_range": [0, 45], "validate_max_k": 4,
//                    "validate_max_users": 2, "eps": 1e-6,
//                    "refill": false, "bp2_same_user": true, "raw": false,
//                    "timing": false, "out": "results.csv"}
//   }

inline ExperimentKind parse_kind(std::string_view s) {
  if (s == "gap-pdf") return ExperimentKind::GapPdf;
  if (s == "sweep") return ExperimentKind::SweepDistance;
  if (s == "solve") return ExperimentKind::SingleSolve;
  if (s == "validate") return ExperimentKind::Validate;
  throw ConfigError("unknown experiment kind '" + std::string(s) + "'");
}

inline void apply_config(const nlohmann::json& j, ExperimentSpec& spec) {
  try {
    if (j.contains("system")) {
      const auto& s = j.at("system");
      SystemConfig& c = spec.base;
      c.num_subcarriers = s.value("k", c.num_subcarriers);
      c.num_users = s.value("users", c.num_users);
      c.d_km = s.value("d_km", c.d_km);
      c.center_km = s.value("center_km", c.center_km);
      c.region_radius_km = s.value("region_radius_km", c.region_radius_km);
      c.ptot_over_sigma2_db = s.value("snr_db", c.ptot_over_sigma2_db);
      c.weights = s.value("weights", c.weights);
      c.seed = s.value("seed", c.seed);
      c.taps = s.value("taps", c.taps);
      c.pathloss_exp = s.value("pathloss_exp", c.pathloss_exp);
      c.d_ref_km = s.value("d_ref_km", c.d_ref_km);
    }
    if (j.contains("experiment")) {
      const auto& e = j.at("experiment");
      if (e.contains("kind")) spec.kind = parse_kind(e.at("kind").get<std::string>());
      spec.trials = e.value("trials", spec.trials);
      if (e.contains("protocols")) {
        spec.protocols.clear();
        for (const auto& p : e.at("protocols"))
          spec.protocols.push_back(parse_protocol(p.get<std::string>()));
      }
      spec.d_values = e.value("d_values", spec.d_values);
      if (e.contains("d_range")) {
        spec.d_min = e.at("d_range").at(0).get<double>();
        spec.d_max = e.at("d_range").at(1).get<double>();
      }
      spec.k_values = e.value("k_values", spec.k_values);
      if (e.contains("snr_db_range")) {
        spec.snr_db_min = e.at("snr_db_range").at(0).get<double>();
        spec.snr_db_max = e.at("snr_db_range").at(1).get<double>();
      }
      spec.validate_max_k = e.value("validate_max_k", spec.validate_max_k);
      spec.validate_max_users = e.value("validate_max_users", spec.validate_max_users);
      spec.eps = e.value("eps", spec.eps);
      spec.refill = e.value("refill", spec.refill);
      spec.bp2_same_user = e.value("bp2_same_user", spec.bp2_same_user);
      spec.raw = e.value("raw", spec.raw);
      spec.timing = e.value("timing", spec.timing);
      spec.output_path = e.value("out", spec.output_path);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

inline nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// Opens `path` for writing or throws IoError.
inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out) throw IoError(path, "write failed");
}

}  // namespace relay_ofdma
