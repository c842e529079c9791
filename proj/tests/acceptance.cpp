// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "relay_ofdma/relay_ofdma.hpp"
#include "support/brute_force.hpp"

using namespace relay_ofdma;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Shared by criteria 1, 2 and 4.
const std::vector<TrialRecord>& gap_ensemble() {
  static const std::vector<TrialRecord> records = [] {
    ExperimentSpec s;
    s.kind = ExperimentKind::GapPdf;
    s.trials = 10000;
    s.protocols = {Protocol::Proposed, Protocol::Benchmark1};
    return run_gap_pdf(s);
  }();
  return records;
}

Outcome gap_certificate() {
  const auto& rec = gap_ensemble();
  std::size_t approx = 0;
  double worst = 0.0;
  std::size_t over = 0;
  double worst_refilled = 0.0;
  for (const auto& r : rec) {
    if (r.mode != SolveMode::ApproxUpperBound) continue;
    ++approx;
    worst = std::max(worst, r.delta);
    if (r.delta < 0.03) continue;
    // Informational: the same trial with the leftover budget spent.
    ++over;
    ExperimentSpec s;
    s.kind = ExperimentKind::GapPdf;
    s.trials = 1;
    s.protocols = {r.protocol};
    s.base.seed = r.seed;
    s.refill = true;
    worst_refilled = std::max(worst_refilled, run_gap_pdf(s).front().delta);
  }
  std::string detail = fmt("%zu solves, %zu eps-branch exits, max delta %.4g (< 0.03)",
                           rec.size(), approx, worst);
  if (over > 0)
    detail += fmt("; %zu exits >= 0.03, max delta %.4g on those with refill", over,
                  worst_refilled);
  return {worst < 0.03, detail};
}

Outcome iteration_bound() {
  std::size_t worst_all = 0;
  for (const auto& r : gap_ensemble()) worst_all = std::max(worst_all, r.iterations);

  auto worst_at = [](std::vector<std::size_t> ks, double snr_db) {
    ExperimentSpec s;
    s.kind = ExperimentKind::GapPdf;
    s.trials = 300;
    s.protocols = {Protocol::Proposed, Protocol::Benchmark1, Protocol::Benchmark2};
    s.k_values = std::move(ks);
    s.snr_db_min = s.snr_db_max = snr_db;
    s.base.seed = 20000;
    std::size_t worst = 0;
    for (const auto& r : run_gap_pdf(s)) worst = std::max(worst, r.iterations);
    return worst;
  };
  const std::size_t at20 = worst_at({32}, 20.0);
  const std::size_t at45 = worst_at({32}, 45.0);
  return {worst_all <= 28 && at20 <= 20 && at45 <= 12,
          fmt("max iterations: ensemble %zu (<= 28), K=32 20 dB %zu (<= 20), K=32 45 dB %zu (<= 12)",
              worst_all, at20, at45)};
}

Outcome oracle_equivalence() {
  ExperimentSpec s;
  s.kind = ExperimentKind::Validate;
  s.trials = 200;
  s.protocols = {Protocol::Proposed, Protocol::Benchmark1, Protocol::Benchmark2};
  const ValidationReport rep = run_validate(s);
  std::size_t failed = 0;
  double above = 0.0;
  for (const auto& c : rep.checks) {
    // Only the WSR window and feasibility belong to this criterion.
    const double slack = std::max(c.delta * c.oracle_wsr, kOracleTolerance);
    const bool in = c.solver_wsr >= c.oracle_wsr - slack &&
                    c.solver_wsr <= c.oracle_wsr + kOracleTolerance && !c.violation;
    if (!in) ++failed;
    above = std::max(above, c.solver_wsr - c.oracle_wsr);
  }
  return {failed == 0,
          fmt("%zu instances x 3 protocols, %zu outside window, max solver-oracle %.3g",
              s.trials, failed, above)};
}

Outcome protocol_dominance() {
  SplitMix64 rng(4000);
  auto draw = [&] { return std::pow(10.0, rng.uniform(-2.0, 2.0)); };
  std::size_t bad_order = 0, bad_equality = 0, equal = 0;
  for (int i = 0; i < 1000000; ++i) {
    LinkGains g{draw(), draw(), draw(), draw()};
    if (i % 10 == 0) g.g_su_l = 0.0;
    if (i % 20 == 1) g.g_su_k = g.g_sr;
    const double a = effective_gain_proposed(g), b = effective_gain_benchmark(g);
    const bool cond_p = std::min(g.g_sr, g.sum_l()) > g.g_su_k;
    const bool cond_b = std::min(g.g_sr, g.g_ru_l) > g.g_su_k;
    const bool coincide = (!cond_p && !cond_b) || (cond_p && cond_b && g.g_su_l == 0.0);
    if (a < b) ++bad_order;
    if ((a == b) != coincide) ++bad_equality;
    if (a == b) ++equal;
  }

  const auto& rec = gap_ensemble();
  std::size_t bad_wsr = 0, instances = 0;
  for (std::size_t i = 0; i + 1 < rec.size() && instances < 1000; i += 2, ++instances) {
    const TrialRecord& p = rec[i];
    const TrialRecord& b = rec[i + 1];
    const double scale = std::min(p.wsr, b.wsr);
    if (p.wsr < b.wsr - (p.delta + b.delta) * scale) ++bad_wsr;
  }
  return {bad_order == 0 && bad_equality == 0 && bad_wsr == 0 && instances == 1000,
          fmt("1e6 tuples: %zu order violations, %zu equality mismatches (%zu equal); "
              "%zu instances: %zu wsr violations",
              bad_order, bad_equality, equal, instances, bad_wsr)};
}

Outcome split_optimality() {
  SplitMix64 rng(5000);
  constexpr int kGrid = 200;
  std::size_t grid_over = 0, closed_miss = 0, checked = 0;
  double worst_excess = -1.0, worst_rel = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const LinkGains g = brute::random_link(rng);
    for (double P : {0.1, 1.0, 10.0}) {
      for (Protocol proto : {Protocol::Proposed, Protocol::Benchmark1}) {
        ++checked;
        const double target = effective_gain(g, proto) * P;
        const double grid = brute::grid_pair_snr(g, P, proto, kGrid);
        const double h = P / (kGrid - 1);
        const double resolution = h * std::max({g.g_sr, g.g_su_k, g.sum_l()});
        worst_excess = std::max(worst_excess, (grid - target) / resolution);
        if (grid > target + resolution) ++grid_over;

        const PairSplit s = optimal_split(g, P, proto);
        const double snr = pair_snr(g, s.p_s1, s.p_s2, s.p_r);
        const double rel = std::abs(snr - target) / std::max(target, 1e-300);
        worst_rel = std::max(worst_rel, target > 0 ? rel : std::abs(snr));
        if (target > 0 ? rel > 1e-9 : snr != 0.0) ++closed_miss;
      }
    }
  }
  return {grid_over == 0 && closed_miss == 0,
          fmt("%zu cases: grid above closed form in %zu (max excess %.3g resolutions), "
              "closed form off by > 1e-9 in %zu (max rel %.3g)",
              checked, grid_over, worst_excess, closed_miss, worst_rel)};
}

Outcome sweep_shape() {
  ExperimentSpec s;
  s.kind = ExperimentKind::SweepDistance;
  s.trials = 1000;
  s.protocols = {Protocol::Proposed, Protocol::Benchmark1, Protocol::Benchmark2};
  s.base.num_subcarriers = 32;
  s.base.ptot_over_sigma2_db = 20.0;
  const auto rows20 = run_sweep_distance(s).rows;
  s.base.ptot_over_sigma2_db = 45.0;
  const auto rows45 = run_sweep_distance(s).rows;

  const std::size_t D = s.d_values.size();
  auto at = [&](const std::vector<SweepRow>& rows, std::size_t di, std::size_t pi) {
    return rows[di * 3 + pi];
  };
  bool ordered = true;
  for (std::size_t d = 0; d < D; ++d)
    ordered = ordered && at(rows20, d, 0).mean_wsr >= at(rows20, d, 1).mean_wsr &&
              at(rows20, d, 1).mean_wsr >= at(rows20, d, 2).mean_wsr;
  const double gap_near = at(rows20, 0, 0).mean_wsr - at(rows20, 0, 1).mean_wsr;
  const double gap_far = at(rows20, D - 1, 0).mean_wsr - at(rows20, D - 1, 1).mean_wsr;

  bool interior = true;
  std::string peaks;
  for (std::size_t p = 0; p < 3; ++p) {
    std::size_t best = 0;
    for (std::size_t d = 1; d < D; ++d)
      if (at(rows20, d, p).mean_n_sp_over_k > at(rows20, best, p).mean_n_sp_over_k) best = d;
    interior = interior && best > 0 && best + 1 < D;
    peaks += fmt(" %s@%.1f", std::string(to_string(at(rows20, 0, p).protocol)).c_str(),
                 s.d_values[best]);
  }
  double high_nsp = 0.0;
  for (const auto& r : rows45) high_nsp = std::max(high_nsp, r.mean_n_sp_over_k);

  return {ordered && gap_near > gap_far && interior && high_nsp < 0.05,
          fmt("ordering %s; P-BP1 gap d=0.1 %.4f vs d=0.9 %.4f; N_sp/K peaks%s; "
              "45 dB max mean N_sp/K %.4f (< 0.05)",
              ordered ? "holds" : "broken", gap_near, gap_far, peaks.c_str(), high_nsp)};
}

Outcome lemma_monotonicity() {
  std::size_t violations = 0, profiles = 0;
  double worst = 0.0;
  const std::vector<std::size_t> ks{8, 16, 32, 64, 128};
  for (std::uint64_t t = 0; t < 100; ++t) {
    SplitMix64 trial(7000 + t);
    auto scenario = trial.split();
    auto channel = trial.split();
    SystemConfig cfg;
    cfg.d_km = scenario.uniform(0.1, 0.9);
    cfg.num_subcarriers = ks[scenario.below(ks.size())];
    cfg.ptot_over_sigma2_db = scenario.uniform(0.0, 45.0);
    cfg.weights = draw_weights(cfg.num_users, scenario);
    const auto r = realize(cfg, channel);
    const double P = power_budget(r.cfg);
    for (Protocol p : {Protocol::Proposed, Protocol::Benchmark1, Protocol::Benchmark2}) {
      ++profiles;
      const auto g = subgradient_profile(r.gains, r.cfg.weights, P, p, 20);
      for (std::size_t i = 1; i < g.size(); ++i)
        worst = std::max(worst, (g[i - 1] - g[i]) / P);
      if (!is_monotone(g, kStationaryTolerance * P)) ++violations;
    }
  }
  return {violations == 0,
          fmt("%zu profiles of 20 prices, %zu non-monotone, max drop %.3g P_tot", profiles,
              violations, worst)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  ExperimentSpec g;
  g.kind = ExperimentKind::GapPdf;
  g.trials = 200;
  g.protocols = {Protocol::Proposed, Protocol::Benchmark1, Protocol::Benchmark2};
  auto gap_csv = [&] {
    std::ostringstream os;
    write_records_csv(os, run_gap_pdf(g));
    return os.str();
  };
  ExperimentSpec s;
  s.kind = ExperimentKind::SweepDistance;
  s.trials = 20;
  s.protocols = g.protocols;
  s.raw = true;
  auto sweep_csv = [&] {
    const auto res = run_sweep_distance(s);
    std::ostringstream os;
    write_sweep_csv(os, res.rows);
    write_records_csv(os, res.records);
    return os.str();
  };
  bool same = gap_csv() == gap_csv() && sweep_csv() == sweep_csv();
  std::string how = "library gap-pdf and sweep CSV";

#ifdef RELAY_RA_PATH
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "relay_ofdma_acceptance";
  fs::create_directories(dir);
  for (const char* sub : {"gap-pdf --trials 50", "sweep --trials 10 --raw"}) {
    const std::string out_a = (dir / "a.csv").string(), out_b = (dir / "b.csv").string();
    const std::string base = std::string(RELAY_RA_PATH) + " " + sub + " --out ";
    const int ra = std::system((base + out_a + " 2>/dev/null").c_str());
    const int rb = std::system((base + out_b + " 2>/dev/null").c_str());
    same = same && ra == 0 && rb == 0 && slurp(out_a) == slurp(out_b) &&
           !slurp(out_a).empty();
  }
  fs::remove_all(dir);
  how += ", CLI gap-pdf and sweep output";
#endif
  return {same, how + (same ? " byte-identical on repeat" : " differ on repeat")};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion all[] = {
      {1, "gap certificate", gap_certificate},
      {2, "iteration bound", iteration_bound},
      {3, "oracle equivalence", oracle_equivalence},
      {4, "protocol dominance", protocol_dominance},
      {5, "closed-form split optimality", split_optimality},
      {6, "sweep shape", sweep_shape},
      {7, "subgradient monotonicity", lemma_monotonicity},
      {8, "determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  bool ok = true;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << "  "
              << c.name << ": " << o.detail << fmt(" [%.1fs]", secs) << std::endl;
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
