#pragma once

// Dual method for joint subcarrier pairing, mode selection, user assignment
// and power allocation.
//
// For a price mu on the total power, the Lagrangian separates per subcarrier
// couple (k, l): the couple either serves one user through the relay with
// effective gain G_klu, or serves user a on k and user b on l directly. Each
// channel's best power is the water-filling level Lambda(w, mu, G), and the
// best value of couple (k, l) is C_kl. Choosing couples is then a K x K
// assignment problem. The outer loop bisects mu on the sign of the
// subgradient P_tot - (allocated power), which is nondecreasing in mu.
//
// When bisection stops on the bracket width, the allocation recovered at the
// upper end mu_max is feasible, and
//   delta = (d(mu_max) - f) / f = mu_max * g(mu_max) / f
// bounds its relative distance to the optimum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "relay_ofdma/allocation.hpp"
#include "relay_ofdma/assignment.hpp"
#include "relay_ofdma/channel.hpp"
#include "relay_ofdma/matrix.hpp"
#include "relay_ofdma/pair_gains.hpp"
#include "relay_ofdma/protocol.hpp"

namespace relay_ofdma {

inline constexpr double kLog2e = std::numbers::log2e;

/// Effective relay-aided gains G_klu for every (k, l, u), plus the raw link
/// gains they came from.
class PairGainTable {
 public:
  PairGainTable(const GainTable& gains, Protocol protocol)
      : protocol_(protocol), gains_(gains) {
    validate(gains_);
    const std::size_t K = num_subcarriers(), U = num_users();
    g_eff_.resize(K * K * U);
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t l = 0; l < K; ++l)
        for (std::size_t u = 0; u < U; ++u)
          g_eff_[index(k, l, u)] =
              effective_gain(link_gains(gains_, k, l, u), protocol_);
  }

  std::size_t num_subcarriers() const noexcept { return gains_.num_subcarriers(); }
  std::size_t num_users() const noexcept { return gains_.num_users(); }
  Protocol protocol() const noexcept { return protocol_; }
  const GainTable& gains() const noexcept { return gains_; }

  double operator()(std::size_t k, std::size_t l, std::size_t u) const noexcept {
    return g_eff_[index(k, l, u)];
  }
  double direct_1(std::size_t k, std::size_t u) const noexcept {
    return gains_.g_su(k, u);
  }
  double direct_2(std::size_t l, std::size_t u) const noexcept {
    return gains_.g_su(l, u);
  }

  std::span<const double> entries() const noexcept { return g_eff_; }

 private:
  std::size_t index(std::size_t k, std::size_t l, std::size_t u) const noexcept {
    return (k * num_subcarriers() + l) * num_users() + u;
  }

  Protocol protocol_;
  GainTable gains_;
  std::vector<double> g_eff_;
};

inline PairGainTable build_pair_gain_table(const GainTable& gains,
                                           Protocol protocol) {
  return PairGainTable(gains, protocol);
}

/// Water-filling power [w log2(e) / (2 mu) - 1/G]^+ ; zero for a dead channel.
inline double lambda_power(double w, double mu, double G) noexcept {
  if (!(G > 0.0)) return 0.0;
  return std::max(w * kLog2e / (2.0 * mu) - 1.0 / G, 0.0);
}

/// max_x { w R(G x) - mu x } over x >= 0, attained at lambda_power.
inline double channel_value(double w, double mu, double G) {
  const double x = lambda_power(w, mu, G);
  if (x == 0.0) return 0.0;
  return w * rate(G * x) - mu * x;
}

/// Upper bound on the optimal price: mu* <= K w_max log2(e) / P_tot.
inline double mu_upper_bound(std::size_t K, double w_max, double p_tot) {
  return static_cast<double>(K) * w_max * kLog2e / p_tot;
}

/// Bisection iterations needed to shrink [0, upper] below eps.
inline std::size_t bisection_iteration_bound(double upper, double eps) {
  if (upper <= eps) return 0;
  return static_cast<std::size_t>(std::ceil(std::log2(upper / eps)));
}

struct SolverOptions {
  double eps = 1e-6;
  bool refill = false;
  bool bp2_same_user = true;
};

enum class CoupleMode { Relay, Direct };

/// Argmax record of C_kl. For Relay only `user_a` is meaningful.
struct CoupleChoice {
  CoupleMode mode = CoupleMode::Direct;
  std::size_t user_a = 0;
  std::size_t user_b = 0;
};

struct LrpMetrics {
  Matrix<double> C;              // K x K
  Matrix<CoupleChoice> choice;   // K x K
};

namespace detail {

struct BestDirect {
  double value = 0.0;
  std::size_t user = 0;
};

// max_u channel_value over users on one subcarrier; lower index wins ties.
inline BestDirect best_direct(const PairGainTable& table,
                              std::span<const double> weights, double mu,
                              std::size_t sc) {
  BestDirect best;
  for (std::size_t u = 0; u < table.num_users(); ++u) {
    const double v = channel_value(weights[u], mu, table.direct_1(sc, u));
    if (v > best.value) best = {v, u};
  }
  return best;
}

}  // namespace detail

/// Per-couple metrics C_kl = max{max_u A_klu, max_{a,b} B_klab}.
///
/// B_klab is additively separable in a and b, so its maximum is the sum of
/// per-slot maxima and the U^2 tensor is never formed. Under BP-2 with
/// `bp2_same_user`, the diagonal direct metric is restricted to a = b.
/// Relay-aided wins ties at a positive metric; a zero metric means nothing
/// on the couple is worth power and the couple stays direct and unpowered.
inline LrpMetrics lrp_metrics(const PairGainTable& table,
                              std::span<const double> weights, double mu,
                              const SolverOptions& opts = {}) {
  const std::size_t K = table.num_subcarriers(), U = table.num_users();
  std::vector<detail::BestDirect> slot(K);
  for (std::size_t k = 0; k < K; ++k)
    slot[k] = detail::best_direct(table, weights, mu, k);

  const bool same_user =
      table.protocol() == Protocol::Benchmark2 && opts.bp2_same_user;

  LrpMetrics m{Matrix<double>(K, K), Matrix<CoupleChoice>(K, K)};
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t l = 0; l < K; ++l) {
      double relay = 0.0;
      std::size_t relay_user = 0;
      for (std::size_t u = 0; u < U; ++u) {
        const double a = channel_value(weights[u], mu, table(k, l, u));
        if (a > relay) {
          relay = a;
          relay_user = u;
        }
      }
      CoupleChoice direct_choice{CoupleMode::Direct, slot[k].user, slot[l].user};
      double direct = slot[k].value + slot[l].value;
      if (same_user && k == l) {
        direct = 0.0;
        direct_choice.user_a = direct_choice.user_b = 0;
        for (std::size_t u = 0; u < U; ++u) {
          const double v = channel_value(weights[u], mu, table.direct_1(k, u)) +
                           channel_value(weights[u], mu, table.direct_2(l, u));
          if (v > direct) {
            direct = v;
            direct_choice.user_a = direct_choice.user_b = u;
          }
        }
      }
      if (relay > 0.0 && relay >= direct) {
        m.C(k, l) = relay;
        m.choice(k, l) = {CoupleMode::Relay, relay_user, relay_user};
      } else {
        m.C(k, l) = direct;
        m.choice(k, l) = direct_choice;
      }
    }
  }
  return m;
}

struct LrpSolution {
  Allocation allocation;
  double lagrangian = 0.0;  // d(mu) = mu P_tot + sum_k C_k,perm(k)
  double subgrad = 0.0;     // P_tot - allocated power
  double power = 0.0;
};

namespace detail {

inline Allocation materialize(const PairGainTable& table,
                              std::span<const double> weights, double mu,
                              const LrpMetrics& m,
                              std::span<const std::size_t> perm) {
  const GainTable& gains = table.gains();
  Allocation alloc;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    const std::size_t l = perm[k];
    const CoupleChoice& c = m.choice(k, l);
    if (c.mode == CoupleMode::Relay) {
      const std::size_t u = c.user_a;
      const double P = lambda_power(weights[u], mu, table(k, l, u));
      const PairSplit s =
          optimal_split(link_gains(gains, k, l, u), P, table.protocol());
      alloc.pairs.push_back({k, l, u, s.p_s1, s.p_s2, s.p_r});
    } else {
      alloc.directs_1.push_back(
          {k, c.user_a, lambda_power(weights[c.user_a], mu, table.direct_1(k, c.user_a))});
      alloc.directs_2.push_back(
          {l, c.user_b, lambda_power(weights[c.user_b], mu, table.direct_2(l, c.user_b))});
    }
  }
  return alloc;
}

}  // namespace detail

/// Maximizes the Lagrangian at price `mu` > 0.
inline LrpSolution solve_lrp(const PairGainTable& table,
                             std::span<const double> weights, double mu,
                             double p_tot, const SolverOptions& opts = {}) {
  if (!(mu > 0.0)) throw std::domain_error("solve_lrp: mu must be positive");
  const LrpMetrics m = lrp_metrics(table, weights, mu, opts);
  const std::size_t K = table.num_subcarriers();

  std::vector<std::size_t> perm(K);
  double value = 0.0;
  if (table.protocol() == Protocol::Benchmark2) {
    for (std::size_t k = 0; k < K; ++k) {
      perm[k] = k;
      value += m.C(k, k);
    }
  } else {
    AssignmentResult a = solve_max_assignment(m.C);
    perm = std::move(a.perm);
    value = a.value;
  }

  LrpSolution sol;
  sol.allocation = detail::materialize(table, weights, mu, m, perm);
  sol.power = sol.allocation.total_power();
  sol.subgrad = p_tot - sol.power;
  sol.lagrangian = mu * p_tot + value;
  return sol;
}

enum class SolveMode { ExactStationary, ApproxUpperBound };

inline constexpr std::string_view to_string(SolveMode m) noexcept {
  return m == SolveMode::ExactStationary ? "exact" : "approx";
}

struct TraceEntry {
  double mu = 0.0;
  double subgrad = 0.0;
};

struct SolveReport {
  double wsr = 0.0;
  SolveMode mode = SolveMode::ApproxUpperBound;
  double delta = 0.0;
  std::size_t n_sp = 0;
  double mu_final = 0.0;
  std::size_t iterations = 0;
  std::vector<TraceEntry> trace;
  double dual_bound = 0.0;   // d(mu_final)
  double total_power = 0.0;
};

struct SolveResult {
  Allocation allocation;
  SolveReport report;
};

/// |subgrad| at or below this fraction of P_tot counts as stationary.
inline constexpr double kStationaryTolerance = 1e-9;

/// Water-fills the full budget over the fixed structure of `alloc` (same
/// pairs, users and modes), then re-splits every pair. Never spends more
/// than `p_tot`.
inline Allocation refill_budget(const Allocation& alloc, const GainTable& gains,
                                std::span<const double> weights,
                                Protocol protocol, double p_tot) {
  struct Channel {
    double w, G;
  };
  std::vector<Channel> ch;
  for (const auto& p : alloc.pairs)
    ch.push_back({weights[p.user],
                  effective_gain(link_gains(gains, p.k, p.l, p.user), protocol)});
  for (const auto& d : alloc.directs_1)
    ch.push_back({weights[d.user], gains.g_su(d.subcarrier, d.user)});
  for (const auto& d : alloc.directs_2)
    ch.push_back({weights[d.user], gains.g_su(d.subcarrier, d.user)});

  auto demand = [&](double mu) {
    double s = 0.0;
    for (const auto& c : ch) s += lambda_power(c.w, mu, c.G);
    return s;
  };
  if (std::ranges::none_of(ch, [](const Channel& c) { return c.G > 0.0; }))
    return alloc;
  double w_max = 0.0;
  for (const auto& c : ch) w_max = std::max(w_max, c.w);
  // Demand at this price is at most p_tot.
  double hi = mu_upper_bound(gains.num_subcarriers(), w_max, p_tot);
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (demand(mid) > p_tot ? lo : hi) = mid;
  }

  Allocation out = alloc;
  std::size_t i = 0;
  for (auto& p : out.pairs) {
    const double P = lambda_power(ch[i].w, hi, ch[i].G);
    ++i;
    const PairSplit s = optimal_split(link_gains(gains, p.k, p.l, p.user), P, protocol);
    p.p_s1 = s.p_s1;
    p.p_s2 = s.p_s2;
    p.p_r = s.p_r;
  }
  for (auto& d : out.directs_1) {
    d.power = lambda_power(ch[i].w, hi, ch[i].G);
    ++i;
  }
  for (auto& d : out.directs_2) {
    d.power = lambda_power(ch[i].w, hi, ch[i].G);
    ++i;
  }
  return out;
}

/// Bisection on the power price. Throws ConfigError on a non-positive budget,
/// a non-positive eps, an empty table or bad weights.
inline SolveResult solve(const GainTable& gains, std::span<const double> weights,
                         double p_tot, Protocol protocol,
                         const SolverOptions& opts = {}) {
  if (!(p_tot > 0.0) || !std::isfinite(p_tot))
    throw ConfigError("solve: P_tot must be positive");
  if (!(opts.eps > 0.0)) throw ConfigError("solve: eps must be positive");
  validate(gains);
  if (weights.size() != gains.num_users())
    throw ConfigError("solve: expected one weight per user");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw ConfigError("solve: weights must be strictly positive");

  const PairGainTable table(gains, protocol);
  const std::size_t K = table.num_subcarriers();
  SolveResult result;
  SolveReport& rep = result.report;

  const bool dead = std::ranges::none_of(table.entries(), [](double g) { return g > 0.0; }) &&
                    std::ranges::none_of(gains.g_su.data(), [](double g) { return g > 0.0; });
  if (dead) {
    // Nothing can carry a bit; the empty-power allocation is optimal.
    for (std::size_t k = 0; k < K; ++k) {
      result.allocation.directs_1.push_back({k, 0, 0.0});
      result.allocation.directs_2.push_back({k, 0, 0.0});
    }
    rep.mode = SolveMode::ExactStationary;
    return result;
  }

  const double w_max = *std::ranges::max_element(weights);
  double lo = 0.0;
  double hi = mu_upper_bound(K, w_max, p_tot);

  LrpSolution final_sol;
  bool stationary = false;
  while (hi - lo > opts.eps) {
    const double mid = 0.5 * (lo + hi);
    LrpSolution sol = solve_lrp(table, weights, mid, p_tot, opts);
    ++rep.iterations;
    rep.trace.push_back({mid, sol.subgrad});
    if (std::abs(sol.subgrad) <= kStationaryTolerance * p_tot) {
      final_sol = std::move(sol);
      rep.mu_final = mid;
      stationary = true;
      break;
    }
    (sol.subgrad > 0.0 ? hi : lo) = mid;
  }
  if (!stationary) {
    final_sol = solve_lrp(table, weights, hi, p_tot, opts);
    rep.mu_final = hi;
  }

  result.allocation = std::move(final_sol.allocation);
  if (opts.refill)
    result.allocation = refill_budget(result.allocation, gains, weights, protocol, p_tot);

  rep.dual_bound = final_sol.lagrangian;
  rep.wsr = evaluate_wsr(result.allocation, gains, weights, protocol, p_tot);
  rep.total_power = result.allocation.total_power();
  rep.n_sp = result.allocation.pairs.size();
  if (stationary) {
    rep.mode = SolveMode::ExactStationary;
    rep.delta = 0.0;
  } else {
    rep.mode = SolveMode::ApproxUpperBound;
    rep.delta = rep.wsr > 0.0
                    ? std::max(0.0, (rep.dual_bound - rep.wsr) / rep.wsr)
                    : std::numeric_limits<double>::infinity();
  }
  return result;
}

}  // namespace relay_ofdma
