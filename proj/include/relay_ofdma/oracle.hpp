#pragma once

// Exhaustive reference optimizer for tiny instances.
//
// Every discrete structure is enumerated: a partial matching between slot-1
// and slot-2 subcarriers (the relay-aided pairs), a user for each pair, and a
// user for every unmatched subcarrier in each slot. For a fixed structure the
// objective is a sum of concave single-channel rates, so the power problem is
// solved exactly by water-filling on a scalar level. Nothing here touches the
// dual solver's price machinery.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "relay_ofdma/allocation.hpp"
#include "relay_ofdma/channel.hpp"
#include "relay_ofdma/errors.hpp"
#include "relay_ofdma/pair_gains.hpp"
#include "relay_ofdma/protocol.hpp"

namespace relay_ofdma {

inline constexpr std::size_t kOracleMaxSubcarriers = 5;
inline constexpr std::size_t kOracleMaxUsers = 3;

/// One discrete structure. `partner[k]` is the slot-2 subcarrier paired with
/// k, or -1 when k is direct.
struct Configuration {
  std::vector<int> partner;             // K
  std::vector<std::size_t> pair_user;   // K, meaningful where partner[k] >= 0
  std::vector<std::size_t> user_1;      // K, slot-1 direct user where unpaired
  std::vector<std::size_t> user_2;      // K, slot-2 direct user where unpaired
};

struct OracleOptions {
  bool bp2_same_user = true;
};

inline void check_oracle_size(std::size_t K, std::size_t U) {
  if (K < 1 || U < 1 || K > kOracleMaxSubcarriers || U > kOracleMaxUsers)
    throw ConfigError("oracle: instance too large (need 1 <= K <= 5, 1 <= U <= 3)");
}

namespace detail {

struct ConfigurationWalker {
  std::size_t K, U;
  Protocol protocol;
  OracleOptions opts;
  const std::function<void(const Configuration&)>& visit;
  Configuration cfg;
  std::vector<char> slot2_taken;

  // Phase 1: choose partner (or none) for each k in order.
  void pairing(std::size_t k) {
    if (k == K) {
      users(0);
      return;
    }
    cfg.partner[k] = -1;
    pairing(k + 1);
    for (std::size_t l = 0; l < K; ++l) {
      if (slot2_taken[l]) continue;
      if (protocol == Protocol::Benchmark2 && l != k) continue;
      slot2_taken[l] = 1;
      cfg.partner[k] = static_cast<int>(l);
      pairing(k + 1);
      slot2_taken[l] = 0;
    }
    cfg.partner[k] = -1;
  }

  // Phase 2: assign users. Position i walks pair users, slot-1 directs and
  // slot-2 directs as one odometer.
  void users(std::size_t i) {
    if (i == 3 * K) {
      visit(cfg);
      return;
    }
    const std::size_t what = i / K, k = i % K;
    const bool paired = cfg.partner[k] >= 0;
    if (what == 0) {
      if (!paired) return users(i + 1);
      for (std::size_t u = 0; u < U; ++u) {
        cfg.pair_user[k] = u;
        users(i + 1);
      }
      cfg.pair_user[k] = 0;
    } else if (what == 1) {
      if (paired) return users(i + 1);
      for (std::size_t u = 0; u < U; ++u) {
        cfg.user_1[k] = u;
        users(i + 1);
      }
      cfg.user_1[k] = 0;
    } else {
      const std::size_t l = k;
      const bool taken = slot2_taken[l] != 0;
      if (taken) return users(i + 1);
      if (protocol == Protocol::Benchmark2 && opts.bp2_same_user) {
        // Identity pairing: unpaired l is the slot-2 half of couple (l, l).
        cfg.user_2[l] = cfg.user_1[l];
        return users(i + 1);
      }
      for (std::size_t u = 0; u < U; ++u) {
        cfg.user_2[l] = u;
        users(i + 1);
      }
      cfg.user_2[l] = 0;
    }
  }
};

}  // namespace detail

/// Calls `visit` once per discrete structure, in a fixed order.
inline std::uint64_t enumerate_configurations(
    std::size_t K, std::size_t U, Protocol protocol,
    const std::function<void(const Configuration&)>& visit,
    const OracleOptions& opts = {}) {
  check_oracle_size(K, U);
  std::uint64_t count = 0;
  std::function<void(const Configuration&)> counting =
      [&](const Configuration& c) {
        ++count;
        visit(c);
      };
  detail::ConfigurationWalker w{K, U, protocol, opts, counting, {}, {}};
  w.cfg.partner.assign(K, -1);
  w.cfg.pair_user.assign(K, 0);
  w.cfg.user_1.assign(K, 0);
  w.cfg.user_2.assign(K, 0);
  w.slot2_taken.assign(K, 0);
  w.pairing(0);
  return count;
}

struct WaterFillChannel {
  double weight = 0.0;
  double gain = 0.0;
};

/// Maximizes sum_i w_i R(G_i p_i) s.t. sum_i p_i = budget, p >= 0.
///
/// p_i = [w_i * level - 1/G_i]^+ ; the level is found by bisection and then
/// snapped to the exact value for the final active set so the budget is met.
inline std::vector<double> water_fill(std::span<const WaterFillChannel> ch,
                                      double budget) {
  std::vector<double> p(ch.size(), 0.0);
  double min_w = std::numeric_limits<double>::infinity(), max_inv = 0.0;
  bool any = false;
  for (const auto& c : ch) {
    if (!(c.gain > 0.0)) continue;
    any = true;
    min_w = std::min(min_w, c.weight);
    max_inv = std::max(max_inv, 1.0 / c.gain);
  }
  if (!any || budget <= 0.0) return p;

  auto spend = [&](double level) {
    double s = 0.0;
    for (const auto& c : ch)
      if (c.gain > 0.0) s += std::max(c.weight * level - 1.0 / c.gain, 0.0);
    return s;
  };
  double lo = 0.0, hi = (budget + max_inv) / min_w;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (spend(mid) < budget ? lo : hi) = mid;
  }
  // Exact level on the active set at `hi`.
  double sum_w = 0.0, sum_inv = 0.0;
  for (const auto& c : ch)
    if (c.gain > 0.0 && c.weight * hi - 1.0 / c.gain > 0.0) {
      sum_w += c.weight;
      sum_inv += 1.0 / c.gain;
    }
  const double level = (budget + sum_inv) / sum_w;
  for (std::size_t i = 0; i < ch.size(); ++i)
    if (ch[i].gain > 0.0)
      p[i] = std::max(ch[i].weight * level - 1.0 / ch[i].gain, 0.0);
  // Guard the last ulp so the result never exceeds the budget.
  double total = 0.0;
  for (double x : p) total += x;
  if (total > budget)
    for (double& x : p) x *= budget / total;
  return p;
}

struct OracleResult {
  double wsr = 0.0;
  Allocation allocation;
  std::uint64_t enumerated = 0;
};

inline OracleResult oracle_solve(const GainTable& gains,
                                 std::span<const double> weights, double p_tot,
                                 Protocol protocol,
                                 const OracleOptions& opts = {}) {
  validate(gains);
  const std::size_t K = gains.num_subcarriers(), U = gains.num_users();
  check_oracle_size(K, U);
  if (weights.size() != U) throw ConfigError("oracle: one weight per user");

  OracleResult best;
  best.wsr = -1.0;
  std::vector<WaterFillChannel> ch;
  best.enumerated = enumerate_configurations(
      K, U, protocol,
      [&](const Configuration& c) {
        ch.clear();
        for (std::size_t k = 0; k < K; ++k)
          if (c.partner[k] >= 0) {
            const auto l = static_cast<std::size_t>(c.partner[k]);
            const std::size_t u = c.pair_user[k];
            ch.push_back({weights[u], effective_gain(link_gains(gains, k, l, u), protocol)});
          }
        for (std::size_t k = 0; k < K; ++k)
          if (c.partner[k] < 0)
            ch.push_back({weights[c.user_1[k]], gains.g_su(k, c.user_1[k])});
        std::vector<char> taken(K, 0);
        for (std::size_t k = 0; k < K; ++k)
          if (c.partner[k] >= 0) taken[static_cast<std::size_t>(c.partner[k])] = 1;
        for (std::size_t l = 0; l < K; ++l)
          if (!taken[l]) ch.push_back({weights[c.user_2[l]], gains.g_su(l, c.user_2[l])});

        const auto p = water_fill(ch, p_tot);
        double wsr = 0.0;
        for (std::size_t i = 0; i < ch.size(); ++i)
          wsr += ch[i].weight * rate(ch[i].gain * p[i]);
        if (wsr <= best.wsr) return;

        best.wsr = wsr;
        Allocation a;
        std::size_t i = 0;
        for (std::size_t k = 0; k < K; ++k)
          if (c.partner[k] >= 0) {
            const auto l = static_cast<std::size_t>(c.partner[k]);
            const std::size_t u = c.pair_user[k];
            const PairSplit s = optimal_split(link_gains(gains, k, l, u), p[i++], protocol);
            a.pairs.push_back({k, l, u, s.p_s1, s.p_s2, s.p_r});
          }
        for (std::size_t k = 0; k < K; ++k)
          if (c.partner[k] < 0) a.directs_1.push_back({k, c.user_1[k], p[i++]});
        for (std::size_t l = 0; l < K; ++l)
          if (!taken[l]) a.directs_2.push_back({l, c.user_2[l], p[i++]});
        best.allocation = std::move(a);
      },
      {opts.bp2_same_user});
  return best;
}

}  // namespace relay_ofdma
