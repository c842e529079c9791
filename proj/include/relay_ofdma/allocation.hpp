#pragma once

// A materialized resource allocation and its feasibility audit.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relay_ofdma/channel.hpp"
#include "relay_ofdma/errors.hpp"
#include "relay_ofdma/pair_gains.hpp"
#include "relay_ofdma/protocol.hpp"

namespace relay_ofdma {

/// Subcarrier k (slot 1) paired with l (slot 2), relaying to `user`.
struct RelayPair {
  std::size_t k = 0;
  std::size_t l = 0;
  std::size_t user = 0;
  double p_s1 = 0.0;
  double p_s2 = 0.0;
  double p_r = 0.0;

  double total() const noexcept { return p_s1 + p_s2 + p_r; }
};

/// Direct source transmission on one subcarrier in one slot.
struct DirectChannel {
  std::size_t subcarrier = 0;
  std::size_t user = 0;
  double power = 0.0;
};

struct Allocation {
  std::vector<RelayPair> pairs;
  std::vector<DirectChannel> directs_1;  // slot 1, indexed by k
  std::vector<DirectChannel> directs_2;  // slot 2, indexed by l

  double total_power() const noexcept {
    double sum = 0.0;
    for (const auto& p : pairs) sum += p.total();
    for (const auto& d : directs_1) sum += d.power;
    for (const auto& d : directs_2) sum += d.power;
    return sum;
  }
};

inline LinkGains link_gains(const GainTable& gains, std::size_t k,
                            std::size_t l, std::size_t u) noexcept {
  return {gains.g_sr[k], gains.g_su(k, u), gains.g_su(l, u), gains.g_ru(l, u)};
}

struct Violation {
  std::string constraint;
  std::string detail;
};

/// Relative slack allowed on the power budget.
inline constexpr double kBudgetTolerance = 1e-9;

/// Returns the first violated constraint, or nothing if `alloc` is feasible
/// for `protocol` under the budget `p_tot`.
inline std::optional<Violation> audit(const Allocation& alloc,
                                      const GainTable& gains,
                                      std::span<const double> weights,
                                      Protocol protocol, double p_tot) {
  const std::size_t K = gains.num_subcarriers();
  const std::size_t U = gains.num_users();
  if (weights.size() != U)
    return Violation{"weights", "expected one weight per user"};

  std::vector<int> used1(K, 0), used2(K, 0);
  auto bad_power = [](double p) { return !std::isfinite(p) || p < 0.0; };
  auto idx = [](std::size_t i) { return std::to_string(i); };

  for (const auto& p : alloc.pairs) {
    if (p.k >= K || p.l >= K || p.user >= U)
      return Violation{"index range", "pair (" + idx(p.k) + "," + idx(p.l) + ")"};
    ++used1[p.k];
    ++used2[p.l];
    if (bad_power(p.p_s1) || bad_power(p.p_s2) || bad_power(p.p_r))
      return Violation{"non-negative power", "pair (" + idx(p.k) + "," + idx(p.l) + ")"};
    if (protocol == Protocol::Benchmark2 && p.k != p.l)
      return Violation{"identity pairing", "pair (" + idx(p.k) + "," + idx(p.l) + ")"};
    if (!uses_beamforming(protocol) && p.p_s2 != 0.0)
      return Violation{"no slot-2 source power",
                       "pair (" + idx(p.k) + "," + idx(p.l) + ")"};
  }
  for (const auto& d : alloc.directs_1) {
    if (d.subcarrier >= K || d.user >= U)
      return Violation{"index range", "slot-1 direct " + idx(d.subcarrier)};
    ++used1[d.subcarrier];
    if (bad_power(d.power))
      return Violation{"non-negative power", "slot-1 direct " + idx(d.subcarrier)};
  }
  for (const auto& d : alloc.directs_2) {
    if (d.subcarrier >= K || d.user >= U)
      return Violation{"index range", "slot-2 direct " + idx(d.subcarrier)};
    ++used2[d.subcarrier];
    if (bad_power(d.power))
      return Violation{"non-negative power", "slot-2 direct " + idx(d.subcarrier)};
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (used1[k] != 1)
      return Violation{"OFDMA exclusivity",
                       "slot-1 subcarrier " + idx(k) + " used " +
                           std::to_string(used1[k]) + " times"};
    if (used2[k] != 1)
      return Violation{"OFDMA exclusivity",
                       "slot-2 subcarrier " + idx(k) + " used " +
                           std::to_string(used2[k]) + " times"};
  }
  const double total = alloc.total_power();
  if (total > p_tot * (1.0 + kBudgetTolerance))
    return Violation{"total power budget", "allocated " + std::to_string(total) +
                                               " > budget " + std::to_string(p_tot)};

  // Relay-aided splits must realize the closed-form optimum for their sum.
  for (const auto& p : alloc.pairs) {
    const LinkGains g = link_gains(gains, p.k, p.l, p.user);
    const double achieved = rate(pair_snr(g, p.p_s1, p.p_s2, p.p_r));
    const double target = rate(effective_gain(g, protocol) * p.total());
    if (std::abs(achieved - target) > 1e-9 * std::max(1.0, target))
      return Violation{"optimal pair split",
                       "pair (" + idx(p.k) + "," + idx(p.l) + ") rate " +
                           std::to_string(achieved) + " != " + std::to_string(target)};
  }
  return std::nullopt;
}

/// Weighted sum rate recomputed from the powers in `alloc`. Throws
/// InfeasibleAllocation naming the violated constraint.
inline double evaluate_wsr(const Allocation& alloc, const GainTable& gains,
                           std::span<const double> weights, Protocol protocol,
                           double p_tot) {
  if (auto v = audit(alloc, gains, weights, protocol, p_tot))
    throw InfeasibleAllocation(v->constraint, v->detail);
  double wsr = 0.0;
  for (const auto& p : alloc.pairs) {
    const LinkGains g = link_gains(gains, p.k, p.l, p.user);
    wsr += weights[p.user] * rate(pair_snr(g, p.p_s1, p.p_s2, p.p_r));
  }
  for (const auto& d : alloc.directs_1)
    wsr += weights[d.user] * rate(gains.g_su(d.subcarrier, d.user) * d.power);
  for (const auto& d : alloc.directs_2)
    wsr += weights[d.user] * rate(gains.g_su(d.subcarrier, d.user) * d.power);
  return wsr;
}

}  // namespace relay_ofdma
