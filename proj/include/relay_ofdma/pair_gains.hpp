#pragma once

// Closed-form rate maximization for one relay-aided subcarrier pair (k, l)
// serving user u with a fixed sum power P.
//
// The pair rate is R(min{g_sr p_s1, SNR_dest}) with
//   SNR_dest = g_su_k p_s1 + (sqrt(g_su_l p_s2) + sqrt(g_ru_l p_r))^2.
// Maximizing over the power simplex gives R(G_eff * P); G_eff is the
// "effective gain" of the pair.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relay_ofdma/protocol.hpp"

namespace relay_ofdma {

/// R(x) = 1/2 log2(1 + x), bits per OFDM symbol over the two slots.
inline double rate(double snr) {
  if (snr < 0.0) throw std::domain_error("rate: negative SNR");
  return 0.5 * std::log2(1.0 + snr);
}

struct LinkGains {
  double g_sr = 0.0;    // source -> relay on k
  double g_su_k = 0.0;  // source -> user on k (slot 1)
  double g_su_l = 0.0;  // source -> user on l (slot 2)
  double g_ru_l = 0.0;  // relay -> user on l

  double diff() const noexcept { return g_sr - g_su_k; }    // Delta
  double sum_l() const noexcept { return g_su_l + g_ru_l; } // B
};

struct PairSplit {
  double p_s1 = 0.0;
  double p_s2 = 0.0;
  double p_r = 0.0;
  double rate = 0.0;

  double total() const noexcept { return p_s1 + p_s2 + p_r; }
};

/// Destination SNR after maximum-ratio combining of both slots.
inline double snr_relay_aided(const LinkGains& g, double p_s1, double p_s2,
                              double p_r) noexcept {
  const double beam = std::sqrt(g.g_su_l * p_s2) + std::sqrt(g.g_ru_l * p_r);
  return g.g_su_k * p_s1 + beam * beam;
}

/// SNR at which both the relay and the destination can decode.
inline double pair_snr(const LinkGains& g, double p_s1, double p_s2,
                       double p_r) noexcept {
  return std::min(g.g_sr * p_s1, snr_relay_aided(g, p_s1, p_s2, p_r));
}

namespace detail {

// Shared shape of both protocols: slot 2 acts as a single channel of gain
// `second`. Relaying pays off only when min{g_sr, second} > g_su_k.
inline bool relay_branch(const LinkGains& g, double second) noexcept {
  return std::min(g.g_sr, second) > g.g_su_k;
}

inline double effective_gain(const LinkGains& g, double second) noexcept {
  if (relay_branch(g, second)) return g.g_sr * second / (g.diff() + second);
  return std::min(g.g_sr, g.g_su_k);
}

}  // namespace detail

inline double effective_gain_proposed(const LinkGains& g) noexcept {
  return detail::effective_gain(g, g.sum_l());
}

inline double effective_gain_benchmark(const LinkGains& g) noexcept {
  return detail::effective_gain(g, g.g_ru_l);
}

inline double effective_gain(const LinkGains& g, Protocol p) noexcept {
  return uses_beamforming(p) ? effective_gain_proposed(g)
                             : effective_gain_benchmark(g);
}

/// Slot-2 power is split in proportion to g_su_l : g_ru_l, which makes the
/// Cauchy-Schwarz bound on the beamformed term tight.
inline PairSplit optimal_split_proposed(const LinkGains& g, double P) {
  if (P < 0.0) throw std::domain_error("optimal_split: negative power");
  PairSplit s;
  const double B = g.sum_l();
  if (detail::relay_branch(g, B)) {
    const double delta = g.diff();
    const double second = delta / (delta + B) * P;
    s.p_s1 = B / (delta + B) * P;
    s.p_s2 = g.g_su_l / B * second;
    s.p_r = g.g_ru_l / B * second;
  } else {
    s.p_s1 = P;
  }
  s.rate = rate(effective_gain_proposed(g) * P);
  return s;
}

inline PairSplit optimal_split_benchmark(const LinkGains& g, double P) {
  if (P < 0.0) throw std::domain_error("optimal_split: negative power");
  PairSplit s;
  if (detail::relay_branch(g, g.g_ru_l)) {
    const double delta = g.diff();
    s.p_s1 = g.g_ru_l / (delta + g.g_ru_l) * P;
    s.p_r = delta / (delta + g.g_ru_l) * P;
  } else {
    s.p_s1 = P;
  }
  s.rate = rate(effective_gain_benchmark(g) * P);
  return s;
}

inline PairSplit optimal_split(const LinkGains& g, double P, Protocol p) {
  return uses_beamforming(p) ? optimal_split_proposed(g, P)
                             : optimal_split_benchmark(g, P);
}

/// G~ - G^ when min{g_sr, g_ru_l} > g_su_k; the closed form of the gap.
inline double protocol_gap(const LinkGains& g) noexcept {
  const double delta = g.diff();
  return delta * g.g_su_l * g.g_sr /
         ((delta + g.g_su_l + g.g_ru_l) * (delta + g.g_ru_l));
}

}  // namespace relay_ofdma
