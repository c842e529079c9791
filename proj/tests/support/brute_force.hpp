#pragma once

// Slow reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "relay_ofdma/relay_ofdma.hpp"

namespace relay_ofdma::brute {

/// Best permutation value by trying all K! permutations.
inline double brute_force_assignment(const Matrix<double>& C) {
  std::vector<std::size_t> p(C.rows());
  std::iota(p.begin(), p.end(), std::size_t{0});
  double best = -std::numeric_limits<double>::infinity();
  do {
    double v = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) v += C(k, p[k]);
    best = std::max(best, v);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

/// max over the power simplex of min{g_sr p1, SNR_dest}, by a uniform grid
/// with `n` points per axis.
inline double grid_pair_snr(const LinkGains& g, double P, Protocol protocol,
                            int n = 200) {
  double best = 0.0;
  const double h = P / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    const double p1 = h * i;
    if (uses_beamforming(protocol)) {
      for (int j = 0; i + j < n; ++j) {
        const double p2 = h * j;
        const double pr = std::max(P - p1 - p2, 0.0);
        best = std::max(best, pair_snr(g, p1, p2, pr));
      }
    } else {
      best = std::max(best, pair_snr(g, p1, 0.0, std::max(P - p1, 0.0)));
    }
  }
  return best;
}

/// Lagrangian value at `mu` with every couple metric re-derived from the
/// U x U direct-user tensor and the assignment done by enumeration.
inline double brute_force_lagrangian(const PairGainTable& t,
                                     std::span<const double> w, double mu,
                                     double p_tot, bool bp2_same_user = true) {
  const std::size_t K = t.num_subcarriers(), U = t.num_users();
  Matrix<double> C(K, K);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t l = 0; l < K; ++l) {
      double best = 0.0;
      for (std::size_t u = 0; u < U; ++u)
        best = std::max(best, channel_value(w[u], mu, t(k, l, u)));
      for (std::size_t a = 0; a < U; ++a)
        for (std::size_t b = 0; b < U; ++b) {
          if (t.protocol() == Protocol::Benchmark2 && bp2_same_user && k == l && a != b)
            continue;
          best = std::max(best, channel_value(w[a], mu, t.direct_1(k, a)) +
                                    channel_value(w[b], mu, t.direct_2(l, b)));
        }
      C(k, l) = best;
    }
  double value = 0.0;
  if (t.protocol() == Protocol::Benchmark2) {
    for (std::size_t k = 0; k < K; ++k) value += C(k, k);
  } else {
    value = brute_force_assignment(C);
  }
  return mu * p_tot + value;
}

inline GainTable random_gain_table(std::size_t K, std::size_t U, SplitMix64& rng,
                                   double scale = 4.0) {
  GainTable g;
  g.g_sr.resize(K);
  for (auto& x : g.g_sr) x = scale * rng.uniform();
  g.g_su = Matrix<double>(K, U);
  g.g_ru = Matrix<double>(K, U);
  for (auto& x : g.g_su.data()) x = scale * rng.uniform();
  for (auto& x : g.g_ru.data()) x = scale * rng.uniform();
  return g;
}

inline LinkGains random_link(SplitMix64& rng, double scale = 4.0) {
  return {scale * rng.uniform(), scale * rng.uniform(), scale * rng.uniform(),
          scale * rng.uniform()};
}

}  // namespace relay_ofdma::brute
