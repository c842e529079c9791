#pragma once

// Geometry and frequency-selective channel generation.
//
// All gains are normalized by the noise power (sigma^2 = 1), so a GainTable
// entry is directly an SNR per unit transmit power.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "relay_ofdma/errors.hpp"
#include "relay_ofdma/matrix.hpp"
#include "relay_ofdma/rng.hpp"

namespace relay_ofdma {

/// Distances below this are clamped before evaluating path loss (1 m).
inline constexpr double kMinDistanceKm = 0.001;

struct SystemConfig {
  std::size_t num_subcarriers = 32;  // K
  std::size_t num_users = 5;         // U
  double d_km = 0.5;                 // source to relay
  double center_km = 1.0;            // source to user-region center
  double region_radius_km = 0.05;
  double ptot_over_sigma2_db = 20.0;
  std::vector<double> weights;       // per-user w_u; may be empty until drawn
  std::uint64_t seed = 1;
  std::size_t taps = 6;              // impulse-response length L
  double pathloss_exp = 2.5;
  double d_ref_km = 1.0;
};

/// Throws ConfigError naming the first violated field.
inline void validate(const SystemConfig& cfg) {
  if (cfg.num_subcarriers < 1) throw ConfigError("K must be >= 1");
  if (cfg.num_users < 1) throw ConfigError("U must be >= 1");
  if (cfg.taps < 1 || cfg.taps > cfg.num_subcarriers)
    throw ConfigError("taps must satisfy 1 <= L <= K");
  if (!(cfg.d_km > 0.0) || !std::isfinite(cfg.d_km))
    throw ConfigError("d_km must be positive");
  if (!(cfg.region_radius_km >= 0.0) || !std::isfinite(cfg.region_radius_km))
    throw ConfigError("region_radius_km must be non-negative");
  if (!(cfg.center_km > 0.0) || !std::isfinite(cfg.center_km))
    throw ConfigError("center_km must be positive");
  if (!(cfg.d_ref_km > 0.0)) throw ConfigError("d_ref_km must be positive");
  if (!std::isfinite(cfg.pathloss_exp))
    throw ConfigError("pathloss_exp must be finite");
  if (!std::isfinite(cfg.ptot_over_sigma2_db))
    throw ConfigError("ptot_over_sigma2_db must be finite");
  if (!cfg.weights.empty()) {
    if (cfg.weights.size() != cfg.num_users)
      throw ConfigError("weights must have one entry per user");
    for (double w : cfg.weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw ConfigError("weights must be strictly positive");
  }
}

/// P_tot in units of noise power.
inline double power_budget(const SystemConfig& cfg) {
  return std::pow(10.0, cfg.ptot_over_sigma2_db / 10.0);
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct Geometry {
  Point relay_pos;
  std::vector<Point> user_pos;
  std::vector<double> d_su;
  std::vector<double> d_ru;
};

struct GainTable {
  std::vector<double> g_sr;  // K
  Matrix<double> g_su;       // K x U
  Matrix<double> g_ru;       // K x U

  std::size_t num_subcarriers() const noexcept { return g_sr.size(); }
  std::size_t num_users() const noexcept { return g_su.cols(); }

  friend bool operator==(const GainTable&, const GainTable&) = default;
};

/// Source at the origin, region center at (center_km, 0), relay on the
/// segment between them at distance d_km. Users are area-uniform on the disk.
inline Geometry sample_geometry(const SystemConfig& cfg, SplitMix64& rng) {
  Geometry geo;
  const Point center{cfg.center_km, 0.0};
  geo.relay_pos = Point{cfg.d_km, 0.0};
  geo.user_pos.reserve(cfg.num_users);
  for (std::size_t u = 0; u < cfg.num_users; ++u) {
    const double r = cfg.region_radius_km * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    geo.user_pos.push_back(
        {center.x + r * std::cos(theta), center.y + r * std::sin(theta)});
  }
  for (const Point& p : geo.user_pos) {
    geo.d_su.push_back(distance(Point{}, p));
    geo.d_ru.push_back(distance(geo.relay_pos, p));
  }
  return geo;
}

/// Per-tap variance (1/L)(d/d_ref)^(-alpha), with d clamped at 1 m.
inline double tap_variance(double distance_km, const SystemConfig& cfg) {
  const double d = std::max(distance_km, kMinDistanceKm);
  return std::pow(d / cfg.d_ref_km, -cfg.pathloss_exp) /
         static_cast<double>(cfg.taps);
}

inline std::vector<std::complex<double>> sample_impulse_response(
    double distance_km, const SystemConfig& cfg, SplitMix64& rng) {
  const double var = tap_variance(distance_km, cfg);
  std::vector<std::complex<double>> taps(cfg.taps);
  for (auto& c : taps) c = rng.complex_gaussian(var);
  return taps;
}

/// |H_k|^2 of the K-point DFT of the taps. Direct O(KL) evaluation.
inline std::vector<double> taps_to_subcarrier_gains(
    std::span<const std::complex<double>> taps, std::size_t num_subcarriers) {
  if (taps.size() > num_subcarriers)
    throw ConfigError("impulse response longer than the DFT size");
  std::vector<double> out(num_subcarriers);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(num_subcarriers);
  for (std::size_t k = 0; k < num_subcarriers; ++k) {
    std::complex<double> h{};
    for (std::size_t t = 0; t < taps.size(); ++t) {
      // (k*t) mod K keeps the twiddle argument small for large K.
      const auto idx = (k * t) % num_subcarriers;
      h += taps[t] * std::polar(1.0, step * static_cast<double>(idx));
    }
    out[k] = std::norm(h);
  }
  return out;
}

/// Draws geometry and every link. Stream order off `rng`:
/// geometry, source->relay, source->u for u = 0..U-1, relay->u for u = 0..U-1.
/// Each consumer gets its own child stream via `split()`.
inline std::pair<Geometry, GainTable> build_gain_table(const SystemConfig& cfg,
                                                       SplitMix64& rng) {
  validate(cfg);
  const std::size_t K = cfg.num_subcarriers;
  const std::size_t U = cfg.num_users;

  auto geo_rng = rng.split();
  Geometry geo = sample_geometry(cfg, geo_rng);

  GainTable gains;
  {
    auto link = rng.split();
    gains.g_sr = taps_to_subcarrier_gains(
        sample_impulse_response(cfg.d_km, cfg, link), K);
  }
  gains.g_su = Matrix<double>(K, U);
  gains.g_ru = Matrix<double>(K, U);
  for (std::size_t u = 0; u < U; ++u) {
    auto link = rng.split();
    const auto g = taps_to_subcarrier_gains(
        sample_impulse_response(geo.d_su[u], cfg, link), K);
    for (std::size_t k = 0; k < K; ++k) gains.g_su(k, u) = g[k];
  }
  for (std::size_t u = 0; u < U; ++u) {
    auto link = rng.split();
    const auto g = taps_to_subcarrier_gains(
        sample_impulse_response(geo.d_ru[u], cfg, link), K);
    for (std::size_t k = 0; k < K; ++k) gains.g_ru(k, u) = g[k];
  }
  return {std::move(geo), std::move(gains)};
}

/// Checks dimensions and that every entry is finite and non-negative.
inline void validate(const GainTable& gains) {
  const std::size_t K = gains.g_sr.size();
  if (K == 0 || gains.g_su.cols() == 0) throw ConfigError("empty gain table");
  if (gains.g_su.rows() != K || gains.g_ru.rows() != K ||
      gains.g_ru.cols() != gains.g_su.cols())
    throw ConfigError("gain table dimensions disagree");
  auto ok = [](double g) { return std::isfinite(g) && g >= 0.0; };
  if (!std::all_of(gains.g_sr.begin(), gains.g_sr.end(), ok) ||
      !std::ranges::all_of(gains.g_su.data(), ok) ||
      !std::ranges::all_of(gains.g_ru.data(), ok))
    throw ConfigError("gain table entries must be finite and >= 0");
}

}  // namespace relay_ofdma
