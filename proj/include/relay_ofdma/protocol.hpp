#pragma once

#include <string>
#include <string_view>

#include "relay_ofdma/errors.hpp"

namespace relay_ofdma {

// Proposed: slot-2 source/relay beamforming, free subcarrier pairing.
// Benchmark1 (BP-1): relay alone in slot 2, free pairing.
// Benchmark2 (BP-2): BP-1 relaying restricted to the identity pairing k <-> k.
enum class Protocol { Proposed, Benchmark1, Benchmark2 };

inline constexpr std::string_view to_string(Protocol p) noexcept {
  switch (p) {
    case Protocol::Proposed: return "proposed";
    case Protocol::Benchmark1: return "bp1";
    case Protocol::Benchmark2: return "bp2";
  }
  return "?";
}

inline Protocol parse_protocol(std::string_view s) {
  if (s == "proposed") return Protocol::Proposed;
  if (s == "bp1") return Protocol::Benchmark1;
  if (s == "bp2") return Protocol::Benchmark2;
  throw ConfigError("unknown protocol '" + std::string(s) +
                    "' (expected proposed, bp1 or bp2)");
}

// Whether slot-2 source power may be spent on a relay-aided pair.
inline constexpr bool uses_beamforming(Protocol p) noexcept {
  return p == Protocol::Proposed;
}

}  // namespace relay_ofdma
