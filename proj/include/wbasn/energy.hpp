#pragma once

// First-order radio energy model. Only the amplifier term scales with
// distance; the electronics term is paid per bit regardless of range.

#include <cmath>
#include <stdexcept>

#include "wbasn/types.hpp"

namespace wbasn {

struct EnergyReport {
  double tx_joules = 0.0;
  double rx_joules = 0.0;
  double total_joules = 0.0;
};

namespace detail {

inline void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0)) throw std::domain_error(std::string(what) + " must be >= 0");
}

inline double path_loss(double d, double exponent) {
  if (exponent == 2.0) return d * d;
  return std::pow(d, exponent);
}

}  // namespace detail

inline double transmit_energy(double bits, double d, const RadioParams& radio) {
  detail::require_non_negative(bits, "bits");
  detail::require_non_negative(d, "distance");
  return bits * radio.e_elec + bits * radio.e_amp * detail::path_loss(d, radio.path_loss_exponent);
}

inline double receive_energy(double bits, const RadioParams& radio) {
  detail::require_non_negative(bits, "bits");
  return bits * radio.e_elec;
}

inline double single_hop_energy(double bits, double d, const RadioParams& radio) {
  return transmit_energy(bits, d, radio);
}

/// Closed form for an equidistant chain of `hops` links:
/// 2*n*b*Eelec + n*b*Eamp*d^2 - b*Eelec.
inline double multi_hop_energy(double bits, int hops, double d, const RadioParams& radio) {
  if (hops < 1) throw std::domain_error("hop count must be >= 1");
  detail::require_non_negative(bits, "bits");
  detail::require_non_negative(d, "distance");
  const double n = hops;
  return 2.0 * n * bits * radio.e_elec + n * bits * radio.e_amp * detail::path_loss(d, radio.path_loss_exponent) -
         bits * radio.e_elec;
}

inline EnergyReport multi_hop_report(double bits, int hops, double d, const RadioParams& radio) {
  if (hops < 1) throw std::domain_error("hop count must be >= 1");
  EnergyReport r;
  r.tx_joules = hops * transmit_energy(bits, d, radio);
  r.rx_joules = (hops - 1) * receive_energy(bits, radio);
  r.total_joules = r.tx_joules + r.rx_joules;
  return r;
}

/// Energy to push one packet along a route with arbitrary hop lengths: one
/// transmission per hop plus a reception at every intermediate node.
inline double route_energy(const Route& route, double bits, const RadioParams& radio) {
  double total = 0.0;
  for (std::size_t i = 0; i < route.distances.size(); ++i) {
    total += transmit_energy(bits, route.distances[i], radio);
    if (i + 1 < route.distances.size()) total += receive_energy(bits, radio);
  }
  return total;
}

/// Deducts `joules` (floored at zero) and returns what was actually removed.
inline double charge_node(SensorNode& node, double joules, int round) {
  detail::require_non_negative(joules, "charge");
  if (!node.alive || node.is_sink()) return 0.0;
  const double applied = joules < node.energy ? joules : node.energy;
  node.energy -= applied;
  if (node.energy <= 0.0) {
    node.energy = 0.0;
    node.alive = false;
    node.death_round = round;
  }
  return applied;
}

}  // namespace wbasn
