#include "uavjrc/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace uavjrc {

bool Position3D::is_finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(h);
}

Position3D operator+(const Position3D& a, const Position3D& b) {
  return {a.x + b.x, a.y + b.y, a.h + b.h};
}

Position3D operator-(const Position3D& a, const Position3D& b) {
  return {a.x - b.x, a.y - b.y, a.h - b.h};
}

Position3D operator*(double s, const Position3D& a) { return {s * a.x, s * a.y, s * a.h}; }

double norm(const Position3D& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.h * v.h); }

double RadarParams::noise_factor() const {
  return boltzmann_k * noise_temp_T0 * noise_figure_F * probing_loss_l;
}

double RadarParams::snr_constant() const {
  const double lambda = wavelength();
  const double four_pi_cubed = std::pow(4.0 * std::numbers::pi, 3);
  return tx_gain_gT * rx_gain_gR * lambda * lambda * rcs_sigma /
         (four_pi_cubed * noise_factor() * radar_bandwidth_Br);
}

double CommParams::free_space_K0() const {
  const double k = 4.0 * std::numbers::pi * carrier_freq_fc / light_speed_C;
  return k * k;
}

double CommParams::attenuation_mix() const {
  return los_prob_xi * los_atten_mu + nlos_prob_xi * nlos_atten_mu;
}

std::string to_string(InterferenceMode mode) {
  return mode == InterferenceMode::Full ? "full" : "none";
}

InterferenceMode interference_from_string(const std::string& name) {
  if (name == "full") return InterferenceMode::Full;
  if (name == "none") return InterferenceMode::None;
  throw std::invalid_argument("unknown interference mode '" + name + "' (expected full|none)");
}

double distance3d(const Position3D& a, const Position3D& b) { return norm(a - b); }

double radar_snr(double p_radar, double d, const RadarParams& rp) {
  if (!(d > 0.0)) throw DegenerateGeometry("radar_snr: UAV coincides with its target (d = 0)");
  const double d2 = d * d;
  return p_radar * rp.snr_constant() / (d2 * d2);
}

double radar_range(double p_radar, const RadarParams& rp) {
  if (!(p_radar > 0.0)) {
    throw InvalidPower("radar_range: radar power must be > 0, got " + std::to_string(p_radar));
  }
  return std::sqrt(std::sqrt(p_radar * rp.snr_constant() / rp.snr_min_eta));
}

double channel_gain(double d, const CommParams& cp) {
  if (!(d > 0.0)) throw DegenerateGeometry("channel_gain: UAV coincides with the FBS (d = 0)");
  return 1.0 / (cp.free_space_K0() * d * d * cp.attenuation_mix());
}

double order_free_sum(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (double v : sorted) total += v;
  return total;
}

double sinr(std::size_t m, std::span<const double> p_comm_all, std::span<const double> gains_all,
            const CommParams& cp, double tx_gain_gT, InterferenceMode mode) {
  const std::size_t count = p_comm_all.size();
  if (count == 0 || gains_all.size() != count || m >= count) {
    throw std::invalid_argument("sinr: power/gain lists must be non-empty, equal length, and contain m");
  }
  const double link = tx_gain_gT * cp.fbs_rx_gain_ghR;
  const double signal = p_comm_all[m] * link * gains_all[m];

  double interference = 0.0;
  if (mode == InterferenceMode::Full && count > 1) {
    std::vector<double> others;
    others.reserve(count - 1);
    for (std::size_t u = 0; u < count; ++u) {
      if (u != m) others.push_back(p_comm_all[u] * link * gains_all[u]);
    }
    interference = order_free_sum(others);
  }
  return signal / (interference + cp.noise_power());
}

std::vector<double> sinr_all(std::span<const double> p_comm_all, std::span<const double> gains_all,
                             const CommParams& cp, double tx_gain_gT, InterferenceMode mode) {
  const std::size_t count = p_comm_all.size();
  if (count == 0 || gains_all.size() != count) {
    throw std::invalid_argument("sinr_all: power/gain lists must be non-empty and of equal length");
  }
  const double link = tx_gain_gT * cp.fbs_rx_gain_ghR;
  std::vector<double> received(count);
  for (std::size_t u = 0; u < count; ++u) received[u] = p_comm_all[u] * link * gains_all[u];

  std::vector<double> out(count);
  if (mode == InterferenceMode::None || count == 1) {
    for (std::size_t m = 0; m < count; ++m) out[m] = received[m] / cp.noise_power();
    return out;
  }
  // Dropping one entry from a sorted list leaves it sorted, so skipping the
  // first slot holding m's value reproduces sinr()'s summation order.
  std::vector<double> sorted = received;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t m = 0; m < count; ++m) {
    const std::size_t skip = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), received[m]) - sorted.begin());
    double interference = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      if (k != skip) interference += sorted[k];
    }
    out[m] = received[m] / (interference + cp.noise_power());
  }
  return out;
}

double data_rate(double sinr_val, const CommParams& cp) {
  return cp.comm_bandwidth_Bc * std::log1p(sinr_val) / std::numbers::ln2;
}

}  // namespace uavjrc
