#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavjrc {

// Thrown when two nodes that must be apart coincide (zero link distance).
class DegenerateGeometry : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidPower : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Position3D {
  double x = 0.0;
  double y = 0.0;
  double h = 0.0;  // altitude; 0 for ground targets

  bool is_finite() const;
  bool operator==(const Position3D&) const = default;
};

Position3D operator+(const Position3D& a, const Position3D& b);
Position3D operator-(const Position3D& a, const Position3D& b);
Position3D operator*(double s, const Position3D& a);
double norm(const Position3D& v);

/// Monostatic radar link budget. Gains are linear; the noise figure is
/// linear here (conversion from dB happens when a scenario is loaded).
struct RadarParams {
  double tx_gain_gT = 20.0;
  double rx_gain_gR = 20.0;
  double carrier_freq_fc = 5e9;
  double light_speed_C = 3e8;
  double rcs_sigma = 1.0;
  double radar_bandwidth_Br = 20e6;
  double boltzmann_k = 1.38e-23;
  double noise_temp_T0 = 290.0;
  double noise_figure_F = 3.1622776601683795;  // 5 dB
  double probing_loss_l = 0.8;
  double snr_min_eta = 10.0;

  double wavelength() const { return light_speed_C / carrier_freq_fc; }
  // k * T0 * F * l
  double noise_factor() const;
  // Everything in the SNR expression except p_radar / d^4.
  double snr_constant() const;
};

/// UAV to FBS uplink budget.
struct CommParams {
  double carrier_freq_fc = 5e9;
  double light_speed_C = 3e8;
  double comm_bandwidth_Bc = 40e6;
  double los_prob_xi = 0.95;
  double nlos_prob_xi = 0.5;
  double los_atten_mu = 0.5;
  double nlos_atten_mu = 2.0;
  double noise_density_delta0 = 0.5e-10;
  double rate_min_Rmin = 0.1e6;
  double fbs_rx_gain_ghR = 20.0;

  // (4 pi fc / C)^2
  double free_space_K0() const;
  double attenuation_mix() const;
  double noise_power() const { return comm_bandwidth_Bc * noise_density_delta0; }
};

enum class InterferenceMode { Full, None };

std::string to_string(InterferenceMode mode);
InterferenceMode interference_from_string(const std::string& name);

double distance3d(const Position3D& a, const Position3D& b);

double radar_snr(double p_radar, double d, const RadarParams& rp);

// Largest target distance at which radar_snr still reaches snr_min_eta.
double radar_range(double p_radar, const RadarParams& rp);

double channel_gain(double d, const CommParams& cp);

/// Uplink SINR of UAV `m` at the FBS. With InterferenceMode::Full every
/// other UAV's received power counts as interference.
///
/// Interference terms are summed in ascending order of value, so the result
/// does not depend on how the UAVs are indexed.
double sinr(std::size_t m, std::span<const double> p_comm_all, std::span<const double> gains_all,
            const CommParams& cp, double tx_gain_gT,
            InterferenceMode mode = InterferenceMode::Full);

/// sinr() for every UAV at once; bit-identical to calling it per index but
/// with one sort instead of one per UAV.
std::vector<double> sinr_all(std::span<const double> p_comm_all, std::span<const double> gains_all,
                             const CommParams& cp, double tx_gain_gT,
                             InterferenceMode mode = InterferenceMode::Full);

// Shannon rate in bit/s.
double data_rate(double sinr_val, const CommParams& cp);

// Sum whose value is independent of the order of `values`.
double order_free_sum(std::span<const double> values);

}  // namespace uavjrc
