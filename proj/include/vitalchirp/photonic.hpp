#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vitalchirp/physio.hpp"

namespace vitalchirp::photonic {

// Intermediate-frequency LFM drive of the central-office modulator.
struct IfLfmParams {
  double center_freq_hz = 6.6e9;
  double bandwidth_hz = 1.0e9;
  double pulse_period_s = 100e-6;
  double pulse_width_s = 60e-6;

  double chirp_rate() const { return bandwidth_hz / pulse_width_s; }
};

void validate(const IfLfmParams& p);

// Transmit chirp obtained by beating the two second-order sidebands.
struct ChirpParams {
  double start_freq_hz = 0.0;
  double sweep_bandwidth_hz = 0.0;
  double chirp_rate_hz_per_s = 0.0;
  double pulse_period_s = 0.0;
  double pulse_width_s = 0.0;
  double carrier_wavelength_m = 0.0;  // c / start_freq

  double center_freq_hz() const { return start_freq_hz + 0.5 * sweep_bandwidth_hz; }
};

ChirpParams derive_chirp(const IfLfmParams& if_params);

enum class NotchShape { gaussian };

// FBG transmission notch. Frequencies are optical offsets in Hz;
// carrier_operating_offset_hz is carrier minus notch centre with the chest
// at rest (negative = carrier on the falling edge below the notch).
struct FbgProfile {
  double notch_depth_db = 17.70;
  double fwhm_3db_hz = 11.2e9;
  NotchShape shape = NotchShape::gaussian;
  double displacement_to_shift_hz_per_mm = 0.5e9;
  double carrier_operating_offset_hz = 0.0;

  // Notch centre relative to the carrier at rest.
  double bragg_offset_hz() const { return -carrier_operating_offset_hz; }
  // Gaussian width parameter of the dB-domain notch.
  double sigma_hz() const;
};

void validate(const FbgProfile& fbg);

// Carrier-to-centre offset (positive magnitude) at which the linear
// transmittance has its steepest slope, i.e. the inflection of T(f).
double max_slope_offset(const FbgProfile& fbg);

// Profile with the carrier parked at the steepest point of the falling edge.
FbgProfile make_fbg_profile(double notch_depth_db, double fwhm_3db_hz,
                            double displacement_to_shift_hz_per_mm = 0.5e9);

// Linear power transmittance at freq_offset_hz from the notch centre.
double fbg_transmission(const FbgProfile& fbg, double freq_offset_hz);
double fbg_transmission_db(const FbgProfile& fbg, double freq_offset_hz);

struct ContactSignal {
  physio::TimeGrid grid;
  std::vector<double> intensity_mw;
  bool edge_warning = false;  // excursion leaves the +-3 sigma edge region
  double max_excursion_hz = 0.0;
};

// Low-speed photodetector output of one FBG sensor. Carrier power is gated by
// the notch, the two second-order sidebands pass untouched. noise_rms is a
// relative (multiplicative) Gaussian term drawn from noise_seed.
ContactSignal contact_intensity(std::span<const double> displacement_mm, const FbgProfile& fbg,
                                double carrier_power_mw, double sideband_power_mw,
                                double noise_rms, const physio::TimeGrid& grid,
                                std::uint64_t noise_seed = 0);

enum class Bias { matp, qtp };

struct ModulatorModel {
  double modulation_index = 0.5;
  Bias bias = Bias::matp;
};

struct SidebandWeights {
  double carrier = 1.0;       // field amplitude of the optical carrier, J0(m)
  double second_order = 0.0;  // field amplitude of each +-2nd sideband, J2(m)

  double carrier_power() const { return carrier * carrier; }
  double sideband_power() const { return second_order * second_order; }
};

// Only MATP bias is supported; QTP throws ValidationError.
SidebandWeights sideband_weights(const ModulatorModel& mod);

}  // namespace vitalchirp::photonic
