// Copyright 2026 The zakotfs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "zakotfs/frame_params.hpp"
#include "zakotfs/zak.hpp"

namespace zakotfs {

struct Path {
  Complex gain;
  double delay;    // s
  double doppler;  // Hz
};

/// Discrete-path spreading function sum_i h_i delta(tau - tau_i) delta(nu - nu_i).
struct PhysicalChannel {
  std::vector<Path> paths;
  /// Set when the profile powers were scaled to sum to one.
  bool normalized = false;

  double max_delay() const;
  double max_abs_doppler() const;
  /// Throws std::invalid_argument on negative delay, delay above tau_max or
  /// |doppler| above nu_max.
  void validate(const FrameParams& params) const;
};

/// Power-delay profile: path delays with relative powers, plus an optional
/// maximum Doppler that overrides FrameParams::nu_max when drawing.
struct PowerDelayProfile {
  std::string name;
  std::vector<double> delays;     // s
  std::vector<double> powers_db;  // relative to the first path
  std::optional<double> nu_max;   // Hz
};

/// ITU Vehicular-A: delays {0, 0.31, 0.71, 1.09, 1.73, 2.51} us,
/// powers {0, -1, -9, -10, -15, -20} dB.
PowerDelayProfile veh_a_profile();

/// Text format, one item per line, '#' starts a comment:
///   nu_max <Hz>
///   <delay_us> <rel_power_db>
PowerDelayProfile parse_profile(std::istream& in, const std::string& name = "custom");
PowerDelayProfile load_profile(const std::string& path);

/// Independent circular Gaussian gains with the profile's relative
/// variances, normalized so the variances sum to one; Doppler
/// nu_max cos(theta) with theta uniform on [0, 2 pi).
PhysicalChannel draw_channel(const PowerDelayProfile& profile, const FrameParams& params,
                             std::uint64_t seed);
PhysicalChannel draw_veh_a(const FrameParams& params, std::uint64_t seed);

/// Rectangular tap support k in [k_lo, k_hi], l in [-l_max, l_max].
struct TapSupport {
  long k_lo = 0;
  long k_hi = 0;
  int l_max = 0;

  long k_count() const { return k_hi - k_lo + 1; }
  long l_count() const { return 2L * l_max + 1; }
  bool contains(long k, long l) const {
    return k >= k_lo && k <= k_hi && l >= -l_max && l <= l_max;
  }
};

/// Delay range [-k_w, ceil(B tau_max) + k_w] where k_w is the smallest
/// margin leaving less than `tail_energy` of a single path's delay-axis
/// filter correlation outside; Doppler range +-l_max.
TapSupport default_tap_support(const FrameParams& params, double tail_energy = 1e-10);

/// Effective discrete DD channel h_dd[k,l] on a finite support together with
/// its MN-periodic extension h[k,l].
class EffectiveDDChannel {
 public:
  EffectiveDDChannel() = default;
  /// taps is k_count x l_count; taps(k - k_lo, l + l_max) = h_dd[k,l].
  /// Throws std::invalid_argument if the support breaks crystallization
  /// (k_hi - k_lo >= M or 2 l_max + 1 > N) or the shape does not match.
  EffectiveDDChannel(int M, int N, TapSupport support, Eigen::MatrixXcd taps,
                     double leakage = 0.0);

  int M() const { return M_; }
  int N() const { return N_; }
  long mn() const { return long(M_) * N_; }
  const TapSupport& support() const { return support_; }
  const Eigen::MatrixXcd& taps() const { return taps_; }
  /// Fraction of tap energy that fell outside the support when measured.
  double leakage() const { return leakage_; }

  /// h_dd[k,l]; zero off the support.
  Complex tap(long k, long l) const;
  /// h[k,l] = sum_{n,m} h_dd[k + nMN, l + mMN].
  Complex periodic(long k, long l) const;

  double energy() const { return taps_.squaredNorm(); }

 private:
  int M_ = 0;
  int N_ = 0;
  TapSupport support_;
  Eigen::MatrixXcd taps_;
  double leakage_ = 0.0;
};

/// Unit DD tap at the origin; an ideal channel with no filter spreading.
EffectiveDDChannel identity_dd_channel(const FrameParams& params);

/// Continuous effective channel (w_rx *_sigma h_phy *_sigma w_tx)(tau, nu)
/// for the Gaussian pulses in `params`, in closed form.
Complex effective_dd_response(const PhysicalChannel& chan, const FrameParams& params, double tau,
                              double nu);

/// Samples h_dd(k/B, l/T) on `support` (default_tap_support when omitted).
/// Throws std::invalid_argument if the channel or the support violates
/// crystallization, std::runtime_error if more than 1% of the tap energy
/// lies outside the support.
EffectiveDDChannel effective_dd_taps(const PhysicalChannel& chan, const FrameParams& params,
                                     std::optional<TapSupport> support = std::nullopt);

/// Periodic twisted convolution of the frame with the channel taps plus
/// i.i.d. circular Gaussian noise of variance noise_var (0 for none).
QuasiPeriodicFrame apply_dd_io(const QuasiPeriodicFrame& x, const EffectiveDDChannel& eff,
                               double noise_var = 0.0, std::uint64_t seed = 0);

/// Per-DD-sample noise variance E / rho.
double snr_to_noise_var(double rho, double symbol_energy = 1.0);

/// (1 + tau_max/T)(1 + 2 nu_max/B): ratio between E/N0 and received SNR rho.
double snr_loss_factor(const FrameParams& params);
double received_snr(const FrameParams& params, double es_over_n0);

}  // namespace zakotfs
