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

#include <limits>
#include <optional>

#include <Eigen/Core>

#include "zakotfs/channel.hpp"
#include "zakotfs/frame_params.hpp"
#include "zakotfs/zak.hpp"

/// Oversampled time-domain realization of the transmit and receive chains.
///
/// Every signal lives on the global grid t = m / (Q B), m integer, with
/// m = 0 at the frame origin. Sample n of a rate-B sequence sits at
/// m = n Q. This module is slow and exact; it serves as the ground truth
/// against which the delay-Doppler level model is checked.
namespace zakotfs {

/// Unit-energy Gaussian pulses sampled at rate Q*B:
///   w1(t) = (2a/pi)^{1/4} exp(-a t^2),  a = alpha_g (B + 2 nu_max)^2
///   W2(t) = (2b/pi)^{1/4} exp(-b t^2),  b = 1 / (beta_g (T + tau_max)^2)
struct PulsePair {
  double rate = 0.0;
  long w1_half = 0;  // w1 holds m in [-w1_half, w1_half]
  long W2_half = 0;
  Eigen::VectorXd w1;
  Eigen::VectorXd W2;

  double w1_at(long m) const { return (m < -w1_half || m > w1_half) ? 0.0 : w1[m + w1_half]; }
  double W2_at(long m) const { return (m < -W2_half || m > W2_half) ? 0.0 : W2[m + W2_half]; }
};

/// Truncates each pulse where the discarded tail energy drops below
/// `tail_energy`, then renormalizes the samples to unit energy. Throws
/// std::invalid_argument if a pulse would need a half width beyond
/// `max_half_width_s`.
PulsePair make_gaussian_pulses(const FrameParams& params, double tail_energy = 1e-8,
                               double max_half_width_s = std::numeric_limits<double>::infinity());

struct OversampledSignal {
  double rate = 0.0;
  long first = 0;  // grid index of samples[0]
  Eigen::VectorXcd samples;

  long size() const { return static_cast<long>(samples.size()); }
  long last() const { return first + size() - 1; }
  Complex operator()(long m) const {
    return (m < first || m > last()) ? Complex(0.0, 0.0) : samples[m - first];
  }
  /// Integral of |x(t)|^2 by the rectangle rule.
  double energy() const { return samples.squaredNorm() / rate; }
};

/// x(t) = sqrt(T) w1 * [W2 sum_n x[n] delta(t - n/B)].
/// Periodic input is read over the support of W2. Aperiodic input that
/// reaches past that support throws std::invalid_argument.
OversampledSignal synthesize_tx(const TimeSeq& x, const PulsePair& pulses,
                                const FrameParams& params);

/// r(t) = sum_i h_i x(t - tau_i) exp(j 2 pi nu_i (t - tau_i)), noiseless.
/// Delays are applied as a frequency-domain phase ramp, Doppler pointwise.
/// The output window is the input window extended by tau_max.
OversampledSignal apply_phy_channel(const OversampledSignal& x, const PhysicalChannel& chan,
                                    const FrameParams& params);

/// y(t) = T^{-1/2} W2*(t) [w1*(-t) * r(t)] read at t = n/B over the
/// support of W2.
TimeSeq matched_filter_and_sample(const OversampledSignal& r, const PulsePair& pulses,
                                  const FrameParams& params);

/// Full chain IDZT -> pulse shaping -> channel -> matched filter ->
/// sampling -> periodization -> DZT. The result is multiplied by T so that
/// it matches the discrete I/O relation with dimensionless taps.
QuasiPeriodicFrame waveform_dd_link(const QuasiPeriodicFrame& x, const PhysicalChannel& chan,
                                    const PulsePair& pulses, const FrameParams& params);

/// Effective taps read off the chain's response to a unit DD impulse at
/// (0, 0), on `support` (default_tap_support when omitted).
EffectiveDDChannel sound_effective_channel(const PhysicalChannel& chan, const PulsePair& pulses,
                                           const FrameParams& params,
                                           std::optional<TapSupport> support = std::nullopt);

}  // namespace zakotfs
