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

#include <complex>

namespace zakotfs {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// System constants of one Zak-OTFS frame.
///
/// The frame carries M*N = B*T symbols on an M x N delay-Doppler grid with
/// delay period M/B and Doppler period N/T. Gaussian pulse shapes are set by
/// alpha_g (delay axis, via w1) and beta_g (time window W2). Q is the
/// oversampling factor used by the waveform-level simulation.
struct FrameParams {
  int M = 31;
  int N = 37;
  double B = 930e3;            // Hz
  double T = 31.0 * 37.0 / 930e3;  // s
  double tau_max = 2.51e-6;    // s
  double nu_max = 815.0;       // Hz
  double alpha_g = 1.584;
  double beta_g = 1.584;
  int Q = 16;

  /// Build from the Doppler period; B = M*nu_p and T = N/nu_p exactly.
  static FrameParams from_doppler_period(int M, int N, double nu_p, double tau_max,
                                         double nu_max);

  /// M=31, N=37, nu_p=30 kHz, tau_max=2.51 us, nu_max=815 Hz.
  static FrameParams vehicular_default();

  int mn() const { return M * N; }
  double delay_period() const { return M / B; }
  double doppler_period() const { return N / T; }

  /// Doppler-tap half width 1 + ceil(T nu_max).
  int l_max() const;
  /// Full width 4*l_max + 1 of the regularized FD normal matrix.
  int full_band() const { return 4 * l_max() + 1; }

  /// Throws std::invalid_argument when any invariant fails: positive sizes,
  /// tau_p * nu_p = 1, MN = BT, and crystallization (B tau_max < M,
  /// 2 T nu_max < N).
  void validate() const;

  bool operator==(const FrameParams&) const = default;
};

}  // namespace zakotfs
