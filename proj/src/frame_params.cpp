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

#include "zakotfs/frame_params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zakotfs {

FrameParams FrameParams::from_doppler_period(int M, int N, double nu_p, double tau_max,
                                             double nu_max) {
  FrameParams p;
  p.M = M;
  p.N = N;
  p.B = M * nu_p;
  p.T = double(M) * double(N) / p.B;
  p.tau_max = tau_max;
  p.nu_max = nu_max;
  return p;
}

FrameParams FrameParams::vehicular_default() {
  return from_doppler_period(31, 37, 30e3, 2.51e-6, 815.0);
}

int FrameParams::l_max() const {
  // T*nu_max that is an integer up to rounding must not gain an extra tap.
  const double x = T * nu_max;
  return 1 + static_cast<int>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

void FrameParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("FrameParams: " + what); };
  if (M <= 0 || N <= 0) fail("M and N must be positive");
  if (!(B > 0) || !(T > 0)) fail("B and T must be positive");
  if (Q <= 0) fail("oversampling factor Q must be positive");
  if (!(tau_max >= 0) || !(nu_max >= 0)) fail("tau_max and nu_max must be non-negative");
  if (!(alpha_g > 0) || !(beta_g > 0)) fail("alpha_g and beta_g must be positive");
  if (std::abs(delay_period() * doppler_period() - 1.0) > 1e-12)
    fail("delay period times Doppler period must equal 1 (MN = BT)");
  if (!(B * tau_max < M))
    fail("crystallization violated along delay: B*tau_max = " + std::to_string(B * tau_max) +
         " >= M");
  if (!(2.0 * T * nu_max < N))
    fail("crystallization violated along Doppler: 2*T*nu_max = " +
         std::to_string(2.0 * T * nu_max) + " >= N");
  if (2 * l_max() + 1 > N) fail("Doppler tap support 2*l_max+1 exceeds N");
}

}  // namespace zakotfs
