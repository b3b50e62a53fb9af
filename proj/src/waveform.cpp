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


#include "zakotfs/waveform.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace zakotfs {

namespace {

// Smallest L with erfc(sqrt(2 k) L) <= tail, i.e. the energy of
// exp(-k t^2) outside [-L, L] is at most `tail` of the total.
double gaussian_half_width(double k, double tail) {
  double x = 0.0;
  while (std::erfc(x) > tail) x += 1e-3;
  return x / std::sqrt(2.0 * k);
}

Eigen::VectorXd sampled_unit_gaussian(double k, long half, double rate) {
  Eigen::VectorXd w(2 * half + 1);
  for (long m = -half; m <= half; ++m) {
    const double t = double(m) / rate;
    w[m + half] = std::exp(-k * t * t);
  }
  w /= std::sqrt(w.squaredNorm() / rate);
  return w;
}

long next_pow2(long n) {
  long p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

PulsePair make_gaussian_pulses(const FrameParams& params, double tail_energy,
                               double max_half_width_s) {
  if (!(params.alpha_g > 0.0) || !(params.beta_g > 0.0))
    throw std::invalid_argument("make_gaussian_pulses: alpha_g and beta_g must be positive");
  if (!(tail_energy > 0.0) || !(tail_energy < 1.0))
    throw std::invalid_argument("make_gaussian_pulses: tail energy must lie in (0, 1)");
  const double bw = params.B + 2.0 * params.nu_max;
  const double dur = params.T + params.tau_max;
  const double a = params.alpha_g * bw * bw;
  const double b = 1.0 / (params.beta_g * dur * dur);
  const double L1 = gaussian_half_width(a, tail_energy);
  const double L2 = gaussian_half_width(b, tail_energy);
  if (L1 > max_half_width_s || L2 > max_half_width_s)
    throw std::invalid_argument("make_gaussian_pulses: guard too small to reach the requested "
                                "tail energy");

  PulsePair p;
  p.rate = params.Q * params.B;
  // Half widths are whole multiples of 1/B so the truncation point does not
  // move with Q.
  p.w1_half = static_cast<long>(std::ceil(L1 * params.B)) * params.Q;
  p.W2_half = static_cast<long>(std::ceil(L2 * params.B)) * params.Q;
  p.w1 = sampled_unit_gaussian(a, p.w1_half, p.rate);
  p.W2 = sampled_unit_gaussian(b, p.W2_half, p.rate);
  return p;
}

OversampledSignal synthesize_tx(const TimeSeq& x, const PulsePair& pulses,
                                const FrameParams& params) {
  const long Q = params.Q;
  if (pulses.rate != Q * params.B)
    throw std::invalid_argument("synthesize_tx: pulse rate differs from Q*B");
  const long n_half = pulses.W2_half / Q;
  if (!x.periodic && x.size() > 0 && (x.first < -n_half || x.last() > n_half))
    throw std::invalid_argument("synthesize_tx: input extends beyond the W2 window");

  OversampledSignal out;
  out.rate = pulses.rate;
  out.first = -n_half * Q - pulses.w1_half;
  out.samples = Eigen::VectorXcd::Zero(2 * (n_half * Q + pulses.w1_half) + 1);

  const double dt = 1.0 / pulses.rate;
  const double amp = std::sqrt(params.T);
  for (long n = -n_half; n <= n_half; ++n) {
    const Complex xn = x(n);
    if (xn == Complex(0.0, 0.0)) continue;
    // Dirac impulse realized as one sample of height `rate`.
    const Complex impulse = amp * pulses.W2_at(n * Q) * xn * pulses.rate;
    const long base = n * Q - pulses.w1_half - out.first;
    for (long u = 0; u < pulses.w1.size(); ++u) out.samples[base + u] += impulse * pulses.w1[u] * dt;
  }
  return out;
}

OversampledSignal apply_phy_channel(const OversampledSignal& x, const PhysicalChannel& chan,
                                    const FrameParams& params) {
  chan.validate(params);
  const long extra = static_cast<long>(std::ceil(params.tau_max * x.rate)) + 1;
  const long out_len = x.size() + extra;
  const long nfft = next_pow2(out_len + 16);

  std::vector<Complex> buf(nfft, Complex(0.0, 0.0)), spec, shifted;
  for (long m = 0; m < x.size(); ++m) buf[m] = x.samples[m];
  Eigen::FFT<double> fft;
  fft.fwd(spec, buf);

  OversampledSignal r;
  r.rate = x.rate;
  r.first = x.first;
  r.samples = Eigen::VectorXcd::Zero(out_len);

  std::vector<Complex> ramped(nfft);
  for (const auto& path : chan.paths) {
    for (long k = 0; k < nfft; ++k) {
      const long ks = (k < nfft / 2) ? k : k - nfft;
      const double f = double(ks) * x.rate / double(nfft);
      ramped[k] = spec[k] * std::polar(1.0, -2.0 * kPi * f * path.delay);
    }
    // The Nyquist bin has no sign; keep it real so the shift stays symmetric.
    ramped[nfft / 2] = spec[nfft / 2] * std::cos(kPi * x.rate * path.delay);
    fft.inv(shifted, ramped);
    for (long m = 0; m < out_len; ++m) {
      const double t = double(r.first + m) / r.rate;
      r.samples[m] += path.gain * shifted[m] *
                      std::polar(1.0, 2.0 * kPi * path.doppler * (t - path.delay));
    }
  }
  return r;
}

TimeSeq matched_filter_and_sample(const OversampledSignal& r, const PulsePair& pulses,
                                  const FrameParams& params) {
  const long Q = params.Q;
  if (r.rate != pulses.rate || pulses.rate != Q * params.B)
    throw std::invalid_argument("matched_filter_and_sample: sampling grid misaligned with the "
                                "signal window");
  const long n_half = pulses.W2_half / Q;
  const double dt = 1.0 / pulses.rate;
  const double scale = 1.0 / std::sqrt(params.T);

  TimeSeq y;
  y.first = -n_half;
  y.samples = Eigen::VectorXcd::Zero(2 * n_half + 1);
  for (long n = -n_half; n <= n_half; ++n) {
    const long m = n * Q;
    Complex acc(0.0, 0.0);
    const long lo = std::max(-pulses.w1_half, r.first - m);
    const long hi = std::min(pulses.w1_half, r.last() - m);
    for (long u = lo; u <= hi; ++u) acc += pulses.w1_at(u) * r.samples[m + u - r.first];
    y.samples[n + n_half] = scale * pulses.W2_at(m) * acc * dt;
  }
  return y;
}

QuasiPeriodicFrame waveform_dd_link(const QuasiPeriodicFrame& x, const PhysicalChannel& chan,
                                    const PulsePair& pulses, const FrameParams& params) {
  if (x.M() != params.M || x.N() != params.N)
    throw std::invalid_argument("waveform_dd_link: frame size differs from params");
  const OversampledSignal tx = synthesize_tx(idzt(x), pulses, params);
  const OversampledSignal rx = apply_phy_channel(tx, chan, params);
  const TimeSeq y = periodize(matched_filter_and_sample(rx, pulses, params), params.mn());
  return QuasiPeriodicFrame(dzt(y, params).values() * params.T);
}

EffectiveDDChannel sound_effective_channel(const PhysicalChannel& chan, const PulsePair& pulses,
                                           const FrameParams& params,
                                           std::optional<TapSupport> support) {
  params.validate();
  chan.validate(params);
  const TapSupport sup = support.value_or(default_tap_support(params));
  Eigen::MatrixXcd impulse = Eigen::MatrixXcd::Zero(params.M, params.N);
  impulse(0, 0) = 1.0;
  const QuasiPeriodicFrame y = waveform_dd_link(QuasiPeriodicFrame(impulse), chan, pulses, params);

  // y(k, l) = h_dd[k, l] on the support once the quasi-periodic phase of
  // the wrapped impulse is undone, which the accessor does.
  Eigen::MatrixXcd taps(sup.k_count(), sup.l_count());
  for (long k = sup.k_lo; k <= sup.k_hi; ++k)
    for (long l = -sup.l_max; l <= sup.l_max; ++l) taps(k - sup.k_lo, l + sup.l_max) = y(k, l);
  return EffectiveDDChannel(params.M, params.N, sup, std::move(taps));
}

}  // namespace zakotfs
