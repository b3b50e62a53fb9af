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


#include "zakotfs/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace zakotfs {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Gaussian exponents of the unit-energy pulses: w1(t) ~ exp(-a t^2) and
// w2(nu) ~ exp(-c nu^2), where w2 is the Fourier transform of W2.
struct GaussianShape {
  double a;
  double c;
};

GaussianShape gaussian_shape(const FrameParams& p) {
  const double bw = p.B + 2.0 * p.nu_max;
  const double dur = p.T + p.tau_max;
  return {p.alpha_g * bw * bw, kPi * kPi * p.beta_g * dur * dur};
}

}  // namespace

double PhysicalChannel::max_delay() const {
  double m = 0.0;
  for (const auto& p : paths) m = std::max(m, p.delay);
  return m;
}

double PhysicalChannel::max_abs_doppler() const {
  double m = 0.0;
  for (const auto& p : paths) m = std::max(m, std::abs(p.doppler));
  return m;
}

void PhysicalChannel::validate(const FrameParams& params) const {
  for (const auto& p : paths) {
    if (p.delay < 0.0) throw std::invalid_argument("PhysicalChannel: negative path delay");
    if (p.delay > params.tau_max * (1.0 + 1e-12))
      throw std::invalid_argument("PhysicalChannel: path delay exceeds tau_max");
    if (std::abs(p.doppler) > params.nu_max * (1.0 + 1e-12))
      throw std::invalid_argument("PhysicalChannel: path Doppler exceeds nu_max");
  }
}

PowerDelayProfile veh_a_profile() {
  PowerDelayProfile p;
  p.name = "veh_a";
  p.delays = {0.0, 0.31e-6, 0.71e-6, 1.09e-6, 1.73e-6, 2.51e-6};
  p.powers_db = {0.0, -1.0, -9.0, -10.0, -15.0, -20.0};
  return p;
}

PowerDelayProfile parse_profile(std::istream& in, const std::string& name) {
  PowerDelayProfile prof;
  prof.name = name;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    auto bad = [&](const std::string& why) {
      throw std::runtime_error("profile '" + name + "' line " + std::to_string(lineno) + ": " +
                               why);
    };
    if (first == "nu_max") {
      double v;
      if (!(ls >> v) || v < 0.0) bad("nu_max needs a non-negative value in Hz");
      prof.nu_max = v;
      continue;
    }
    double delay_us, power_db;
    try {
      delay_us = std::stod(first);
    } catch (const std::exception&) {
      bad("expected '<delay_us> <rel_power_db>' or 'nu_max <Hz>'");
    }
    if (!(ls >> power_db)) bad("missing relative power");
    if (delay_us < 0.0) bad("negative delay");
    prof.delays.push_back(delay_us * 1e-6);
    prof.powers_db.push_back(power_db);
  }
  if (prof.delays.empty()) throw std::runtime_error("profile '" + name + "' has no paths");
  return prof;
}

PowerDelayProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open channel profile '" + path + "'");
  return parse_profile(in, path);
}

PhysicalChannel draw_channel(const PowerDelayProfile& profile, const FrameParams& params,
                             std::uint64_t seed) {
  const double nu_max = profile.nu_max.value_or(params.nu_max);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);

  std::vector<double> lin(profile.powers_db.size());
  std::transform(profile.powers_db.begin(), profile.powers_db.end(), lin.begin(),
                 [](double db) { return std::pow(10.0, db / 10.0); });
  const double total = std::accumulate(lin.begin(), lin.end(), 0.0);

  PhysicalChannel chan;
  chan.normalized = true;
  for (std::size_t i = 0; i < lin.size(); ++i) {
    const double s = std::sqrt(lin[i] / total / 2.0);
    const double re = gauss(rng), im = gauss(rng);
    const double theta = angle(rng);
    chan.paths.push_back({Complex(s * re, s * im), profile.delays[i], nu_max * std::cos(theta)});
  }
  return chan;
}

PhysicalChannel draw_veh_a(const FrameParams& params, std::uint64_t seed) {
  return draw_channel(veh_a_profile(), params, seed);
}

TapSupport default_tap_support(const FrameParams& params, double tail_energy) {
  const GaussianShape g = gaussian_shape(params);
  // single-path delay-axis energy profile |A(j/B)|^2 = exp(-a j^2 / B^2)
  const double s = g.a / (params.B * params.B);
  auto e = [s](long j) { return std::exp(-s * double(j) * double(j)); };
  double total = e(0);
  for (long j = 1; e(j) > 0.0; ++j) total += 2.0 * e(j);
  long kw = 0;
  double inside = e(0);
  while ((total - inside) / total >= tail_energy) {
    ++kw;
    inside += 2.0 * e(kw);
  }
  TapSupport sup;
  sup.k_lo = -kw;
  sup.k_hi = static_cast<long>(std::ceil(params.B * params.tau_max - 1e-9)) + kw;
  sup.l_max = params.l_max();
  return sup;
}

EffectiveDDChannel::EffectiveDDChannel(int M, int N, TapSupport support, Eigen::MatrixXcd taps,
                                       double leakage)
    : M_(M), N_(N), support_(support), taps_(std::move(taps)), leakage_(leakage) {
  if (M <= 0 || N <= 0) throw std::invalid_argument("EffectiveDDChannel: bad frame size");
  if (support.k_hi < support.k_lo || support.l_max < 0)
    throw std::invalid_argument("EffectiveDDChannel: empty support");
  if (support.k_hi - support.k_lo >= M)
    throw std::invalid_argument("EffectiveDDChannel: delay support spans M or more bins "
                                "(crystallization violated)");
  if (support.l_count() > N)
    throw std::invalid_argument("EffectiveDDChannel: Doppler support wider than N "
                                "(crystallization violated)");
  if (taps_.rows() != support.k_count() || taps_.cols() != support.l_count())
    throw std::invalid_argument("EffectiveDDChannel: tap array does not match support");
}

Complex EffectiveDDChannel::tap(long k, long l) const {
  if (!support_.contains(k, l)) return Complex(0.0, 0.0);
  return taps_(k - support_.k_lo, l + support_.l_max);
}

Complex EffectiveDDChannel::periodic(long k, long l) const {
  // Crystallization guarantees at most one alias lands on the support.
  const long n = mn();
  const long kr = k - n * floor_div(k - support_.k_lo, n);
  const long lr = l - n * floor_div(l + support_.l_max, n);
  return tap(kr, lr);
}

EffectiveDDChannel identity_dd_channel(const FrameParams& params) {
  TapSupport sup{0, 0, 0};
  return EffectiveDDChannel(params.M, params.N, sup, Eigen::MatrixXcd::Ones(1, 1));
}

Complex effective_dd_response(const PhysicalChannel& chan, const FrameParams& params, double tau,
                              double nu) {
  const GaussianShape g = gaussian_shape(params);
  Complex acc(0.0, 0.0);
  for (const auto& p : chan.paths) {
    const double d = tau - p.delay;
    const double e = nu - p.doppler;
    const double mag = -0.5 * g.a * d * d - kPi * kPi * p.doppler * p.doppler / (2.0 * g.a) -
                       0.5 * g.c * e * e - kPi * kPi * tau * tau / (2.0 * g.c);
    const double phase = kPi * p.doppler * d + kPi * tau * e;
    acc += p.gain * std::polar(std::exp(mag), phase);
  }
  return acc;
}

EffectiveDDChannel effective_dd_taps(const PhysicalChannel& chan, const FrameParams& params,
                                     std::optional<TapSupport> support) {
  params.validate();
  chan.validate(params);
  const TapSupport sup = support.value_or(default_tap_support(params));
  const double dt = 1.0 / params.B, dnu = 1.0 / params.T;

  Eigen::MatrixXcd taps(sup.k_count(), sup.l_count());
  for (long k = sup.k_lo; k <= sup.k_hi; ++k)
    for (long l = -sup.l_max; l <= sup.l_max; ++l)
      taps(k - sup.k_lo, l + sup.l_max) = effective_dd_response(chan, params, k * dt, l * dnu);

  // Leakage is measured on a margin around the support.
  const long km = 8, lm = 4;
  double outside = 0.0;
  for (long k = sup.k_lo - km; k <= sup.k_hi + km; ++k)
    for (long l = -sup.l_max - lm; l <= sup.l_max + lm; ++l)
      if (!sup.contains(k, l)) outside += std::norm(effective_dd_response(chan, params, k * dt, l * dnu));
  const double inside = taps.squaredNorm();
  const double leakage = (inside + outside) > 0.0 ? outside / (inside + outside) : 0.0;
  if (leakage >= 0.01)
    throw std::runtime_error("effective_dd_taps: " + std::to_string(100.0 * leakage) +
                             "% of tap energy lies outside the declared support");
  return EffectiveDDChannel(params.M, params.N, sup, std::move(taps), leakage);
}

QuasiPeriodicFrame apply_dd_io(const QuasiPeriodicFrame& x, const EffectiveDDChannel& eff,
                               double noise_var, std::uint64_t seed) {
  const int M = x.M(), N = x.N();
  if (M != eff.M() || N != eff.N())
    throw std::invalid_argument("apply_dd_io: frame and channel sizes differ");
  if (noise_var < 0.0) throw std::invalid_argument("apply_dd_io: negative noise variance");
  const TapSupport& sup = eff.support();
  const UnitRoots w(long(M) * N);

  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(M, N);
  for (long lp = -sup.l_max; lp <= sup.l_max; ++lp)
    for (long kp = sup.k_lo; kp <= sup.k_hi; ++kp) {
      const Complex h = eff.tap(kp, lp);
      if (h == Complex(0.0, 0.0)) continue;
      for (long l = 0; l < N; ++l)
        for (long k = 0; k < M; ++k) y(k, l) += h * x(k - kp, l - lp) * w(lp * (k - kp));
    }

  if (noise_var > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_var / 2.0));
    for (long l = 0; l < N; ++l)
      for (long k = 0; k < M; ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        y(k, l) += Complex(re, im);
      }
  }
  return QuasiPeriodicFrame(std::move(y));
}

double snr_to_noise_var(double rho, double symbol_energy) {
  if (!(rho > 0.0)) throw std::invalid_argument("snr_to_noise_var: SNR must be positive");
  if (!(symbol_energy > 0.0))
    throw std::invalid_argument("snr_to_noise_var: symbol energy must be positive");
  return symbol_energy / rho;
}

double snr_loss_factor(const FrameParams& params) {
  return (1.0 + params.tau_max / params.T) * (1.0 + 2.0 * params.nu_max / params.B);
}

double received_snr(const FrameParams& params, double es_over_n0) {
  if (!(es_over_n0 > 0.0)) throw std::invalid_argument("received_snr: E/N0 must be positive");
  return es_over_n0 / snr_loss_factor(params);
}

}  // namespace zakotfs
