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


// Acceptance checks for the modem library. Prints one PASS/FAIL line per
// criterion and exits non-zero if any criterion fails. Pass criterion
// numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "test_util.hpp"
#include "zakotfs/channel.hpp"
#include "zakotfs/equalizer.hpp"
#include "zakotfs/fd_link.hpp"
#include "zakotfs/sim.hpp"
#include "zakotfs/waveform.hpp"
#include "zakotfs/zak.hpp"

using namespace zakotfs;
using namespace zakotfs::testing;
using namespace zakotfs::oracles;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

const FrameParams kParams = FrameParams::vehicular_default();

// True channel taps on a support wide enough that only the Doppler band
// forcing separates them from the equalizer's view.
const TapSupport kWide{-6, 9, 6};

TimeSeq periodic_seq(const Eigen::VectorXcd& v) {
  TimeSeq y;
  y.samples = v;
  y.periodic = true;
  return y;
}

QuasiPeriodicFrame random_qam_frame(std::mt19937_64& rng, const FrameParams& p) {
  std::vector<std::uint8_t> bits(2 * p.mn());
  for (auto& b : bits) b = rng() & 1;
  return embed_symbols(symbols_to_frame(qam_map(bits, Constellation::qam4()), p.M, p.N), p);
}

// 95% normal-approximation half width of a binomial proportion.
double half_width(const BERRecord& r) {
  return 1.96 * std::sqrt(r.ber * (1.0 - r.ber) / double(r.bits));
}

template <typename F>
double median_seconds(int repeats, F&& f) {
  std::vector<double> t;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

Outcome ac1_transforms() {
  std::mt19937_64 rng(101);
  double small = 0.0;
  const FrameParams p43 = small_params(4, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXcd x = random_matrix(4, 3, rng);
    const Eigen::VectorXcd y = random_vector(12, rng);
    small = std::max(small, max_err(idzt(QuasiPeriodicFrame(x)).samples, naive_idzt(x)));
    small = std::max(small, max_err(dzt(periodic_seq(y), p43).values(), naive_dzt(y, 4, 3)));
    small = std::max(small, max_err(idfzt(QuasiPeriodicFrame(x)).bins, naive_idfzt(x)));
    small = std::max(small, max_err(dfzt(FDSeq{y}, p43), naive_dfzt(y, 4, 3)));
  }
  double trip = 0.0, parseval = 0.0;
  const FrameParams& p = kParams;
  for (int trial = 0; trial < 20; ++trial) {
    const QuasiPeriodicFrame x = random_frame(p.M, p.N, rng);
    const Eigen::VectorXcd y = random_vector(p.mn(), rng);
    const TimeSeq t = idzt(x);
    const FDSeq S = idfzt(x);
    const QuasiPeriodicFrame fy = dzt(periodic_seq(y), p);
    const Eigen::MatrixXcd gy = dfzt(FDSeq{y}, p);
    trip = std::max({trip, max_err(dzt(t, p).values(), x.values()), max_err(idzt(fy).samples, y),
                     max_err(dfzt(S, p), x.values()), max_err(idfzt(QuasiPeriodicFrame(gy)).bins, y)});
    const double ex = x.values().squaredNorm(), ey = y.squaredNorm();
    parseval = std::max({parseval, std::abs(t.samples.squaredNorm() - ex) / ex,
                         std::abs(S.bins.squaredNorm() - ex) / ex,
                         std::abs(fy.values().squaredNorm() - ey) / ey,
                         std::abs(gy.squaredNorm() - ey) / ey});
  }
  return {small < 1e-12 && trip < 1e-10 && parseval < 1e-10,
          fmt("naive-sum max err %.2e (<1e-12), round-trip max err %.2e (<1e-10), Parseval rel "
              "err %.2e (<1e-10)",
              small, trip, parseval)};
}

Outcome ac2_dd_fd_identity() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const PhysicalChannel ch = draw_veh_a(kParams, seed);
    const EffectiveDDChannel truth = effective_dd_taps(ch, kParams, kWide);
    const BandedFDMatrix H = build_banded_matrix(dd_to_fd_response(truth, kParams.l_max()));
    const QuasiPeriodicFrame x = random_qam_frame(rng, kParams);
    const FDSeq dd_path = idfzt(apply_dd_io(x, truth));
    worst = std::max(worst, rel_err(fd_forward(H, idfzt(x)).bins, dd_path.bins));
  }
  double exact = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const EffectiveDDChannel eff = random_taps(4, 3, TapSupport{-1, 2, 1}, rng);
    const BandedFDMatrix H = build_banded_matrix(dd_to_fd_response(eff));
    const QuasiPeriodicFrame x = random_frame(4, 3, rng);
    const FDSeq S = idfzt(x);
    const Eigen::VectorXcd Y = fd_forward(H, S).bins;
    exact = std::max({exact, rel_err(Y, idfzt(apply_dd_io(x, eff)).bins), rel_err(Y, full_hf(eff) * S.bins)});
  }
  return {worst < 1e-6 && exact < 1e-10,
          fmt("100 Veh-A frames at 31x37: max rel err %.2e (<1e-6); 4x3 in-band: max rel err "
              "%.2e (<1e-10)",
              worst, exact)};
}

Outcome ac3_equalizer_equivalence() {
  std::mt19937_64 rng(303);
  const Constellation qam = Constellation::qam4();
  const double rho = std::pow(10.0, 1.5);
  double worst = 0.0;
  for (std::uint64_t f = 0; f < 20; ++f) {
    const EffectiveDDChannel eff = effective_dd_taps(draw_veh_a(kParams, 5000 + f), kParams);
    const QuasiPeriodicFrame y = apply_dd_io(random_qam_frame(rng, kParams), eff, 1.0 / rho, f);
    const BandedFDMatrix H = build_banded_matrix(dd_to_fd_response(eff));
    const Eigen::MatrixXcd fd = dfzt(lmmse_fd_banded(H, idfzt(y), rho), kParams);
    worst = std::max(worst, rel_err(fd, lmmse_dd_dense(eff, y, rho)));
  }
  long agree = 0, total = 0;
  for (std::uint64_t f = 0; f < 200; ++f) {
    const EffectiveDDChannel truth = effective_dd_taps(draw_veh_a(kParams, 9000 + f), kParams, kWide);
    const QuasiPeriodicFrame y = apply_dd_io(random_qam_frame(rng, kParams), truth, 1.0 / rho, 77 + f);
    const BandedFDMatrix H = build_banded_matrix(dd_to_fd_response(truth, kParams.l_max()));
    const SymbolEstimate fd = recover_symbols(lmmse_fd_banded(H, idfzt(y), rho), qam, kParams);
    const SymbolEstimate dd = decide_symbols(lmmse_dd_dense(truth, y, rho), qam);
    for (std::size_t i = 0; i < fd.decisions.size(); ++i) agree += fd.decisions[i] == dd.decisions[i];
    total += long(fd.decisions.size());
  }
  const double frac = double(agree) / double(total);
  return {worst < 1e-8 && frac > 0.999,
          fmt("in-band taps: max rel x_hat diff %.2e (<1e-8); Veh-A at 15 dB, 200 frames: "
              "decisions agree on %.5f%% of %ld symbols (>99.9%%)",
              worst, 100.0 * frac, total)};
}

Outcome ac4_ber_parity() {
  SimConfig c;
  c.snr_db = {0.0, 5.0, 10.0, 15.0};
  c.frames = 88;
  c.band = 13;
  c.equalizer = EqualizerChoice::both;
  c.seed = 404;
  const auto recs = run_ber_sweep(c);
  bool ok = true;
  std::string detail;
  std::vector<double> fd, dd;
  for (std::size_t s = 0; s < c.snr_db.size(); ++s) {
    const BERRecord& a = recs[2 * s];
    const BERRecord& b = recs[2 * s + 1];
    const double diff = std::abs(a.ber - b.ber), hw = half_width(a) + half_width(b);
    ok = ok && a.bits >= 200000 && b.bits >= 200000 && (diff < hw || diff == 0.0);
    fd.push_back(a.ber);
    dd.push_back(b.ber);
    detail += fmt("%g dB fd %.4e dd %.4e |diff| %.1e hw %.1e; ", c.snr_db[s], a.ber, b.ber, diff, hw);
  }
  for (std::size_t s = 1; s < fd.size(); ++s) ok = ok && fd[s] < fd[s - 1] && dd[s] < dd[s - 1];
  detail += fmt("bits/point %ld, both monotone decreasing", recs[0].bits);
  return {ok, detail};
}

Outcome ac5_band_truncation() {
  SimConfig c;
  c.snr_db = {0.0, 15.0};
  c.frames = 1000;
  c.equalizer = EqualizerChoice::fd_banded;
  c.seed = 505;
  c.band = 13;
  const auto full = run_ber_sweep(c);
  c.band = 9;
  const auto trunc = run_ber_sweep(c);
  const double hw0 = half_width(full[0]) + half_width(trunc[0]);
  const double hw15 = half_width(full[1]) + half_width(trunc[1]);
  const bool low_ok = std::abs(trunc[0].ber - full[0].ber) < hw0 || trunc[0].ber == full[0].ber;
  const bool high_ok = trunc[1].ber >= full[1].ber || full[1].ber - trunc[1].ber < hw15;
  return {low_ok && high_ok,
          fmt("0 dB: b=9 %.5e vs b=13 %.5e (hw %.1e); 15 dB: b=9 %.5e vs b=13 %.5e (hw %.1e); "
              "%ld bits per point",
              trunc[0].ber, full[0].ber, hw0, trunc[1].ber, full[1].ber, hw15, full[0].bits)};
}

Outcome ac6_complexity() {
  std::mt19937_64 rng(606);
  auto fd_time = [&](const EffectiveDDChannel& eff, const QuasiPeriodicFrame& y, const FrameParams& p,
                     int reps) {
    return median_seconds(reps, [&] {
      const BandedFDMatrix H = build_banded_matrix(dd_to_fd_response(eff));
      volatile double sink = dfzt(lmmse_fd_banded(H, idfzt(y), 31.6), p)(0, 0).real();
      (void)sink;
    });
  };
  auto dd_time = [&](const EffectiveDDChannel& eff, const QuasiPeriodicFrame& y, int reps) {
    return median_seconds(reps, [&] {
      volatile double sink = lmmse_dd_dense(eff, y, 31.6)(0, 0).real();
      (void)sink;
    });
  };
  const EffectiveDDChannel veh = effective_dd_taps(draw_veh_a(kParams, 6), kParams);
  const QuasiPeriodicFrame y = apply_dd_io(random_qam_frame(rng, kParams), veh, 0.03, 6);
  const double t_fd = fd_time(veh, y, kParams, 21), t_dd = dd_time(veh, y, 3);
  const double speedup = t_dd / t_fd;

  const TapSupport sup{-3, 6, 3};
  const FrameParams p1 = small_params(31, 37), p2 = small_params(31, 74);
  const EffectiveDDChannel e1 = random_taps(31, 37, sup, rng), e2 = random_taps(31, 74, sup, rng);
  const QuasiPeriodicFrame y1 = random_frame(31, 37, rng), y2 = random_frame(31, 74, rng);
  const double fd1 = fd_time(e1, y1, p1, 21), fd2 = fd_time(e2, y2, p2, 21);
  const double dd1 = dd_time(e1, y1, 3), dd2 = dd_time(e2, y2, 3);
  const double fd_ratio = fd2 / fd1, dd_ratio = dd2 / dd1;
  const bool ok = speedup >= 20.0 && fd_ratio >= 2.0 / 1.5 && fd_ratio <= 2.0 * 1.5 &&
                  dd_ratio >= 8.0 / 1.5 && dd_ratio <= 8.0 * 1.5;
  return {ok, fmt("per-frame banded %.2f ms vs dense %.1f ms, speedup %.0fx (>=20); doubling N: "
                  "banded %.2f -> %.2f ms, x%.2f (in [1.33, 3]); dense %.0f -> %.0f ms, "
                  "x%.2f (in [5.33, 12])",
                  1e3 * t_fd, 1e3 * t_dd, speedup, 1e3 * fd1, 1e3 * fd2, fd_ratio, 1e3 * dd1,
                  1e3 * dd2, dd_ratio)};
}

Outcome ac7_chain_equivalence() {
  FrameParams p32 = kParams;
  p32.Q = 32;
  const PulsePair pulses16 = make_gaussian_pulses(kParams), pulses32 = make_gaussian_pulses(p32);
  double worst16 = 0.0, worst32 = 0.0;
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PhysicalChannel ch = draw_veh_a(kParams, seed);
    const EffectiveDDChannel analytic = effective_dd_taps(ch, kParams);
    const double e16 = rel_err(sound_effective_channel(ch, pulses16, kParams).taps(), analytic.taps());
    const double e32 = rel_err(sound_effective_channel(ch, pulses32, p32).taps(), analytic.taps());
    worst16 = std::max(worst16, e16);
    worst32 = std::max(worst32, e32);
    improved += e32 < e16;
  }
  return {worst16 < 1e-3 && improved == 10,
          fmt("10 Veh-A draws: max rel err Q=16 %.3e (<1e-3), Q=32 %.3e; Q=32 better on %d/10 "
              "draws (need 10)",
              worst16, worst32, improved)};
}

Outcome ac8_noise_floor() {
  SimConfig c;
  c.snr_db = {-60.0};
  c.frames = 44;
  c.seed = 808;
  const auto low = run_ber_sweep(c);
  SimConfig id;
  id.channel = "identity";
  id.noiseless = true;
  id.snr_db = {0.0, 10.0, 20.0};
  id.frames = 5;
  long id_errors = 0;
  for (const auto& r : run_ber_sweep(id)) id_errors += r.bit_errors;
  bool ok = id_errors == 0;
  for (const auto& r : low) ok = ok && r.bits >= 100000 && std::abs(r.ber - 0.5) <= 0.02;
  return {ok, fmt("-60 dB: fd %.4f, dd %.4f over %ld bits (0.5 +- 0.02); noiseless identity: %ld "
                  "bit errors (need 0)",
                  low[0].ber, low[1].ber, low[0].bits, id_errors)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"transform correctness", ac1_transforms},
      {"DD-to-FD identity", ac2_dd_fd_identity},
      {"equalizer oracle equivalence", ac3_equalizer_equivalence},
      {"BER parity", ac4_ber_parity},
      {"band truncation", ac5_band_truncation},
      {"complexity", ac6_complexity},
      {"chain equivalence", ac7_chain_equivalence},
      {"noise floor", ac8_noise_floor},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = int(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s AC%d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
