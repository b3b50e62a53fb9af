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


#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/LU>
#include <doctest.h>

#include "test_util.hpp"
#include "zakotfs/channel.hpp"
#include "zakotfs/equalizer.hpp"
#include "zakotfs/fd_link.hpp"
#include "zakotfs/zak.hpp"

using namespace zakotfs;
using namespace zakotfs::testing;

namespace {

BandedFDMatrix identity_fd(long n, int L) {
  BandedFDMatrix H(n, L);
  for (long i = 0; i < n; ++i) H.diag(i, 0) = 1.0;
  return H;
}

BandedFDMatrix random_fd(long n, int L, std::mt19937_64& rng) {
  BandedFDMatrix H(n, L);
  const Eigen::MatrixXcd d = random_matrix(n, 2 * L + 1, rng);
  for (long i = 0; i < n; ++i)
    for (int k = -L; k <= L; ++k) H.diag(i, k) = d(i, k + L);
  return H;
}

// H^H (H H^H + I/rho)^{-1} Y with a dense LU solve.
Eigen::VectorXcd dense_mmse(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& Y, double rho) {
  const long n = H.rows();
  const Eigen::MatrixXcd A = H * H.adjoint() + Eigen::MatrixXcd::Identity(n, n) / rho;
  return H.adjoint() * A.partialPivLu().solve(Y);
}

}  // namespace

TEST_CASE("banded LMMSE with an identity channel") {
  std::mt19937_64 rng(41);
  const long n = 1147;
  FDSeq Y{random_vector(n, rng)};
  SUBCASE("vanishing regularizer") {
    CHECK(max_err(lmmse_fd_banded(identity_fd(n, 3), Y, 1e12).bins, Y.bins) < 1e-10);
  }
  SUBCASE("scalar shrinkage") {
    for (double rho : {0.1, 1.0, 31.6}) {
      const Eigen::VectorXcd expect = Y.bins / (1.0 + 1.0 / rho);
      CHECK(max_err(lmmse_fd_banded(identity_fd(n, 3), Y, rho).bins, expect) < 1e-13);
    }
  }
}

TEST_CASE("banded LMMSE matches the dense oracle") {
  std::mt19937_64 rng(42);
  for (auto [n, L] : {std::pair{12L, 1}, std::pair{12L, 2}, std::pair{1147L, 3}, std::pair{60L, 7}}) {
    const BandedFDMatrix H = random_fd(n, L, rng);
    FDSeq Y{random_vector(n, rng)};
    for (double rho : {0.5, 10.0, 1e3}) {
      const FDSeq S = lmmse_fd_banded(H, Y, rho);
      CHECK(rel_err(S.bins, dense_mmse(H.dense(), Y.bins, rho)) < 1e-8);
    }
  }
}

TEST_CASE("regularized normal matrix") {
  std::mt19937_64 rng(43);
  const long n = 1147;
  const int L = 3;
  const BandedFDMatrix H = random_fd(n, L, rng);
  const double rho = 20.0;
  CyclicBandedHermitian<Complex> A = regularized_normal_matrix(H, rho);
  CHECK(A.half_band() == 2 * L);
  const Eigen::MatrixXcd Hd = H.dense();
  const Eigen::MatrixXcd ref = Hd * Hd.adjoint() + Eigen::MatrixXcd::Identity(n, n) / rho;
  const Eigen::MatrixXcd Ad = A.dense();
  CHECK(max_err(Ad, ref) < 1e-12);
  CHECK(max_err(Ad, Ad.adjoint()) < 1e-12);

  A.factorize();
  const Eigen::VectorXcd Y = random_vector(n, rng);
  const Eigen::VectorXcd u = A.solve(Y);
  CHECK((A.multiply(u) - Y).norm() / Y.norm() < 1e-10);

  CHECK_THROWS_AS(regularized_normal_matrix(H, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(regularized_normal_matrix(random_fd(12, 3, rng), 1.0), std::invalid_argument);
  FDSeq short_seq{random_vector(n - 1, rng)};
  CHECK_THROWS_AS(lmmse_fd_banded(H, short_seq, 1.0), std::invalid_argument);
}

TEST_CASE("dense DD matrix reproduces the DD relation") {
  std::mt19937_64 rng(44);
  for (auto [M, N] : {std::pair{4, 3}, std::pair{31, 37}}) {
    const TapSupport sup = (M == 4) ? TapSupport{-1, 2, 1} : TapSupport{-3, 6, 3};
    const auto eff = random_taps(M, N, sup, rng);
    const Eigen::MatrixXcd G = dense_dd_matrix(eff);
    const auto x = random_frame(M, N, rng);
    const Eigen::VectorXcd gx = G * x.values().reshaped();
    CHECK(max_err(gx, apply_dd_io(x, eff).values().reshaped()) < 1e-12);
  }
}

TEST_CASE("dense DD LMMSE") {
  std::mt19937_64 rng(45);
  const FrameParams p = FrameParams::vehicular_default();
  SUBCASE("identity taps shrink by 1 + 1/rho") {
    const auto y = random_frame(p.M, p.N, rng);
    CHECK(max_err(lmmse_dd_dense(identity_dd_channel(p), y, 4.0), y.values() / 1.25) < 1e-13);
  }
  SUBCASE("noiseless round trip on a well-conditioned channel") {
    Eigen::MatrixXcd t = 0.05 * random_matrix(10, 7, rng);
    t(3, 3) = 1.0;
    const EffectiveDDChannel eff(p.M, p.N, TapSupport{-3, 6, 3}, t);
    const auto x = random_frame(p.M, p.N, rng);
    const Eigen::MatrixXcd xh = lmmse_dd_dense(eff, apply_dd_io(x, eff), 1e12);
    CHECK(max_err(xh, x.values()) < 1e-6);
  }
  SUBCASE("errors") {
    const auto y = random_frame(4, 3, rng);
    CHECK_THROWS_AS(lmmse_dd_dense(identity_dd_channel(small_params(4, 3)), y, -1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(lmmse_dd_dense(identity_dd_channel(small_params(5, 3)), y, 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("FD banded and dense DD equalizers agree") {
  std::mt19937_64 rng(46);
  SUBCASE("small frame, random in-band taps") {
    const FrameParams p = small_params(6, 5);
    const auto eff = random_taps(6, 5, TapSupport{-1, 2, 1}, rng);
    const auto y = random_frame(6, 5, rng);
    const BandedFDMatrix H = build_banded_matrix(dd_to_fd_response(eff));
    for (double rho : {0.3, 30.0}) {
      const Eigen::MatrixXcd fd = dfzt(lmmse_fd_banded(H, idfzt(y), rho), p);
      CHECK(rel_err(fd, lmmse_dd_dense(eff, y, rho)) < 1e-8);
    }
  }
  SUBCASE("Veh-A at 31x37") {
    const FrameParams p = FrameParams::vehicular_default();
    const auto eff = effective_dd_taps(draw_veh_a(p, 12), p);
    const auto y = apply_dd_io(random_frame(p.M, p.N, rng), eff, 0.1, 99);
    const BandedFDMatrix H = build_banded_matrix(dd_to_fd_response(eff));
    const Eigen::MatrixXcd fd = dfzt(lmmse_fd_banded(H, idfzt(y), 10.0), p);
    CHECK(rel_err(fd, lmmse_dd_dense(eff, y, 10.0)) < 1e-8);
  }
}

TEST_CASE("LMMSE error shrinks with SNR on the identity channel") {
  std::mt19937_64 rng(47);
  const long n = 1147;
  const Eigen::VectorXcd S = random_vector(n, rng) / std::sqrt(2.0);
  const Eigen::VectorXcd z = random_vector(n, rng) / std::sqrt(2.0);
  const BandedFDMatrix H = identity_fd(n, 3);
  double prev = std::numeric_limits<double>::infinity();
  for (double db = -10.0; db <= 40.0; db += 2.5) {
    const double rho = std::pow(10.0, db / 10.0);
    // Fixed noise shape, variance 1/rho.
    FDSeq Y{S + z / std::sqrt(rho)};
    const double err = (lmmse_fd_banded(H, Y, rho).bins - S).norm();
    CHECK(err <= prev);
    prev = err;
  }
}

TEST_CASE("4-QAM constellation") {
  const Constellation c = Constellation::qam4();
  REQUIRE(c.size() == 4);
  CHECK(c.bits_per_symbol() == 2);
  const double s = 1.0 / std::sqrt(2.0);

  SUBCASE("Gray map") {
    const std::vector<std::uint8_t> bits = {0, 0, 0, 1, 1, 0, 1, 1};
    const auto sym = qam_map(bits, c);
    REQUIRE(sym.size() == 4);
    CHECK(std::abs(sym[0] - Complex(s, s)) < 1e-15);
    CHECK(std::abs(sym[1] - Complex(s, -s)) < 1e-15);
    CHECK(std::abs(sym[2] - Complex(-s, s)) < 1e-15);
    CHECK(std::abs(sym[3] - Complex(-s, -s)) < 1e-15);
  }
  SUBCASE("unit average energy") {
    double e = 0.0;
    for (const auto& pt : c.points()) e += std::norm(pt);
    CHECK(e / 4.0 == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("nearest neighbours differ in one bit") {
    double dmin = 1e9;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) dmin = std::min(dmin, std::abs(c.point(i) - c.point(j)));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j)
        if (std::abs(std::abs(c.point(i) - c.point(j)) - dmin) < 1e-12)
          CHECK(std::popcount(c.label(i) ^ c.label(j)) == 1);
  }
  SUBCASE("demap inverts map for every 4-bit pattern") {
    for (unsigned v = 0; v < 16; ++v) {
      const std::vector<std::uint8_t> bits = {std::uint8_t(v >> 3 & 1), std::uint8_t(v >> 2 & 1),
                                              std::uint8_t(v >> 1 & 1), std::uint8_t(v & 1)};
      std::vector<std::size_t> idx;
      for (const auto& z : qam_map(bits, c)) idx.push_back(c.nearest(z));
      CHECK(qam_demap(idx, c) == bits);
    }
  }
  SUBCASE("ties go to the lowest index") {
    CHECK(c.nearest(Complex(0.0, 0.0)) == 0);
    CHECK(c.nearest(Complex(s, 0.0)) == 0);
    CHECK(c.nearest(Complex(0.0, -s)) == 1);
    CHECK(c.nearest(Complex(-s, 0.0)) == 2);
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(qam_map({0, 1, 1}, c), std::invalid_argument);
    CHECK_THROWS_AS(qam_demap({4}, c), std::invalid_argument);
    CHECK_THROWS_AS(Constellation({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(Constellation({1.0, -1.0, 0.5}, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Constellation({1.0, -1.0}, {0, 0}), std::invalid_argument);
  }
}

TEST_CASE("symbol recovery") {
  const Constellation c = Constellation::qam4();
  const FrameParams p = FrameParams::vehicular_default();
  std::mt19937_64 rng(48);
  std::vector<std::uint8_t> bits(2 * p.mn());
  for (auto& b : bits) b = rng() & 1;
  const Eigen::MatrixXcd x = symbols_to_frame(qam_map(bits, c), p.M, p.N);

  SUBCASE("exact FD symbols give zero errors") {
    const SymbolEstimate est = recover_symbols(idfzt(embed_symbols(x, p)), c, p);
    CHECK(est.bits == bits);
    CHECK(max_err(est.soft, x) < 1e-12);
  }
  SUBCASE("all-zero estimate decides index 0") {
    FDSeq zero{Eigen::VectorXcd::Zero(p.mn())};
    const SymbolEstimate est = recover_symbols(zero, c, p);
    for (auto d : est.decisions) REQUIRE(d == 0);
  }
  SUBCASE("perturbations inside the decision region") {
    const double half_dmin = std::sqrt(2.0) / 2.0;
    std::uniform_real_distribution<double> radius(0.0, 0.999 * half_dmin), angle(0.0, 2 * kPi);
    Eigen::MatrixXcd noisy = x;
    for (long i = 0; i < noisy.size(); ++i) noisy(i) += std::polar(radius(rng), angle(rng));
    CHECK(decide_symbols(noisy, c).bits == bits);
  }
  SUBCASE("layout is column-major") {
    const SymbolEstimate est = decide_symbols(x, c);
    for (int l = 0; l < p.N; ++l)
      for (int k = 0; k < p.M; ++k) REQUIRE(c.point(est.decisions[k + p.M * l]) == x(k, l));
    CHECK_THROWS_AS(symbols_to_frame(std::vector<Complex>(5), 2, 3), std::invalid_argument);
  }
}
