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


#include "zakotfs/equalizer.hpp"

#include <Eigen/Cholesky>

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zakotfs {

namespace {

long pos_mod(long a, long b) {
  const long r = a % b;
  return r < 0 ? r + b : r;
}

}  // namespace

CyclicBandedHermitian<Complex> regularized_normal_matrix(const BandedFDMatrix& H, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("lmmse: rho must be positive");
  const long n = H.size();
  const int L = H.half_band();
  if (n < 4L * L + 1)
    throw std::invalid_argument("lmmse: matrix of size " + std::to_string(n) +
                                " is too small for band 4*" + std::to_string(L) + "+1");
  CyclicBandedHermitian<Complex> A(n, 2 * L);
  // A(i, i + e) = sum_d H(i, i + d) conj(H(i + e, i + d)); the second factor
  // sits at offset d - e in row i + e.
  for (long i = 0; i < n; ++i)
    for (int e = -2 * L; e <= 2 * L; ++e) {
      const long row = pos_mod(i + e, n);
      Complex acc(0.0, 0.0);
      for (int d = std::max(-L, e - L); d <= std::min(L, e + L); ++d)
        acc += H.diag(i, d) * std::conj(H.diag(row, d - e));
      A.diag(i, e) = acc;
    }
  for (long i = 0; i < n; ++i) A.diag(i, 0) += 1.0 / rho;
  return A;
}

FDSeq lmmse_fd_banded(const BandedFDMatrix& H, const FDSeq& Y, double rho) {
  if (Y.size() != H.size()) throw std::invalid_argument("lmmse_fd_banded: size mismatch");
  CyclicBandedHermitian<Complex> A = regularized_normal_matrix(H, rho);
  A.factorize();
  FDSeq u;
  u.bins = A.solve(Y.bins);
  return fd_adjoint(H, u);
}

Eigen::MatrixXcd dense_dd_matrix(const EffectiveDDChannel& eff) {
  const long M = eff.M(), N = eff.N();
  const long n = eff.mn();
  const TapSupport& sup = eff.support();
  const UnitRoots w_mn(n);
  const UnitRoots w_n(N);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n, n);
  // y(k,l) += h(k',l') x(k-k', l-l') exp(j 2 pi l'(k-k')/MN); the source
  // index folds into the fundamental domain with its quasi-periodic phase.
  for (long lp = -sup.l_max; lp <= sup.l_max; ++lp)
    for (long kp = sup.k_lo; kp <= sup.k_hi; ++kp) {
      const Complex h = eff.tap(kp, lp);
      if (h == Complex(0.0, 0.0)) continue;
      for (long l = 0; l < N; ++l)
        for (long k = 0; k < M; ++k) {
          const long ks = k - kp, ls = l - lp;
          const long wraps = (ks >= 0) ? ks / M : -((-ks + M - 1) / M);
          const long kf = ks - wraps * M;
          const long lf = ((ls % N) + N) % N;
          G(k + M * l, kf + M * lf) += h * w_n(wraps * ls) * w_mn(lp * ks);
        }
    }
  return G;
}

Eigen::MatrixXcd lmmse_dd_dense(const EffectiveDDChannel& eff, const QuasiPeriodicFrame& y,
                                double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("lmmse_dd_dense: rho must be positive");
  if (y.M() != eff.M() || y.N() != eff.N())
    throw std::invalid_argument("lmmse_dd_dense: frame and channel sizes differ");
  const Eigen::MatrixXcd G = dense_dd_matrix(eff);
  const long n = G.rows();
  Eigen::MatrixXcd A(n, n);
  A.setIdentity();
  A /= rho;
  A.selfadjointView<Eigen::Lower>().rankUpdate(G);
  Eigen::LLT<Eigen::MatrixXcd> llt(A);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("lmmse_dd_dense: normal matrix is not positive definite");
  const Eigen::VectorXcd u = llt.solve(y.values().reshaped());
  const Eigen::VectorXcd x = G.adjoint() * u;
  return x.reshaped(eff.M(), eff.N());
}

Constellation::Constellation(std::vector<Complex> points, std::vector<unsigned> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.empty()) throw std::invalid_argument("Constellation: empty constellation");
  if (points_.size() != labels_.size())
    throw std::invalid_argument("Constellation: one label per point required");
  if (!std::has_single_bit(points_.size()))
    throw std::invalid_argument("Constellation: size must be a power of two");
  bits_ = std::countr_zero(points_.size());
  by_label_.assign(points_.size(), points_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= points_.size() || by_label_[labels_[i]] != points_.size())
      throw std::invalid_argument("Constellation: labels must be a permutation");
    by_label_[labels_[i]] = i;
  }
}

Constellation Constellation::qam4() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Complex> pts;
  std::vector<unsigned> labels;
  for (unsigned b0 = 0; b0 < 2; ++b0)
    for (unsigned b1 = 0; b1 < 2; ++b1) {
      pts.emplace_back(s * (1.0 - 2.0 * b0), s * (1.0 - 2.0 * b1));
      labels.push_back(2 * b0 + b1);
    }
  return Constellation(std::move(pts), std::move(labels));
}

std::size_t Constellation::nearest(Complex z) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d = std::norm(z - points_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::vector<Complex> qam_map(const std::vector<std::uint8_t>& bits, const Constellation& c) {
  const std::size_t k = c.bits_per_symbol();
  if (k == 0 || bits.size() % k != 0)
    throw std::invalid_argument("qam_map: bit count " + std::to_string(bits.size()) +
                                " is not a multiple of " + std::to_string(k));
  std::vector<Complex> out(bits.size() / k);
  for (std::size_t s = 0; s < out.size(); ++s) {
    unsigned label = 0;
    for (std::size_t b = 0; b < k; ++b) label = (label << 1) | (bits[s * k + b] & 1u);
    out[s] = c.point(c.index_of_label(label));
  }
  return out;
}

std::vector<std::uint8_t> qam_demap(const std::vector<std::size_t>& decisions,
                                    const Constellation& c) {
  const std::size_t k = c.bits_per_symbol();
  std::vector<std::uint8_t> bits(decisions.size() * k);
  for (std::size_t s = 0; s < decisions.size(); ++s) {
    if (decisions[s] >= c.size()) throw std::invalid_argument("qam_demap: index out of range");
    const unsigned label = c.label(decisions[s]);
    for (std::size_t b = 0; b < k; ++b) bits[s * k + b] = (label >> (k - 1 - b)) & 1u;
  }
  return bits;
}

Eigen::MatrixXcd symbols_to_frame(const std::vector<Complex>& symbols, int M, int N) {
  if (symbols.size() != std::size_t(M) * std::size_t(N))
    throw std::invalid_argument("symbols_to_frame: expected M*N symbols");
  Eigen::MatrixXcd x(M, N);
  for (int l = 0; l < N; ++l)
    for (int k = 0; k < M; ++k) x(k, l) = symbols[k + std::size_t(M) * l];
  return x;
}

SymbolEstimate decide_symbols(const Eigen::MatrixXcd& x_hat, const Constellation& c) {
  SymbolEstimate est;
  est.soft = x_hat;
  est.decisions.resize(x_hat.size());
  for (Eigen::Index l = 0; l < x_hat.cols(); ++l)
    for (Eigen::Index k = 0; k < x_hat.rows(); ++k)
      est.decisions[k + x_hat.rows() * l] = c.nearest(x_hat(k, l));
  est.bits = qam_demap(est.decisions, c);
  return est;
}

SymbolEstimate recover_symbols(const FDSeq& S_hat, const Constellation& c,
                               const FrameParams& params) {
  return decide_symbols(dfzt(S_hat, params), c);
}

}  // namespace zakotfs
