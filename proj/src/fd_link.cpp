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


#include "zakotfs/fd_link.hpp"

#include <stdexcept>
#include <string>

namespace zakotfs {

namespace {

long pos_mod(long a, long b) {
  const long r = a % b;
  return r < 0 ? r + b : r;
}

}  // namespace

FDResponse::FDResponse(long size, int half_band)
    : half_band_(half_band), table_(Eigen::MatrixXcd::Zero(size, 2 * half_band + 1)) {
  if (size <= 0 || half_band < 0) throw std::invalid_argument("FDResponse: bad dimensions");
  if (2L * half_band + 1 > size)
    throw std::invalid_argument("FDResponse: band wider than the number of subcarriers");
}

BandedFDMatrix::BandedFDMatrix(long size, int half_band)
    : half_band_(half_band), diags_(Eigen::MatrixXcd::Zero(size, 2 * half_band + 1)) {
  if (size <= 0 || half_band < 0) throw std::invalid_argument("BandedFDMatrix: bad dimensions");
  if (2L * half_band + 1 > size)
    throw std::invalid_argument("BandedFDMatrix: band wider than the matrix");
}

Complex BandedFDMatrix::entry(long i, long j) const {
  const long n = size();
  long d = pos_mod(j - i, n);
  if (d > n / 2) d -= n;
  if (d < -half_band_ || d > half_band_) return Complex(0.0, 0.0);
  return diag(pos_mod(i, n), int(d));
}

Eigen::MatrixXcd BandedFDMatrix::dense() const {
  const long n = size();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (long i = 0; i < n; ++i)
    for (int d = -half_band_; d <= half_band_; ++d) H(i, pos_mod(i + d, n)) += diag(i, d);
  return H;
}

FDResponse dd_to_fd_response(const EffectiveDDChannel& eff, int half_band) {
  const TapSupport& sup = eff.support();
  if (half_band < 0) half_band = sup.l_max;
  const long n = eff.mn();
  FDResponse hf(n, half_band);
  const UnitRoots w(n);
  for (long i = 0; i < n; ++i)
    for (int delta = -half_band; delta <= half_band; ++delta) {
      Complex acc(0.0, 0.0);
      for (long k = sup.k_lo; k <= sup.k_hi; ++k) acc += eff.periodic(k, delta) * w(-i * k);
      hf.at(i, delta) = acc;
    }
  return hf;
}

BandedFDMatrix build_banded_matrix(const FDResponse& hf, int half_band) {
  if (half_band < 0) half_band = hf.half_band();
  if (half_band > hf.half_band())
    throw std::invalid_argument("build_banded_matrix: requested half band " +
                                std::to_string(half_band) + " exceeds tabulated " +
                                std::to_string(hf.half_band()));
  BandedFDMatrix H(hf.size(), half_band);
  for (long i = 0; i < hf.size(); ++i)
    for (int d = -half_band; d <= half_band; ++d) H.diag(i, d) = hf.at(i, -d);
  return H;
}

FDSeq fd_forward(const BandedFDMatrix& H, const FDSeq& S) {
  const long n = H.size();
  if (S.size() != n) throw std::invalid_argument("fd_forward: size mismatch");
  FDSeq Y;
  Y.bins = Eigen::VectorXcd::Zero(n);
  for (long i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (int d = -H.half_band(); d <= H.half_band(); ++d) acc += H.diag(i, d) * S(i + d);
    Y.bins[i] = acc;
  }
  return Y;
}

FDSeq fd_adjoint(const BandedFDMatrix& H, const FDSeq& S) {
  const long n = H.size();
  if (S.size() != n) throw std::invalid_argument("fd_adjoint: size mismatch");
  FDSeq Y;
  Y.bins = Eigen::VectorXcd::Zero(n);
  // (H^H S)[j] = sum_i conj(H[i, j]) S[i], with i = j - d.
  for (long j = 0; j < n; ++j) {
    Complex acc(0.0, 0.0);
    for (int d = -H.half_band(); d <= H.half_band(); ++d) {
      const long i = pos_mod(j - d, n);
      acc += std::conj(H.diag(i, d)) * S.bins[i];
    }
    Y.bins[j] = acc;
  }
  return Y;
}

}  // namespace zakotfs
