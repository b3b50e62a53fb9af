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

#include <Eigen/Core>

#include "zakotfs/channel.hpp"
#include "zakotfs/zak.hpp"

/// Frequency-domain view of the effective DD channel.
///
/// With S = IDFZT(x_dd) and Y = IDFZT(y_dd) the noiseless link is
///
///   Y[i] = sum_l' h_f[i, l'] S[l'],
///   h_f[i, l'] = sum_k' h[k', i - l'] exp(-j 2 pi i k' / MN),
///
/// so h_f[i, l'] vanishes unless the Doppler offset i - l' is within
/// +-l_max (mod MN): the FD channel matrix is cyclically banded.
namespace zakotfs {

/// h_f tabulated by subcarrier i and Doppler offset delta = i - l' in
/// [-half_band, half_band].
class FDResponse {
 public:
  FDResponse(long size, int half_band);

  long size() const { return table_.rows(); }
  int half_band() const { return half_band_; }
  Complex& at(long i, int delta) { return table_(i, delta + half_band_); }
  Complex at(long i, int delta) const { return table_(i, delta + half_band_); }
  const Eigen::MatrixXcd& table() const { return table_; }

 private:
  int half_band_;
  Eigen::MatrixXcd table_;
};

/// Cyclically banded MN x MN matrix stored by diagonals:
/// diag(i, d + half_band) = H[i, (i + d) mod MN] for d in [-half_band, half_band].
class BandedFDMatrix {
 public:
  BandedFDMatrix(long size, int half_band);

  long size() const { return diags_.rows(); }
  int half_band() const { return half_band_; }

  Complex& diag(long i, int d) { return diags_(i, d + half_band_); }
  Complex diag(long i, int d) const { return diags_(i, d + half_band_); }
  const Eigen::MatrixXcd& diagonals() const { return diags_; }

  /// Entry (i, j); zero when the cyclic distance exceeds half_band.
  Complex entry(long i, long j) const;
  Eigen::MatrixXcd dense() const;

 private:
  int half_band_;
  Eigen::MatrixXcd diags_;
};

/// Evaluates h_f inside the band |i - l'| <= half_band (default l_max of the
/// channel's support) with the delay sum restricted to the tap support.
/// Cost O((2 half_band + 1) * k_count * MN).
FDResponse dd_to_fd_response(const EffectiveDDChannel& eff, int half_band = -1);

/// H[i, i + d] = h_f[i, -d] for |d| <= half_band; everything else is zero.
/// half_band defaults to the table's; a wider request throws.
BandedFDMatrix build_banded_matrix(const FDResponse& hf, int half_band = -1);

/// Y[i] = sum_d H[i, i + d] S[i + d], cyclic indexing.
FDSeq fd_forward(const BandedFDMatrix& H, const FDSeq& S);

/// Y = H^H S for the same storage.
FDSeq fd_adjoint(const BandedFDMatrix& H, const FDSeq& S);

}  // namespace zakotfs
