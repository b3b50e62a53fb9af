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

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "zakotfs/banded.hpp"
#include "zakotfs/channel.hpp"
#include "zakotfs/fd_link.hpp"
#include "zakotfs/zak.hpp"

namespace zakotfs {

/// A = H H^H + I/rho for a cyclically banded H of half band L; A has half
/// band 2L. Throws std::invalid_argument when rho <= 0 or the matrix is
/// smaller than 4L + 1.
CyclicBandedHermitian<Complex> regularized_normal_matrix(const BandedFDMatrix& H, double rho);

/// S_hat = H^H (H H^H + I/rho)^{-1} Y in O(MN b^2), b = 4L + 1.
/// Throws std::runtime_error if the factorization fails.
FDSeq lmmse_fd_banded(const BandedFDMatrix& H, const FDSeq& Y, double rho);

/// Dense MN x MN matrix G of the DD I/O relation acting on the
/// fundamental domain stacked column-major (index k + M l).
Eigen::MatrixXcd dense_dd_matrix(const EffectiveDDChannel& eff);

/// x_hat = G^H (G G^H + I/rho)^{-1} y, reshaped to M x N. O((MN)^3).
Eigen::MatrixXcd lmmse_dd_dense(const EffectiveDDChannel& eff, const QuasiPeriodicFrame& y,
                                double rho);

/// Points with bit labels; points[i] carries the bits of `labels[i]`,
/// most significant bit first.
class Constellation {
 public:
  Constellation(std::vector<Complex> points, std::vector<unsigned> labels);

  /// Gray-mapped 4-QAM with unit average energy:
  /// bits (b0, b1) -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2).
  static Constellation qam4();

  int bits_per_symbol() const { return bits_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Complex>& points() const { return points_; }
  Complex point(std::size_t index) const { return points_[index]; }
  unsigned label(std::size_t index) const { return labels_[index]; }
  std::size_t index_of_label(unsigned label) const { return by_label_[label]; }

  /// Nearest point by Euclidean distance; ties go to the lowest index.
  std::size_t nearest(Complex z) const;

 private:
  std::vector<Complex> points_;
  std::vector<unsigned> labels_;
  std::vector<std::size_t> by_label_;
  int bits_ = 0;
};

/// Throws std::invalid_argument if the bit count is not a multiple of
/// bits_per_symbol.
std::vector<Complex> qam_map(const std::vector<std::uint8_t>& bits, const Constellation& c);
std::vector<std::uint8_t> qam_demap(const std::vector<std::size_t>& decisions,
                                    const Constellation& c);

/// Reshapes MN symbols into an M x N frame (column-major, index k + M l).
Eigen::MatrixXcd symbols_to_frame(const std::vector<Complex>& symbols, int M, int N);

struct SymbolEstimate {
  Eigen::MatrixXcd soft;              // M x N
  std::vector<std::size_t> decisions;  // column-major, index k + M l
  std::vector<std::uint8_t> bits;
};

/// Hard decisions and bits for an equalized M x N symbol array.
SymbolEstimate decide_symbols(const Eigen::MatrixXcd& x_hat, const Constellation& c);

/// DFZT of S_hat followed by decide_symbols.
SymbolEstimate recover_symbols(const FDSeq& S_hat, const Constellation& c,
                               const FrameParams& params);

}  // namespace zakotfs
