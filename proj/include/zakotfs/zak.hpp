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

#include "zakotfs/frame_params.hpp"

/// Discrete Zak-transform algebra.
///
/// A delay-Doppler frame lives on the fundamental domain k in [0,M),
/// l in [0,N) and extends to all integers by the quasi-periodic rule
///
///   x(k + nM, l + mN) = exp(j 2 pi n l / N) x(k, l).
///
/// The DZT/IDZT pair moves between such frames and MN-periodic time
/// sequences; the DFZT/IDFZT pair moves between frames and MN-periodic
/// frequency sequences. All four maps are unitary.
namespace zakotfs {

/// exp(j 2 pi m / n) for integer m, reduced exactly modulo n.
class UnitRoots {
 public:
  explicit UnitRoots(long n);
  long size() const { return static_cast<long>(table_.size()); }
  Complex operator()(long m) const;

 private:
  Eigen::VectorXcd table_;
};

class QuasiPeriodicFrame {
 public:
  QuasiPeriodicFrame() = default;
  /// values is M x N; row k is the delay bin, column l the Doppler bin.
  explicit QuasiPeriodicFrame(Eigen::MatrixXcd values);

  int M() const { return static_cast<int>(values_.rows()); }
  int N() const { return static_cast<int>(values_.cols()); }

  const Eigen::MatrixXcd& values() const { return values_; }

  /// Quasi-periodic accessor valid for every integer (k, l).
  Complex operator()(long k, long l) const;

 private:
  Eigen::MatrixXcd values_;
};

/// Discrete-time sequence: either MN-periodic with samples n in [0,MN),
/// or aperiodic with finite support [first, first + size).
struct TimeSeq {
  Eigen::VectorXcd samples;
  long first = 0;
  bool periodic = false;

  long size() const { return static_cast<long>(samples.size()); }
  long last() const { return first + size() - 1; }
  /// Zero outside the window of an aperiodic sequence.
  Complex operator()(long n) const;
};

/// MN-periodic frequency-domain sequence S[i].
struct FDSeq {
  Eigen::VectorXcd bins;

  long size() const { return static_cast<long>(bins.size()); }
  Complex operator()(long i) const;
};

/// Embeds an M x N symbol array as the fundamental domain of a frame.
QuasiPeriodicFrame embed_symbols(const Eigen::MatrixXcd& symbols, const FrameParams& params);

/// x[k + mM] = N^{-1/2} sum_l x_dd[k,l] exp(j 2 pi m l / N).
TimeSeq idzt(const QuasiPeriodicFrame& frame);

/// y_dd[k,l] = N^{-1/2} sum_q y[k + qM] exp(-j 2 pi q l / N).
QuasiPeriodicFrame dzt(const TimeSeq& y, const FrameParams& params);

/// y[n] = sum_p y_tilde[n + p*period] for n in [0, period).
TimeSeq periodize(const TimeSeq& y_tilde, long period);

/// S[i] = M^{-1/2} sum_k x_dd[k,i] exp(-j 2 pi i k / MN), i in [0, MN).
FDSeq idfzt(const QuasiPeriodicFrame& frame);

/// x[k,l] = M^{-1/2} sum_p S[l + pN] exp(j 2 pi (l + pN) k / MN).
Eigen::MatrixXcd dfzt(const FDSeq& S, const FrameParams& params);

}  // namespace zakotfs
