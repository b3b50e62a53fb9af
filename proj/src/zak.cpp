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


#include "zakotfs/zak.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zakotfs {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long pos_mod(long a, long b) { return a - b * floor_div(a, b); }

}  // namespace

UnitRoots::UnitRoots(long n) : table_(n) {
  if (n <= 0) throw std::invalid_argument("UnitRoots: order must be positive");
  for (long m = 0; m < n; ++m) table_[m] = std::polar(1.0, 2.0 * kPi * double(m) / double(n));
}

Complex UnitRoots::operator()(long m) const { return table_[pos_mod(m, size())]; }

QuasiPeriodicFrame::QuasiPeriodicFrame(Eigen::MatrixXcd values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.cols() == 0)
    throw std::invalid_argument("QuasiPeriodicFrame: empty fundamental domain");
}

Complex QuasiPeriodicFrame::operator()(long k, long l) const {
  const long m = M(), n = N();
  const long shifts = floor_div(k, m);
  const Complex v = values_(pos_mod(k, m), pos_mod(l, n));
  if (shifts == 0) return v;
  // exp(j 2 pi shifts * l / N) with the product reduced modulo N
  const long phase = pos_mod(pos_mod(shifts, n) * pos_mod(l, n), n);
  return v * std::polar(1.0, 2.0 * kPi * double(phase) / double(n));
}

Complex TimeSeq::operator()(long n) const {
  if (periodic) return samples[pos_mod(n, size())];
  if (n < first || n > last()) return Complex(0.0, 0.0);
  return samples[n - first];
}

Complex FDSeq::operator()(long i) const { return bins[pos_mod(i, size())]; }

QuasiPeriodicFrame embed_symbols(const Eigen::MatrixXcd& symbols, const FrameParams& params) {
  if (symbols.rows() != params.M || symbols.cols() != params.N)
    throw std::invalid_argument("embed_symbols: expected " + std::to_string(params.M) + "x" +
                                std::to_string(params.N) + " array, got " +
                                std::to_string(symbols.rows()) + "x" +
                                std::to_string(symbols.cols()));
  return QuasiPeriodicFrame(symbols);
}

TimeSeq idzt(const QuasiPeriodicFrame& frame) {
  const int M = frame.M(), N = frame.N();
  const UnitRoots w(N);
  const double scale = 1.0 / std::sqrt(double(N));
  TimeSeq x;
  x.periodic = true;
  x.samples = Eigen::VectorXcd::Zero(long(M) * N);
  for (int m = 0; m < N; ++m)
    for (int k = 0; k < M; ++k) {
      Complex acc(0.0, 0.0);
      for (int l = 0; l < N; ++l) acc += frame.values()(k, l) * w(long(m) * l);
      x.samples[k + long(m) * M] = scale * acc;
    }
  return x;
}

QuasiPeriodicFrame dzt(const TimeSeq& y, const FrameParams& params) {
  const int M = params.M, N = params.N;
  if (!y.periodic) throw std::invalid_argument("dzt: input must be MN-periodic");
  if (y.size() != long(M) * N)
    throw std::invalid_argument("dzt: periodic input must hold exactly MN samples");
  const UnitRoots w(N);
  const double scale = 1.0 / std::sqrt(double(N));
  Eigen::MatrixXcd out(M, N);
  for (int l = 0; l < N; ++l)
    for (int k = 0; k < M; ++k) {
      Complex acc(0.0, 0.0);
      for (int q = 0; q < N; ++q) acc += y.samples[k + long(q) * M] * w(-long(q) * l);
      out(k, l) = scale * acc;
    }
  return QuasiPeriodicFrame(std::move(out));
}

TimeSeq periodize(const TimeSeq& y_tilde, long period) {
  if (period <= 0) throw std::invalid_argument("periodize: period must be positive");
  if (y_tilde.size() == 0) throw std::invalid_argument("periodize: empty support window");
  TimeSeq y;
  y.periodic = true;
  y.samples = Eigen::VectorXcd::Zero(period);
  if (y_tilde.periodic) {
    if (period % y_tilde.size() != 0 && y_tilde.size() % period != 0)
      throw std::invalid_argument("periodize: incompatible periods");
    for (long n = 0; n < period; ++n) y.samples[n] = y_tilde(n);
    return y;
  }
  for (long n = y_tilde.first; n <= y_tilde.last(); ++n)
    y.samples[pos_mod(n, period)] += y_tilde.samples[n - y_tilde.first];
  return y;
}

FDSeq idfzt(const QuasiPeriodicFrame& frame) {
  const int M = frame.M(), N = frame.N();
  const long mn = long(M) * N;
  const UnitRoots w(mn);
  const double scale = 1.0 / std::sqrt(double(M));
  FDSeq S;
  S.bins = Eigen::VectorXcd::Zero(mn);
  // x_dd[k, i] = x_dd[k, i mod N] for k in the fundamental delay range.
  for (long i = 0; i < mn; ++i) {
    const long l = i % N;
    Complex acc(0.0, 0.0);
    for (int k = 0; k < M; ++k) acc += frame.values()(k, l) * w(-i * k);
    S.bins[i] = scale * acc;
  }
  return S;
}

Eigen::MatrixXcd dfzt(const FDSeq& S, const FrameParams& params) {
  const int M = params.M, N = params.N;
  const long mn = long(M) * N;
  if (S.size() != mn) throw std::invalid_argument("dfzt: FD sequence must hold MN bins");
  const UnitRoots w(mn);
  const double scale = 1.0 / std::sqrt(double(M));
  Eigen::MatrixXcd x(M, N);
  for (int l = 0; l < N; ++l)
    for (int k = 0; k < M; ++k) {
      Complex acc(0.0, 0.0);
      for (int p = 0; p < M; ++p) {
        const long i = l + long(p) * N;
        acc += S.bins[i] * w(i * k);
      }
      x(k, l) = scale * acc;
    }
  return x;
}

}  // namespace zakotfs
