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

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

/// Banded Hermitian positive-definite solvers.
///
/// BandedCholesky factors a strictly banded matrix as L L^H in O(n p^2).
/// CyclicBandedHermitian adds the wrap-around corners of a cyclically
/// banded matrix and solves it exactly by bordered elimination: the last p
/// unknowns form the border, the leading block is strictly banded, and
/// the p x p Schur complement is factored densely.
namespace zakotfs {

namespace detail {

template <typename Scalar>
inline typename Eigen::NumTraits<Scalar>::Real real_part(const Scalar& s) {
  return Eigen::numext::real(s);
}

}  // namespace detail

/// Lower-band storage: band(d, j) = A(j + d, j), d in [0, p].
template <typename Scalar>
class BandedCholesky {
 public:
  using Index = Eigen::Index;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using BandMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BandedCholesky() = default;
  explicit BandedCholesky(const BandMatrix& lower_band) { compute(lower_band); }

  Index size() const { return factor_.cols(); }
  Index half_band() const { return factor_.rows() - 1; }

  /// Throws std::runtime_error when a pivot is not strictly positive.
  BandedCholesky& compute(const BandMatrix& lower_band) {
    factor_ = lower_band;
    const Index n = factor_.cols(), p = factor_.rows() - 1;
    if (p < 0) throw std::invalid_argument("BandedCholesky: empty band");
    for (Index j = 0; j < n; ++j) {
      Real diag = detail::real_part(factor_(0, j));
      for (Index k = std::max<Index>(0, j - p); k < j; ++k)
        diag -= Eigen::numext::abs2(factor_(j - k, k));
      if (!(diag > Real(0)))
        throw std::runtime_error("BandedCholesky: matrix is not positive definite (pivot " +
                                 std::to_string(j) + ")");
      const Real ljj = std::sqrt(diag);
      factor_(0, j) = Scalar(ljj);
      for (Index i = j + 1; i <= std::min(n - 1, j + p); ++i) {
        Scalar v = factor_(i - j, j);
        for (Index k = std::max<Index>(0, i - p); k < j; ++k)
          v -= factor_(i - k, k) * Eigen::numext::conj(factor_(j - k, k));
        factor_(i - j, j) = v / ljj;
      }
    }
    return *this;
  }

  /// Solves A X = B column by column, in place.
  template <typename Derived>
  void solve_in_place(Eigen::MatrixBase<Derived>& b) const {
    const Index n = size(), p = half_band();
    if (b.rows() != n) throw std::invalid_argument("BandedCholesky: rhs size mismatch");
    for (Index c = 0; c < b.cols(); ++c) {
      for (Index i = 0; i < n; ++i) {
        Scalar v = b(i, c);
        for (Index k = std::max<Index>(0, i - p); k < i; ++k) v -= factor_(i - k, k) * b(k, c);
        b(i, c) = v / factor_(0, i);
      }
      for (Index i = n - 1; i >= 0; --i) {
        Scalar v = b(i, c);
        for (Index k = i + 1; k <= std::min(n - 1, i + p); ++k)
          v -= Eigen::numext::conj(factor_(k - i, i)) * b(k, c);
        b(i, c) = v / factor_(0, i);
      }
    }
  }

  template <typename Derived>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> solve(
      const Eigen::MatrixBase<Derived>& b) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x = b;
    solve_in_place(x);
    return x;
  }

  const BandMatrix& factor() const { return factor_; }

 private:
  BandMatrix factor_;
};

/// Hermitian matrix with A(i, j) != 0 only when the cyclic distance between
/// i and j is at most p. Stored as diag(i, d + p) = A(i, (i + d) mod n).
/// Requires n >= 2p + 1 so that no two offsets share a column.
template <typename Scalar>
class CyclicBandedHermitian {
 public:
  using Index = Eigen::Index;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  CyclicBandedHermitian(Index n, Index p) : p_(p), diags_(Matrix::Zero(n, 2 * p + 1)) {
    if (n <= 0 || p < 0) throw std::invalid_argument("CyclicBandedHermitian: bad dimensions");
    if (2 * p + 1 > n)
      throw std::invalid_argument("CyclicBandedHermitian: band of width " +
                                  std::to_string(2 * p + 1) + " does not fit in size " +
                                  std::to_string(n));
  }

  Index size() const { return diags_.rows(); }
  Index half_band() const { return p_; }

  Scalar& diag(Index i, Index d) { return diags_(i, d + p_); }
  Scalar diag(Index i, Index d) const { return diags_(i, d + p_); }

  Scalar entry(Index i, Index j) const {
    const Index n = size();
    Index d = ((j - i) % n + n) % n;
    if (d > n / 2) d -= n;
    if (d < -p_ || d > p_) return Scalar(0);
    return diag(i, d);
  }

  Matrix dense() const {
    const Index n = size();
    Matrix A = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index d = -p_; d <= p_; ++d) A(i, ((i + d) % n + n) % n) += diag(i, d);
    return A;
  }

  /// Factors the leading strictly banded block and the Schur complement of
  /// the border. Throws std::runtime_error if A is not positive definite.
  void factorize() {
    const Index n = size(), p = p_, m = n - p;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> band(p + 1, m);
    band.setZero();
    for (Index j = 0; j < m; ++j)
      for (Index d = 0; d <= p && j + d < m; ++d) band(d, j) = entry(j + d, j);
    leading_.compute(band);

    // Coupling of the leading block to the border; only the first and last
    // p rows are nonzero.
    coupling_ = Matrix::Zero(m, p);
    for (Index i = 0; i < m; ++i)
      if (i < p || i >= m - p)
        for (Index c = 0; c < p; ++c) coupling_(i, c) = entry(i, m + c);
    solved_coupling_ = coupling_;
    leading_.solve_in_place(solved_coupling_);

    Matrix schur(p, p);
    for (Index r = 0; r < p; ++r)
      for (Index c = 0; c < p; ++c) schur(r, c) = entry(m + r, m + c);
    if (p > 0) {
      schur.noalias() -= coupling_.adjoint() * solved_coupling_;
      schur_.compute(schur);
      if (schur_.info() != Eigen::Success)
        throw std::runtime_error("CyclicBandedHermitian: border Schur complement is not "
                                 "positive definite");
    }
    factorized_ = true;
  }

  template <typename Derived>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve(const Eigen::MatrixBase<Derived>& b) const {
    if (!factorized_) throw std::logic_error("CyclicBandedHermitian: solve before factorize");
    const Index n = size(), p = p_, m = n - p;
    if (b.size() != n) throw std::invalid_argument("CyclicBandedHermitian: rhs size mismatch");
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> z = b.head(m);
    leading_.solve_in_place(z);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(n);
    if (p > 0) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tail = b.tail(p) - coupling_.adjoint() * z;
      x.tail(p) = schur_.solve(tail);
      x.head(m) = z - solved_coupling_ * x.tail(p);
    } else {
      x = z;
    }
    return x;
  }

  /// y = A x using the diagonal storage.
  template <typename Derived>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> multiply(const Eigen::MatrixBase<Derived>& x) const {
    const Index n = size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
    for (Index i = 0; i < n; ++i)
      for (Index d = -p_; d <= p_; ++d) y[i] += diag(i, d) * x[((i + d) % n + n) % n];
    return y;
  }

 private:
  Index p_;
  Matrix diags_;
  BandedCholesky<Scalar> leading_;
  Matrix coupling_;
  Matrix solved_coupling_;
  Eigen::LLT<Matrix> schur_;
  bool factorized_ = false;
};

}  // namespace zakotfs
