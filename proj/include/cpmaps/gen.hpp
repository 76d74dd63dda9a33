/** @file
 * Seeded random ensembles: Haar unitaries (QR of a complex Ginibre matrix
 * with diagonal phase correction), trace-preserving channels from sliced
 * isometries, mixed-unitary channels, and bounded-rank correlation
 * matrices. Every generator is a pure function of (parameters, seed).
 */
#pragma once

#include <string>
#include <vector>

#include "cpmaps/channel.hpp"
#include "cpmaps/matrix.hpp"
#include "cpmaps/rng.hpp"
#include "cpmaps/schur.hpp"

namespace cpmaps {

using rng::Seed;

/// Haar-distributed n x n unitary. The QR phase ambiguity is removed by
/// normalizing the R diagonal to positive reals, which makes the law
/// invariant under left multiplication by any fixed unitary.
inline ComplexMatrix haar_unitary(Index n, Seed seed) {
  if (n < 1) throw std::invalid_argument("haar_unitary: n must be positive");
  rng::Prng prng(seed);
  ComplexMatrix a(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double re = prng.gaussian();
      const double im = prng.gaussian();
      a(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mod = std::abs(d);
    q.col(j) *= mod > 0.0 ? d / mod : Complex(1.0, 0.0);
  }
  return q;
}

/// Trace-preserving channel: the first n columns of a Haar unitary on
/// C^{mp} sliced into p blocks of m rows. Requires mp >= n.
inline Channel random_tp_channel(Index n, Index m, Index p, Seed seed) {
  if (n < 1 || m < 1 || p < 1)
    throw std::invalid_argument("random_tp_channel: dimensions must be positive");
  if (m * p < n)
    throw std::invalid_argument(
        "random_tp_channel: no isometry exists (m*p < n)");
  const ComplexMatrix u = haar_unitary(m * p, seed);
  const ComplexMatrix isometry = u.leftCols(n);
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i)
    ops.push_back(isometry.middleRows(i * m, m));
  return Channel(n, m, std::move(ops));
}

/// Mixed-unitary channel: Kraus {sqrt(w_i) U_i} with uniform-simplex
/// weights and independent Haar unitaries. Unital and trace-preserving.
inline Channel mixed_unitary_channel(Index n, Index k, Seed seed) {
  if (n < 1 || k < 1)
    throw std::invalid_argument("mixed_unitary_channel: n, k must be positive");
  rng::Prng weight_stream(rng::derive(seed, 0));
  const std::vector<double> w =
      rng::simplex_weights(static_cast<int>(k), weight_stream);
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i)
    ops.push_back(std::sqrt(w[static_cast<std::size_t>(i)]) *
                  haar_unitary(n, rng::derive(seed, static_cast<std::uint64_t>(i) + 1)));
  return Channel(n, n, std::move(ops));
}

/// Correlation matrix of rank at most r (equal to r almost surely): the
/// Gram matrix of n complex Gaussian rows in C^r, rescaled to unit diagonal.
inline CorrelationMatrix random_correlation_matrix(Index n, Index r, Seed seed) {
  if (r < 1 || r > n)
    throw std::invalid_argument("random_correlation_matrix: need 1 <= r <= n");
  rng::Prng prng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    ComplexMatrix w(n, r);
    for (Index j = 0; j < r; ++j)
      for (Index i = 0; i < n; ++i) {
        const double re = prng.gaussian();
        const double im = prng.gaussian();
        w(i, j) = Complex(re, im);
      }
    const ComplexMatrix gram = w * w.adjoint();
    if (gram.diagonal().real().minCoeff() <= 0.0) continue;  // resample
    RealVector scale(n);
    for (Index i = 0; i < n; ++i)
      scale(i) = 1.0 / std::sqrt(gram(i, i).real());
    ComplexMatrix c = scale.asDiagonal() * gram * scale.asDiagonal();
    for (Index i = 0; i < n; ++i) c(i, i) = 1.0;  // exact unit diagonal
    c = (c + ComplexMatrix(c.adjoint())) / 2.0;   // exact Hermiticity
    return CorrelationMatrix{n, c};
  }
  throw std::runtime_error(
      "random_correlation_matrix: degenerate Gram diagonal after 64 attempts");
}

}  // namespace cpmaps
