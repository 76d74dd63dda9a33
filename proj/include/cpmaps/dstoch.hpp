/** @file
 * The doubly stochastic shadow of a unital trace-preserving channel,
 * D = sum_i K_i o conj(K_i), with validation, the support/rank bound
 * N * rank >= n^2, and a seeded Birkhoff-mixture sampler.
 *
 * Index convention: with D = sum_i K_i o conj(K_i), the i-th column of D is
 * the diagonal of Phi(E_ii).
 */
#pragma once

#include <string>
#include <vector>

#include "cpmaps/channel.hpp"
#include "cpmaps/matrix.hpp"
#include "cpmaps/rng.hpp"

namespace cpmaps {

struct DoublyStochasticMatrix {
  Index n = 0;
  RealMatrix D;
};

/// D(i,j) = sum_k |K_k(i,j)|^2. Requires a unital trace-preserving channel;
/// unitality makes the rows sum to 1 and trace preservation the columns.
inline DoublyStochasticMatrix extract_dphi(const Channel& ch,
                                           const Tolerances& tol = {}) {
  const double tp =
      (kraus_gram_in(ch) - ComplexMatrix::Identity(ch.dim_in, ch.dim_in))
          .norm();
  const double un =
      (kraus_gram_out(ch) - ComplexMatrix::Identity(ch.dim_out, ch.dim_out))
          .norm();
  if (tp > tol.tol_eq)
    throw std::invalid_argument(
        "extract_dphi: channel is not trace-preserving (residual " +
        std::to_string(tp) + ")");
  if (un > tol.tol_eq)
    throw std::invalid_argument(
        "extract_dphi: channel is not unital (residual " + std::to_string(un) +
        ")");
  RealMatrix d = RealMatrix::Zero(ch.dim_out, ch.dim_in);
  for (const auto& k : ch.kraus) d += k.cwiseAbs2();
  return DoublyStochasticMatrix{ch.dim_in, d};
}

struct DsCheck {
  bool ok = false;
  double min_entry = 0.0;
  double max_row_residual = 0.0;  // max_i |row_i sum - 1|
  double max_col_residual = 0.0;
};

/// Nonnegativity plus unit row and column sums, within tol_eq.
inline DsCheck check_doubly_stochastic(const RealMatrix& d,
                                       const Tolerances& tol = {}) {
  if (d.rows() != d.cols())
    throw std::invalid_argument("check_doubly_stochastic: matrix not square");
  DsCheck out;
  out.min_entry = d.size() ? d.minCoeff() : 0.0;
  out.max_row_residual =
      d.size() ? (d.rowwise().sum().array() - 1.0).abs().maxCoeff() : 0.0;
  out.max_col_residual =
      d.size() ? (d.colwise().sum().array() - 1.0).abs().maxCoeff() : 0.0;
  out.ok = out.min_entry >= -tol.tol_eq &&
           out.max_row_residual <= tol.tol_eq &&
           out.max_col_residual <= tol.tol_eq;
  return out;
}

struct DsRankSupport {
  Index support_count = 0;  // entries above tol_eq
  Index rank = 0;
  bool holds = false;       // support * rank >= n^2
};

inline DsRankSupport ds_rank_support_bound(const DoublyStochasticMatrix& ds,
                                           const Tolerances& tol = {}) {
  DsRankSupport out;
  for (Index i = 0; i < ds.n; ++i)
    for (Index j = 0; j < ds.n; ++j)
      if (ds.D(i, j) > tol.tol_eq) ++out.support_count;
  out.rank = svd_rank(ds.D.cast<Complex>(), tol).rank;
  out.holds = out.support_count * out.rank >= ds.n * ds.n;
  return out;
}

/// Convex combination of k uniformly random permutation matrices with
/// uniform-simplex weights; marginals are exact by construction.
inline DoublyStochasticMatrix random_ds(Index n, Index k, rng::Seed seed) {
  if (n < 1 || k < 1)
    throw std::invalid_argument("random_ds: n and k must be positive");
  rng::Prng prng(seed);
  const std::vector<double> w = rng::simplex_weights(static_cast<int>(k), prng);
  RealMatrix d = RealMatrix::Zero(n, n);
  for (Index t = 0; t < k; ++t) {
    const std::vector<int> perm = rng::permutation(static_cast<int>(n), prng);
    for (Index i = 0; i < n; ++i)
      d(i, perm[static_cast<std::size_t>(i)]) += w[static_cast<std::size_t>(t)];
  }
  return DoublyStochasticMatrix{n, d};
}

}  // namespace cpmaps
