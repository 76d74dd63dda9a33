/** @file
 * Schur-product channels X -> C o X for a correlation matrix C (PSD, unit
 * diagonal): construction from the spectral decomposition, Gram vectors,
 * rank statistics of C o conj(C), the modulus-one block structure with its
 * quotient correlation matrix, and circuit enumeration for the quotient's
 * column matroid.
 */
#pragma once

#include <algorithm>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "cpmaps/channel.hpp"
#include "cpmaps/matrix.hpp"

namespace cpmaps {

/// PSD matrix with unit diagonal; generates the unital trace-preserving
/// channel X -> C o X.
struct CorrelationMatrix {
  Index n = 0;
  ComplexMatrix C;
};

/// Validating factory; error messages name the violated invariant.
inline CorrelationMatrix make_correlation(const ComplexMatrix& c,
                                          const Tolerances& tol = {}) {
  if (c.rows() != c.cols())
    throw std::invalid_argument("correlation matrix: not square");
  const double herm = hermiticity_defect(c);
  if (herm > tol.tol_herm)
    throw std::invalid_argument(
        "correlation matrix: not Hermitian (defect " + std::to_string(herm) +
        ")");
  for (Index i = 0; i < c.rows(); ++i)
    if (std::abs(c(i, i) - 1.0) > tol.tol_eq)
      throw std::invalid_argument(
          "correlation matrix: diagonal entry " + std::to_string(i) +
          " is not 1");
  for (Index i = 0; i < c.rows(); ++i)
    for (Index j = 0; j < c.cols(); ++j)
      if (std::abs(c(i, j)) > 1.0 + tol.tol_eq)
        throw std::invalid_argument(
            "correlation matrix: off-diagonal modulus exceeds 1 at (" +
            std::to_string(i) + "," + std::to_string(j) + ")");
  const EigHermitian eig = eig_hermitian(c, tol);
  const double lo = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (lo < -tol.tol_psd * std::max(eig.eigenvalues(0), 1.0))
    throw std::invalid_argument(
        "correlation matrix: not positive semidefinite (eigenvalue " +
        std::to_string(lo) + ")");
  return CorrelationMatrix{c.rows(), c};
}

/// Kraus family {diag(sqrt(lambda_i) v_i)} over eigenpairs above the rank
/// cutoff; the resulting channel acts as X -> C o X and is unital and TP.
inline Channel make_schur_channel(const CorrelationMatrix& corr,
                                  const Tolerances& tol = {}) {
  const EigHermitian eig = eig_hermitian(corr.C, tol);
  const double cutoff =
      tol.rank_cutoff(corr.n, corr.n) * std::max(eig.eigenvalues(0), 0.0);
  std::vector<ComplexMatrix> ops;
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lambda = eig.eigenvalues(i);
    if (lambda <= cutoff) continue;
    const ComplexVector v = std::sqrt(lambda) * eig.eigenvectors.col(i);
    ops.push_back(ComplexMatrix(v.asDiagonal()));
  }
  if (ops.empty())
    throw std::invalid_argument("make_schur_channel: zero correlation matrix");
  return Channel(corr.n, corr.n, std::move(ops));
}

/// Unit Gram vectors w_i in C^rank(C) with w_i^* w_j = C(i, j).
inline std::vector<ComplexVector> gram_vectors(const CorrelationMatrix& corr,
                                               const Tolerances& tol = {}) {
  const EigHermitian eig = eig_hermitian(corr.C, tol);
  const double cutoff =
      tol.rank_cutoff(corr.n, corr.n) * std::max(eig.eigenvalues(0), 0.0);
  Index r = 0;
  while (r < eig.eigenvalues.size() && eig.eigenvalues(r) > cutoff) ++r;
  std::vector<ComplexVector> w(static_cast<std::size_t>(corr.n));
  for (Index i = 0; i < corr.n; ++i) {
    ComplexVector wi(r);
    for (Index k = 0; k < r; ++k)
      wi(k) = std::sqrt(eig.eigenvalues(k)) * std::conj(eig.eigenvectors(i, k));
    w[static_cast<std::size_t>(i)] = std::move(wi);
  }
  return w;
}

namespace detail {

/// Connected components of the graph with edge (i,j) iff |c_ij|^2 >= 1 - tol,
/// ordered by smallest member, members ascending.
inline std::vector<std::vector<Index>> modulus_one_components(
    const ComplexMatrix& c, double tol_eq) {
  const Index n = c.rows();
  auto edge = [&](Index i, Index j) {
    return std::norm(c(i, j)) >= 1.0 - tol_eq;
  };
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<std::vector<Index>> comps;
  for (Index s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<Index> comp;
    std::queue<Index> work;
    work.push(s);
    seen[static_cast<std::size_t>(s)] = true;
    while (!work.empty()) {
      const Index i = work.front();
      work.pop();
      comp.push_back(i);
      for (Index j = 0; j < n; ++j) {
        if (j == i || seen[static_cast<std::size_t>(j)] || !edge(i, j)) continue;
        seen[static_cast<std::size_t>(j)] = true;
        work.push(j);
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

/// First consecutive triple (i,j,k) of a shortest path between a
/// non-adjacent pair inside one component; edges (i,j),(j,k) exist but
/// (i,k) does not. Returns true if the component is not complete.
inline bool incomplete_witness(const ComplexMatrix& c,
                               const std::vector<Index>& comp, double tol_eq,
                               Index& wi, Index& wj, Index& wk) {
  auto edge = [&](Index i, Index j) {
    return std::norm(c(i, j)) >= 1.0 - tol_eq;
  };
  for (std::size_t a = 0; a < comp.size(); ++a) {
    for (std::size_t b = a + 1; b < comp.size(); ++b) {
      const Index src = comp[a], dst = comp[b];
      if (edge(src, dst)) continue;
      // BFS within the component for a shortest path src -> dst.
      std::vector<Index> parent(static_cast<std::size_t>(c.rows()), -1);
      std::queue<Index> work;
      work.push(src);
      parent[static_cast<std::size_t>(src)] = src;
      while (!work.empty()) {
        const Index u = work.front();
        work.pop();
        for (Index v : comp) {
          if (v == u || parent[static_cast<std::size_t>(v)] != -1 || !edge(u, v))
            continue;
          parent[static_cast<std::size_t>(v)] = u;
          work.push(v);
        }
      }
      std::vector<Index> path;
      for (Index v = dst; v != src; v = parent[static_cast<std::size_t>(v)])
        path.push_back(v);
      path.push_back(src);
      std::reverse(path.begin(), path.end());
      wi = path[0];
      wj = path[1];
      wk = path[2];  // shortest path, so (wi, wk) is not an edge
      return true;
    }
  }
  return false;
}

}  // namespace detail

struct HadamardRankStats {
  Index rank_cc = 0;       // rank(C o conj(C))
  Index support_count = 0; // entries with |c_ij|^2 > tol_eq
  Index product = 0;       // rank_cc * support_count, always >= n^2
  bool equality = false;   // C o conj(C) is a direct sum of equal all-ones blocks
};

inline HadamardRankStats hadamard_rank_stats(const CorrelationMatrix& corr,
                                             const Tolerances& tol = {}) {
  const Index n = corr.n;
  const ComplexMatrix cc = hadamard(corr.C, corr.C.conjugate());
  HadamardRankStats out;
  out.rank_cc = svd_rank(cc, tol).rank;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (std::norm(corr.C(i, j)) > tol.tol_eq) ++out.support_count;
  out.product = out.rank_cc * out.support_count;

  // Equality holds exactly when every |c_ij|^2 is 0 or 1 and the modulus-one
  // blocks are complete and of equal size.
  bool dichotomy = true;
  for (Index i = 0; i < n && dichotomy; ++i)
    for (Index j = 0; j < n && dichotomy; ++j) {
      const double sq = std::norm(corr.C(i, j));
      if (sq > tol.tol_eq && sq < 1.0 - tol.tol_eq) dichotomy = false;
    }
  if (dichotomy) {
    const auto comps = detail::modulus_one_components(corr.C, tol.tol_eq);
    bool complete = true;
    for (const auto& comp : comps) {
      Index a, b, c;
      if (detail::incomplete_witness(corr.C, comp, tol.tol_eq, a, b, c)) {
        complete = false;
        break;
      }
    }
    const bool equal_sizes =
        std::all_of(comps.begin(), comps.end(), [&](const auto& comp) {
          return static_cast<Index>(comp.size()) ==
                 static_cast<Index>(comps.front().size());
        });
    out.equality = complete && equal_sizes;
  }
  return out;
}

/// Block structure of the modulus-one pattern: a partition into complete
/// components, a unimodular phase vector per block (first entry 1), and the
/// quotient correlation matrix A with block (k,l) = A(k,l) v_k v_l^*.
struct CorrelationBlockDecomposition {
  std::vector<std::vector<Index>> blocks;
  std::vector<ComplexVector> phase_vectors;
  CorrelationMatrix quotient;
  std::vector<Index> permutation;  // new position -> original index
};

inline CorrelationBlockDecomposition modulus_one_blocks(
    const CorrelationMatrix& corr, const Tolerances& tol = {}) {
  CorrelationBlockDecomposition out;
  out.blocks = detail::modulus_one_components(corr.C, tol.tol_eq);
  for (const auto& comp : out.blocks) {
    Index a, b, c;
    if (detail::incomplete_witness(corr.C, comp, tol.tol_eq, a, b, c))
      throw std::invalid_argument(
          "modulus_one_blocks: component is not complete; offending triple (" +
          std::to_string(a) + "," + std::to_string(b) + "," +
          std::to_string(c) + ")");
  }
  const auto m = static_cast<Index>(out.blocks.size());

  // Phase vector per block, first entry normalized to 1.
  for (const auto& block : out.blocks) {
    const Index first = block.front();
    ComplexVector v(static_cast<Index>(block.size()));
    for (std::size_t t = 0; t < block.size(); ++t) {
      const Complex entry = corr.C(block[t], first);
      const double mod = std::abs(entry);
      v(static_cast<Index>(t)) = mod > 0.0 ? entry / mod : Complex(1.0, 0.0);
    }
    out.phase_vectors.push_back(std::move(v));
  }

  // Quotient entries via the least-squares contraction of each block pair.
  ComplexMatrix quotient = ComplexMatrix::Identity(m, m);
  for (Index k = 0; k < m; ++k) {
    for (Index l = 0; l < m; ++l) {
      if (k == l) continue;
      const auto& bk = out.blocks[static_cast<std::size_t>(k)];
      const auto& bl = out.blocks[static_cast<std::size_t>(l)];
      const auto& vk = out.phase_vectors[static_cast<std::size_t>(k)];
      const auto& vl = out.phase_vectors[static_cast<std::size_t>(l)];
      Complex acc = 0.0;
      for (std::size_t s = 0; s < bk.size(); ++s)
        for (std::size_t t = 0; t < bl.size(); ++t)
          acc += std::conj(vk(static_cast<Index>(s))) * corr.C(bk[s], bl[t]) *
                 vl(static_cast<Index>(t));
      quotient(k, l) = acc / static_cast<double>(bk.size() * bl.size());
    }
  }

  // Consistency: blocks + phases + quotient must rebuild C entrywise.
  double residual = 0.0;
  for (Index k = 0; k < m; ++k)
    for (Index l = 0; l < m; ++l) {
      const auto& bk = out.blocks[static_cast<std::size_t>(k)];
      const auto& bl = out.blocks[static_cast<std::size_t>(l)];
      const auto& vk = out.phase_vectors[static_cast<std::size_t>(k)];
      const auto& vl = out.phase_vectors[static_cast<std::size_t>(l)];
      for (std::size_t s = 0; s < bk.size(); ++s)
        for (std::size_t t = 0; t < bl.size(); ++t) {
          const Complex model = quotient(k, l) * vk(static_cast<Index>(s)) *
                                std::conj(vl(static_cast<Index>(t)));
          residual = std::max(residual,
                              std::abs(model - corr.C(bk[s], bl[t])));
        }
    }
  if (residual > tol.tol_eq)
    throw std::invalid_argument(
        "modulus_one_blocks: quotient reconstruction residual " +
        std::to_string(residual) + " exceeds tol_eq");

  out.quotient = make_correlation(quotient, tol);
  for (const auto& block : out.blocks)
    out.permutation.insert(out.permutation.end(), block.begin(), block.end());
  return out;
}

/// Circuits (minimal linearly dependent column subsets) of the quotient's
/// column matroid, enumerated brute-force in increasing size up to max_size.
/// The quotient dimension is capped at 12.
inline std::vector<std::vector<Index>> matroid_circuits(
    const CorrelationMatrix& quotient, Index max_size,
    const Tolerances& tol = {}) {
  const Index m = quotient.n;
  if (m > 12)
    throw std::invalid_argument(
        "matroid_circuits: quotient dimension " + std::to_string(m) +
        " exceeds the enumeration cap of 12");
  auto rank_of = [&](const std::vector<Index>& cols) {
    ComplexMatrix sub(m, static_cast<Index>(cols.size()));
    for (std::size_t t = 0; t < cols.size(); ++t)
      sub.col(static_cast<Index>(t)) = quotient.C.col(cols[t]);
    return svd_rank(sub, tol).rank;
  };
  std::vector<std::vector<Index>> circuits;
  const Index limit = std::min(max_size, m);
  for (Index size = 1; size <= limit; ++size) {
    // lexicographic enumeration of size-subsets of 0..m-1
    std::vector<Index> idx(static_cast<std::size_t>(size));
    for (Index t = 0; t < size; ++t) idx[static_cast<std::size_t>(t)] = t;
    while (true) {
      const bool dependent = rank_of(idx) < size;
      if (dependent) {
        bool minimal = true;
        for (Index drop = 0; drop < size && minimal; ++drop) {
          std::vector<Index> sub;
          for (Index t = 0; t < size; ++t)
            if (t != drop) sub.push_back(idx[static_cast<std::size_t>(t)]);
          if (!sub.empty() && rank_of(sub) < size - 1) minimal = false;
        }
        if (minimal) circuits.push_back(idx);
      }
      // next combination
      Index t = size - 1;
      while (t >= 0 && idx[static_cast<std::size_t>(t)] == m - size + t) --t;
      if (t < 0) break;
      ++idx[static_cast<std::size_t>(t)];
      for (Index u = t + 1; u < size; ++u)
        idx[static_cast<std::size_t>(u)] = idx[static_cast<std::size_t>(u - 1)] + 1;
    }
  }
  return circuits;
}

}  // namespace cpmaps
