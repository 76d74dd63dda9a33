/** @file
 * Completely positive maps stored as ordered Kraus families, plus the
 * structural constructions around them: Choi matrix, Kraus extraction from
 * a Choi matrix, representing matrix on the vectorized space, adjoint map,
 * complementary channel, trace-preserving/unital classification, and the
 * dilation unitary for square trace-preserving maps.
 *
 * Two maps are considered equal when their Choi matrices agree; Kraus
 * families are not unique and are never compared directly.
 */
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cpmaps/matrix.hpp"

namespace cpmaps {

/// A CP map M_n -> M_m given by an ordered family of m x n Kraus operators.
struct Channel {
  Index dim_in = 0;
  Index dim_out = 0;
  std::vector<ComplexMatrix> kraus;

  Channel(Index n, Index m, std::vector<ComplexMatrix> ops)
      : dim_in(n), dim_out(m), kraus(std::move(ops)) {
    if (dim_in < 1 || dim_out < 1)
      throw std::invalid_argument("Channel: dimensions must be positive");
    if (kraus.empty())
      throw std::invalid_argument("Channel: at least one Kraus operator");
    for (const auto& k : kraus)
      if (k.rows() != dim_out || k.cols() != dim_in)
        throw std::invalid_argument(
            "Channel: Kraus operator is " + std::to_string(k.rows()) + "x" +
            std::to_string(k.cols()) + ", expected " + std::to_string(dim_out) +
            "x" + std::to_string(dim_in));
  }

  Index kraus_count() const { return static_cast<Index>(kraus.size()); }

  /// Apply the map: X -> sum_i K_i X K_i^*.
  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (x.rows() != dim_in || x.cols() != dim_in)
      throw std::invalid_argument("Channel::apply: input must be " +
                                  std::to_string(dim_in) + "x" +
                                  std::to_string(dim_in));
    ComplexMatrix out = ComplexMatrix::Zero(dim_out, dim_out);
    for (const auto& k : kraus) out.noalias() += k * x * k.adjoint();
    return out;
  }
};

/// Adjoint map under the trace inner product; Kraus family {K_i^*}.
inline Channel adjoint_channel(const Channel& ch) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(ch.kraus.size());
  for (const auto& k : ch.kraus) ops.push_back(k.adjoint());
  return Channel(ch.dim_out, ch.dim_in, std::move(ops));
}

/// Composition "outer after inner": X -> outer(inner(X)); Kraus products.
inline Channel compose(const Channel& outer, const Channel& inner) {
  if (inner.dim_out != outer.dim_in)
    throw std::invalid_argument("compose: inner output dim " +
                                std::to_string(inner.dim_out) +
                                " does not match outer input dim " +
                                std::to_string(outer.dim_in));
  std::vector<ComplexMatrix> ops;
  ops.reserve(outer.kraus.size() * inner.kraus.size());
  for (const auto& a : outer.kraus)
    for (const auto& b : inner.kraus) ops.push_back(a * b);
  return Channel(inner.dim_in, outer.dim_out, std::move(ops));
}

/// Choi matrix sum_ij E_ij (x) Phi(E_ij) in M_{nm}. Equals
/// sum_k vec(K_k) vec(K_k)^* under the column-stacking convention.
inline ComplexMatrix choi_matrix(const Channel& ch) {
  const Index nm = ch.dim_in * ch.dim_out;
  ComplexMatrix c = ComplexMatrix::Zero(nm, nm);
  for (const auto& k : ch.kraus) {
    const ComplexVector v = vec(k);
    c.noalias() += v * v.adjoint();
  }
  return c;
}

/// Representing matrix T = sum_i conj(K_i) (x) K_i, acting on vec(X).
inline ComplexMatrix representing_matrix(const Channel& ch) {
  const Index n2 = ch.dim_in * ch.dim_in;
  const Index m2 = ch.dim_out * ch.dim_out;
  ComplexMatrix t = ComplexMatrix::Zero(m2, n2);
  for (const auto& k : ch.kraus) t += kron(k.conjugate(), k);
  return t;
}

/// Distance between two maps as Hilbert-Schmidt distance of Choi matrices.
inline double choi_distance(const Channel& a, const Channel& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out)
    throw std::invalid_argument("choi_distance: dimension mismatch");
  return (choi_matrix(a) - choi_matrix(b)).norm();
}

inline bool channels_equal(const Channel& a, const Channel& b,
                           const Tolerances& tol = {}) {
  return a.dim_in == b.dim_in && a.dim_out == b.dim_out &&
         choi_distance(a, b) <= tol.tol_eq;
}

/// Extract a Kraus family from a PSD Choi matrix: eigenpairs above the
/// relative cutoff, eigenvectors scaled by sqrt(lambda) and reshaped to
/// m x n. Throws a negativity error (with the offending eigenvalue) when
/// the matrix is not PSD within tol_psd.
inline Channel kraus_from_choi(const ComplexMatrix& c, Index n, Index m,
                               const Tolerances& tol = {}) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("kraus_from_choi: dimensions must be positive");
  if (c.rows() != n * m || c.cols() != n * m)
    throw std::invalid_argument("kraus_from_choi: matrix is " +
                                std::to_string(c.rows()) + "x" +
                                std::to_string(c.cols()) + ", expected " +
                                std::to_string(n * m) + "-square");
  const EigHermitian eig = eig_hermitian(c, tol);
  const double lambda_max = eig.eigenvalues(0);
  const double lambda_min = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (lambda_min < -tol.tol_psd * std::max(lambda_max, 1.0))
    throw std::invalid_argument(
        "kraus_from_choi: Choi matrix is not positive semidefinite "
        "(eigenvalue " + std::to_string(lambda_min) + ")");
  const double cutoff = tol.rank_cutoff(n * m, n * m) * std::max(lambda_max, 0.0);
  std::vector<ComplexMatrix> ops;
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lambda = eig.eigenvalues(i);
    if (lambda <= cutoff) continue;
    const ComplexVector v = std::sqrt(lambda) * eig.eigenvectors.col(i);
    ops.push_back(unvec(v, m, n));
  }
  if (ops.empty()) ops.push_back(ComplexMatrix::Zero(m, n));  // zero map
  return Channel(n, m, std::move(ops));
}

/// Complementary channel M_n -> M_p: X -> [Tr(K_j^* K_i X)]_{ij}. Its Kraus
/// operators restack rows of the inputs: the a-th operator is the p x n
/// matrix whose i-th row is the a-th row of K_i, one operator per output row.
inline Channel complement_channel(const Channel& ch) {
  const Index p = ch.kraus_count();
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(ch.dim_out));
  for (Index a = 0; a < ch.dim_out; ++a) {
    ComplexMatrix l(p, ch.dim_in);
    for (Index i = 0; i < p; ++i) l.row(i) = ch.kraus[static_cast<std::size_t>(i)].row(a);
    ops.push_back(std::move(l));
  }
  return Channel(ch.dim_in, p, std::move(ops));
}

/// Classification flags with the residual norms that back them.
struct ChannelClass {
  bool is_cp = false;
  bool is_trace_preserving = false;
  bool is_unital = false;
  double tp_residual = 0.0;      // || sum K_i^* K_i - I ||_HS
  double unital_residual = 0.0;  // || sum K_i K_i^* - I ||_HS
  double choi_min_eigenvalue = 0.0;
};

inline ComplexMatrix kraus_gram_in(const Channel& ch) {  // sum K_i^* K_i
  ComplexMatrix g = ComplexMatrix::Zero(ch.dim_in, ch.dim_in);
  for (const auto& k : ch.kraus) g.noalias() += k.adjoint() * k;
  return g;
}

inline ComplexMatrix kraus_gram_out(const Channel& ch) {  // sum K_i K_i^*
  ComplexMatrix g = ComplexMatrix::Zero(ch.dim_out, ch.dim_out);
  for (const auto& k : ch.kraus) g.noalias() += k * k.adjoint();
  return g;
}

inline ChannelClass classify(const Channel& ch, const Tolerances& tol = {}) {
  ChannelClass out;
  out.tp_residual =
      (kraus_gram_in(ch) - ComplexMatrix::Identity(ch.dim_in, ch.dim_in)).norm();
  out.unital_residual =
      (kraus_gram_out(ch) - ComplexMatrix::Identity(ch.dim_out, ch.dim_out))
          .norm();
  out.is_trace_preserving = out.tp_residual <= tol.tol_eq;
  out.is_unital = out.unital_residual <= tol.tol_eq;
  const EigHermitian eig = eig_hermitian(choi_matrix(ch), tol);
  out.choi_min_eigenvalue = eig.eigenvalues(eig.eigenvalues.size() - 1);
  out.is_cp = out.choi_min_eigenvalue >=
              -tol.tol_psd * std::max(eig.eigenvalues(0), 1.0);
  return out;
}

inline bool is_trace_preserving(const Channel& ch, const Tolerances& tol = {}) {
  return (kraus_gram_in(ch) - ComplexMatrix::Identity(ch.dim_in, ch.dim_in))
             .norm() <= tol.tol_eq;
}

inline bool is_unital(const Channel& ch, const Tolerances& tol = {}) {
  return (kraus_gram_out(ch) - ComplexMatrix::Identity(ch.dim_out, ch.dim_out))
             .norm() <= tol.tol_eq;
}

/// Throws unless the Choi matrix is PSD within tol_psd.
inline void validate_cp(const Channel& ch, const Tolerances& tol = {}) {
  const EigHermitian eig = eig_hermitian(choi_matrix(ch), tol);
  const double lo = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (lo < -tol.tol_psd * std::max(eig.eigenvalues(0), 1.0))
    throw std::invalid_argument(
        "channel: Choi matrix is not positive semidefinite (eigenvalue " +
        std::to_string(lo) + ")");
}

/// Dilation unitary on C^n (x) C^p for a square trace-preserving channel.
/// The columns with ancilla index 0 hold the isometry sum_i K_i (x) e_i;
/// the remaining columns complete it orthonormally against standard basis
/// vectors in index order. Satisfies
///   apply(ch, X) = Tr_second( U (X (x) E_00) U^* ).
inline ComplexMatrix stinespring_unitary(const Channel& ch,
                                         const Tolerances& tol = {}) {
  if (ch.dim_in != ch.dim_out)
    throw std::invalid_argument(
        "stinespring_unitary: requires a square channel (dim_in == dim_out)");
  const Index n = ch.dim_in;
  const Index p = ch.kraus_count();
  const double tp_residual =
      (kraus_gram_in(ch) - ComplexMatrix::Identity(n, n)).norm();
  if (tp_residual > tol.tol_eq)
    throw std::invalid_argument(
        "stinespring_unitary: channel is not trace-preserving (residual " +
        std::to_string(tp_residual) + ")");

  const Index d = n * p;
  ComplexMatrix isometry(d, n);  // column c: (K_s e_c) interleaved over s
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r)
      for (Index s = 0; s < p; ++s)
        isometry(r * p + s, c) = ch.kraus[static_cast<std::size_t>(s)](r, c);

  // Orthonormal completion: sweep standard basis vectors in index order,
  // re-orthogonalizing twice for stability.
  ComplexMatrix columns(d, d);
  columns.leftCols(n) = isometry;
  Index have = n;
  for (Index k = 0; k < d && have < d; ++k) {
    ComplexVector v = ComplexVector::Zero(d);
    v(k) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      v -= columns.leftCols(have) * (columns.leftCols(have).adjoint() * v);
    const double norm = v.norm();
    if (norm > 1e-8) {
      columns.col(have) = v / norm;
      ++have;
    }
  }
  if (have < d)
    throw std::runtime_error("stinespring_unitary: completion failed");

  // Arrange: slot (c, t) holds the isometry column for t == 0 and the
  // completion columns, in discovery order, for t >= 1.
  ComplexMatrix u(d, d);
  Index next_extra = n;
  for (Index c = 0; c < n; ++c) {
    for (Index t = 0; t < p; ++t) {
      if (t == 0)
        u.col(c * p) = columns.col(c);
      else
        u.col(c * p + t) = columns.col(next_extra++);
    }
  }
  return u;
}

}  // namespace cpmaps
