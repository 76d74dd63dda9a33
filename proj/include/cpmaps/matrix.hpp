/** @file
 * Dense complex linear-algebra primitives shared by the whole library:
 * Hermitian eigendecomposition, rank-revealing SVD, Kronecker and Schur
 * products, column-stacking vectorization, the Choi-Jamiolkowski entry
 * permutation, partial traces, and the Hilbert-Schmidt inner product.
 *
 * Conventions (fixed once, everything downstream depends on them):
 *  - vec() stacks columns, so vec(AXB) = (B^T (x) A) vec(X);
 *  - kron(A,B) places A[i,j]*B at block (i,j);
 *  - choi_jamiolkowski() is the entry permutation sending conj(B) (x) A
 *    to vec(A) vec(B)^*, an involution on square matrices of square size.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace cpmaps {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical thresholds used for rank, positivity, equality and Hermiticity
/// decisions. tol_rank is relative to the largest singular value; the
/// default 0 means "max(rows, cols) * machine epsilon".
struct Tolerances {
  double tol_rank = 0.0;
  double tol_psd = 1e-10;
  double tol_eq = 1e-9;
  double tol_herm = 1e-10;

  double rank_cutoff(Index rows, Index cols) const {
    if (tol_rank > 0.0) return tol_rank;
    return static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon();
  }
};

/// Matrix unit E_ij (single 1 at row i, column j).
inline ComplexMatrix matrix_unit(Index rows, Index cols, Index i, Index j) {
  if (i < 0 || j < 0 || i >= rows || j >= cols)
    throw std::invalid_argument("matrix_unit: index out of range");
  ComplexMatrix e = ComplexMatrix::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

inline double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("hermiticity_defect: matrix is not square");
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& a, const Tolerances& tol = {}) {
  return hermiticity_defect(a) <= tol.tol_herm;
}

struct EigHermitian {
  RealVector eigenvalues;     // sorted descending
  ComplexMatrix eigenvectors; // orthonormal columns, matching order
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
/// Throws if the input is not square or not Hermitian within tol_herm.
inline EigHermitian eig_hermitian(const ComplexMatrix& a,
                                  const Tolerances& tol = {}) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("eig_hermitian: matrix is not square");
  const double defect = hermiticity_defect(a);
  if (defect > tol.tol_herm)
    throw std::invalid_argument(
        "eig_hermitian: matrix is not Hermitian (defect " +
        std::to_string(defect) + " exceeds tol_herm)");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  EigHermitian out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

struct SingularSpectrum {
  RealVector singular_values; // descending, length min(rows, cols)
  Index rank;                 // count of sigma_i > cutoff * sigma_1
};

/// Singular values plus the numerical rank at the relative cutoff from tol.
/// Rank is 0 for the zero matrix.
inline SingularSpectrum svd_rank(const ComplexMatrix& a,
                                 const Tolerances& tol = {}) {
  SingularSpectrum out;
  if (a.size() == 0) {
    out.singular_values = RealVector::Zero(0);
    out.rank = 0;
    return out;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  out.singular_values = svd.singularValues();
  const double sigma_max = out.singular_values.size() > 0
                               ? out.singular_values(0)
                               : 0.0;
  if (sigma_max <= 0.0) {
    out.rank = 0;
    return out;
  }
  const double cutoff = tol.rank_cutoff(a.rows(), a.cols()) * sigma_max;
  out.rank = (out.singular_values.array() > cutoff).count();
  return out;
}

/// Largest singular value (0 for empty matrices).
inline double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

/// Kronecker product; block (i,j) equals A(i,j) * B.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Column-stacking vectorization: vec(A)[i + rows*j] = A(i, j).
inline ComplexVector vec(const ComplexMatrix& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

inline ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols)
    throw std::invalid_argument("unvec: length " + std::to_string(v.size()) +
                                " does not match " + std::to_string(rows) +
                                "x" + std::to_string(cols));
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

/// The entry permutation sending conj(B) (x) A to vec(A) vec(B)^* on
/// n^2 x n^2 matrices. It is an involution and a Hilbert-Schmidt isometry,
/// and it exchanges the representing matrix of a map with its Choi matrix.
inline ComplexMatrix choi_jamiolkowski(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("choi_jamiolkowski: matrix is not square");
  const auto n = static_cast<Index>(std::llround(std::sqrt(
      static_cast<double>(m.rows()))));
  if (n * n != m.rows())
    throw std::invalid_argument(
        "choi_jamiolkowski: dimension " + std::to_string(m.rows()) +
        " is not a perfect square");
  ComplexMatrix out(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < n; ++j)
        for (Index l = 0; l < n; ++l)
          out(k + n * l, i + n * j) = m(i * n + k, j * n + l);
  return out;
}

enum class TraceSide { first, second };

/// Partial trace of a matrix on a (dimA * dimB)-dimensional tensor space,
/// with the first factor indexed fastest by blocks: global = a*dimB + b.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, Index dim_a,
                                   Index dim_b, TraceSide side) {
  if (dim_a < 1 || dim_b < 1)
    throw std::invalid_argument("partial_trace: dimensions must be positive");
  if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
    throw std::invalid_argument(
        "partial_trace: matrix is not (dimA*dimB)-square");
  if (side == TraceSide::second) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Index a = 0; a < dim_a; ++a)
      for (Index c = 0; c < dim_a; ++c)
        for (Index b = 0; b < dim_b; ++b)
          out(a, c) += m(a * dim_b + b, c * dim_b + b);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Index b = 0; b < dim_b; ++b)
    for (Index d = 0; d < dim_b; ++d)
      for (Index a = 0; a < dim_a; ++a)
        out(b, d) += m(a * dim_b + b, a * dim_b + d);
  return out;
}

/// Entrywise (Schur) product.
inline ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hadamard: shapes differ");
  return a.cwiseProduct(b);
}

/// Trace inner product Tr(A^* B).
inline Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: shapes differ");
  return a.conjugate().cwiseProduct(b).sum();
}

inline double hs_norm(const ComplexMatrix& a) { return a.norm(); }

/// Smallest eigenvalue of a Hermitian matrix.
inline double min_eigenvalue(const ComplexMatrix& a,
                             const Tolerances& tol = {}) {
  const EigHermitian eig = eig_hermitian(a, tol);
  return eig.eigenvalues(eig.eigenvalues.size() - 1);
}

/// PSD test with a relative negativity allowance:
/// lambda_min >= -tol_psd * max(lambda_max, 1).
inline bool is_psd(const ComplexMatrix& a, const Tolerances& tol = {}) {
  const EigHermitian eig = eig_hermitian(a, tol);
  if (eig.eigenvalues.size() == 0) return true;
  const double lo = eig.eigenvalues(eig.eigenvalues.size() - 1);
  const double hi = eig.eigenvalues(0);
  return lo >= -tol.tol_psd * std::max(hi, 1.0);
}

}  // namespace cpmaps
