/** @file
 * Operator subspaces of M_n with Hilbert-Schmidt-orthonormal bases, and the
 * algebraic structure attached to a channel: the span of {K_i^* K_j},
 * commutants and bicommutants, fixed-point sets, multiplicative domains,
 * quasiorthogonality, privatization, and the inclusion chain
 *
 *   MD(Phi^C)  subset of  Phi^{C+}(MD(Phi^{C+}))  subset of  S_Phi
 *              subset of  S_Phi'' = MD(Phi)'.
 *
 * Subspace inclusion and equality are decided by projection residuals of
 * orthonormal basis elements, never by comparing bases directly.
 */
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cpmaps/channel.hpp"
#include "cpmaps/matrix.hpp"

namespace cpmaps {

/// A subspace of M_n carried by an HS-orthonormal basis.
struct OperatorSubspace {
  Index ambient_dim = 0;
  std::vector<ComplexMatrix> basis;
  bool star_closed = false;
  bool contains_identity = false;

  Index dim() const { return static_cast<Index>(basis.size()); }
};

namespace detail {

/// Relative singular-value cutoff for the algebra-layer rank decisions.
/// Inputs here are often themselves computed null-space bases, accurate to
/// roughly eps * (sigma_max / spectral gap), so the machine-epsilon default
/// of svd_rank is too tight; 1e-10 sits far above propagated noise and far
/// below any genuine constraint. tol_rank, when set, still overrides.
inline double algebra_cutoff(const Tolerances& tol) {
  return tol.tol_rank > 0.0 ? tol.tol_rank : 1e-10;
}

/// Basis matrices stacked as vectorized columns (n^2 x dim).
inline ComplexMatrix basis_columns(const OperatorSubspace& s) {
  const Index n2 = s.ambient_dim * s.ambient_dim;
  ComplexMatrix b(n2, s.dim());
  for (Index k = 0; k < s.dim(); ++k)
    b.col(k) = vec(s.basis[static_cast<std::size_t>(k)]);
  return b;
}

inline double projection_residual(const ComplexMatrix& basis_cols,
                                  const ComplexMatrix& x) {
  const ComplexVector v = vec(x);
  if (basis_cols.cols() == 0) return v.norm();
  return (v - basis_cols * (basis_cols.adjoint() * v)).norm();
}

/// Fill the star/identity flags by projection tests.
inline void set_flags(OperatorSubspace& s, const Tolerances& tol) {
  const ComplexMatrix cols = basis_columns(s);
  s.star_closed = true;
  for (const auto& b : s.basis)
    if (projection_residual(cols, b.adjoint()) > tol.tol_eq) {
      s.star_closed = false;
      break;
    }
  const Index n = s.ambient_dim;
  const ComplexMatrix id_unit =
      ComplexMatrix::Identity(n, n) / std::sqrt(static_cast<double>(n));
  s.contains_identity = projection_residual(cols, id_unit) <= tol.tol_eq;
}

/// Subspace from an orthonormal set of vectorized columns.
inline OperatorSubspace from_columns(const ComplexMatrix& cols, Index n,
                                     const Tolerances& tol) {
  OperatorSubspace s;
  s.ambient_dim = n;
  for (Index k = 0; k < cols.cols(); ++k)
    s.basis.push_back(unvec(cols.col(k), n, n));
  set_flags(s, tol);
  return s;
}

/// Null space (as a subspace of M_n) of a stacked constraint matrix acting
/// on vec(X). `scale` is the pre-cancellation magnitude of the constraint
/// construction: when the true constraints vanish, the stacked matrix is
/// pure rounding noise and sigma_max is a meaningless reference, so the
/// cutoff floors at rank_cutoff * scale.
inline OperatorSubspace null_space_subspace(const ComplexMatrix& constraints,
                                            Index n, const Tolerances& tol,
                                            double scale) {
  const Index n2 = n * n;
  if (constraints.rows() == 0)
    return from_columns(ComplexMatrix::Identity(n2, n2), n, tol);
  Eigen::JacobiSVD<ComplexMatrix> svd(constraints, Eigen::ComputeFullV);
  const RealVector sigma = svd.singularValues();
  const double sigma_max = sigma.size() ? sigma(0) : 0.0;
  const double cutoff = algebra_cutoff(tol) * std::max(sigma_max, scale);
  const Index rank = (sigma.array() > cutoff).count();
  const ComplexMatrix v = svd.matrixV();
  return from_columns(v.rightCols(n2 - rank), n, tol);
}

}  // namespace detail

/// Maximum projection residual of `candidate` basis elements onto `space`.
inline double max_projection_residual(const OperatorSubspace& space,
                                      const OperatorSubspace& candidate) {
  if (space.ambient_dim != candidate.ambient_dim)
    throw std::invalid_argument("projection residual: ambient mismatch");
  const ComplexMatrix cols = detail::basis_columns(space);
  double worst = 0.0;
  for (const auto& b : candidate.basis)
    worst = std::max(worst, detail::projection_residual(cols, b));
  return worst;
}

inline bool subspace_contains(const OperatorSubspace& larger,
                              const OperatorSubspace& smaller,
                              const Tolerances& tol = {}) {
  return max_projection_residual(larger, smaller) <= tol.tol_eq;
}

inline bool subspace_equal(const OperatorSubspace& a, const OperatorSubspace& b,
                           const Tolerances& tol = {}) {
  return a.dim() == b.dim() && subspace_contains(a, b, tol) &&
         subspace_contains(b, a, tol);
}

/// HS-orthonormal span of a generator list via rank-revealing SVD of the
/// vectorized generators.
inline OperatorSubspace span_of(const std::vector<ComplexMatrix>& generators,
                                const Tolerances& tol = {}) {
  if (generators.empty())
    throw std::invalid_argument("span_of: no generators");
  const Index n = generators.front().rows();
  for (const auto& g : generators)
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("span_of: generators must share one square shape");
  ComplexMatrix cols(n * n, static_cast<Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k)
    cols.col(static_cast<Index>(k)) = vec(generators[k]);
  Eigen::JacobiSVD<ComplexMatrix> svd(cols, Eigen::ComputeThinU);
  const RealVector sigma = svd.singularValues();
  const double sigma_max = sigma.size() ? sigma(0) : 0.0;
  OperatorSubspace s;
  s.ambient_dim = n;
  if (sigma_max > 0.0) {
    const double cutoff = detail::algebra_cutoff(tol) * sigma_max;
    const Index rank = (sigma.array() > cutoff).count();
    const ComplexMatrix u = svd.matrixU();
    for (Index k = 0; k < rank; ++k) s.basis.push_back(unvec(u.col(k), n, n));
  }
  detail::set_flags(s, tol);
  return s;
}

/// The span of {K_i^* K_j}; equals the range of the adjoint of the
/// complementary channel.
inline OperatorSubspace operator_system(const Channel& ch,
                                        const Tolerances& tol = {}) {
  std::vector<ComplexMatrix> gens;
  for (const auto& ki : ch.kraus)
    for (const auto& kj : ch.kraus) gens.push_back(ki.adjoint() * kj);
  return span_of(gens, tol);
}

/// Commutant {X : XB = BX for all basis elements B}, computed as the joint
/// null space of the stacked commutator maps. Always an algebra containing I.
inline OperatorSubspace commutant(const OperatorSubspace& s,
                                  const Tolerances& tol = {}) {
  const Index n = s.ambient_dim;
  if (n < 1) throw std::invalid_argument("commutant: empty ambient space");
  const Index n2 = n * n;
  ComplexMatrix constraints(s.dim() * n2, n2);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  double scale = 0.0;
  for (Index k = 0; k < s.dim(); ++k) {
    const ComplexMatrix& b = s.basis[static_cast<std::size_t>(k)];
    const ComplexMatrix left = kron(b.transpose(), id);
    const ComplexMatrix right = kron(id, b);
    scale = std::max(scale, left.norm() + right.norm());
    constraints.middleRows(k * n2, n2) = left - right;
  }
  return detail::null_space_subspace(constraints, n, tol, scale);
}

/// Alg(S) = S'' for a star-closed S containing the identity.
inline OperatorSubspace generated_algebra(const OperatorSubspace& s,
                                          const Tolerances& tol = {}) {
  if (!s.star_closed)
    throw std::invalid_argument("generated_algebra: subspace is not star_closed");
  if (!s.contains_identity)
    throw std::invalid_argument(
        "generated_algebra: subspace fails contains_identity");
  OperatorSubspace alg = commutant(commutant(s, tol), tol);
  if (!subspace_contains(alg, s, tol))
    throw std::runtime_error("generated_algebra: result does not contain input");
  const ComplexMatrix cols = detail::basis_columns(alg);
  for (const auto& a : alg.basis)
    for (const auto& b : alg.basis)
      if (detail::projection_residual(cols, a * b) > tol.tol_eq)
        throw std::runtime_error(
            "generated_algebra: basis product escapes the span");
  return alg;
}

/// Fixed points {X : Phi(X) = X}; null space of T - I on vec(X).
inline OperatorSubspace fixed_point_set(const Channel& ch,
                                        const Tolerances& tol = {}) {
  if (ch.dim_in != ch.dim_out)
    throw std::invalid_argument("fixed_point_set: channel must be square");
  const Index n2 = ch.dim_in * ch.dim_in;
  const ComplexMatrix t = representing_matrix(ch);
  const double scale = t.norm() + std::sqrt(static_cast<double>(n2));
  return detail::null_space_subspace(
      t - ComplexMatrix::Identity(n2, n2), ch.dim_in, tol, scale);
}

/// Which multiplicativity constraints define the domain: both sides
/// (the standard multiplicative domain, always an algebra) or only
/// Phi(X)Phi(Y) = Phi(XY).
enum class MdCondition { two_sided, left };

namespace detail {

inline OperatorSubspace md_solve(const Channel& ch, const Tolerances& tol,
                                 MdCondition cond) {
  const Index n = ch.dim_in;
  const Index m = ch.dim_out;
  const Index n2 = n * n, m2 = m * m;
  const ComplexMatrix t = representing_matrix(ch);
  const ComplexMatrix id_n = ComplexMatrix::Identity(n, n);
  const ComplexMatrix id_m = ComplexMatrix::Identity(m, m);
  const Index blocks = (cond == MdCondition::two_sided) ? 2 * n2 : n2;
  ComplexMatrix constraints(blocks * m2, n2);
  Index row = 0;
  double scale = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const ComplexMatrix e = matrix_unit(n, n, i, j);
      const ComplexMatrix image = ch.apply(e);
      // Phi(X) Phi(E_ij) - Phi(X E_ij) = 0
      const ComplexMatrix lhs_r = kron(image.transpose(), id_m) * t;
      const ComplexMatrix rhs_r = t * kron(e.transpose(), id_n);
      scale = std::max(scale, lhs_r.norm() + rhs_r.norm());
      constraints.middleRows(row, m2) = lhs_r - rhs_r;
      row += m2;
      if (cond == MdCondition::two_sided) {
        // Phi(E_ij) Phi(X) - Phi(E_ij X) = 0
        const ComplexMatrix lhs_l = kron(id_m, image) * t;
        const ComplexMatrix rhs_l = t * kron(id_n, e);
        scale = std::max(scale, lhs_l.norm() + rhs_l.norm());
        constraints.middleRows(row, m2) = lhs_l - rhs_l;
        row += m2;
      }
    }
  }
  return null_space_subspace(constraints, n, tol, scale);
}

}  // namespace detail

/// Multiplicative domain of a unital channel. For unital trace-preserving
/// channels this coincides with the commutant of span{K_i^* K_j}.
inline OperatorSubspace multiplicative_domain(
    const Channel& ch, const Tolerances& tol = {},
    MdCondition cond = MdCondition::two_sided) {
  const double un =
      (kraus_gram_out(ch) - ComplexMatrix::Identity(ch.dim_out, ch.dim_out))
          .norm();
  if (un > tol.tol_eq)
    throw std::invalid_argument(
        "multiplicative_domain: channel is not unital (residual " +
        std::to_string(un) + ")");
  return detail::md_solve(ch, tol, cond);
}

/// Tr(A B) = Tr(A) Tr(B) / n for all basis pairs; bilinearity makes the
/// basis check sufficient.
inline bool quasiorthogonal(const OperatorSubspace& a,
                            const OperatorSubspace& b,
                            const Tolerances& tol = {}) {
  if (a.ambient_dim != b.ambient_dim)
    throw std::invalid_argument("quasiorthogonal: ambient mismatch");
  const auto n = static_cast<double>(a.ambient_dim);
  for (const auto& x : a.basis)
    for (const auto& y : b.basis) {
      const Complex lhs = (x * y).trace();
      const Complex rhs = x.trace() * y.trace() / n;
      if (std::abs(lhs - rhs) > tol.tol_eq) return false;
    }
  return true;
}

/// True iff Phi sends every basis element A to (Tr(A)/n) Phi(I). The result
/// is cross-checked against quasiorthogonality of the subspace with
/// range(Phi^+); the two routes must agree.
inline bool privatization_check(const Channel& ch, const OperatorSubspace& a,
                                const Tolerances& tol = {}) {
  if (a.ambient_dim != ch.dim_in)
    throw std::invalid_argument("privatization_check: ambient mismatch");
  const auto n = static_cast<double>(ch.dim_in);
  const ComplexMatrix phi_id =
      ch.apply(ComplexMatrix::Identity(ch.dim_in, ch.dim_in));
  bool direct = true;
  for (const auto& basis_el : a.basis) {
    const ComplexMatrix image = ch.apply(basis_el);
    if ((image - (basis_el.trace() / n) * phi_id).norm() > tol.tol_eq) {
      direct = false;
      break;
    }
  }
  const Channel adj = adjoint_channel(ch);
  std::vector<ComplexMatrix> range_gens;
  for (Index i = 0; i < ch.dim_out; ++i)
    for (Index j = 0; j < ch.dim_out; ++j)
      range_gens.push_back(adj.apply(matrix_unit(ch.dim_out, ch.dim_out, i, j)));
  const bool quasi = quasiorthogonal(a, span_of(range_gens, tol), tol);
  if (quasi != direct)
    throw std::runtime_error(
        "privatization_check: direct and quasiorthogonality routes disagree");
  return direct;
}

/// The four subspaces of the inclusion chain and the per-link verdicts.
struct InclusionChainReport {
  OperatorSubspace md_complement;   // MD(Phi^C)
  OperatorSubspace image;           // Phi^{C+}( MD(Phi^{C+}) )
  OperatorSubspace system;          // S_Phi = span{K_i^* K_j}
  OperatorSubspace generated;       // S_Phi''
  bool md_in_image = false;
  bool image_in_system = false;
  bool system_in_generated = false;
  bool generated_is_md_commutant = false;  // S_Phi'' = MD(Phi)'

  bool all_hold() const {
    return md_in_image && image_in_system && system_in_generated &&
           generated_is_md_commutant;
  }
};

/// Requires a unital trace-preserving channel.
inline InclusionChainReport inclusion_chain_check(const Channel& ch,
                                                  const Tolerances& tol = {}) {
  if (!is_unital(ch, tol) || !is_trace_preserving(ch, tol))
    throw std::invalid_argument(
        "inclusion_chain_check: channel must be unital and trace-preserving");
  InclusionChainReport rep;
  const Channel comp = complement_channel(ch);
  const Channel comp_adj = adjoint_channel(comp);

  rep.md_complement = detail::md_solve(comp, tol, MdCondition::two_sided);
  const OperatorSubspace md_comp_adj =
      detail::md_solve(comp_adj, tol, MdCondition::two_sided);
  std::vector<ComplexMatrix> image_gens;
  for (const auto& b : md_comp_adj.basis) image_gens.push_back(comp_adj.apply(b));
  rep.image = span_of(image_gens, tol);
  rep.system = operator_system(ch, tol);
  rep.generated = generated_algebra(rep.system, tol);

  rep.md_in_image = subspace_contains(rep.image, rep.md_complement, tol);
  rep.image_in_system = subspace_contains(rep.system, rep.image, tol);
  rep.system_in_generated = subspace_contains(rep.generated, rep.system, tol);
  const OperatorSubspace md_phi = detail::md_solve(ch, tol, MdCondition::two_sided);
  rep.generated_is_md_commutant =
      subspace_equal(rep.generated, commutant(md_phi, tol), tol);
  return rep;
}

}  // namespace cpmaps
