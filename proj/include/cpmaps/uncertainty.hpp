/** @file
 * Ranks and operator norms of a CP map and its complementary channel, and
 * the rank product lower bound
 *
 *   rank(Phi) * rank(Phi^C) >= ||Phi(I)||_HS^2 ||Phi^C(I)||_HS^2
 *                              / (||Phi||^2 ||Phi^C||^2),
 *
 * where ||Phi|| is the operator norm of the representing matrix between
 * Hilbert-Schmidt spaces. The report also carries the two one-sided bounds
 * the product bound factors into.
 */
#pragma once

#include "cpmaps/channel.hpp"
#include "cpmaps/matrix.hpp"

namespace cpmaps {

struct UncertaintyReport {
  Index rank_phi = 0;
  Index rank_comp = 0;
  double norm_phi = 0.0;       // sigma_max of the representing matrix
  double norm_comp = 0.0;
  double hs_phi_id = 0.0;      // ||Phi(I)||_HS
  double hs_comp_id = 0.0;     // ||Phi^C(I)||_HS
  double bound = 0.0;          // product lower bound
  Index product = 0;           // rank_phi * rank_comp
  double slack = 0.0;          // product - bound
  double rank_phi_bound = 0.0; // one-sided: rank(Phi)   >= this
  double rank_comp_bound = 0.0;// one-sided: rank(Phi^C) >= this
};

/// Operator norm of the map between HS spaces: sigma_max(T).
inline double channel_operator_norm(const Channel& ch) {
  return operator_norm(representing_matrix(ch));
}

/// Rank of the map as a linear map, i.e. rank of its representing matrix.
inline Index channel_rank(const Channel& ch, const Tolerances& tol = {}) {
  return svd_rank(representing_matrix(ch), tol).rank;
}

/// Full report for a CP channel; throws if the Choi matrix is not PSD.
inline UncertaintyReport uncertainty_report(const Channel& ch,
                                            const Tolerances& tol = {}) {
  validate_cp(ch, tol);
  const Channel comp = complement_channel(ch);

  UncertaintyReport rep;
  {
    const SingularSpectrum s = svd_rank(representing_matrix(ch), tol);
    rep.rank_phi = s.rank;
    rep.norm_phi = s.singular_values.size() ? s.singular_values(0) : 0.0;
  }
  {
    const SingularSpectrum s = svd_rank(representing_matrix(comp), tol);
    rep.rank_comp = s.rank;
    rep.norm_comp = s.singular_values.size() ? s.singular_values(0) : 0.0;
  }
  const ComplexMatrix id = ComplexMatrix::Identity(ch.dim_in, ch.dim_in);
  rep.hs_phi_id = hs_norm(ch.apply(id));
  rep.hs_comp_id = hs_norm(comp.apply(id));

  const double np2 = rep.norm_phi * rep.norm_phi;
  const double nc2 = rep.norm_comp * rep.norm_comp;
  rep.rank_phi_bound = np2 > 0.0 ? rep.hs_comp_id * rep.hs_comp_id / np2 : 0.0;
  rep.rank_comp_bound = nc2 > 0.0 ? rep.hs_phi_id * rep.hs_phi_id / nc2 : 0.0;
  rep.bound = rep.rank_phi_bound * rep.rank_comp_bound;
  rep.product = rep.rank_phi * rep.rank_comp;
  rep.slack = static_cast<double>(rep.product) - rep.bound;
  return rep;
}

}  // namespace cpmaps
