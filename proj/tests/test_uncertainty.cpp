#include <catch2/catch_amalgamated.hpp>

#include "cpmaps/algebra.hpp"
#include "cpmaps/gen.hpp"
#include "cpmaps/uncertainty.hpp"
#include "oracles.hpp"

using namespace cpmaps;

TEST_CASE("operator norm of simple channels", "[uncertainty][norm]") {
  // unital TP maps are contractions with fixed vector vec(I)
  REQUIRE(channel_operator_norm(mixed_unitary_channel(3, 4, 1)) ==
          Catch::Approx(1.0).margin(1e-9));

  const Channel scaled(2, 2, {2.0 * ComplexMatrix::Identity(2, 2)});
  REQUIRE(channel_operator_norm(scaled) == Catch::Approx(4.0));
}

TEST_CASE("operator norm matches an eigenvalue oracle", "[uncertainty][norm]") {
  const Channel ch = random_tp_channel(3, 2, 2, 2);
  const ComplexMatrix t = representing_matrix(ch);
  // independent route: sqrt of the largest eigenvalue of T^* T
  const EigHermitian eig = eig_hermitian(ComplexMatrix(t.adjoint() * t));
  REQUIRE(channel_operator_norm(ch) ==
          Catch::Approx(std::sqrt(eig.eigenvalues(0))).margin(1e-10));
}

TEST_CASE("channel rank of the standard examples", "[uncertainty][rank]") {
  REQUIRE(channel_rank(Channel(3, 3, {haar_unitary(3, 3)})) == 9);

  // completely depolarizing: rank one as a linear map
  std::vector<ComplexMatrix> ops;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      ops.push_back(matrix_unit(2, 2, j, i) / std::sqrt(2.0));
  REQUIRE(channel_rank(Channel(2, 2, ops)) == 1);

  // schur channel: number of nonzero entries of C
  const CorrelationMatrix corr = random_correlation_matrix(4, 2, 4);
  Index nonzero = 0;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      if (std::abs(corr.C(i, j)) > 1e-12) ++nonzero;
  REQUIRE(channel_rank(make_schur_channel(corr)) == nonzero);
}

TEST_CASE("uncertainty report on a unitary channel", "[uncertainty][report]") {
  const Channel ch(2, 2, {haar_unitary(2, 5)});
  const UncertaintyReport rep = uncertainty_report(ch);
  REQUIRE(rep.rank_phi == 4);
  REQUIRE(rep.rank_comp == 1);
  REQUIRE(rep.product == 4);
  REQUIRE(rep.bound == Catch::Approx(4.0).margin(1e-9));
  REQUIRE(rep.slack == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("uncertainty report on the depolarizing channel",
          "[uncertainty][report]") {
  std::vector<ComplexMatrix> ops;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      ops.push_back(matrix_unit(2, 2, j, i) / std::sqrt(2.0));
  const UncertaintyReport rep = uncertainty_report(Channel(2, 2, ops));
  REQUIRE(rep.rank_phi == 1);
  REQUIRE(rep.rank_comp == 4);
  REQUIRE(rep.product == 4);
  REQUIRE(rep.slack >= -1e-9);
}

TEST_CASE("slack is nonnegative across a random ensemble",
          "[uncertainty][property]") {
  int trials = 0;
  for (Index n = 2; n <= 4; ++n)
    for (Index m = 2; m <= 4; ++m)
      for (Index p = 1; p <= 4; ++p) {
        if (m * p < n) continue;
        for (std::uint64_t s = 0; s < 4; ++s) {
          const Channel ch =
              random_tp_channel(n, m, p, 10000 + 100 * static_cast<std::uint64_t>(
                                            n * 16 + m * 4 + p) + s);
          const UncertaintyReport rep = uncertainty_report(ch);
          REQUIRE(rep.slack >= -1e-8);
          ++trials;
        }
      }
  REQUIRE(trials > 100);
}

TEST_CASE("frobenius norm of T equals the complement at identity",
          "[uncertainty][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Channel ch = random_tp_channel(3, 2, 3, 600 + seed);
    const ComplexMatrix t = representing_matrix(ch);
    const double tt = (t * t.adjoint()).trace().real();
    const double comp_sq = std::pow(
        hs_norm(complement_channel(ch).apply(ComplexMatrix::Identity(3, 3))),
        2);
    REQUIRE(std::abs(tt - comp_sq) <= 1e-9 * (1.0 + std::abs(tt)));
  }
}

TEST_CASE("unital channels bound the complement HS norm by m",
          "[uncertainty][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Channel ch = mixed_unitary_channel(3, 3, 700 + seed);
    double total = 0.0;
    for (const auto& ki : ch.kraus)
      for (const auto& kj : ch.kraus)
        total += std::pow(hs_norm(ki.adjoint() * kj), 2);
    REQUIRE(total <= static_cast<double>(ch.dim_out) + 1e-9);
  }
}

TEST_CASE("TP channels bound the complement-at-identity by n^2 over the "
          "choi rank",
          "[uncertainty][property]") {
  // The complement at the identity is the kraus Gram matrix: PSD, trace n,
  // rank equal to the choi rank q. Its squared HS norm is therefore at
  // least n^2 / q, with equality forced only when all Gram eigenvalues tie.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Channel ch = random_tp_channel(3, 2, 2, 800 + seed);
    const double comp_sq = std::pow(
        hs_norm(complement_channel(ch).apply(ComplexMatrix::Identity(3, 3))),
        2);
    const auto q = static_cast<double>(svd_rank(choi_matrix(ch)).rank);
    REQUIRE(comp_sq * q >= 9.0 - 1e-9);
  }
  // single-kraus TP channels are isometries; there the floor is n^2 itself
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Channel iso = random_tp_channel(3, 4, 1, 850 + seed);
    const double comp_sq = std::pow(
        hs_norm(complement_channel(iso).apply(ComplexMatrix::Identity(3, 3))),
        2);
    REQUIRE(comp_sq >= 9.0 - 1e-9);
  }
}

TEST_CASE("unital TP channels have integer rank product at least n^2",
          "[uncertainty][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Channel ch = mixed_unitary_channel(3, 2, 900 + seed);
    const UncertaintyReport rep = uncertainty_report(ch);
    REQUIRE(rep.product >= 9);
  }
}

TEST_CASE("complement rank equals the operator system dimension",
          "[uncertainty][algebra]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Channel ch = random_tp_channel(3, 2, 2, 950 + seed);
    const UncertaintyReport rep = uncertainty_report(ch);
    REQUIRE(operator_system(ch).dim() == rep.rank_comp);
  }
}

TEST_CASE("uncertainty report rejects non-cp input", "[uncertainty][errors]") {
  // assemble a non-CP map by negating one kraus contribution via a direct
  // choi matrix with a negative eigenvalue
  REQUIRE_THROWS_WITH(
      uncertainty_report(kraus_from_choi(-ComplexMatrix::Identity(4, 4), 2, 2)),
      Catch::Matchers::ContainsSubstring("positive semidefinite"));
}
