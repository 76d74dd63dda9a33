#include <catch2/catch_amalgamated.hpp>

#include "cpmaps/dstoch.hpp"
#include "cpmaps/gen.hpp"
#include "cpmaps/schur.hpp"
#include "cpmaps/uncertainty.hpp"

using namespace cpmaps;

TEST_CASE("dphi of the identity channel is the identity matrix",
          "[dstoch][extract]") {
  const Channel id(3, 3, {ComplexMatrix::Identity(3, 3)});
  const DoublyStochasticMatrix d = extract_dphi(id);
  REQUIRE((d.D - RealMatrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("dphi of a unitary conjugation is the entrywise modulus square",
          "[dstoch][extract]") {
  const ComplexMatrix u = haar_unitary(4, 3);
  const DoublyStochasticMatrix d = extract_dphi(Channel(4, 4, {u}));
  REQUIRE((d.D - RealMatrix(u.cwiseAbs2())).norm() < 1e-15);
  REQUIRE(check_doubly_stochastic(d.D).ok);
}

TEST_CASE("dphi of a schur channel is the identity", "[dstoch][extract]") {
  const CorrelationMatrix corr = random_correlation_matrix(4, 3, 5);
  const Channel ch = make_schur_channel(corr);
  // oracle: direct summation over the diagonal kraus family
  RealMatrix direct = RealMatrix::Zero(4, 4);
  for (const auto& k : ch.kraus) direct += k.cwiseAbs2();
  REQUIRE((direct - RealMatrix::Identity(4, 4)).norm() < 1e-10);
  REQUIRE((extract_dphi(ch).D - direct).norm() == 0.0);
}

TEST_CASE("dphi requires a unital TP channel", "[dstoch][errors]") {
  REQUIRE_THROWS_WITH(
      extract_dphi(Channel(2, 2, {2.0 * ComplexMatrix::Identity(2, 2)})),
      Catch::Matchers::ContainsSubstring("trace-preserving"));
  REQUIRE_THROWS_WITH(extract_dphi(random_tp_channel(3, 3, 2, 7)),
                      Catch::Matchers::ContainsSubstring("unital"));
}

TEST_CASE("doubly stochastic validation", "[dstoch][check]") {
  RealMatrix perm = RealMatrix::Zero(3, 3);
  perm(0, 2) = perm(1, 0) = perm(2, 1) = 1.0;
  REQUIRE(check_doubly_stochastic(perm).ok);

  REQUIRE(check_doubly_stochastic(RealMatrix::Ones(4, 4) / 4.0).ok);

  RealMatrix off = RealMatrix::Ones(2, 2) / 2.0;
  off(0, 0) += 0.1;
  const DsCheck chk = check_doubly_stochastic(off);
  REQUIRE_FALSE(chk.ok);
  REQUIRE(chk.max_row_residual == Catch::Approx(0.1));

  REQUIRE_THROWS_AS(check_doubly_stochastic(RealMatrix::Zero(2, 3)),
                    std::invalid_argument);
}

TEST_CASE("dphi of mixed-unitary channels is doubly stochastic",
          "[dstoch][check][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Channel ch = mixed_unitary_channel(4, 3, 100 + seed);
    REQUIRE(check_doubly_stochastic(extract_dphi(ch).D).ok);
  }
}

TEST_CASE("support-rank bound equality cases", "[dstoch][bound]") {
  const DsRankSupport id = ds_rank_support_bound(
      DoublyStochasticMatrix{4, RealMatrix::Identity(4, 4)});
  REQUIRE(id.support_count == 4);
  REQUIRE(id.rank == 4);
  REQUIRE(id.holds);
  REQUIRE(id.support_count * id.rank == 16);

  const DsRankSupport uniform = ds_rank_support_bound(
      DoublyStochasticMatrix{4, RealMatrix::Ones(4, 4) / 4.0});
  REQUIRE(uniform.support_count == 16);
  REQUIRE(uniform.rank == 1);
  REQUIRE(uniform.support_count * uniform.rank == 16);
}

TEST_CASE("support-rank bound holds over random birkhoff mixtures",
          "[dstoch][bound][property]") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 7);
    const DoublyStochasticMatrix d = random_ds(n, 3, 200 + seed);
    REQUIRE(check_doubly_stochastic(d.D).ok);
    REQUIRE(ds_rank_support_bound(d).holds);
  }
}

TEST_CASE("random_ds basics", "[dstoch][random]") {
  // k = 1 is a permutation matrix
  const DoublyStochasticMatrix p = random_ds(5, 1, 17);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j)
      REQUIRE((p.D(i, j) == 0.0 || p.D(i, j) == 1.0));
  REQUIRE(check_doubly_stochastic(p.D).ok);

  // determinism
  const DoublyStochasticMatrix a = random_ds(6, 4, 99);
  const DoublyStochasticMatrix b = random_ds(6, 4, 99);
  REQUIRE((a.D - b.D).norm() == 0.0);
  const DoublyStochasticMatrix c = random_ds(6, 4, 100);
  REQUIRE((a.D - c.D).norm() > 0.0);
}

TEST_CASE("channel rank dominates the shadow rank", "[dstoch][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Channel ch = mixed_unitary_channel(3, 2, 300 + seed);
    const DoublyStochasticMatrix d = extract_dphi(ch);
    REQUIRE(channel_rank(ch) >=
            svd_rank(d.D.cast<Complex>()).rank);
  }
}

TEST_CASE("columns of dphi are the diagonals of Phi(E_ii)",
          "[dstoch][property]") {
  const Channel ch = mixed_unitary_channel(4, 3, 400);
  const DoublyStochasticMatrix d = extract_dphi(ch);
  for (Index i = 0; i < 4; ++i) {
    const ComplexMatrix image = ch.apply(matrix_unit(4, 4, i, i));
    for (Index j = 0; j < 4; ++j)
      REQUIRE(d.D(j, i) == Catch::Approx(image(j, j).real()).margin(1e-12));
  }
}

TEST_CASE("doubly stochastic matrices are contractions", "[dstoch][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DoublyStochasticMatrix d = random_ds(6, 3, 500 + seed);
    REQUIRE(operator_norm(d.D.cast<Complex>()) <= 1.0 + 1e-9);
  }
}
