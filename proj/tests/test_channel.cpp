#include <catch2/catch_amalgamated.hpp>

#include "cpmaps/channel.hpp"
#include "cpmaps/gen.hpp"
#include "cpmaps/schur.hpp"
#include "oracles.hpp"

using namespace cpmaps;

namespace {

Channel pauli_x_channel() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return Channel(2, 2, {x});
}

/// Completely depolarizing channel with output I/n: Kraus {e_j e_i^* / sqrt(n)}.
Channel depolarizing(Index n) {
  std::vector<ComplexMatrix> ops;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      ops.push_back(matrix_unit(n, n, j, i) / std::sqrt(static_cast<double>(n)));
  return Channel(n, n, std::move(ops));
}

}  // namespace

TEST_CASE("apply on simple channels", "[channel][apply]") {
  const Channel id(2, 2, {ComplexMatrix::Identity(2, 2)});
  const ComplexMatrix x = oracles::random_matrix(2, 2, 7);
  REQUIRE((id.apply(x) - x).norm() == 0.0);

  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  ComplexMatrix flipped = ComplexMatrix::Zero(2, 2);
  flipped(0, 0) = -1.0;
  flipped(1, 1) = 1.0;
  REQUIRE((pauli_x_channel().apply(z) - flipped).norm() < 1e-15);

  REQUIRE_THROWS_AS(id.apply(ComplexMatrix::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("depolarizing sends E_11 to I/n", "[channel][apply]") {
  const Index n = 3;
  const Channel ch = depolarizing(n);
  // oracle: direct Kraus summation, written out independently
  const ComplexMatrix e11 = matrix_unit(n, n, 0, 0);
  ComplexMatrix direct = ComplexMatrix::Zero(n, n);
  for (const auto& k : ch.kraus) direct += k * e11 * k.adjoint();
  REQUIRE((direct - ComplexMatrix::Identity(n, n) / 3.0).norm() < 1e-14);
  REQUIRE((ch.apply(e11) - direct).norm() == 0.0);
}

TEST_CASE("adjoint channel", "[channel][adjoint]") {
  const ComplexMatrix u = haar_unitary(3, 5);
  const Channel conj_u(3, 3, {u});
  const Channel conj_u_star(3, 3, {ComplexMatrix(u.adjoint())});
  REQUIRE(channels_equal(adjoint_channel(conj_u), conj_u_star));

  // trace duality on random pairs
  const Channel ch = random_tp_channel(3, 2, 2, 8);
  const Channel adj = adjoint_channel(ch);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const ComplexMatrix x = oracles::random_matrix(3, 3, 800 + seed);
    const ComplexMatrix y = oracles::random_matrix(2, 2, 900 + seed);
    const Complex lhs = (ch.apply(x).adjoint() * y).trace();
    const Complex rhs = (x.adjoint() * adj.apply(y)).trace();
    REQUIRE(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("adjoint of a schur channel multiplies by the conjugate pattern",
          "[channel][adjoint][schur]") {
  const CorrelationMatrix corr = random_correlation_matrix(4, 3, 11);
  const Channel ch = make_schur_channel(corr);
  const Channel both = compose(adjoint_channel(ch), ch);
  const ComplexMatrix cc = hadamard(corr.C, corr.C.conjugate());
  for (unsigned seed = 0; seed < 3; ++seed) {
    const ComplexMatrix x = oracles::random_matrix(4, 4, 910 + seed);
    REQUIRE((both.apply(x) - hadamard(x, cc)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("choi matrix of the identity channel", "[channel][choi]") {
  const Channel id(2, 2, {ComplexMatrix::Identity(2, 2)});
  const ComplexMatrix c = choi_matrix(id);
  REQUIRE((c - oracles::definitional_choi(id)).norm() == 0.0);
  REQUIRE(svd_rank(c).rank == 1);
  REQUIRE(c.trace().real() == Catch::Approx(2.0));
}

TEST_CASE("choi matrix of the depolarizing channel is I (x) rho0",
          "[channel][choi]") {
  const Index n = 2;
  const ComplexMatrix rho0 = ComplexMatrix::Identity(n, n) / 2.0;
  const ComplexMatrix expected = kron(ComplexMatrix::Identity(n, n), rho0);
  REQUIRE((choi_matrix(depolarizing(n)) - expected).norm() < 1e-14);
}

TEST_CASE("choi matrices of generated channels are PSD", "[channel][choi]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Channel ch = random_tp_channel(3, 2, 2, 1000 + seed);
    REQUIRE(is_psd(choi_matrix(ch)));
    REQUIRE((choi_matrix(ch) - oracles::definitional_choi(ch)).norm() < 1e-13);
  }
}

TEST_CASE("kraus_from_choi identity roundtrip", "[channel][kraus]") {
  const ComplexVector vi = vec(ComplexMatrix::Identity(2, 2));
  const Channel ch = kraus_from_choi(vi * vi.adjoint(), 2, 2);
  REQUIRE(ch.kraus_count() == 1);
  REQUIRE(channels_equal(ch, Channel(2, 2, {ComplexMatrix::Identity(2, 2)})));
}

TEST_CASE("choi -> kraus -> choi roundtrip", "[channel][kraus]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Channel ch = random_tp_channel(3, 2, 3, 2000 + seed);
    const Channel back = kraus_from_choi(choi_matrix(ch), 3, 2);
    REQUIRE(choi_distance(ch, back) < 1e-10);
  }
}

TEST_CASE("kraus_from_choi on I (x) diag(1/2,1/2)", "[channel][kraus]") {
  const ComplexMatrix c =
      kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2) / 2.0);
  const Channel ch = kraus_from_choi(c, 2, 2);
  REQUIRE(ch.kraus_count() == 4);
  for (const auto& k : ch.kraus)
    REQUIRE(hs_norm(k) == Catch::Approx(std::sqrt(0.5)));
  REQUIRE((choi_matrix(ch) - c).norm() < 1e-12);
}

TEST_CASE("kraus_from_choi rejects non-psd input", "[channel][kraus][errors]") {
  ComplexMatrix bad = -ComplexMatrix::Identity(4, 4);
  REQUIRE_THROWS_WITH(kraus_from_choi(bad, 2, 2),
                      Catch::Matchers::ContainsSubstring("positive semidefinite"));
  REQUIRE_THROWS_AS(kraus_from_choi(ComplexMatrix::Identity(4, 4), 2, 3),
                    std::invalid_argument);
}

TEST_CASE("representing matrix basics", "[channel][representing]") {
  const Channel id(3, 3, {ComplexMatrix::Identity(3, 3)});
  REQUIRE((representing_matrix(id) - ComplexMatrix::Identity(9, 9)).norm() ==
          0.0);

  const ComplexMatrix u = haar_unitary(2, 21);
  const Channel conj_u(2, 2, {u});
  REQUIRE((representing_matrix(conj_u) - kron(u.conjugate(), u)).norm() == 0.0);
}

TEST_CASE("representing matrix action matches apply", "[channel][representing]") {
  const Channel ch = random_tp_channel(3, 2, 2, 22);
  const ComplexMatrix t = representing_matrix(ch);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const ComplexMatrix x = oracles::random_matrix(3, 3, 2200 + seed);
    REQUIRE((t * vec(x) - vec(ch.apply(x))).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("complement of a unitary channel is the trace map",
          "[channel][complement]") {
  const Channel conj_u(3, 3, {haar_unitary(3, 23)});
  const Channel comp = complement_channel(conj_u);
  REQUIRE(comp.dim_out == 1);
  for (unsigned seed = 0; seed < 3; ++seed) {
    const ComplexMatrix x = oracles::random_matrix(3, 3, 2300 + seed);
    REQUIRE(std::abs(comp.apply(x)(0, 0) - x.trace()) < 1e-12);
  }
}

TEST_CASE("complement matches the entrywise trace formula on the basis",
          "[channel][complement]") {
  const Channel ch = random_tp_channel(3, 2, 2, 24);
  const Channel comp = complement_channel(ch);
  const Index p = ch.kraus_count();
  for (Index k = 0; k < 3; ++k)
    for (Index l = 0; l < 3; ++l) {
      const ComplexMatrix e = matrix_unit(3, 3, k, l);
      const ComplexMatrix lhs = comp.apply(e);
      for (Index i = 0; i < p; ++i)
        for (Index j = 0; j < p; ++j) {
          const Complex expected =
              (ch.kraus[static_cast<std::size_t>(j)].adjoint() *
               ch.kraus[static_cast<std::size_t>(i)] * e)
                  .trace();
          REQUIRE(std::abs(lhs(i, j) - expected) < 1e-12);
        }
    }
}

TEST_CASE("complement of a schur channel has rank-one row kraus operators",
          "[channel][complement][schur]") {
  const CorrelationMatrix corr = random_correlation_matrix(4, 2, 25);
  const Channel ch = make_schur_channel(corr);
  const Channel comp = complement_channel(ch);
  const auto w = gram_vectors(corr);
  REQUIRE(comp.kraus.size() == 4);
  const Index p = ch.kraus_count();
  for (Index i = 0; i < 4; ++i) {
    ComplexMatrix expected = ComplexMatrix::Zero(p, 4);  // conj(w_i) e_i^*
    expected.col(i) = w[static_cast<std::size_t>(i)].conjugate();
    REQUIRE((comp.kraus[static_cast<std::size_t>(i)] - expected).norm() <
            1e-12);
  }
}

TEST_CASE("complement of a TP channel is TP", "[channel][complement]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Channel ch = random_tp_channel(3, 2, 2, 2600 + seed);
    const Channel comp = complement_channel(ch);
    const ComplexMatrix x = oracles::random_matrix(3, 3, 2700);
    REQUIRE(std::abs(comp.apply(x).trace() - x.trace()) < 1e-10);
  }
}

TEST_CASE("classify mixed-unitary and scaled channels", "[channel][classify]") {
  const ChannelClass mu = classify(mixed_unitary_channel(3, 3, 31));
  REQUIRE(mu.is_cp);
  REQUIRE(mu.is_trace_preserving);
  REQUIRE(mu.is_unital);

  const ChannelClass scaled =
      classify(Channel(2, 2, {2.0 * ComplexMatrix::Identity(2, 2)}));
  REQUIRE(scaled.is_cp);
  REQUIRE_FALSE(scaled.is_trace_preserving);
  REQUIRE_FALSE(scaled.is_unital);

  const ChannelClass tp = classify(random_tp_channel(3, 2, 2, 32));
  REQUIRE(tp.is_trace_preserving);
  REQUIRE(tp.tp_residual < 1e-10);
}

TEST_CASE("stinespring dilation of a unitary is the unitary itself",
          "[channel][stinespring]") {
  const ComplexMatrix v = haar_unitary(3, 41);
  const Channel ch(3, 3, {v});
  const ComplexMatrix u = stinespring_unitary(ch);
  REQUIRE(u.rows() == 3);
  REQUIRE((u - v).norm() < 1e-12);
}

TEST_CASE("stinespring reconstruction and two-route complement",
          "[channel][stinespring]") {
  const Channel ch = random_tp_channel(3, 3, 2, 42);
  const Index n = 3, p = ch.kraus_count();
  const ComplexMatrix u = stinespring_unitary(ch);
  REQUIRE((u.adjoint() * u - ComplexMatrix::Identity(n * p, n * p)).norm() <
          1e-9);
  const ComplexMatrix e00 = matrix_unit(p, p, 0, 0);
  const Channel comp = complement_channel(ch);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const ComplexMatrix x = oracles::random_matrix(n, n, 4200 + seed);
    const ComplexMatrix big = u * kron(x, e00) * u.adjoint();
    REQUIRE((partial_trace(big, n, p, TraceSide::second) - ch.apply(x)).norm() <
            1e-10);
    REQUIRE((partial_trace(big, n, p, TraceSide::first) - comp.apply(x)).norm() <
            1e-10);
  }
}

TEST_CASE("stinespring preconditions", "[channel][stinespring][errors]") {
  REQUIRE_THROWS_WITH(
      stinespring_unitary(Channel(2, 2, {2.0 * ComplexMatrix::Identity(2, 2)})),
      Catch::Matchers::ContainsSubstring("trace-preserving"));
  REQUIRE_THROWS_AS(stinespring_unitary(random_tp_channel(2, 3, 2, 43)),
                    std::invalid_argument);
}

TEST_CASE("choi-jamiolkowski exchanges representing and choi matrices",
          "[channel][invariant]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Channel ch = random_tp_channel(3, 3, 2, 4400 + seed);
    REQUIRE((choi_jamiolkowski(representing_matrix(ch)) - choi_matrix(ch))
                .cwiseAbs()
                .maxCoeff() < 1e-11);
  }
}

TEST_CASE("unital TP channels fix the vectorized identity",
          "[channel][invariant]") {
  const Channel ch = mixed_unitary_channel(3, 4, 45);
  const ComplexMatrix t = representing_matrix(ch);
  const ComplexVector e = vec(ComplexMatrix::Identity(3, 3));
  REQUIRE((t * e - e).norm() < 1e-9);
  REQUIRE((e.adjoint() * t - e.adjoint()).norm() < 1e-9);
}

TEST_CASE("channel construction validates shapes", "[channel][errors]") {
  REQUIRE_THROWS_AS(Channel(2, 2, {}), std::invalid_argument);
  REQUIRE_THROWS_AS(Channel(2, 2, {ComplexMatrix::Zero(3, 2)}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(Channel(0, 2, {ComplexMatrix::Zero(2, 0)}),
                    std::invalid_argument);
}

TEST_CASE("compose multiplies kraus families", "[channel][compose]") {
  const Channel a = random_tp_channel(2, 3, 2, 46);
  const Channel b = random_tp_channel(3, 2, 2, 47);
  const Channel ab = compose(a, b);
  REQUIRE(ab.dim_in == 3);
  REQUIRE(ab.dim_out == 3);
  const ComplexMatrix x = oracles::random_matrix(3, 3, 48);
  REQUIRE((ab.apply(x) - a.apply(b.apply(x))).norm() < 1e-12);
  REQUIRE_THROWS_AS(compose(b, b), std::invalid_argument);
}
