/** @file
 * Command-line frontend.
 *
 * Subcommands:
 *   analyze  -- rank/norm report and theorem checks for one channel file
 *   verify   -- seeded ensemble runs of every applicable invariant
 *   schur    -- correlation-matrix report: blocks, quotient, circuits
 *   ds       -- doubly stochastic shadow / validation report
 *   algebra  -- operator-system and multiplicative-domain report
 *   gen      -- emit seeded random inputs in the standard JSON formats
 *
 * Exit codes: 0 success, 1 input/config error, 2 theorem violation.
 */
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cpmaps/cpmaps.hpp"
#include "cpmaps/io.hpp"

namespace {

using namespace cpmaps;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitViolation = 2;
constexpr double kSlackFloor = -1e-8;  // pass/fail cut for the product bound

struct Options {
  std::string input;
  std::string output;
  std::string ensemble;
  double tol_rank = 0.0;
  double tol_eq = 1e-9;
  double tol_psd = 1e-10;
  long long trials = 100;
  std::uint64_t seed = 0;
  Index n = 2, m = 2, p = 1, k = 2, r = 1;
  bool with_algebra = false;
  bool with_bases = false;

  Tolerances tolerances() const {
    Tolerances tol;
    tol.tol_rank = tol_rank;
    tol.tol_eq = tol_eq;
    tol.tol_psd = tol_psd;
    return tol;
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit_report(const Options& opt, const Json& report) {
  const std::string text = dump_json(report);
  if (opt.output.empty())
    std::cout << text;
  else
    write_file(opt.output, text);
}

/// A channel from either a Kraus-family file or a Choi-matrix file.
Channel load_channel(const std::string& path, const Tolerances& tol,
                     std::string* digest_out) {
  const std::string bytes = read_file(path);
  if (digest_out) *digest_out = content_digest(bytes);
  const Json j = Json::parse(bytes);
  if (j.contains("kraus")) return channel_from_json(j);
  if (j.value("kind", "") == "choi") {
    if (!j.contains("dim_in") || !j.contains("dim_out"))
      throw std::invalid_argument("choi json: missing dim_in/dim_out");
    return kraus_from_choi(matrix_from_json(j), j.at("dim_in").get<Index>(),
                           j.at("dim_out").get<Index>(), tol);
  }
  throw std::invalid_argument(
      "input is neither a channel (kraus) nor a choi matrix (kind=choi)");
}

Json classify_to_json(const ChannelClass& cls) {
  Json out;
  out["is_cp"] = cls.is_cp;
  out["is_trace_preserving"] = cls.is_trace_preserving;
  out["is_unital"] = cls.is_unital;
  out["tp_residual"] = cls.tp_residual;
  out["unital_residual"] = cls.unital_residual;
  out["choi_min_eigenvalue"] = cls.choi_min_eigenvalue;
  return out;
}

Json uncertainty_to_json(const UncertaintyReport& rep) {
  Json out;
  out["rank_phi"] = rep.rank_phi;
  out["rank_comp"] = rep.rank_comp;
  out["norm_phi"] = rep.norm_phi;
  out["norm_comp"] = rep.norm_comp;
  out["hs_phi_id"] = rep.hs_phi_id;
  out["hs_comp_id"] = rep.hs_comp_id;
  out["bound"] = rep.bound;
  out["product"] = rep.product;
  out["slack"] = rep.slack;
  out["rank_phi_bound"] = rep.rank_phi_bound;
  out["rank_comp_bound"] = rep.rank_comp_bound;
  return out;
}

// ---------------------------------------------------------------- analyze

int run_analyze(const Options& opt) {
  const Tolerances tol = opt.tolerances();
  std::string digest;
  const Channel ch = load_channel(opt.input, tol, &digest);
  const ChannelClass cls = classify(ch, tol);
  const UncertaintyReport rep = uncertainty_report(ch, tol);

  Json report;
  report["command"] = "analyze";
  report["seed"] = opt.seed;
  report["input_digest"] = digest;
  report["tolerances"] = tolerances_to_json(tol);
  report["channel"] = {{"dim_in", ch.dim_in},
                       {"dim_out", ch.dim_out},
                       {"kraus_count", ch.kraus_count()}};
  report["classify"] = classify_to_json(cls);
  report["uncertainty"] = uncertainty_to_json(rep);

  Json checks;
  checks["slack_nonnegative"] = rep.slack >= kSlackFloor;
  const bool unital_tp = cls.is_trace_preserving && cls.is_unital;
  if (unital_tp) {
    const Index n = ch.dim_in;
    checks["rank_product_at_least_n_squared"] = rep.product >= n * n;
    const DoublyStochasticMatrix d = extract_dphi(ch, tol);
    const DsCheck dchk = check_doubly_stochastic(d.D, tol);
    const DsRankSupport dbound = ds_rank_support_bound(d, tol);
    Json ds;
    ds["matrix"] = matrix_to_json(d.D.cast<Complex>());
    ds["valid"] = dchk.ok;
    ds["min_entry"] = dchk.min_entry;
    ds["max_row_residual"] = dchk.max_row_residual;
    ds["max_col_residual"] = dchk.max_col_residual;
    ds["support_count"] = dbound.support_count;
    ds["rank"] = dbound.rank;
    report["doubly_stochastic"] = std::move(ds);
    checks["ds_valid"] = dchk.ok;
    checks["ds_support_rank_bound"] = dbound.holds;
    checks["rank_dominates_ds_rank"] = rep.rank_phi >= dbound.rank;
  }
  if (opt.with_algebra) {
    Json alg;
    const OperatorSubspace system = operator_system(ch, tol);
    alg["operator_system_dim"] = system.dim();
    if (opt.with_bases) alg["operator_system"] = subspace_to_json(system);
    if (cls.is_unital) {
      const OperatorSubspace md = multiplicative_domain(ch, tol);
      alg["multiplicative_domain_dim"] = md.dim();
      if (opt.with_bases) alg["multiplicative_domain"] = subspace_to_json(md);
    }
    if (ch.dim_in == ch.dim_out) {
      const OperatorSubspace fix =
          fixed_point_set(compose(adjoint_channel(ch), ch), tol);
      alg["fixed_points_adjoint_compose_dim"] = fix.dim();
    }
    if (unital_tp) {
      const InclusionChainReport chain = inclusion_chain_check(ch, tol);
      alg["md_complement_dim"] = chain.md_complement.dim();
      alg["image_dim"] = chain.image.dim();
      alg["generated_dim"] = chain.generated.dim();
      alg["chain_holds"] = chain.all_hold();
      checks["inclusion_chain"] = chain.all_hold();
    }
    report["algebra"] = std::move(alg);
  }

  bool all_pass = true;
  for (const auto& [name, value] : checks.items()) {
    (void)name;
    all_pass = all_pass && value.get<bool>();
  }
  report["checks"] = std::move(checks);
  report["all_checks_pass"] = all_pass;
  emit_report(opt, report);
  return all_pass ? kExitOk : kExitViolation;
}

// ----------------------------------------------------------------- verify

struct Tally {
  std::map<std::string, long long> passes;
  std::map<std::string, long long> failures;
  std::map<std::string, std::vector<std::uint64_t>> failing_seeds;
  double worst_slack = std::numeric_limits<double>::infinity();
  bool has_slack = false;

  void record(const std::string& check, bool ok, std::uint64_t seed) {
    if (ok) {
      ++passes[check];
    } else {
      ++failures[check];
      auto& seeds = failing_seeds[check];
      if (seeds.size() < 10) seeds.push_back(seed);
    }
  }

  long long total_failures() const {
    long long total = 0;
    for (const auto& [name, count] : failures) {
      (void)name;
      total += count;
    }
    return total;
  }
};

void verify_tp_checks(const Channel& ch, const Tolerances& tol,
                      std::uint64_t seed, Tally& tally) {
  const Index n = ch.dim_in;
  const Index m = ch.dim_out;
  const ChannelClass cls = classify(ch, tol);
  tally.record("choi_psd", cls.is_cp, seed);
  tally.record("trace_preserving", cls.is_trace_preserving, seed);

  const UncertaintyReport rep = uncertainty_report(ch, tol);
  tally.record("main_theorem_slack", rep.slack >= kSlackFloor, seed);
  tally.worst_slack = std::min(tally.worst_slack, rep.slack);
  tally.has_slack = true;

  const ComplexMatrix t = representing_matrix(ch);
  const double tt = hs_norm(t) * hs_norm(t);
  const double comp_id_sq = rep.hs_comp_id * rep.hs_comp_id;
  tally.record("hs_norm_identity",
               std::abs(tt - comp_id_sq) <= 1e-9 * (1.0 + std::abs(tt)), seed);
  // complement at identity is the kraus Gram matrix: trace n, rank = choi rank
  const auto choi_rank =
      static_cast<double>(svd_rank(choi_matrix(ch), tol).rank);
  tally.record("tp_complement_floor",
               comp_id_sq * choi_rank >=
                   static_cast<double>(n * n) - tol.tol_eq,
               seed);

  const Channel comp = complement_channel(ch);
  double trace_residual = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Complex tr = comp.apply(matrix_unit(n, n, i, j)).trace();
      const Complex expected = i == j ? 1.0 : 0.0;
      trace_residual = std::max(trace_residual, std::abs(tr - expected));
    }
  tally.record("complement_trace_preserving", trace_residual <= 1e-10, seed);

  tally.record("complement_rank_is_system_dim",
               operator_system(ch, tol).dim() == rep.rank_comp, seed);

  if (n == m) {
    const double cj = (choi_jamiolkowski(t) - choi_matrix(ch)).norm();
    tally.record("choi_jamiolkowski_exchange", cj <= 1e-11, seed);
  }
  const Channel back = kraus_from_choi(choi_matrix(ch), n, m, tol);
  tally.record("choi_kraus_roundtrip", choi_distance(ch, back) <= 1e-10, seed);
}

void verify_unital_checks(const Channel& ch, const Tolerances& tol,
                          std::uint64_t seed, Tally& tally) {
  const Index n = ch.dim_in;
  const ChannelClass cls = classify(ch, tol);
  tally.record("unital", cls.is_unital, seed);

  const UncertaintyReport rep = uncertainty_report(ch, tol);
  tally.record("operator_norm_one",
               std::abs(channel_operator_norm(ch) - 1.0) <= 1e-9, seed);
  tally.record("integer_rank_product", rep.product >= n * n, seed);

  const DoublyStochasticMatrix d = extract_dphi(ch, tol);
  tally.record("ds_valid", check_doubly_stochastic(d.D, tol).ok, seed);
  const DsRankSupport dbound = ds_rank_support_bound(d, tol);
  tally.record("ds_support_rank_bound", dbound.holds, seed);
  tally.record("rank_dominates_ds_rank", rep.rank_phi >= dbound.rank, seed);

  Tolerances loose = tol;
  loose.tol_eq = 1e-8;
  const OperatorSubspace md = multiplicative_domain(ch, tol);
  const OperatorSubspace system = operator_system(ch, tol);
  tally.record("md_equals_system_commutant",
               subspace_equal(md, commutant(system, tol), loose), seed);
  const OperatorSubspace fix =
      fixed_point_set(compose(adjoint_channel(ch), ch), tol);
  tally.record("md_in_fixed_points", subspace_contains(fix, md, loose), seed);

  const InclusionChainReport chain = inclusion_chain_check(ch, tol);
  tally.record("inclusion_chain", chain.all_hold(), seed);

  double mult_residual = 0.0, iso_residual = 0.0;
  for (const auto& a : md.basis) {
    iso_residual = std::max(iso_residual,
                            std::abs(hs_norm(ch.apply(a)) - hs_norm(a)));
    for (const auto& b : md.basis)
      mult_residual =
          std::max(mult_residual,
                   (ch.apply(a * b) - ch.apply(a) * ch.apply(b)).norm());
  }
  tally.record("multiplicative_on_md", mult_residual <= 1e-8, seed);
  tally.record("hs_isometric_on_md", iso_residual <= 1e-8, seed);
}

void verify_schur_checks(const CorrelationMatrix& corr, const Tolerances& tol,
                         std::uint64_t seed, Tally& tally) {
  const Index n = corr.n;
  const Channel ch = make_schur_channel(corr, tol);
  const ChannelClass cls = classify(ch, tol);
  tally.record("unital", cls.is_unital, seed);
  tally.record("trace_preserving", cls.is_trace_preserving, seed);

  double action_residual = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const ComplexMatrix e = matrix_unit(n, n, i, j);
      action_residual = std::max(
          action_residual, (ch.apply(e) - hadamard(corr.C, e)).norm());
    }
  tally.record("acts_as_schur_product", action_residual <= tol.tol_eq, seed);

  const HadamardRankStats stats = hadamard_rank_stats(corr, tol);
  tally.record("rank_equals_support",
               channel_rank(ch, tol) == stats.support_count, seed);
  tally.record("complement_rank_equals_cc_rank",
               channel_rank(complement_channel(ch), tol) == stats.rank_cc,
               seed);
  tally.record("support_rank_bound", stats.product >= n * n, seed);

  const auto w = gram_vectors(corr, tol);
  double gram_residual = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      gram_residual = std::max(
          gram_residual,
          std::abs(w[static_cast<std::size_t>(i)].dot(
                       w[static_cast<std::size_t>(j)]) -
                   corr.C(i, j)));
  tally.record("gram_reconstruction", gram_residual <= 1e-10, seed);

  // multiplicative domain equals the modulus-one pattern subspace
  const auto blocks = detail::modulus_one_components(corr.C, tol.tol_eq);
  std::vector<ComplexMatrix> pattern;
  Index pattern_dim = 0;
  for (const auto& block : blocks) {
    pattern_dim += static_cast<Index>(block.size() * block.size());
    for (const Index i : block)
      for (const Index j : block) pattern.push_back(matrix_unit(n, n, i, j));
  }
  Tolerances loose = tol;
  loose.tol_eq = 1e-8;
  const OperatorSubspace md = multiplicative_domain(ch, tol);
  tally.record("md_is_block_pattern",
               md.dim() == pattern_dim &&
                   subspace_equal(md, span_of(pattern, tol), loose),
               seed);

  const CorrelationBlockDecomposition dec = modulus_one_blocks(corr, tol);
  tally.record("rank_c_equals_rank_quotient",
               svd_rank(corr.C, tol).rank == svd_rank(dec.quotient.C, tol).rank,
               seed);
}

void verify_ds_checks(const DoublyStochasticMatrix& d, const Tolerances& tol,
                      std::uint64_t seed, Tally& tally) {
  tally.record("ds_valid", check_doubly_stochastic(d.D, tol).ok, seed);
  const DsRankSupport bound = ds_rank_support_bound(d, tol);
  tally.record("ds_support_rank_bound", bound.holds, seed);
  tally.record("ds_contraction",
               operator_norm(d.D.cast<Complex>()) <= 1.0 + tol.tol_eq, seed);
}

int run_verify(const Options& opt) {
  const Tolerances tol = opt.tolerances();
  if (opt.trials < 1) throw std::invalid_argument("verify: trials must be >= 1");
  const std::string ensemble = opt.ensemble;
  if (ensemble != "tp" && ensemble != "mixed-unitary" && ensemble != "schur" &&
      ensemble != "ds")
    throw std::invalid_argument(
        "verify: --ensemble must be one of tp, mixed-unitary, schur, ds");

  Tally tally;
  for (long long trial = 0; trial < opt.trials; ++trial) {
    const std::uint64_t child =
        rng::derive(opt.seed, static_cast<std::uint64_t>(trial));
    if (ensemble == "tp") {
      const Channel ch = random_tp_channel(opt.n, opt.m, opt.p, child);
      verify_tp_checks(ch, tol, child, tally);
    } else if (ensemble == "mixed-unitary") {
      const Channel ch = mixed_unitary_channel(opt.n, opt.k, child);
      verify_tp_checks(ch, tol, child, tally);
      verify_unital_checks(ch, tol, child, tally);
    } else if (ensemble == "schur") {
      const CorrelationMatrix corr =
          random_correlation_matrix(opt.n, opt.r, child);
      verify_schur_checks(corr, tol, child, tally);
    } else {
      const DoublyStochasticMatrix d = random_ds(opt.n, opt.k, child);
      verify_ds_checks(d, tol, child, tally);
    }
  }

  std::ostringstream summary;
  summary << "ensemble=" << ensemble << " n=" << opt.n << " m=" << opt.m
          << " p=" << opt.p << " k=" << opt.k << " r=" << opt.r
          << " trials=" << opt.trials << " seed=" << opt.seed << "\n";
  std::map<std::string, long long> all_checks = tally.passes;
  for (const auto& [name, count] : tally.failures) all_checks[name] += count;
  for (const auto& [name, total] : all_checks) {
    const long long fails =
        tally.failures.count(name) ? tally.failures.at(name) : 0;
    summary << "check " << name << ": " << (total - fails) << "/" << total
            << " pass";
    if (fails > 0) {
      summary << "  failing seeds:";
      for (const auto s : tally.failing_seeds.at(name)) summary << " " << s;
    }
    summary << "\n";
  }
  if (tally.has_slack)
    summary << "worst_slack=" << fmt(tally.worst_slack) << "\n";
  summary << "violations=" << tally.total_failures() << "\n";
  std::cout << summary.str();

  if (!opt.output.empty()) {
    Json out;
    out["command"] = "verify";
    out["ensemble"] = ensemble;
    out["trials"] = opt.trials;
    out["seed"] = opt.seed;
    out["dims"] = {{"n", opt.n}, {"m", opt.m}, {"p", opt.p}, {"k", opt.k},
                   {"r", opt.r}};
    out["tolerances"] = tolerances_to_json(tol);
    Json checks;
    for (const auto& [name, total] : all_checks) {
      const long long fails =
          tally.failures.count(name) ? tally.failures.at(name) : 0;
      Json entry;
      entry["total"] = total;
      entry["failures"] = fails;
      if (fails > 0) entry["failing_seeds"] = tally.failing_seeds.at(name);
      checks[name] = std::move(entry);
    }
    out["checks"] = std::move(checks);
    if (tally.has_slack) out["worst_slack"] = tally.worst_slack;
    out["violations"] = tally.total_failures();
    write_file(opt.output, dump_json(out));
  }
  return tally.total_failures() == 0 ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------------ schur

int run_schur(const Options& opt) {
  const Tolerances tol = opt.tolerances();
  const std::string bytes = read_file(opt.input);
  const CorrelationMatrix corr =
      correlation_from_json(Json::parse(bytes), tol);
  const Channel ch = make_schur_channel(corr, tol);
  const HadamardRankStats stats = hadamard_rank_stats(corr, tol);
  const CorrelationBlockDecomposition dec = modulus_one_blocks(corr, tol);
  const Index comp_rank = channel_rank(complement_channel(ch), tol);

  Json report;
  report["command"] = "schur";
  report["seed"] = opt.seed;
  report["input_digest"] = content_digest(bytes);
  report["tolerances"] = tolerances_to_json(tol);
  report["n"] = corr.n;
  Json stats_json;
  stats_json["rank_cc"] = stats.rank_cc;
  stats_json["support_count"] = stats.support_count;
  stats_json["product"] = stats.product;
  stats_json["equality"] = stats.equality;
  report["stats"] = std::move(stats_json);
  Json blocks = Json::array();
  for (const auto& block : dec.blocks) blocks.push_back(block);
  report["blocks"] = std::move(blocks);
  Json phases = Json::array();
  for (const auto& v : dec.phase_vectors) {
    Json pv = Json::array();
    for (Index i = 0; i < v.size(); ++i)
      pv.push_back(Json::array({v(i).real(), v(i).imag()}));
    phases.push_back(std::move(pv));
  }
  report["phase_vectors"] = std::move(phases);
  report["quotient"] = matrix_to_json(dec.quotient.C);
  report["permutation"] = dec.permutation;
  if (dec.quotient.n <= 12) {
    Json circuits = Json::array();
    for (const auto& c : matroid_circuits(dec.quotient, dec.quotient.n, tol))
      circuits.push_back(c);
    report["quotient_circuits"] = std::move(circuits);
  }

  Json checks;
  checks["support_rank_bound"] = stats.product >= corr.n * corr.n;
  checks["rank_two_routes_agree"] = comp_rank == stats.rank_cc;
  checks["channel_rank_equals_support"] =
      channel_rank(ch, tol) == stats.support_count;
  checks["rank_c_equals_rank_quotient"] =
      svd_rank(corr.C, tol).rank == svd_rank(dec.quotient.C, tol).rank;
  bool all_pass = true;
  for (const auto& [name, value] : checks.items()) {
    (void)name;
    all_pass = all_pass && value.get<bool>();
  }
  report["checks"] = std::move(checks);
  report["all_checks_pass"] = all_pass;
  emit_report(opt, report);
  return all_pass ? kExitOk : kExitViolation;
}

// --------------------------------------------------------------------- ds

int run_ds(const Options& opt) {
  const Tolerances tol = opt.tolerances();
  const std::string bytes = read_file(opt.input);
  const Json j = Json::parse(bytes);

  Json report;
  report["command"] = "ds";
  report["seed"] = opt.seed;
  report["input_digest"] = content_digest(bytes);
  report["tolerances"] = tolerances_to_json(tol);

  DoublyStochasticMatrix d{0, RealMatrix()};
  if (j.contains("kraus")) {
    const Channel ch = channel_from_json(j);
    d = extract_dphi(ch, tol);  // throws (exit 1) unless unital + TP
    report["source"] = "channel";
    report["rank_phi"] = channel_rank(ch, tol);
  } else {
    const ComplexMatrix m = matrix_from_json(j);
    if (m.rows() != m.cols())
      throw std::invalid_argument("ds: matrix must be square");
    if (m.size() && m.imag().cwiseAbs().maxCoeff() > tol.tol_eq)
      throw std::invalid_argument("ds: matrix has nonzero imaginary parts");
    d = DoublyStochasticMatrix{m.rows(), m.real()};
    report["source"] = "matrix";
  }

  const DsCheck chk = check_doubly_stochastic(d.D, tol);
  report["matrix"] = matrix_to_json(d.D.cast<Complex>());
  report["valid"] = chk.ok;
  report["min_entry"] = chk.min_entry;
  report["max_row_residual"] = chk.max_row_residual;
  report["max_col_residual"] = chk.max_col_residual;
  if (!chk.ok) {
    emit_report(opt, report);
    throw std::invalid_argument("ds: input is not doubly stochastic");
  }
  const DsRankSupport bound = ds_rank_support_bound(d, tol);
  report["support_count"] = bound.support_count;
  report["rank"] = bound.rank;

  Json checks;
  checks["ds_support_rank_bound"] = bound.holds;
  if (report.contains("rank_phi"))
    checks["rank_dominates_ds_rank"] =
        report["rank_phi"].get<Index>() >= bound.rank;
  bool all_pass = true;
  for (const auto& [name, value] : checks.items()) {
    (void)name;
    all_pass = all_pass && value.get<bool>();
  }
  report["checks"] = std::move(checks);
  report["all_checks_pass"] = all_pass;
  emit_report(opt, report);
  return all_pass ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- algebra

int run_algebra(const Options& opt) {
  const Tolerances tol = opt.tolerances();
  std::string digest;
  const Channel ch = load_channel(opt.input, tol, &digest);
  const ChannelClass cls = classify(ch, tol);

  Json report;
  report["command"] = "algebra";
  report["seed"] = opt.seed;
  report["input_digest"] = digest;
  report["tolerances"] = tolerances_to_json(tol);
  report["classify"] = classify_to_json(cls);

  const OperatorSubspace system = operator_system(ch, tol);
  report["operator_system"] = opt.with_bases
                                  ? subspace_to_json(system)
                                  : Json{{"dim", system.dim()}};
  Json checks;
  if (ch.dim_in == ch.dim_out) {
    const OperatorSubspace fix =
        fixed_point_set(compose(adjoint_channel(ch), ch), tol);
    report["fixed_points_adjoint_compose"] =
        opt.with_bases ? subspace_to_json(fix) : Json{{"dim", fix.dim()}};
  }
  if (cls.is_unital) {
    const OperatorSubspace md = multiplicative_domain(ch, tol);
    report["multiplicative_domain"] =
        opt.with_bases ? subspace_to_json(md) : Json{{"dim", md.dim()}};
    const OperatorSubspace md_left =
        multiplicative_domain(ch, tol, MdCondition::left);
    report["multiplicative_domain_one_sided_dim"] = md_left.dim();
    if (cls.is_trace_preserving) {
      Tolerances loose = tol;
      loose.tol_eq = 1e-8;
      checks["md_equals_system_commutant"] =
          subspace_equal(md, commutant(system, tol), loose);
      const InclusionChainReport chain = inclusion_chain_check(ch, tol);
      Json chain_json;
      chain_json["md_complement_dim"] = chain.md_complement.dim();
      chain_json["image_dim"] = chain.image.dim();
      chain_json["system_dim"] = chain.system.dim();
      chain_json["generated_dim"] = chain.generated.dim();
      chain_json["md_in_image"] = chain.md_in_image;
      chain_json["image_in_system"] = chain.image_in_system;
      chain_json["system_in_generated"] = chain.system_in_generated;
      chain_json["generated_is_md_commutant"] =
          chain.generated_is_md_commutant;
      report["inclusion_chain"] = std::move(chain_json);
      checks["inclusion_chain"] = chain.all_hold();
    }
  }
  bool all_pass = true;
  for (const auto& [name, value] : checks.items()) {
    (void)name;
    all_pass = all_pass && value.get<bool>();
  }
  report["checks"] = std::move(checks);
  report["all_checks_pass"] = all_pass;
  emit_report(opt, report);
  return all_pass ? kExitOk : kExitViolation;
}

// -------------------------------------------------------------------- gen

int run_gen(const Options& opt) {
  Json out;
  if (opt.ensemble == "unitary") {
    out = matrix_to_json(haar_unitary(opt.n, opt.seed));
  } else if (opt.ensemble == "tp") {
    out = channel_to_json(random_tp_channel(opt.n, opt.m, opt.p, opt.seed));
  } else if (opt.ensemble == "mixed-unitary") {
    out = channel_to_json(mixed_unitary_channel(opt.n, opt.k, opt.seed));
  } else if (opt.ensemble == "correlation") {
    out = correlation_to_json(random_correlation_matrix(opt.n, opt.r, opt.seed));
  } else if (opt.ensemble == "ds") {
    out = matrix_to_json(random_ds(opt.n, opt.k, opt.seed).D.cast<Complex>());
  } else {
    throw std::invalid_argument(
        "gen: --ensemble must be one of unitary, tp, mixed-unitary, "
        "correlation, ds");
  }
  emit_report(opt, out);
  return kExitOk;
}

void add_common_flags(CLI::App* cmd, Options& opt, bool dims) {
  cmd->add_option("--tol-rank", opt.tol_rank,
                  "relative rank cutoff (0 = automatic)");
  cmd->add_option("--tol-eq", opt.tol_eq, "equality tolerance");
  cmd->add_option("--tol-psd", opt.tol_psd, "PSD negativity allowance");
  cmd->add_option("--output", opt.output, "write the report here");
  cmd->add_option("--seed", opt.seed, "random seed");
  if (dims) {
    cmd->add_option("--n", opt.n, "input dimension");
    cmd->add_option("--m", opt.m, "output dimension");
    cmd->add_option("--p", opt.p, "Kraus count for tp draws");
    cmd->add_option("--k", opt.k, "mixture size / permutation count");
    cmd->add_option("--r", opt.r, "correlation rank bound");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"completely positive map analysis toolkit"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "rank/norm report and theorem checks for one channel");
  analyze->add_option("--input", opt.input, "channel or choi JSON file")
      ->required();
  analyze->add_flag("--algebra", opt.with_algebra,
                    "include algebra dimensions");
  analyze->add_flag("--bases", opt.with_bases, "serialize subspace bases");
  add_common_flags(analyze, opt, false);

  CLI::App* verify =
      app.add_subcommand("verify", "seeded ensemble invariant runs");
  verify->add_option("--ensemble", opt.ensemble,
                     "tp | mixed-unitary | schur | ds")
      ->required();
  verify->add_option("--trials", opt.trials, "number of trials");
  add_common_flags(verify, opt, true);

  CLI::App* schur =
      app.add_subcommand("schur", "correlation matrix structure report");
  schur->add_option("--input", opt.input, "correlation JSON file")->required();
  add_common_flags(schur, opt, false);

  CLI::App* ds =
      app.add_subcommand("ds", "doubly stochastic shadow / validation");
  ds->add_option("--input", opt.input, "channel or real matrix JSON file")
      ->required();
  add_common_flags(ds, opt, false);

  CLI::App* algebra =
      app.add_subcommand("algebra", "operator algebra structure report");
  algebra->add_option("--input", opt.input, "channel or choi JSON file")
      ->required();
  algebra->add_flag("--bases", opt.with_bases, "serialize subspace bases");
  add_common_flags(algebra, opt, false);

  CLI::App* gen = app.add_subcommand("gen", "emit seeded random inputs");
  gen->add_option("--ensemble", opt.ensemble,
                  "unitary | tp | mixed-unitary | correlation | ds")
      ->required();
  add_common_flags(gen, opt, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (app.got_subcommand(analyze)) return run_analyze(opt);
    if (app.got_subcommand(verify)) return run_verify(opt);
    if (app.got_subcommand(schur)) return run_schur(opt);
    if (app.got_subcommand(ds)) return run_ds(opt);
    if (app.got_subcommand(algebra)) return run_algebra(opt);
    if (app.got_subcommand(gen)) return run_gen(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
