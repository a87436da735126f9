#include <doctest.h>

#include <json.hpp>
#include <random>

#include "hamlow/bounds.hpp"
#include "hamlow/filter.hpp"
#include "hamlow/instance_gen.hpp"

using namespace hamlow;

namespace {

Eigen::VectorXcd random_state(int qubits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXcd v(Eigen::Index(1) << qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = std::complex<double>(double(rng() >> 40) - 8e6, double(rng() >> 40) - 8e6);
  v.normalize();
  return v;
}

LocalHamiltonian single_z() {
  return LocalHamiltonian(1, {make_pauli_term({0}, "Z", 1.0)});
}

LocalHamiltonian neg_z_chain(int n) {
  std::vector<LocalTerm> terms;
  for (int s = 0; s < n; ++s) terms.push_back(make_pauli_term({s}, "Z", -1.0));
  return LocalHamiltonian(n, terms);
}

/// Thresholds placed mid-gap so the polynomial transition band is free of
/// eigenvalues: x - y and x bracket the largest gap in the lower spectrum.
std::pair<double, double> gap_thresholds(const SpectralSummary& s) {
  const Eigen::Index dim = s.eigenvalues.size();
  Eigen::Index best = dim / 8;
  double best_gap = 0.0;
  for (Eigen::Index i = dim / 8; i < dim / 2; ++i) {
    const double gap = s.eigenvalues(i + 1) - s.eigenvalues(i);
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  const double x = s.eigenvalues(best) + 0.75 * best_gap;
  const double y = best_gap / 2.0;
  return {x, y};
}

}  // namespace

TEST_CASE("maximally_entangled_amplitudes") {
  const auto psi1 = maximally_entangled(1);
  CHECK(std::abs(psi1(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(psi1(3) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(psi1(1)) + std::abs(psi1(2)) < 1e-15);

  const auto psi2 = maximally_entangled(2);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(psi2(k * 4 + k) - 0.5) < 1e-15);
  CHECK(psi2.norm() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(maximally_entangled(13), scale_error);
}

TEST_CASE("maximally_entangled_reductions_are_maximally_mixed") {
  const int n = 3;
  const auto psi = maximally_entangled(n);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(8, 8) / 8.0;
  CHECK((reduced_density_system(psi, n) - eye).cwiseAbs().maxCoeff() < 1e-12);
  // ancilla register: trace the full 2n-qubit density down to the high bits
  const Eigen::MatrixXcd rho_full = psi * psi.adjoint();
  CHECK((partial_trace_keep(rho_full, 2 * n, {3, 4, 5}) - eye).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("overlap_gamma_values") {
  const auto sys = make_extended(single_z());
  CHECK(overlap_gamma(sys, 0.0) == doctest::Approx(0.5));
  CHECK(overlap_gamma(sys, 1.0) == doctest::Approx(1.0));
  CHECK(overlap_gamma(sys, -2.0) == doctest::Approx(0.0));
}

TEST_CASE("overlap_gamma_identity_on_random_instances") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto h = random_instance({6, 3, 10, "pm1", 500 + seed});
    const auto sys = make_extended(h);
    const double e = sys.spectral.ground_energy() + 0.3 * h.total_strength();
    // the call itself cross-checks against the explicit 12-qubit overlap
    const double gamma = overlap_gamma(sys, e);
    CHECK(gamma * 64.0 ==
          doctest::Approx(double(spectral_count(sys.spectral, e))).epsilon(1e-12));
  }
}

TEST_CASE("extended_eigenvalues_are_duplicated_base_ones") {
  const auto h = random_instance({3, 2, 4, "uniform", 9});
  const auto sys = make_extended(h);
  // direct assembly of H (x) I on 2n qubits via dense kron with the identity
  const Eigen::MatrixXcd base = assemble_matrix(h);
  const Eigen::Index dim = base.rows();
  Eigen::MatrixXcd ext = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
  for (Eigen::Index a = 0; a < dim; ++a) ext.block(a * dim, a * dim, dim, dim) = base;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ext, Eigen::EigenvaluesOnly);
  Eigen::VectorXd dup(dim * dim);
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index i = 0; i < dim; ++i) dup(a * dim + i) = sys.spectral.eigenvalues(i);
  std::sort(dup.data(), dup.data() + dup.size());
  CHECK((es.eigenvalues() - dup).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("exact_filter_single_z") {
  const auto sys = make_extended(single_z());
  const auto out = exact_filter(sys, maximally_entangled(1), 0.0);
  CHECK(out.success_probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out.energy == doctest::Approx(-1.0));
  CHECK(std::abs(out.post_state(3) - 1.0) < 1e-12);  // |1>_anc |1>_sys
}

TEST_CASE("exact_filter_full_pass") {
  const auto h = random_instance({4, 2, 6, "pm1", 7});
  const auto sys = make_extended(h);
  const auto psi = random_state(8, 3);
  const auto out = exact_filter(sys, psi, sys.spectral.max_energy() + 1.0);
  CHECK(out.success_probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((out.post_state - psi).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("exact_filter_ground_space") {
  const auto h = random_instance({5, 3, 8, "uniform", 15});
  const auto sys = make_extended(h);
  const auto out = exact_filter(sys, maximally_entangled(5), sys.spectral.ground_energy());
  CHECK(out.energy == doctest::Approx(sys.spectral.ground_energy()).epsilon(1e-9));
  // from the maximally entangled start the reduction is the normalized
  // ground-space projector
  const long long count = spectral_count(sys.spectral, sys.spectral.ground_energy());
  const auto ground = sys.spectral.eigenvectors.leftCols(count);
  const Eigen::MatrixXcd projector = ground * ground.adjoint() / double(count);
  CHECK((out.reduced_density - projector).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("exact_filter_outcome_contracts") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto h = random_instance({4, 2, 6, "uniform", 600 + seed});
    const auto sys = make_extended(h);
    const double e = sys.spectral.ground_energy() + 0.4 * h.total_strength();
    const auto out = exact_filter(sys, maximally_entangled(4), e);
    CHECK(out.success_probability == doctest::Approx(overlap_gamma(sys, e)).epsilon(1e-12));
    CHECK(out.energy <= e + 1e-9);
    CHECK(out.energy >= sys.spectral.ground_energy() - 1e-9);
    // density matrix sanity
    CHECK(out.reduced_density.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((out.reduced_density - out.reduced_density.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out.reduced_density, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("exact_filter_empty_overlap_errors") {
  const auto sys = make_extended(single_z());
  CHECK_THROWS_AS(exact_filter(sys, maximally_entangled(1), -2.0), std::runtime_error);
}

TEST_CASE("partial_trace_expectation_identity") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto h = random_instance({4, 2, 5, "uniform", 700 + seed});
    const Eigen::VectorXcd psi = random_state(8, seed);
    // reference: dense H (x) I on 8 qubits
    const Eigen::MatrixXcd base = assemble_matrix(h);
    const Eigen::Index dim = base.rows();
    Eigen::MatrixXcd ext = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
    for (Eigen::Index a = 0; a < dim; ++a) ext.block(a * dim, a * dim, dim, dim) = base;
    const double lhs = (psi.adjoint() * ext * psi)(0).real();
    const Eigen::MatrixXcd rho = reduced_density_system(psi, 4);
    const double rhs = (base * rho).trace().real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("chebyshev_filter_converges_on_single_z") {
  const auto sys = make_extended(single_z());
  const auto psi = maximally_entangled(1);
  const auto poly = chebyshev_filter(sys, psi, 0.5, 0.5, 512);
  const auto exact = exact_filter(sys, psi, 0.0);
  CHECK(std::abs(exact.post_state.dot(poly.post_state)) >= 1.0 - 1e-3);
}

TEST_CASE("chebyshev_filter_monotone_convergence") {
  const auto h = random_instance({4, 2, 6, "pm1", 42});
  const auto sys = make_extended(h);
  const auto psi = maximally_entangled(4);
  const auto [x, y] = gap_thresholds(sys.spectral);
  const auto exact = exact_filter(sys, psi, x - y);
  double prev = 0.0;
  for (int degree : {8, 32, 128, 512}) {
    const auto poly = chebyshev_filter(sys, psi, x, y, degree);
    const double fidelity = std::abs(exact.post_state.dot(poly.post_state));
    CHECK(fidelity >= prev - 1e-6);
    prev = fidelity;
  }
  CHECK(prev >= 0.999);
}

TEST_CASE("chebyshev_success_bracketed_by_overlaps") {
  const auto h = random_instance({4, 2, 6, "pm1", 43});
  const auto sys = make_extended(h);
  const auto psi = maximally_entangled(4);
  const auto [x, y] = gap_thresholds(sys.spectral);
  const auto poly = chebyshev_filter(sys, psi, x, y, 512);
  CHECK(poly.success_probability >= 0.9 * overlap_gamma(sys, x - y));
  CHECK(poly.success_probability <= 1.1 * overlap_gamma(sys, x));
}

TEST_CASE("chebyshev_filter_argument_checks") {
  const auto sys = make_extended(single_z());
  const auto psi = maximally_entangled(1);
  CHECK_THROWS_AS(chebyshev_filter(sys, psi, 0.5, 0.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(chebyshev_filter(sys, psi, 0.5, 0.5, 0), std::invalid_argument);
  // degree 1 runs, but no energy guarantee is claimed
  CHECK_NOTHROW(chebyshev_filter(sys, psi, 0.5, 0.5, 1));
}

TEST_CASE("prepare_low_energy_exact_contract") {
  const auto h = neg_z_chain(4);
  const double e0 = basis_state_expectation(h, 0);  // = lambda_0 here
  const auto out = prepare_low_energy(h, 0.1, e0, FilterMode::exact);
  CHECK(out.x == doctest::Approx(e0 + 0.1 * h.total_strength()));
  CHECK(out.y == doctest::Approx(0.1 * h.total_strength() / 4));
  CHECK(out.mu == doctest::Approx(0.075));
  CHECK(out.energy <= e0 + 0.1 * h.total_strength() + 1e-9);
  CHECK(out.energy >= -4.0 - 1e-9);
  CHECK(out.calls_ui == doctest::Approx(1.0 / std::sqrt(out.gamma)));
}

TEST_CASE("prepare_low_energy_full_pass_gives_maximally_mixed") {
  const auto h = random_instance({3, 2, 4, "pm1", 77});
  const auto sys = make_extended(h);
  // epsilon so large that x - y clears the top of the spectrum
  const double eps = 4.0;
  const auto out = prepare_low_energy(sys, eps, sys.spectral.max_energy(), FilterMode::exact);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(8, 8) / 8.0;
  CHECK((out.reduced_density - eye).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(out.energy == doctest::Approx(assemble_matrix(h).trace().real() / 8.0).epsilon(1e-10));
}

TEST_CASE("prepare_low_energy_rejects_bad_epsilon") {
  const auto h = neg_z_chain(3);
  CHECK_THROWS_AS(prepare_low_energy(h, 0.0, -3.0, FilterMode::exact), std::invalid_argument);
  CHECK_THROWS_AS(prepare_low_energy(h, -0.5, -3.0, FilterMode::exact), std::invalid_argument);
}

TEST_CASE("estimate_energy_deterministic_outcome") {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = 1.0;  // |0><0|
  const auto est = estimate_energy(rho, single_z(), 100, 1);
  CHECK(est.estimate == doctest::Approx(1.0));
  CHECK(est.stderr_total == doctest::Approx(0.0));
  CHECK(est.within_3sigma);
}

TEST_CASE("estimate_energy_maximally_mixed_concentrates") {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  const auto est = estimate_energy(rho, single_z(), 10000, 2024);
  CHECK(std::abs(est.estimate) < 0.05);
  CHECK(est.within_3sigma);
}

TEST_CASE("estimate_energy_is_sum_of_term_means") {
  const auto h = random_instance({3, 2, 5, "uniform", 5});
  const Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(8, 8) / 8.0;
  const auto est = estimate_energy(rho, h, 200, 9);
  REQUIRE(est.per_term.size() == std::size_t(h.m()));
  double total = 0.0;
  for (double mean : est.per_term) total += mean;
  CHECK(est.estimate == doctest::Approx(total).epsilon(1e-14));
  CHECK_THROWS_AS(estimate_energy(rho, h, 0, 9), std::invalid_argument);
}

TEST_CASE("query_cost_model_values") {
  CHECK(query_cost_model(1.0, 1.0, 1.0, 4).calls_uh == doctest::Approx(1.0));
  CHECK(query_cost_model(1.0, 1.0, 1.0, 4).calls_ui == doctest::Approx(1.0));
  CHECK(query_cost_model(0.25, 0.5, 1.0, 4).calls_uh == doctest::Approx(4.0));
  CHECK(query_cost_model(0.25, 0.5, 1.0, 4).calls_ui == doctest::Approx(2.0));
  CHECK_THROWS_AS(query_cost_model(0.0, 1.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("lemma5_bound_reproduces_exponent") {
  for (int k : {3, 4, 10})
    for (double eps : {0.125, 0.05, 0.01})
      for (int d : {0, 1})
        for (int n : {10, 20, 50}) {
          const double mu = (1.0 - 1.0 / n) * eps;
          const double log2_calls = -0.5 * lemma5_log2_overlap_bound(mu, k, d, n);
          CHECK(log2_calls == doctest::Approx(n * exponent_ours(k, mu, d)).epsilon(1e-12));
        }
}

TEST_CASE("outcome_json_schema") {
  const auto h = neg_z_chain(3);
  auto out = prepare_low_energy(h, 0.2, -3.0, FilterMode::polynomial, 64);
  const auto doc = nlohmann::json::parse(outcome_to_json(out));
  for (const char* key : {"x", "y", "mu", "gamma", "success_probability", "energy", "estimate",
                          "stderr", "calls_UH", "calls_UI", "mode", "degree"})
    CHECK(doc.contains(key));
  CHECK(doc["mode"] == "poly");
  CHECK(doc["degree"] == 64);
  out.mode = "exact";
  out.degree.reset();
  CHECK(nlohmann::json::parse(outcome_to_json(out))["degree"].is_null());
}
