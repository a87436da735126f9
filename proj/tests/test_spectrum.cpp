#include <doctest.h>

#include <random>
#include <sstream>

#include "hamlow/circuit.hpp"
#include "hamlow/instance_gen.hpp"
#include "hamlow/spectrum.hpp"

using namespace hamlow;

namespace {

LocalHamiltonian neg_z_chain(int n) {
  std::vector<LocalTerm> terms;
  for (int s = 0; s < n; ++s) terms.push_back(make_pauli_term({s}, "Z", -1.0));
  return LocalHamiltonian(n, terms);
}

}  // namespace

TEST_CASE("diagonalize_single_z") {
  const auto h = parse_hamiltonian(R"({"n":1,"terms":[{"qubits":[0],"pauli":"Z","weight":1}]})");
  const auto s = diagonalize(h, false);
  CHECK(s.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(s.ground_energy() == doctest::Approx(-1.0));
}

TEST_CASE("diagonalize_diagonal_chain") {
  const auto s = diagonalize(neg_z_chain(3), false);
  const double expected[8] = {-3, -1, -1, -1, 1, 1, 1, 3};
  for (int i = 0; i < 8; ++i) CHECK(s.eigenvalues(i) == doctest::Approx(expected[i]));
}

TEST_CASE("trace_identity_on_random_instance") {
  const auto h = random_instance({8, 3, 16, "pm1", 3});
  const auto s = diagonalize(h, false);
  const double trace = assemble_matrix(h).trace().real();
  CHECK(s.eigenvalues.sum() == doctest::Approx(trace).epsilon(1e-8));
}

TEST_CASE("eigenvalues_bounded_by_total_strength") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto h = random_instance({7, 3, 12, "uniform", seed});
    const auto s = diagonalize(h, false);
    CHECK(s.eigenvalues.cwiseAbs().maxCoeff() <= h.total_strength() + 1e-9);
  }
}

TEST_CASE("spectral_count_basics") {
  const auto h1 = parse_hamiltonian(R"({"n":1,"terms":[{"qubits":[0],"pauli":"Z","weight":1}]})");
  const auto s1 = diagonalize(h1, false);
  CHECK(spectral_count(s1, 0.0) == 1);

  // Z_0 + Z_1 + Z_2: eigenvalue of a bitstring is n - 2 * popcount, which is
  // <= 0 exactly for Hamming weight >= 2; brute force over the 8 strings.
  std::vector<LocalTerm> terms;
  for (int q = 0; q < 3; ++q) terms.push_back(make_pauli_term({q}, "Z", 1.0));
  const LocalHamiltonian h3(3, terms);
  int brute = 0;
  for (int b = 0; b < 8; ++b)
    if (3 - 2 * __builtin_popcount(b) <= 0) ++brute;
  CHECK(brute == 4);
  const auto s3 = diagonalize(h3, false);
  CHECK(spectral_count(s3, 0.0) == brute);
  CHECK(spectral_count(s3, s3.max_energy()) == 8);
}

TEST_CASE("spectral_count_monotone_and_stable") {
  const auto h = random_instance({6, 2, 9, "uniform", 17});
  const auto s = diagonalize(h, false);
  long long prev = 0;
  for (double e = -h.total_strength(); e <= h.total_strength(); e += 0.05) {
    const long long c = spectral_count(s, e);
    CHECK(c >= prev);
    prev = c;
    // count is threshold-stable when E is safely away from every eigenvalue
    double min_dist = 1e9;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
      min_dist = std::min(min_dist, std::abs(s.eigenvalues(i) - e));
    if (min_dist >= s.tolerance)
      CHECK(spectral_count(s, e + s.tolerance / 2) == c);
  }
}

TEST_CASE("projector_overlap_edges") {
  const auto h = random_instance({5, 3, 8, "pm1", 8});
  const auto s = diagonalize(h, true);
  CHECK((s.eigenvectors.adjoint() * s.eigenvectors - Eigen::MatrixXcd::Identity(32, 32))
            .cwiseAbs()
            .maxCoeff() < 1e-9);

  const Eigen::VectorXcd ground = s.eigenvectors.col(0);
  CHECK(projector_overlap(ground, s, s.ground_energy()) == doctest::Approx(1.0).epsilon(1e-12));

  // a top eigenvector is orthogonal to every strictly lower-energy subspace
  const Eigen::VectorXcd top = s.eigenvectors.col(31);
  CHECK(projector_overlap(top, s, s.eigenvalues(30) - 1e-6) == doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937_64 rng(4);
  Eigen::VectorXcd any(32);
  for (int i = 0; i < 32; ++i) any(i) = std::complex<double>(double(rng() >> 40), double(rng() >> 40));
  any.normalize();
  CHECK(projector_overlap(any, s, s.max_energy()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("isospectral_under_random_conjugation") {
  std::mt19937_64 rng(12);
  const auto h = random_instance({5, 2, 7, "uniform", 51});
  auto c = BrickworkCircuit::brick_layout(5, 2);
  for (int l = 0; l < c.depth(); ++l)
    for (std::size_t g = 0; g < c.layers()[l].size(); ++g) {
      GateParams p;
      for (double& v : p) v = 0.4 * (double(rng() >> 11) * 0x1.0p-53 - 0.5);
      c.set_gate_params(l, int(g), p);
    }
  const auto s0 = diagonalize(h, false);
  const auto s1 = diagonalize(conjugate_by_circuit(h, c), false);
  CHECK((s0.eigenvalues - s1.eigenvalues).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("csv_exports") {
  const auto h = parse_hamiltonian(R"({"n":1,"terms":[{"qubits":[0],"pauli":"Z","weight":1}]})");
  const auto s = diagonalize(h, false);
  std::ostringstream spectrum_csv;
  write_spectrum_csv(spectrum_csv, s);
  CHECK(spectrum_csv.str() == "index,eigenvalue\n0,-1\n1,1\n");
  std::ostringstream sweep_csv;
  write_count_sweep_csv(sweep_csv, s, {-2.0, 0.0, 2.0});
  CHECK(sweep_csv.str() == "E,count\n-2,0\n0,1\n2,2\n");
}
