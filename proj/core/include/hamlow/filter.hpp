#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamlow/hamiltonian.hpp"
#include "hamlow/spectrum.hpp"

namespace hamlow {

/// Base Hamiltonian together with its full spectral decomposition, viewed as
/// the 2n-qubit operator H (x) I_anc. The system register is the low n bits
/// of the basis index, the ancilla register the high n bits; the extended
/// eigenvalues are the base ones with multiplicities scaled by 2^n and are
/// never materialized.
struct ExtendedSystem {
  LocalHamiltonian base;
  SpectralSummary spectral;

  int total_qubits() const { return 2 * base.n(); }
};

ExtendedSystem make_extended(const LocalHamiltonian& h, int oracle_cap = 0);

/// Default cap on the system size n for explicit 2n-qubit vectors.
inline constexpr int kDefaultVectorCap = 12;

/// (1/sqrt(2^n)) sum_k |k>_anc |k>_sys in the computational basis.
Eigen::VectorXcd maximally_entangled(int n, int n_cap = kDefaultVectorCap);

/// Overlap of the maximally entangled state with the low-energy subspace of
/// H (x) I at threshold E, computed as N(E)/2^n from the base spectrum. At
/// n <= 6 the value is cross-checked against the explicit 2n-qubit
/// projector overlap within 1e-12.
double overlap_gamma(const ExtendedSystem& sys, double energy);

enum class FilterMode { exact, polynomial };

struct FilterOutcome {
  Eigen::VectorXcd post_state;       // normalized 2n-qubit vector
  double success_probability = 0.0;  // squared norm before normalization
  Eigen::MatrixXcd reduced_density;  // n-qubit system state
  double energy = 0.0;               // Tr[H rho]
  double estimate = 0.0;             // E-hat (exact expectation until sampled)
  double estimate_stderr = 0.0;
  double x = 0.0;
  double y = 0.0;
  double mu = 0.0;
  double gamma = 0.0;
  double calls_uh = 0.0;
  double calls_ui = 0.0;
  std::string mode;
  std::optional<int> degree;
  std::optional<double> fidelity_to_exact;
};

/// Applies the exact projector P_{<=E} (x) I and renormalizes. Throws when
/// the overlap with the subspace vanishes.
FilterOutcome exact_filter(const ExtendedSystem& sys, const Eigen::VectorXcd& state, double energy);

/// Degree-limited polynomial surrogate: an erf-smoothed step (1 below x-y,
/// 0 above x, smoothing width y over the spectral diameter) expanded in the
/// Chebyshev basis and applied through Clenshaw matrix-vector recurrences;
/// the 2^{2n} operator is never formed. Converges to exact_filter at a
/// threshold between x-y and x as the degree grows.
FilterOutcome chebyshev_filter(const ExtendedSystem& sys, const Eigen::VectorXcd& state, double x,
                               double y, int degree);

/// Chebyshev coefficients c_0..c_degree of 0.5*erfc((t - t_mid)/sigma).
std::vector<double> chebyshev_step_coefficients(double t_mid, double sigma, int degree);

/// Theorem-2-style preparation from the maximally entangled state with
///   x = e_d_ref + eps*M,  y = eps*M/n,  mu = (1 - 1/n)*eps,
/// filtering at threshold x - y = e_d_ref + mu*M.
FilterOutcome prepare_low_energy(const ExtendedSystem& sys, double epsilon, double e_d_ref,
                                 FilterMode mode, int degree = 256);
FilterOutcome prepare_low_energy(const LocalHamiltonian& h, double epsilon, double e_d_ref,
                                 FilterMode mode, int degree = 256, int oracle_cap = 0);

struct EnergyEstimate {
  double estimate = 0.0;
  double stderr_total = 0.0;
  bool within_3sigma = false;
  std::vector<double> per_term;
};

/// Simulated projective measurement of each term in its own eigenbasis over
/// samples_per_term fresh copies of rho; E-hat is the sum of the per-term
/// means. Per-term generators are seeded from (seed, term index).
EnergyEstimate estimate_energy(const Eigen::MatrixXcd& rho, const LocalHamiltonian& h,
                               int samples_per_term, std::uint64_t seed);

struct QueryCost {
  double calls_uh = 0.0;
  double calls_ui = 0.0;
};

/// Black-box query counts 1/(y sqrt(gamma)) and 1/sqrt(gamma); polylog
/// factors are omitted throughout.
QueryCost query_cost_model(double gamma, double y, double total_strength, int n);

/// log2 of the Lemma-5 overlap bound: H(mu/(2^{d+2} k)) * n/2 - n.
double lemma5_log2_overlap_bound(double mu, int k, int d, int n);

/// Reduced density matrix of the system (low n bits) of a 2n-qubit pure state.
Eigen::MatrixXcd reduced_density_system(const Eigen::VectorXcd& psi, int n);

/// Partial trace of an n-qubit density matrix onto the kept (sorted) qubits.
Eigen::MatrixXcd partial_trace_keep(const Eigen::MatrixXcd& rho, int n,
                                    const std::vector<int>& keep);

/// Outcome JSON:
///   {"x","y","mu","gamma","success_probability","energy","estimate",
///    "stderr","calls_UH","calls_UI","mode","degree"|null}
std::string outcome_to_json(const FilterOutcome& out);

}  // namespace hamlow
