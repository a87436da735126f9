#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <vector>

#include "hamlow/hamiltonian.hpp"
#include "hamlow/spectrum.hpp"

namespace hamlow {

using BigInt = boost::multiprecision::cpp_int;

/// Sites whose local contribution e(s) is at most delta*L/n. Admissible
/// deltas satisfy delta >= 1 + mu*M/L, which guarantees both the size bound
/// |sites| >= (delta-1)n/delta and that the perturbation budget never
/// exceeds half the quiet set.
struct QuietSet {
  double delta = 0.0;
  double threshold = 0.0;
  std::vector<int> sites;

  int size() const { return static_cast<int>(sites.size()); }
};

QuietSet build_quiet_set(const LocalHamiltonian& h_d, double delta, double mu);

/// Lower admissibility floor 1 + mu*M/L for delta.
double delta_floor(const LocalHamiltonian& h_d, double mu);

struct PerturbationSize {
  int r = 0;
  bool clamped = false;
};

/// r = floor(mu*eta*M*n / (2*delta*L)), clamped to floor(quiet_size/2).
PerturbationSize max_perturbation_size(double mu, double eta, double total_strength, int n,
                                       double delta, double contribution_sum, int quiet_size);

/// Basis index of the X_R-flipped all-zero state: bit s set iff s in R.
std::uint64_t perturbed_state_index(const std::vector<int>& sites, int n);

struct WindowCheck {
  double delta_exact = 0.0;
  bool pass = false;
};

/// |<Phi_R|H_d|Phi_R> - e_d_ref| evaluated term by term; only terms touching
/// R shift the expectation relative to the all-zero state.
WindowCheck verify_energy_window(const LocalHamiltonian& h_d, const std::vector<int>& sites,
                                 double e_d_ref, double window);

/// Exact sum_{i=0..r} C(q, i).
BigInt family_size(int q, int r);

/// log2 of a positive big integer (exact to double precision).
double log2_big(const BigInt& value);

/// D = ((1-eta)*mu/(mu+2)) * family.
double interlacing_bound(const BigInt& family, double mu, double eta);

/// Entropy-form exponent of the simplified bound at eta=1/2, delta=2:
/// H(mu/(4K)) * n/2, where K is the max term support of H_d.
double corollary2_log2_family_bound(double mu, int k_eff, int n);

struct GridConfig {
  int delta_count = 64;  // log-spaced deltas
  int eta_count = 65;    // uniform etas in [0,1]
  double delta_min = 0.0;  // 0 = start at the admissibility floor
  double delta_max = 0.0;  // 0 = floor * 16
};

struct ValidationResult {
  long long exact_count = 0;
  bool pass = false;
};

/// Certified lower bound N(threshold_energy) >= lower_bound_D with the
/// witness parameters that achieve it.
struct DensityCertificate {
  double mu = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  int r = 0;
  bool r_clamped = false;
  int quiet_set_size = 0;
  BigInt family;
  double lower_bound_D = 0.0;
  double log2_family = 0.0;
  double log2_D = 0.0;
  double threshold_energy = 0.0;
  std::optional<ValidationResult> validated;
};

/// Maximizes D over the (delta, eta) grid, always also trying the
/// simplified point (eta = 1/2, delta = 2) when admissible. Ties break to
/// the smallest delta, then the smallest eta. When an oracle spectrum is
/// supplied the exact count is cross-checked (the bound must hold with no
/// slack).
DensityCertificate certify_density(const LocalHamiltonian& h_d, double e_d_ref, double mu,
                                   const GridConfig& grid = {},
                                   const SpectralSummary* oracle = nullptr);

/// Certificate JSON:
///   {"mu","eta","delta","r","quiet_set_size","family_size" (decimal string),
///    "log2_family_size","lower_bound_D","log2_D","threshold_energy",
///    "validated":{"exact_count","pass"}|null}
std::string certificate_to_json(const DensityCertificate& cert);

}  // namespace hamlow
