#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "hamlow/hamiltonian.hpp"

namespace hamlow {

/// Full spectrum of a Hamiltonian from the dense oracle. Eigenvalues are
/// ascending; eigenvectors (columns, matching order) are retained only on
/// request since they are the memory bottleneck.
struct SpectralSummary {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // 0x0 when not retained
  int source_n = 0;
  double tolerance = 1e-9;

  bool has_vectors() const { return eigenvectors.size() > 0; }
  double ground_energy() const { return eigenvalues(0); }
  double max_energy() const { return eigenvalues(eigenvalues.size() - 1); }
};

/// Dense Hermitian eigensolve of assemble_matrix(h). Throws scale_error
/// beyond the oracle cap (0 = environment/default).
SpectralSummary diagonalize(const LocalHamiltonian& h, bool keep_vectors, int oracle_cap = 0);

/// Cumulative spectral count N(E) = |{i : lambda_i <= E + tolerance}|.
long long spectral_count(const SpectralSummary& s, double energy);

/// Overlap of a unit vector with the span of eigenvectors at energy <= E
/// (same one-sided tolerance rule as spectral_count). The state may live on
/// source_n qubits or, for extended-system checks, on 2*source_n qubits, in
/// which case the projector acts on the low (system) register.
double projector_overlap(const Eigen::VectorXcd& state, const SpectralSummary& s, double energy);

/// CSV export with header "index,eigenvalue".
void write_spectrum_csv(std::ostream& out, const SpectralSummary& s);

/// CSV export with header "E,count" over the given thresholds.
void write_count_sweep_csv(std::ostream& out, const SpectralSummary& s,
                           const std::vector<double>& thresholds);

}  // namespace hamlow
