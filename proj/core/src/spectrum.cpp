#include "hamlow/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <ostream>

namespace hamlow {

SpectralSummary diagonalize(const LocalHamiltonian& h, bool keep_vectors, int oracle_cap) {
  const Eigen::MatrixXcd mat = assemble_matrix(h, oracle_cap);
  SpectralSummary s;
  s.source_n = h.n();
  if (keep_vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat);
    s.eigenvalues = es.eigenvalues();
    s.eigenvectors = es.eigenvectors();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat, Eigen::EigenvaluesOnly);
    s.eigenvalues = es.eigenvalues();
  }
  return s;
}

long long spectral_count(const SpectralSummary& s, double energy) {
  const double* begin = s.eigenvalues.data();
  const double* end = begin + s.eigenvalues.size();
  return std::upper_bound(begin, end, energy + s.tolerance) - begin;
}

double projector_overlap(const Eigen::VectorXcd& state, const SpectralSummary& s, double energy) {
  if (!s.has_vectors()) throw std::invalid_argument("projector_overlap needs retained eigenvectors");
  const Eigen::Index dim = s.eigenvalues.size();
  const long long count = spectral_count(s, energy);
  if (state.size() == dim) {
    double gamma = 0.0;
    for (long long i = 0; i < count; ++i) {
      const std::complex<double> amp = s.eigenvectors.col(i).dot(state);
      gamma += std::norm(amp);
    }
    return gamma;
  }
  if (state.size() == dim * dim) {
    // Extended register: project the system (low-bit) index of each ancilla
    // block, i.e. apply P ⊗ I with the state reshaped column-per-ancilla.
    Eigen::Map<const Eigen::MatrixXcd> reshaped(state.data(), dim, dim);
    double gamma = 0.0;
    for (long long i = 0; i < count; ++i)
      gamma += (s.eigenvectors.col(i).adjoint() * reshaped).squaredNorm();
    return gamma;
  }
  throw std::invalid_argument("state dimension matches neither 2^n nor 2^(2n)");
}

void write_spectrum_csv(std::ostream& out, const SpectralSummary& s) {
  out << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) out << i << ',' << s.eigenvalues(i) << '\n';
}

void write_count_sweep_csv(std::ostream& out, const SpectralSummary& s,
                           const std::vector<double>& thresholds) {
  out << "E,count\n";
  for (double e : thresholds) out << e << ',' << spectral_count(s, e) << '\n';
}

}  // namespace hamlow
