#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamlow {

/// Thrown when an operation would require dense objects beyond the
/// configured oracle cap.
struct scale_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Default cap on the qubit count for dense 2^n objects.
inline constexpr int kDefaultOracleCap = 14;

/// Resolves the oracle cap: an explicit value wins, otherwise the
/// HAMLOW_ORACLE_CAP environment variable, otherwise the default.
int resolve_oracle_cap(int explicit_cap = 0);

/// One weighted local interaction term. The body is either a Pauli word
/// over {X,Y,Z} (one character per listed qubit) or a dense Hermitian
/// block of dimension 2^|qubits|. The unweighted dense body is always
/// cached in `body`; `pauli` is non-empty when the term originated as a
/// Pauli word. `norm` caches the spectral norm of weight*body.
struct LocalTerm {
  std::vector<int> qubits;  // strictly increasing site indices
  std::string pauli;        // empty for dense terms
  Eigen::MatrixXcd body;    // unweighted body, dimension 2^|qubits|
  double weight = 1.0;
  double norm = 0.0;

  bool is_pauli() const { return !pauli.empty(); }
  int support() const { return static_cast<int>(qubits.size()); }
};

/// Builds a validated Pauli-word term; the norm is |weight| exactly.
LocalTerm make_pauli_term(std::vector<int> qubits, std::string word, double weight);

/// Builds a validated dense term; `body` must be Hermitian within 1e-12.
/// The norm is computed by an exact Hermitian eigensolve of the block.
LocalTerm make_dense_term(std::vector<int> qubits, Eigen::MatrixXcd body, double weight);

/// Spectral norm of weight*body, recomputed from scratch.
double term_norm(const LocalTerm& t);

/// n-qubit k-local Hamiltonian as a list of weighted local terms, with the
/// per-site interaction statistics cached at construction:
///   M    = sum of term norms (total interaction strength)
///   e(s) = sum of norms of the terms acting on site s
///   L    = sum_s e(s), which satisfies L <= k*M.
class LocalHamiltonian {
 public:
  LocalHamiltonian(int n, std::vector<LocalTerm> terms);

  int n() const { return n_; }
  int k() const { return k_; }
  int m() const { return static_cast<int>(terms_.size()); }
  double total_strength() const { return total_strength_; }
  double contribution_sum() const { return contribution_sum_; }
  const std::vector<double>& site_contributions() const { return site_contributions_; }
  const std::vector<LocalTerm>& terms() const { return terms_; }

 private:
  int n_;
  int k_;
  std::vector<LocalTerm> terms_;
  double total_strength_;                  // M
  std::vector<double> site_contributions_; // e(s)
  double contribution_sum_;                // L
};

struct SiteStatistics {
  std::vector<double> e;
  double L = 0.0;
  double M = 0.0;
};

SiteStatistics site_statistics(const LocalHamiltonian& h);

/// Parses the instance JSON schema:
///   {"n": int, "terms": [{"qubits": [int...], "pauli": "XZ..." | "matrix":
///    [[re, im], ...], "weight": float}]}
/// with exactly one of "pauli"/"matrix" per term; "matrix" is the row-major
/// flattening of the 2^|qubits| x 2^|qubits| Hermitian block.
LocalHamiltonian parse_hamiltonian(const std::string& document);

/// Serializes back to the same schema (Pauli terms stay Pauli words).
std::string hamiltonian_to_json(const LocalHamiltonian& h);

/// Dense 2^n matrix sum of all embedded terms. Throws scale_error when
/// n exceeds the cap (0 = resolve from environment/default).
Eigen::MatrixXcd assemble_matrix(const LocalHamiltonian& h, int oracle_cap = 0);

/// y += weight * (body embedded on term.qubits) * x, for an n_total-qubit
/// statevector. Qubit s corresponds to bit s of the basis index.
void accumulate_term_apply(const LocalTerm& t, int n_total,
                           const Eigen::VectorXcd& x, Eigen::VectorXcd& y);

/// H|x> computed term by term (the 2^n matrix is never formed).
Eigen::VectorXcd apply_hamiltonian(const LocalHamiltonian& h, const Eigen::VectorXcd& x);

/// <x|H|x> for a unit vector on n() qubits (real by Hermiticity).
double expectation(const LocalHamiltonian& h, const Eigen::VectorXcd& x);

/// <b|h_alpha|b> for the computational basis state with the given bitmask.
double term_basis_expectation(const LocalTerm& t, std::uint64_t bits);

/// <b|H|b> summed term by term; no assembly.
double basis_state_expectation(const LocalHamiltonian& h, std::uint64_t bits);

}  // namespace hamlow
