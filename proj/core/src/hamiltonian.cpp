#include "hamlow/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <json.hpp>

#include "embedding.hpp"
#include "hamlow/pauli.hpp"

namespace hamlow {

using json = nlohmann::json;

namespace {

constexpr double kHermiticityTol = 1e-12;

void validate_qubits(const std::vector<int>& qubits) {
  if (qubits.empty()) throw std::invalid_argument("term must act on at least one qubit");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0) throw std::invalid_argument("negative qubit index in term");
    if (i > 0 && qubits[i] <= qubits[i - 1])
      throw std::invalid_argument("term qubit indices must be strictly increasing (duplicate or unsorted index)");
  }
}

double spectral_norm_hermitian(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

bool is_pauli_char(char p) { return p == 'I' || p == 'X' || p == 'Y' || p == 'Z'; }

Eigen::Matrix2cd pauli_matrix(char p) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (p) {
    case 'I': m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 'X': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 'Y': m(0, 1) = -1.0i; m(1, 0) = 1.0i; break;
    case 'Z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: throw std::invalid_argument(std::string("invalid Pauli character '") + p + "'");
  }
  return m;
}

Eigen::MatrixXcd pauli_word_matrix(const std::string& word) {
  if (word.empty()) throw std::invalid_argument("empty Pauli word");
  Eigen::MatrixXcd out = pauli_matrix(word[0]);
  for (std::size_t j = 1; j < word.size(); ++j) {
    const Eigen::Matrix2cd p = pauli_matrix(word[j]);
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) next.block(r * out.rows(), c * out.cols(), out.rows(), out.cols()) = p(r, c) * out;
    out.swap(next);
  }
  return out;
}

int resolve_oracle_cap(int explicit_cap) {
  if (explicit_cap > 0) return explicit_cap;
  if (const char* env = std::getenv("HAMLOW_ORACLE_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    throw std::invalid_argument("HAMLOW_ORACLE_CAP must be a positive integer");
  }
  return kDefaultOracleCap;
}

LocalTerm make_pauli_term(std::vector<int> qubits, std::string word, double weight) {
  validate_qubits(qubits);
  if (word.size() != qubits.size())
    throw std::invalid_argument("Pauli word length must equal the number of term qubits");
  for (char p : word)
    if (p != 'X' && p != 'Y' && p != 'Z')
      throw std::invalid_argument(std::string("Pauli word may only contain X, Y, Z; got '") + p + "'");
  if (!std::isfinite(weight)) throw std::invalid_argument("term weight must be finite");
  LocalTerm t;
  t.qubits = std::move(qubits);
  t.pauli = std::move(word);
  t.body = pauli_word_matrix(t.pauli);
  t.weight = weight;
  t.norm = std::abs(weight);  // Pauli words are unitary Hermitian
  return t;
}

LocalTerm make_dense_term(std::vector<int> qubits, Eigen::MatrixXcd body, double weight) {
  validate_qubits(qubits);
  const Eigen::Index dim = Eigen::Index(1) << qubits.size();
  if (body.rows() != dim || body.cols() != dim)
    throw std::invalid_argument("dense body dimension must be 2^|qubits|");
  if ((body - body.adjoint()).cwiseAbs().maxCoeff() > kHermiticityTol)
    throw std::invalid_argument("dense term body is not Hermitian within 1e-12");
  if (!std::isfinite(weight)) throw std::invalid_argument("term weight must be finite");
  LocalTerm t;
  t.qubits = std::move(qubits);
  t.body = std::move(body);
  t.weight = weight;
  t.norm = std::abs(weight) * spectral_norm_hermitian(t.body);
  return t;
}

double term_norm(const LocalTerm& t) {
  if (t.is_pauli()) return std::abs(t.weight);
  return std::abs(t.weight) * spectral_norm_hermitian(t.body);
}

LocalHamiltonian::LocalHamiltonian(int n, std::vector<LocalTerm> terms)
    : n_(n), terms_(std::move(terms)) {
  if (n_ <= 0) throw std::invalid_argument("qubit count must be positive");
  if (terms_.empty()) throw std::invalid_argument("empty term list");
  k_ = 0;
  total_strength_ = 0.0;
  site_contributions_.assign(n_, 0.0);
  for (const auto& t : terms_) {
    if (t.qubits.back() >= n_) throw std::invalid_argument("term qubit index exceeds qubit count");
    k_ = std::max(k_, t.support());
    total_strength_ += t.norm;
    for (int s : t.qubits) site_contributions_[s] += t.norm;
  }
  contribution_sum_ = 0.0;
  for (double e : site_contributions_) contribution_sum_ += e;
}

SiteStatistics site_statistics(const LocalHamiltonian& h) {
  return SiteStatistics{h.site_contributions(), h.contribution_sum(), h.total_strength()};
}

LocalHamiltonian parse_hamiltonian(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed Hamiltonian document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("terms"))
    throw std::invalid_argument("Hamiltonian document must be an object with \"n\" and \"terms\"");
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() <= 0)
    throw std::invalid_argument("\"n\" must be a positive integer");
  const int n = doc["n"].get<int>();
  if (!doc["terms"].is_array()) throw std::invalid_argument("\"terms\" must be an array");
  if (doc["terms"].empty()) throw std::invalid_argument("empty term list");

  std::vector<LocalTerm> terms;
  terms.reserve(doc["terms"].size());
  for (const auto& jt : doc["terms"]) {
    if (!jt.is_object() || !jt.contains("qubits") || !jt.contains("weight"))
      throw std::invalid_argument("each term needs \"qubits\" and \"weight\"");
    std::vector<int> qubits = jt["qubits"].get<std::vector<int>>();
    const double weight = jt["weight"].get<double>();
    const bool has_pauli = jt.contains("pauli");
    const bool has_matrix = jt.contains("matrix");
    if (has_pauli == has_matrix)
      throw std::invalid_argument("each term needs exactly one of \"pauli\" or \"matrix\"");
    if (has_pauli) {
      terms.push_back(make_pauli_term(std::move(qubits), jt["pauli"].get<std::string>(), weight));
    } else {
      const auto& entries = jt["matrix"];
      const std::size_t dim = std::size_t(1) << qubits.size();
      if (!entries.is_array() || entries.size() != dim * dim)
        throw std::invalid_argument("\"matrix\" must list 4^|qubits| [re, im] entries (row-major)");
      Eigen::MatrixXcd body(dim, dim);
      for (std::size_t idx = 0; idx < dim * dim; ++idx) {
        const auto& pair = entries[idx];
        if (!pair.is_array() || pair.size() != 2)
          throw std::invalid_argument("matrix entries must be [re, im] pairs");
        body(idx / dim, idx % dim) = std::complex<double>(pair[0].get<double>(), pair[1].get<double>());
      }
      terms.push_back(make_dense_term(std::move(qubits), std::move(body), weight));
    }
  }
  return LocalHamiltonian(n, std::move(terms));
}

std::string hamiltonian_to_json(const LocalHamiltonian& h) {
  json doc;
  doc["n"] = h.n();
  doc["terms"] = json::array();
  for (const auto& t : h.terms()) {
    json jt;
    jt["qubits"] = t.qubits;
    jt["weight"] = t.weight;
    if (t.is_pauli()) {
      jt["pauli"] = t.pauli;
    } else {
      json entries = json::array();
      for (Eigen::Index r = 0; r < t.body.rows(); ++r)
        for (Eigen::Index c = 0; c < t.body.cols(); ++c)
          entries.push_back({t.body(r, c).real(), t.body(r, c).imag()});
      jt["matrix"] = std::move(entries);
    }
    doc["terms"].push_back(std::move(jt));
  }
  return doc.dump(2);
}

Eigen::MatrixXcd assemble_matrix(const LocalHamiltonian& h, int oracle_cap) {
  const int cap = resolve_oracle_cap(oracle_cap);
  if (h.n() > cap)
    throw scale_error("oracle scale exceeded: n=" + std::to_string(h.n()) +
                      " > cap=" + std::to_string(cap));
  const std::uint64_t dim = 1ULL << h.n();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    const auto offsets = detail::embedding_offsets(t.qubits);
    const auto rest = detail::complement(t.qubits, h.n());
    const std::uint64_t rest_count = 1ULL << rest.size();
    const std::uint64_t block = offsets.size();
    for (std::uint64_t r = 0; r < rest_count; ++r) {
      const std::uint64_t base = detail::spread_bits(r, rest);
      for (std::uint64_t lr = 0; lr < block; ++lr)
        for (std::uint64_t lc = 0; lc < block; ++lc)
          out(base + offsets[lr], base + offsets[lc]) += t.weight * t.body(lr, lc);
    }
  }
  return out;
}

void accumulate_term_apply(const LocalTerm& t, int n_total,
                           const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
  if (x.size() != (Eigen::Index(1) << n_total) || y.size() != x.size())
    throw std::invalid_argument("statevector dimension mismatch");
  if (t.qubits.back() >= n_total) throw std::invalid_argument("term qubit outside register");
  const auto offsets = detail::embedding_offsets(t.qubits);
  const auto rest = detail::complement(t.qubits, n_total);
  const std::uint64_t rest_count = 1ULL << rest.size();
  const std::uint64_t block = offsets.size();
  std::vector<std::complex<double>> local(block);
  for (std::uint64_t r = 0; r < rest_count; ++r) {
    const std::uint64_t base = detail::spread_bits(r, rest);
    for (std::uint64_t l = 0; l < block; ++l) local[l] = x(base + offsets[l]);
    for (std::uint64_t lr = 0; lr < block; ++lr) {
      std::complex<double> acc = 0.0;
      for (std::uint64_t lc = 0; lc < block; ++lc) acc += t.body(lr, lc) * local[lc];
      y(base + offsets[lr]) += t.weight * acc;
    }
  }
}

Eigen::VectorXcd apply_hamiltonian(const LocalHamiltonian& h, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
  for (const auto& t : h.terms()) accumulate_term_apply(t, h.n(), x, y);
  return y;
}

double expectation(const LocalHamiltonian& h, const Eigen::VectorXcd& x) {
  const Eigen::VectorXcd hx = apply_hamiltonian(h, x);
  return x.dot(hx).real();
}

double term_basis_expectation(const LocalTerm& t, std::uint64_t bits) {
  const std::uint64_t l = detail::extract_bits(bits, t.qubits);
  return t.weight * t.body(l, l).real();
}

double basis_state_expectation(const LocalHamiltonian& h, std::uint64_t bits) {
  double e = 0.0;
  for (const auto& t : h.terms()) e += term_basis_expectation(t, bits);
  return e;
}

}  // namespace hamlow
