#include "hamlow/circuit.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>

#include "embedding.hpp"
#include "hamlow/pauli.hpp"

namespace hamlow {

using json = nlohmann::json;

namespace {

constexpr double kUnitarityTol = 1e-10;

const std::array<Eigen::Matrix4cd, 15>& su4_generators() {
  static const std::array<Eigen::Matrix4cd, 15> gens = [] {
    const char paulis[4] = {'I', 'X', 'Y', 'Z'};
    std::array<Eigen::Matrix4cd, 15> out;
    int j = 0;
    for (int q2 = 0; q2 < 4; ++q2) {
      for (int q1 = 0; q1 < 4; ++q1) {
        if (q1 == 0 && q2 == 0) continue;
        const Eigen::Matrix2cd high = pauli_matrix(paulis[q2]);
        const Eigen::Matrix2cd low = pauli_matrix(paulis[q1]);
        Eigen::Matrix4cd g;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) g.block<2, 2>(2 * r, 2 * c) = high(r, c) * low;
        out[j++] = g;
      }
    }
    return out;
  }();
  return gens;
}

void check_unitary(const Eigen::Matrix4cd& u) {
  if ((u.adjoint() * u - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() > kUnitarityTol)
    throw std::invalid_argument("two-qubit gate matrix is not unitary within 1e-10");
}

int local_position(const std::vector<int>& support, int qubit) {
  const auto it = std::lower_bound(support.begin(), support.end(), qubit);
  return static_cast<int>(it - support.begin());
}

/// In-place m applied over the two-qubit slot (pa, pb) of the row index;
/// every column of mat is treated as an independent statevector.
void apply_gate_to_rows(Eigen::MatrixXcd& mat, int pa, int pb, const Eigen::Matrix4cd& m) {
  const std::uint64_t dim = mat.rows();
  const std::uint64_t ma = 1ULL << pa, mb = 1ULL << pb;
  for (Eigen::Index col = 0; col < mat.cols(); ++col) {
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
      if ((idx & ma) || (idx & mb)) continue;
      const std::uint64_t i0 = idx, i1 = idx | ma, i2 = idx | mb, i3 = idx | ma | mb;
      const std::complex<double> v0 = mat(i0, col), v1 = mat(i1, col), v2 = mat(i2, col),
                                 v3 = mat(i3, col);
      mat(i0, col) = m(0, 0) * v0 + m(0, 1) * v1 + m(0, 2) * v2 + m(0, 3) * v3;
      mat(i1, col) = m(1, 0) * v0 + m(1, 1) * v1 + m(1, 2) * v2 + m(1, 3) * v3;
      mat(i2, col) = m(2, 0) * v0 + m(2, 1) * v1 + m(2, 2) * v2 + m(2, 3) * v3;
      mat(i3, col) = m(3, 0) * v0 + m(3, 1) * v1 + m(3, 2) * v2 + m(3, 3) * v3;
    }
  }
}

void apply_gate_to_cols(Eigen::MatrixXcd& mat, int pa, int pb, const Eigen::Matrix4cd& m) {
  const std::uint64_t dim = mat.cols();
  const std::uint64_t ma = 1ULL << pa, mb = 1ULL << pb;
  for (Eigen::Index row = 0; row < mat.rows(); ++row) {
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
      if ((idx & ma) || (idx & mb)) continue;
      const std::uint64_t i0 = idx, i1 = idx | ma, i2 = idx | mb, i3 = idx | ma | mb;
      const std::complex<double> v0 = mat(row, i0), v1 = mat(row, i1), v2 = mat(row, i2),
                                 v3 = mat(row, i3);
      mat(row, i0) = m(0, 0) * v0 + m(0, 1) * v1 + m(0, 2) * v2 + m(0, 3) * v3;
      mat(row, i1) = m(1, 0) * v0 + m(1, 1) * v1 + m(1, 2) * v2 + m(1, 3) * v3;
      mat(row, i2) = m(2, 0) * v0 + m(2, 1) * v1 + m(2, 2) * v2 + m(2, 3) * v3;
      mat(row, i3) = m(3, 0) * v0 + m(3, 1) * v1 + m(3, 2) * v2 + m(3, 3) * v3;
    }
  }
}

/// Pads an operator on `from` with identity factors so it lives on `to`
/// (both sorted, from ⊆ to).
Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& op, const std::vector<int>& from,
                                const std::vector<int>& to) {
  std::vector<int> positions;  // local bit of each `from` qubit inside `to`
  positions.reserve(from.size());
  for (int q : from) positions.push_back(local_position(to, q));
  std::vector<char> is_from(to.size(), 0);
  for (int p : positions) is_from[p] = 1;
  std::vector<int> rest_positions;
  for (std::size_t p = 0; p < to.size(); ++p)
    if (!is_from[p]) rest_positions.push_back(static_cast<int>(p));

  const std::uint64_t dim = 1ULL << to.size();
  const auto split = [&](std::uint64_t full, std::uint64_t& local, std::uint64_t& rest) {
    local = 0;
    rest = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) local |= ((full >> positions[j]) & 1ULL) << j;
    for (std::size_t j = 0; j < rest_positions.size(); ++j)
      rest |= ((full >> rest_positions[j]) & 1ULL) << j;
  };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t row = 0; row < dim; ++row) {
    std::uint64_t lr, rr;
    split(row, lr, rr);
    for (std::uint64_t col = 0; col < dim; ++col) {
      std::uint64_t lc, rc;
      split(col, lc, rc);
      if (rr == rc) out(row, col) = op(lr, lc);
    }
  }
  return out;
}

}  // namespace

Eigen::Matrix4cd su4_from_params(const GateParams& params) {
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  const auto& gens = su4_generators();
  for (int j = 0; j < 15; ++j)
    if (params[j] != 0.0) h += params[j] * gens[j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  const Eigen::Vector4d lam = es.eigenvalues();
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) phases(i) = std::exp(std::complex<double>(0.0, -lam(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

TwoQubitGate TwoQubitGate::from_params(int a, int b, const GateParams& params) {
  TwoQubitGate g;
  g.a = a;
  g.b = b;
  g.params = params;
  g.unitary = su4_from_params(params);
  return g;
}

TwoQubitGate TwoQubitGate::from_unitary(int a, int b, const Eigen::Matrix4cd& u) {
  check_unitary(u);
  TwoQubitGate g;
  g.a = a;
  g.b = b;
  g.unitary = u;
  return g;
}

BrickworkCircuit::BrickworkCircuit(int n, std::vector<CircuitLayer> layers)
    : n_(n), layers_(std::move(layers)) {
  if (n_ <= 0) throw std::invalid_argument("circuit qubit count must be positive");
  for (const auto& layer : layers_) {
    std::set<int> seen;
    for (const auto& g : layer) {
      if (g.a == g.b || g.a < 0 || g.b < 0 || g.a >= n_ || g.b >= n_)
        throw std::invalid_argument("gate pair must be two distinct qubits in range");
      if (!seen.insert(g.a).second || !seen.insert(g.b).second)
        throw std::invalid_argument("gate pairs within a layer must be disjoint");
      check_unitary(g.unitary);
    }
  }
}

BrickworkCircuit BrickworkCircuit::identity(int n) { return BrickworkCircuit(n, {}); }

BrickworkCircuit BrickworkCircuit::brick_layout(int n, int depth) {
  if (depth < 0) throw std::invalid_argument("circuit depth must be non-negative");
  std::vector<CircuitLayer> layers;
  layers.reserve(depth);
  const GateParams zero{};
  for (int l = 0; l < depth; ++l) {
    CircuitLayer layer;
    for (int a = l % 2; a + 1 < n; a += 2) layer.push_back(TwoQubitGate::from_params(a, a + 1, zero));
    layers.push_back(std::move(layer));
  }
  return BrickworkCircuit(n, std::move(layers));
}

BrickworkCircuit BrickworkCircuit::from_layout(
    int n, const std::vector<std::vector<std::pair<int, int>>>& layers) {
  const GateParams zero{};
  std::vector<CircuitLayer> built;
  built.reserve(layers.size());
  for (const auto& pairs : layers) {
    CircuitLayer layer;
    for (const auto& [a, b] : pairs) layer.push_back(TwoQubitGate::from_params(a, b, zero));
    built.push_back(std::move(layer));
  }
  return BrickworkCircuit(n, std::move(built));
}

void BrickworkCircuit::set_gate_params(int layer, int index, const GateParams& params) {
  TwoQubitGate& g = layers_.at(layer).at(index);
  g.params = params;
  g.unitary = su4_from_params(params);
}

Eigen::VectorXcd apply_circuit(const BrickworkCircuit& c, const Eigen::VectorXcd& state) {
  if (state.size() != (Eigen::Index(1) << c.n()))
    throw std::invalid_argument("statevector dimension does not match circuit qubit count");
  Eigen::MatrixXcd work = state;
  for (const auto& layer : c.layers())
    for (const auto& g : layer) apply_gate_to_rows(work, g.a, g.b, g.unitary);
  return work.col(0);
}

double circuit_energy(const LocalHamiltonian& h, const BrickworkCircuit& c) {
  if (h.n() != c.n()) throw std::invalid_argument("circuit/Hamiltonian qubit-count mismatch");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index(1) << h.n());
  psi(0) = 1.0;
  psi = apply_circuit(c, psi);
  return expectation(h, psi);
}

std::vector<int> lightcone_support(const BrickworkCircuit& c, const std::vector<int>& qubits) {
  std::set<int> cone(qubits.begin(), qubits.end());
  for (int q : qubits)
    if (q < 0 || q >= c.n()) throw std::invalid_argument("light-cone qubit outside register");
  for (int l = c.depth() - 1; l >= 0; --l) {
    for (const auto& g : c.layers()[l]) {
      if (cone.count(g.a) || cone.count(g.b)) {
        cone.insert(g.a);
        cone.insert(g.b);
      }
    }
  }
  return std::vector<int>(cone.begin(), cone.end());
}

LocalHamiltonian conjugate_by_circuit(const LocalHamiltonian& h, const BrickworkCircuit& c,
                                      int block_cap) {
  if (h.n() != c.n()) throw std::invalid_argument("circuit/Hamiltonian qubit-count mismatch");
  const int cap = resolve_oracle_cap(block_cap);
  std::vector<LocalTerm> out;
  out.reserve(h.terms().size());
  for (const auto& t : h.terms()) {
    std::vector<int> support = t.qubits;
    Eigen::MatrixXcd op = t.body;
    bool touched = false;
    for (int l = c.depth() - 1; l >= 0; --l) {
      std::vector<const TwoQubitGate*> hit;
      std::set<int> grown(support.begin(), support.end());
      for (const auto& g : c.layers()[l]) {
        if (grown.count(g.a) || grown.count(g.b)) {
          hit.push_back(&g);
          grown.insert(g.a);
          grown.insert(g.b);
        }
      }
      if (hit.empty()) continue;
      touched = true;
      std::vector<int> new_support(grown.begin(), grown.end());
      if (static_cast<int>(new_support.size()) > cap)
        throw scale_error("oracle scale exceeded: conjugated term support " +
                          std::to_string(new_support.size()) + " > cap=" + std::to_string(cap));
      if (new_support.size() != support.size()) op = embed_operator(op, support, new_support);
      support = std::move(new_support);
      for (const TwoQubitGate* g : hit) {
        const int pa = local_position(support, g->a);
        const int pb = local_position(support, g->b);
        apply_gate_to_rows(op, pa, pb, g->unitary.adjoint());
        apply_gate_to_cols(op, pa, pb, g->unitary.transpose());
      }
    }
    if (!touched) {
      out.push_back(t);
      continue;
    }
    op = ((op + op.adjoint()) * 0.5).eval();
    LocalTerm conj;
    conj.qubits = std::move(support);
    conj.body = std::move(op);
    conj.weight = t.weight;
    conj.norm = t.norm;  // unitarily invariant, carried over exactly
    out.push_back(std::move(conj));
  }
  return LocalHamiltonian(h.n(), std::move(out));
}

std::string circuit_to_json(const BrickworkCircuit& c) {
  json doc;
  doc["n"] = c.n();
  doc["layers"] = json::array();
  for (const auto& layer : c.layers()) {
    json jl = json::array();
    for (const auto& g : layer) {
      if (!g.params) throw std::invalid_argument("raw-unitary gates have no JSON representation");
      jl.push_back({{"pair", {g.a, g.b}}, {"params", *g.params}});
    }
    doc["layers"].push_back(std::move(jl));
  }
  return doc.dump(2);
}

BrickworkCircuit circuit_from_json(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed circuit document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("layers"))
    throw std::invalid_argument("circuit document must be an object with \"n\" and \"layers\"");
  const int n = doc["n"].get<int>();
  std::vector<CircuitLayer> layers;
  for (const auto& jl : doc["layers"]) {
    CircuitLayer layer;
    for (const auto& jg : jl) {
      const auto pair = jg.at("pair").get<std::vector<int>>();
      const auto params_vec = jg.at("params").get<std::vector<double>>();
      if (pair.size() != 2 || params_vec.size() != 15)
        throw std::invalid_argument("gate needs \"pair\" of 2 qubits and 15 \"params\"");
      GateParams params;
      std::copy(params_vec.begin(), params_vec.end(), params.begin());
      layer.push_back(TwoQubitGate::from_params(pair[0], pair[1], params));
    }
    layers.push_back(std::move(layer));
  }
  return BrickworkCircuit(n, std::move(layers));
}

}  // namespace hamlow
