#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "hamlow/hamiltonian.hpp"

namespace hamlow {

using GateParams = std::array<double, 15>;

/// General two-qubit gate exp(-i sum_j theta_j P_j) over the 15 non-identity
/// two-qubit Pauli generators. The generator order is (q2, q1) row-major over
/// {I,X,Y,Z} x {I,X,Y,Z} minus (I,I), where q1 acts on `a` (local bit 0) and
/// q2 acts on `b` (local bit 1). Gates may also wrap a raw unitary, in which
/// case they cannot be serialized to the parameter-based JSON schema.
struct TwoQubitGate {
  int a = 0;
  int b = 1;
  std::optional<GateParams> params;
  Eigen::Matrix4cd unitary = Eigen::Matrix4cd::Identity();

  static TwoQubitGate from_params(int a, int b, const GateParams& params);
  static TwoQubitGate from_unitary(int a, int b, const Eigen::Matrix4cd& u);
};

Eigen::Matrix4cd su4_from_params(const GateParams& params);

using CircuitLayer = std::vector<TwoQubitGate>;

/// Depth-d circuit of two-qubit gates; pairs within a layer are disjoint.
/// Depth 0 is the identity circuit.
class BrickworkCircuit {
 public:
  BrickworkCircuit(int n, std::vector<CircuitLayer> layers);

  static BrickworkCircuit identity(int n);
  /// Standard brick pattern on the line ordering: even layers pair
  /// (0,1),(2,3),..., odd layers pair (1,2),(3,4),.... All gates start as
  /// the identity (zero parameters).
  static BrickworkCircuit brick_layout(int n, int depth);
  /// Arbitrary layout from explicit pairs per layer, identity gates.
  static BrickworkCircuit from_layout(int n, const std::vector<std::vector<std::pair<int, int>>>& layers);

  int n() const { return n_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  const std::vector<CircuitLayer>& layers() const { return layers_; }

  const TwoQubitGate& gate(int layer, int index) const { return layers_[layer][index]; }
  void set_gate_params(int layer, int index, const GateParams& params);

 private:
  int n_;
  std::vector<CircuitLayer> layers_;
};

/// Applies the layers in order to a 2^n statevector.
Eigen::VectorXcd apply_circuit(const BrickworkCircuit& c, const Eigen::VectorXcd& state);

/// <0|C'HC|0> evaluated through the statevector kernel.
double circuit_energy(const LocalHamiltonian& h, const BrickworkCircuit& c);

/// Sites reachable from `qubits` traversing the layers backward (the
/// direction in which conjugation C'.h.C grows supports). Sorted output;
/// size <= min(n, 2^depth * |qubits|).
std::vector<int> lightcone_support(const BrickworkCircuit& c, const std::vector<int>& qubits);

/// H_d = C' H C with per-term supports taken from the circuit light cone.
/// Terms touched by at least one gate become dense blocks on their light
/// cone; untouched terms are returned unchanged. Norms are carried over
/// exactly (unitary invariance). Throws scale_error if a light-cone block
/// would exceed the cap.
LocalHamiltonian conjugate_by_circuit(const LocalHamiltonian& h, const BrickworkCircuit& c,
                                      int block_cap = 0);

/// Circuit JSON schema:
///   {"n": int, "layers": [[{"pair": [a, b], "params": [15 floats]}...]]}
/// Raw-unitary gates are not representable and raise invalid_argument.
std::string circuit_to_json(const BrickworkCircuit& c);
BrickworkCircuit circuit_from_json(const std::string& document);

}  // namespace hamlow
