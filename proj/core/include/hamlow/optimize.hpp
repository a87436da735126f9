#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hamlow/circuit.hpp"
#include "hamlow/hamiltonian.hpp"

namespace hamlow {

/// Gradient-free coordinate descent over brickwork gate parameters with a
/// golden-section line search per parameter. Restart 0 always starts from
/// the identity circuit, which pins energy_upper <= E_0.
struct OptimizerConfig {
  int restarts = 8;
  int max_sweeps = 200;
  double plateau_tol = 1e-8;
  std::uint64_t seed = 0;
  int line_search_iters = 30;
  double line_search_halfwidth = 1.5707963267948966;  // pi/2
  int threads = 0;  // 0 = hardware concurrency
  std::optional<BrickworkCircuit> warm_start;
  std::optional<std::vector<std::vector<std::pair<int, int>>>> layout;
};

struct DepthBound {
  int depth = 0;
  double energy_upper = 0.0;
  BrickworkCircuit circuit = BrickworkCircuit::identity(1);
  std::vector<double> sweep_trace;  // winning restart, best energy per sweep
};

/// <0...0|H|0...0>, summed term by term.
double energy_zero_state(const LocalHamiltonian& h);

DepthBound optimize_depth_d(const LocalHamiltonian& h, int depth,
                            const OptimizerConfig& cfg = {}, int oracle_cap = 0);

}  // namespace hamlow
