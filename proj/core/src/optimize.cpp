#include "hamlow/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

namespace hamlow {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform_pm(std::mt19937_64& rng, double halfwidth) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return (2.0 * u - 1.0) * halfwidth;
}

struct RestartResult {
  double energy = 0.0;
  BrickworkCircuit circuit = BrickworkCircuit::identity(1);
  std::vector<double> trace;
};

RestartResult run_restart(const LocalHamiltonian& h, BrickworkCircuit circuit,
                          const OptimizerConfig& cfg) {
  constexpr double kInvPhi = 0.6180339887498949;
  double energy = circuit_energy(h, circuit);
  RestartResult result;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const double energy_before = energy;
    for (int l = 0; l < circuit.depth(); ++l) {
      for (std::size_t gi = 0; gi < circuit.layers()[l].size(); ++gi) {
        GateParams params = *circuit.gate(l, static_cast<int>(gi)).params;
        for (int j = 0; j < 15; ++j) {
          const auto eval_at = [&](double theta) {
            GateParams trial = params;
            trial[j] = theta;
            circuit.set_gate_params(l, static_cast<int>(gi), trial);
            return circuit_energy(h, circuit);
          };
          double lo = params[j] - cfg.line_search_halfwidth;
          double hi = params[j] + cfg.line_search_halfwidth;
          double x1 = hi - kInvPhi * (hi - lo);
          double x2 = lo + kInvPhi * (hi - lo);
          double f1 = eval_at(x1);
          double f2 = eval_at(x2);
          for (int it = 0; it < cfg.line_search_iters; ++it) {
            if (f1 < f2) {
              hi = x2;
              x2 = x1;
              f2 = f1;
              x1 = hi - kInvPhi * (hi - lo);
              f1 = eval_at(x1);
            } else {
              lo = x1;
              x1 = x2;
              f1 = f2;
              x2 = lo + kInvPhi * (hi - lo);
              f2 = eval_at(x2);
            }
          }
          const double theta_best = (f1 < f2) ? x1 : x2;
          const double energy_best = std::min(f1, f2);
          if (energy_best < energy) {
            params[j] = theta_best;
            energy = energy_best;
          }
          circuit.set_gate_params(l, static_cast<int>(gi), params);
        }
      }
    }
    result.trace.push_back(energy);
    if (energy_before - energy < cfg.plateau_tol) break;
  }
  result.energy = energy;
  result.circuit = std::move(circuit);
  return result;
}

}  // namespace

double energy_zero_state(const LocalHamiltonian& h) { return basis_state_expectation(h, 0); }

DepthBound optimize_depth_d(const LocalHamiltonian& h, int depth, const OptimizerConfig& cfg,
                            int oracle_cap) {
  if (depth < 0) throw std::invalid_argument("circuit depth must be non-negative");
  const int cap = resolve_oracle_cap(oracle_cap);
  if (h.n() > cap)
    throw scale_error("oracle scale exceeded: n=" + std::to_string(h.n()) +
                      " > cap=" + std::to_string(cap));

  DepthBound bound;
  bound.depth = depth;
  if (depth == 0) {
    bound.energy_upper = energy_zero_state(h);
    bound.circuit = BrickworkCircuit::identity(h.n());
    return bound;
  }

  const BrickworkCircuit base = cfg.layout ? BrickworkCircuit::from_layout(h.n(), *cfg.layout)
                                           : BrickworkCircuit::brick_layout(h.n(), depth);
  if (base.depth() != depth)
    throw std::invalid_argument("custom layout depth does not match requested depth");

  std::vector<BrickworkCircuit> starts;
  starts.push_back(base);  // identity start pins energy_upper <= E_0
  if (cfg.warm_start) {
    if (cfg.warm_start->n() != h.n() || cfg.warm_start->depth() > depth)
      throw std::invalid_argument("warm-start circuit must act on the same qubits at depth <= d");
    std::vector<CircuitLayer> layers = cfg.warm_start->layers();
    for (int l = cfg.warm_start->depth(); l < depth; ++l) layers.push_back(base.layers()[l]);
    starts.emplace_back(h.n(), std::move(layers));
  }
  while (static_cast<int>(starts.size()) < std::max(1, cfg.restarts)) {
    std::mt19937_64 rng(mix_seed(cfg.seed, starts.size()));
    BrickworkCircuit c = base;
    for (int l = 0; l < depth; ++l) {
      for (std::size_t gi = 0; gi < c.layers()[l].size(); ++gi) {
        GateParams p;
        for (double& v : p) v = uniform_pm(rng, 0.75);
        c.set_gate_params(l, static_cast<int>(gi), p);
      }
    }
    starts.push_back(std::move(c));
  }

  const int workers = cfg.threads > 0 ? cfg.threads
                                      : std::max(1u, std::thread::hardware_concurrency());
  std::vector<RestartResult> results(starts.size());
  for (std::size_t begin = 0; begin < starts.size(); begin += workers) {
    const std::size_t end = std::min(starts.size(), begin + workers);
    std::vector<std::future<RestartResult>> wave;
    for (std::size_t i = begin; i < end; ++i)
      wave.push_back(std::async(std::launch::async,
                                [&, i] { return run_restart(h, starts[i], cfg); }));
    for (std::size_t i = begin; i < end; ++i) results[i] = wave[i - begin].get();
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].energy < results[best].energy) best = i;
  bound.energy_upper = results[best].energy;
  bound.circuit = std::move(results[best].circuit);
  bound.sweep_trace = std::move(results[best].trace);
  return bound;
}

}  // namespace hamlow
