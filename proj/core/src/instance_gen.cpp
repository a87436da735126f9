#include "hamlow/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hamlow {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

}  // namespace

LocalHamiltonian random_instance(const InstanceSpec& spec) {
  if (spec.k < 1 || spec.n < spec.k)
    throw std::invalid_argument("instance generator needs n >= k >= 1");
  if (spec.m < 1) throw std::invalid_argument("instance generator needs m >= 1");
  if (spec.weight_dist != "pm1" && spec.weight_dist != "uniform" && spec.weight_dist != "gauss")
    throw std::invalid_argument("weight distribution must be one of pm1|uniform|gauss");

  std::mt19937_64 rng(spec.seed);
  const char paulis[3] = {'X', 'Y', 'Z'};
  std::vector<LocalTerm> terms;
  terms.reserve(spec.m);
  std::vector<int> sites(spec.n);
  for (int t = 0; t < spec.m; ++t) {
    // Partial Fisher-Yates draw of a uniform k-subset.
    std::iota(sites.begin(), sites.end(), 0);
    for (int j = 0; j < spec.k; ++j)
      std::swap(sites[j], sites[j + bounded(rng, spec.n - j)]);
    std::vector<int> qubits(sites.begin(), sites.begin() + spec.k);
    std::sort(qubits.begin(), qubits.end());

    std::string word;
    for (int j = 0; j < spec.k; ++j) word.push_back(paulis[bounded(rng, 3)]);

    double weight;
    if (spec.weight_dist == "pm1") {
      weight = (rng() & 1ULL) ? 1.0 : -1.0;
    } else if (spec.weight_dist == "uniform") {
      weight = 2.0 * unit_uniform(rng) - 1.0;
    } else {
      const double u1 = std::max(unit_uniform(rng), 1e-300);
      const double u2 = unit_uniform(rng);
      weight = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    terms.push_back(make_pauli_term(std::move(qubits), std::move(word), weight));
  }
  return LocalHamiltonian(spec.n, std::move(terms));
}

}  // namespace hamlow
