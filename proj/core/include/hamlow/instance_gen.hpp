#pragma once

#include <cstdint>
#include <string>

#include "hamlow/hamiltonian.hpp"

namespace hamlow {

/// Random k-local instance: uniform k-subsets of sites, uniform Pauli words
/// over {X,Y,Z}, weights from the named distribution ("pm1", "uniform" on
/// [-1,1], or "gauss"). Fully determined by (spec, seed); the generator uses
/// only raw engine draws so files are byte-stable.
struct InstanceSpec {
  int n = 8;
  int k = 3;
  int m = 16;
  std::string weight_dist = "pm1";
  std::uint64_t seed = 0;
};

LocalHamiltonian random_instance(const InstanceSpec& spec);

}  // namespace hamlow
