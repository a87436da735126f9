#include "hamlow/filter.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <random>

#include "embedding.hpp"
#include "hamlow/bounds.hpp"

namespace hamlow {

using json = nlohmann::json;

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double canonical_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// <psi|(H (x) I)|psi> for a 2n-qubit vector, applied term by term.
double extended_expectation(const LocalHamiltonian& h, const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd hv = Eigen::VectorXcd::Zero(psi.size());
  for (const auto& t : h.terms()) accumulate_term_apply(t, 2 * h.n(), psi, hv);
  return psi.dot(hv).real();
}

}  // namespace

ExtendedSystem make_extended(const LocalHamiltonian& h, int oracle_cap) {
  return ExtendedSystem{h, diagonalize(h, /*keep_vectors=*/true, oracle_cap)};
}

Eigen::VectorXcd maximally_entangled(int n, int n_cap) {
  if (n < 1) throw std::invalid_argument("maximally_entangled needs n >= 1");
  if (n > n_cap)
    throw scale_error("vector scale exceeded: 2n=" + std::to_string(2 * n) +
                      " qubits > cap=" + std::to_string(2 * n_cap));
  const std::uint64_t dim = 1ULL << n;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index(1) << (2 * n));
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::uint64_t k = 0; k < dim; ++k) psi(k * dim + k) = amp;
  return psi;
}

double overlap_gamma(const ExtendedSystem& sys, double energy) {
  const int n = sys.base.n();
  const double gamma =
      static_cast<double>(spectral_count(sys.spectral, energy)) / std::ldexp(1.0, n);
  if (n <= 6 && sys.spectral.has_vectors()) {
    const Eigen::VectorXcd psi = maximally_entangled(n);
    const double explicit_gamma = projector_overlap(psi, sys.spectral, energy);
    if (std::abs(explicit_gamma - gamma) > 1e-12)
      throw std::logic_error("overlap identity violated: N(E)/2^n = " + std::to_string(gamma) +
                             " but explicit projector overlap = " + std::to_string(explicit_gamma));
  }
  return gamma;
}

FilterOutcome exact_filter(const ExtendedSystem& sys, const Eigen::VectorXcd& state,
                           double energy) {
  if (!sys.spectral.has_vectors())
    throw std::invalid_argument("exact_filter needs retained eigenvectors");
  const Eigen::Index dim = sys.spectral.eigenvalues.size();
  if (state.size() != dim * dim)
    throw std::invalid_argument("state must live on 2n qubits of the extended system");
  const long long count = spectral_count(sys.spectral, energy);
  if (count == 0) throw std::runtime_error("empty low-energy subspace overlap");

  Eigen::Map<const Eigen::MatrixXcd> reshaped(state.data(), dim, dim);
  const auto low_vectors = sys.spectral.eigenvectors.leftCols(count);
  const Eigen::MatrixXcd coords = low_vectors.adjoint() * reshaped;  // count x 2^n
  const double success = coords.squaredNorm();
  if (!(success > 1e-300)) throw std::runtime_error("empty low-energy subspace overlap");

  FilterOutcome out;
  out.mode = "exact";
  out.success_probability = success;
  out.gamma = success;
  Eigen::MatrixXcd filtered = low_vectors * coords / std::sqrt(success);
  out.post_state = Eigen::Map<Eigen::VectorXcd>(filtered.data(), dim * dim);
  out.reduced_density = filtered * filtered.adjoint();
  double e = 0.0;
  for (long long i = 0; i < count; ++i)
    e += sys.spectral.eigenvalues(i) * coords.row(i).squaredNorm();
  out.energy = e / success;
  out.estimate = out.energy;
  return out;
}

std::vector<double> chebyshev_step_coefficients(double t_mid, double sigma, int degree) {
  if (degree < 1) throw std::invalid_argument("polynomial degree must be at least 1");
  if (sigma <= 0.0) throw std::invalid_argument("smoothing width must be positive");
  const int quad = std::max(1024, 2 * (degree + 1));
  std::vector<double> f(quad);
  for (int q = 0; q < quad; ++q) {
    const double theta = M_PI * (q + 0.5) / quad;
    f[q] = 0.5 * std::erfc((std::cos(theta) - t_mid) / sigma);
  }
  std::vector<double> coeffs(degree + 1);
  for (int j = 0; j <= degree; ++j) {
    double acc = 0.0;
    for (int q = 0; q < quad; ++q) acc += f[q] * std::cos(j * M_PI * (q + 0.5) / quad);
    coeffs[j] = (j == 0 ? 1.0 : 2.0) * acc / quad;
  }
  return coeffs;
}

FilterOutcome chebyshev_filter(const ExtendedSystem& sys, const Eigen::VectorXcd& state, double x,
                               double y, int degree) {
  if (y <= 0.0) throw std::invalid_argument("transition width y must be positive");
  if (degree < 1) throw std::invalid_argument("polynomial degree must be at least 1");
  const int n = sys.base.n();
  const Eigen::Index dim2 = Eigen::Index(1) << (2 * n);
  if (state.size() != dim2)
    throw std::invalid_argument("state must live on 2n qubits of the extended system");

  const double lo = sys.spectral.ground_energy();
  const double hi = sys.spectral.max_energy();
  const double half_range = std::max((hi - lo) / 2.0, 1e-12);
  const double center = (hi + lo) / 2.0;
  const double t_mid = (x - y / 2.0 - center) / half_range;
  const double sigma = y / (2.0 * half_range);
  const std::vector<double> coeffs = chebyshev_step_coefficients(t_mid, sigma, degree);

  const auto apply_scaled = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd hv = Eigen::VectorXcd::Zero(dim2);
    for (const auto& t : sys.base.terms()) accumulate_term_apply(t, 2 * n, v, hv);
    return ((hv - center * v) / half_range).eval();
  };

  // Clenshaw recurrence for sum_j c_j T_j applied to the state.
  Eigen::VectorXcd b1 = Eigen::VectorXcd::Zero(dim2);
  Eigen::VectorXcd b2 = Eigen::VectorXcd::Zero(dim2);
  for (int j = degree; j >= 1; --j) {
    Eigen::VectorXcd b = coeffs[j] * state + 2.0 * apply_scaled(b1) - b2;
    b2.swap(b1);
    b1 = std::move(b);
  }
  Eigen::VectorXcd filtered = coeffs[0] * state + apply_scaled(b1) - b2;

  const double success = filtered.squaredNorm();
  if (!(success > 1e-300)) throw std::runtime_error("polynomial filter annihilated the state");

  FilterOutcome out;
  out.mode = "poly";
  out.degree = degree;
  out.x = x;
  out.y = y;
  out.success_probability = success;
  out.gamma = static_cast<double>(spectral_count(sys.spectral, x - y)) / std::ldexp(1.0, n);
  out.post_state = filtered / std::sqrt(success);
  out.reduced_density = reduced_density_system(out.post_state, n);
  out.energy = extended_expectation(sys.base, out.post_state);
  out.estimate = out.energy;
  return out;
}

FilterOutcome prepare_low_energy(const ExtendedSystem& sys, double epsilon, double e_d_ref,
                                 FilterMode mode, int degree) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const int n = sys.base.n();
  const double total = sys.base.total_strength();
  const double x = e_d_ref + epsilon * total;
  const double y = epsilon * total / n;
  const double mu = (1.0 - 1.0 / n) * epsilon;

  const Eigen::VectorXcd psi0 = maximally_entangled(n);
  FilterOutcome out;
  if (mode == FilterMode::exact) {
    out = exact_filter(sys, psi0, x - y);
  } else {
    out = chebyshev_filter(sys, psi0, x, y, degree);
    const FilterOutcome reference = exact_filter(sys, psi0, x - y);
    out.fidelity_to_exact = std::abs(reference.post_state.dot(out.post_state));
  }
  out.x = x;
  out.y = y;
  out.mu = mu;
  out.gamma = overlap_gamma(sys, x - y);
  const QueryCost cost = query_cost_model(out.gamma, y, total, n);
  out.calls_uh = cost.calls_uh;
  out.calls_ui = cost.calls_ui;
  return out;
}

FilterOutcome prepare_low_energy(const LocalHamiltonian& h, double epsilon, double e_d_ref,
                                 FilterMode mode, int degree, int oracle_cap) {
  return prepare_low_energy(make_extended(h, oracle_cap), epsilon, e_d_ref, mode, degree);
}

EnergyEstimate estimate_energy(const Eigen::MatrixXcd& rho, const LocalHamiltonian& h,
                               int samples_per_term, std::uint64_t seed) {
  if (samples_per_term < 1) throw std::invalid_argument("samples_per_term must be at least 1");
  if (rho.rows() != (Eigen::Index(1) << h.n()) || rho.cols() != rho.rows())
    throw std::invalid_argument("density matrix dimension mismatch");

  EnergyEstimate result;
  double exact = 0.0;
  double variance_sum = 0.0;
  for (std::size_t alpha = 0; alpha < h.terms().size(); ++alpha) {
    const LocalTerm& t = h.terms()[alpha];
    const Eigen::MatrixXcd rho_local = partial_trace_keep(rho, h.n(), t.qubits);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t.body);
    const Eigen::VectorXd values = es.eigenvalues();
    const Eigen::MatrixXcd in_basis = es.eigenvectors().adjoint() * rho_local * es.eigenvectors();

    const Eigen::Index outcomes = values.size();
    std::vector<double> probs(outcomes);
    double norm = 0.0;
    for (Eigen::Index j = 0; j < outcomes; ++j) {
      probs[j] = std::max(0.0, in_basis(j, j).real());
      norm += probs[j];
    }
    for (double& p : probs) p /= norm;
    exact += t.weight * (rho_local * t.body).trace().real();

    std::mt19937_64 rng(mix_seed(seed, alpha));
    double mean = 0.0, m2 = 0.0;
    for (int s = 0; s < samples_per_term; ++s) {
      const double u = canonical_uniform(rng);
      double cdf = 0.0;
      Eigen::Index pick = outcomes - 1;
      for (Eigen::Index j = 0; j < outcomes; ++j) {
        cdf += probs[j];
        if (u < cdf) {
          pick = j;
          break;
        }
      }
      const double outcome = t.weight * values(pick);
      const double delta = outcome - mean;
      mean += delta / (s + 1);
      m2 += delta * (outcome - mean);
    }
    result.per_term.push_back(mean);
    result.estimate += mean;
    if (samples_per_term > 1) variance_sum += m2 / (samples_per_term - 1) / samples_per_term;
  }
  result.stderr_total = std::sqrt(variance_sum);
  result.within_3sigma = std::abs(result.estimate - exact) <= 3.0 * result.stderr_total + 1e-9;
  return result;
}

QueryCost query_cost_model(double gamma, double y, double total_strength, int n) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (y <= 0.0) throw std::invalid_argument("y must be positive");
  if (total_strength < 0.0 || n < 1) throw std::invalid_argument("invalid cost-model inputs");
  QueryCost cost;
  cost.calls_ui = 1.0 / std::sqrt(gamma);
  cost.calls_uh = cost.calls_ui / y;
  return cost;
}

double lemma5_log2_overlap_bound(double mu, int k, int d, int n) {
  return binary_entropy(mu / (std::ldexp(1.0, d + 2) * k)) * n / 2.0 - n;
}

Eigen::MatrixXcd reduced_density_system(const Eigen::VectorXcd& psi, int n) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  if (psi.size() != dim * dim) throw std::invalid_argument("state must live on 2n qubits");
  Eigen::Map<const Eigen::MatrixXcd> reshaped(psi.data(), dim, dim);
  return reshaped * reshaped.adjoint();
}

Eigen::MatrixXcd partial_trace_keep(const Eigen::MatrixXcd& rho, int n,
                                    const std::vector<int>& keep) {
  const auto rest = detail::complement(keep, n);
  const auto keep_offsets = detail::embedding_offsets(keep);
  const std::uint64_t keep_dim = keep_offsets.size();
  const std::uint64_t rest_count = 1ULL << rest.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(keep_dim, keep_dim);
  for (std::uint64_t r = 0; r < rest_count; ++r) {
    const std::uint64_t base = detail::spread_bits(r, rest);
    for (std::uint64_t i = 0; i < keep_dim; ++i)
      for (std::uint64_t j = 0; j < keep_dim; ++j)
        out(i, j) += rho(base + keep_offsets[i], base + keep_offsets[j]);
  }
  return out;
}

std::string outcome_to_json(const FilterOutcome& out) {
  json doc;
  doc["x"] = out.x;
  doc["y"] = out.y;
  doc["mu"] = out.mu;
  doc["gamma"] = out.gamma;
  doc["success_probability"] = out.success_probability;
  doc["energy"] = out.energy;
  doc["estimate"] = out.estimate;
  doc["stderr"] = out.estimate_stderr;
  doc["calls_UH"] = out.calls_uh;
  doc["calls_UI"] = out.calls_ui;
  doc["mode"] = out.mode;
  doc["degree"] = out.degree ? json(*out.degree) : json(nullptr);
  return doc.dump(2);
}

}  // namespace hamlow
