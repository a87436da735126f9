#include "hamlow/density.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "hamlow/bounds.hpp"

namespace hamlow {

using json = nlohmann::json;

namespace {

constexpr double kFloorSlack = 1e-12;

}  // namespace

double delta_floor(const LocalHamiltonian& h_d, double mu) {
  const double contribution_sum = h_d.contribution_sum();
  if (contribution_sum <= 0.0)
    throw std::invalid_argument("degenerate instance: L = 0 (all term norms vanish)");
  return 1.0 + mu * h_d.total_strength() / contribution_sum;
}

QuietSet build_quiet_set(const LocalHamiltonian& h_d, double delta, double mu) {
  if (mu <= 0.0) throw std::invalid_argument("mu must be positive");
  const double floor_value = delta_floor(h_d, mu);
  if (delta < floor_value * (1.0 - kFloorSlack) - kFloorSlack)
    throw std::invalid_argument("delta below the admissible floor 1 + mu*M/L = " +
                                std::to_string(floor_value));
  QuietSet q;
  q.delta = delta;
  q.threshold = delta * h_d.contribution_sum() / h_d.n();
  const auto& e = h_d.site_contributions();
  for (int s = 0; s < h_d.n(); ++s)
    if (e[s] <= q.threshold) q.sites.push_back(s);
  return q;
}

PerturbationSize max_perturbation_size(double mu, double eta, double total_strength, int n,
                                       double delta, double contribution_sum, int quiet_size) {
  if (mu <= 0.0) throw std::invalid_argument("mu must be positive");
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must lie in [0,1]");
  if (contribution_sum <= 0.0) throw std::invalid_argument("degenerate instance: L = 0");
  PerturbationSize out;
  const double raw = mu * eta * total_strength * n / (2.0 * delta * contribution_sum);
  long long r = static_cast<long long>(std::floor(raw));
  const long long clamp = quiet_size / 2;
  if (r > clamp) {
    r = clamp;
    out.clamped = true;
  }
  out.r = static_cast<int>(std::max(0LL, r));
  return out;
}

std::uint64_t perturbed_state_index(const std::vector<int>& sites, int n) {
  std::uint64_t mask = 0;
  for (int s : sites) {
    if (s < 0 || s >= n) throw std::invalid_argument("perturbation site out of range");
    mask |= 1ULL << s;
  }
  return mask;
}

WindowCheck verify_energy_window(const LocalHamiltonian& h_d, const std::vector<int>& sites,
                                 double e_d_ref, double window) {
  const std::uint64_t mask = perturbed_state_index(sites, h_d.n());
  double energy = 0.0;
  for (const auto& t : h_d.terms()) {
    bool touches = false;
    for (int q : t.qubits)
      if (mask & (1ULL << q)) {
        touches = true;
        break;
      }
    energy += touches ? term_basis_expectation(t, mask) : term_basis_expectation(t, 0);
  }
  // Terms away from R contribute identically in |0...0> and |Phi_R>, so the
  // shift against e_d_ref is carried entirely by the touching terms.
  const double zero_energy = basis_state_expectation(h_d, 0);
  WindowCheck out;
  out.delta_exact = std::abs((energy - zero_energy) + (zero_energy - e_d_ref));
  out.pass = out.delta_exact <= window + 1e-9;
  return out;
}

BigInt family_size(int q, int r) {
  if (q < 0 || r < 0 || r > q) throw std::invalid_argument("family_size needs 0 <= r <= q");
  BigInt total = 1;  // C(q, 0)
  BigInt binom = 1;
  for (int i = 1; i <= r; ++i) {
    binom *= q - i + 1;
    binom /= i;
    total += binom;
  }
  return total;
}

double log2_big(const BigInt& value) {
  if (value <= 0) throw std::invalid_argument("log2_big needs a positive integer");
  const std::size_t bits = boost::multiprecision::msb(value);
  if (bits <= 960) return std::log2(value.convert_to<double>());
  const BigInt top = value >> (bits - 52);
  return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 52);
}

double interlacing_bound(const BigInt& family, double mu, double eta) {
  if (mu <= 0.0) throw std::invalid_argument("mu must be positive");
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must lie in [0,1]");
  return (1.0 - eta) * mu / (mu + 2.0) * family.convert_to<double>();
}

double corollary2_log2_family_bound(double mu, int k_eff, int n) {
  return binary_entropy(mu / (4.0 * k_eff)) * n / 2.0;
}

namespace {

struct GridPoint {
  double delta;
  double eta;
  int quiet_size;
  PerturbationSize pert;
  BigInt family;
  double log2_d;
};

GridPoint evaluate_point(const LocalHamiltonian& h_d, double mu, double delta, double eta) {
  GridPoint p;
  p.delta = delta;
  p.eta = eta;
  const QuietSet q = build_quiet_set(h_d, delta, mu);
  p.quiet_size = q.size();
  p.pert = max_perturbation_size(mu, eta, h_d.total_strength(), h_d.n(), delta,
                                 h_d.contribution_sum(), q.size());
  p.family = family_size(q.size(), p.pert.r);
  const double prefactor = (1.0 - eta) * mu / (mu + 2.0);
  p.log2_d = prefactor > 0.0 ? std::log2(prefactor) + log2_big(p.family)
                             : -std::numeric_limits<double>::infinity();
  return p;
}

}  // namespace

DensityCertificate certify_density(const LocalHamiltonian& h_d, double e_d_ref, double mu,
                                   const GridConfig& grid, const SpectralSummary* oracle) {
  if (mu <= 0.0) throw std::invalid_argument("mu must be positive");
  const double floor_value = delta_floor(h_d, mu);
  const double lo = grid.delta_min > 0.0 ? grid.delta_min : floor_value;
  const double hi = grid.delta_max > 0.0 ? grid.delta_max : floor_value * 16.0;
  if (hi < floor_value * (1.0 - kFloorSlack))
    throw std::invalid_argument("no admissible grid point: delta floor " +
                                std::to_string(floor_value) + " exceeds grid max " +
                                std::to_string(hi));
  std::vector<double> deltas;
  const double start = std::max(lo, floor_value);
  const int dcount = std::max(1, grid.delta_count);
  for (int i = 0; i < dcount; ++i) {
    const double f = dcount == 1 ? 0.0 : static_cast<double>(i) / (dcount - 1);
    deltas.push_back(start * std::pow(hi / start, f));
  }
  const int ecount = std::max(1, grid.eta_count);
  std::vector<double> etas;
  for (int i = 0; i < ecount; ++i)
    etas.push_back(ecount == 1 ? 0.5 : static_cast<double>(i) / (ecount - 1));

  std::optional<GridPoint> best;
  for (double delta : deltas)
    for (double eta : etas) {
      GridPoint p = evaluate_point(h_d, mu, delta, eta);
      if (!best || p.log2_d > best->log2_d) best = std::move(p);
    }
  // The simplified eta=1/2, delta=2 point is always worth a look.
  if (2.0 >= floor_value * (1.0 - kFloorSlack)) {
    GridPoint p = evaluate_point(h_d, mu, 2.0, 0.5);
    if (!best || p.log2_d > best->log2_d) best = std::move(p);
  }

  DensityCertificate cert;
  cert.mu = mu;
  cert.eta = best->eta;
  cert.delta = best->delta;
  cert.r = best->pert.r;
  cert.r_clamped = best->pert.clamped;
  cert.quiet_set_size = best->quiet_size;
  cert.family = best->family;
  cert.lower_bound_D = interlacing_bound(best->family, mu, best->eta);
  cert.log2_family = log2_big(best->family);
  cert.log2_D = best->log2_d;
  cert.threshold_energy = e_d_ref + mu * h_d.total_strength();
  if (oracle) {
    ValidationResult v;
    v.exact_count = spectral_count(*oracle, cert.threshold_energy);
    v.pass = static_cast<double>(v.exact_count) >= cert.lower_bound_D;
    cert.validated = v;
  }
  return cert;
}

std::string certificate_to_json(const DensityCertificate& cert) {
  json doc;
  doc["mu"] = cert.mu;
  doc["eta"] = cert.eta;
  doc["delta"] = cert.delta;
  doc["r"] = cert.r;
  doc["quiet_set_size"] = cert.quiet_set_size;
  doc["family_size"] = cert.family.str();
  doc["log2_family_size"] = cert.log2_family;
  doc["lower_bound_D"] = cert.lower_bound_D;
  doc["log2_D"] = cert.log2_D;
  doc["threshold_energy"] = cert.threshold_energy;
  if (cert.validated) {
    doc["validated"] = {{"exact_count", cert.validated->exact_count},
                        {"pass", cert.validated->pass}};
  } else {
    doc["validated"] = nullptr;
  }
  return doc.dump(2);
}

}  // namespace hamlow
