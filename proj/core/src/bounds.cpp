#include "hamlow/bounds.hpp"

#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hamlow {

using json = nlohmann::json;

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary_entropy needs x in [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double exponent_ours(int k, double epsilon, int d) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (d < 0) throw std::invalid_argument("d must be non-negative");
  const double arg = epsilon / (std::ldexp(1.0, d + 2) * k);
  if (arg > 0.5)
    throw std::invalid_argument("entropy argument eps/(2^{d+2} k) exceeds 1/2, outside the bound's regime");
  return 0.5 * (1.0 - 0.5 * binary_entropy(arg));
}

double exponent_buhrman(int k, double epsilon) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  return 0.5 * (1.0 - epsilon / (2.0 * k + epsilon));
}

double exponent_buhrman_estimation(int k, double epsilon) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  return 0.5 * (1.0 - epsilon / (k + epsilon));
}

std::optional<int> crossover_depth(int k, double epsilon) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (epsilon <= 0.0 || epsilon > static_cast<double>(k))
    throw std::invalid_argument("crossover_depth needs 0 < epsilon <= k");
  const double rational = epsilon / (2.0 * k + epsilon);
  std::optional<int> best;
  for (int d = 0;; ++d) {
    const double arg = epsilon / (std::ldexp(1.0, d + 2) * k);
    if (arg <= 0.0) break;  // underflow: entropy is 0 and can never win again
    if (0.5 * binary_entropy(std::min(arg, 0.5)) >= rational) {
      best = d;
    } else {
      break;  // entropy argument shrinks with d, so the predicate is monotone
    }
  }
  return best;
}

std::vector<ExponentRow> comparison_table(const std::vector<int>& ks,
                                          const std::vector<double>& epsilons,
                                          const std::vector<int>& ds) {
  std::vector<ExponentRow> rows;
  rows.reserve(ks.size() * epsilons.size() * ds.size());
  for (int k : ks) {
    for (double eps : epsilons) {
      for (int d : ds) {
        ExponentRow row;
        row.k = k;
        row.epsilon = eps;
        row.d = d;
        row.c_buhrman = exponent_buhrman(k, eps);
        row.c_buhrman_est = exponent_buhrman_estimation(k, eps);
        row.c_ours = exponent_ours(k, eps, d);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<ExponentRow> default_comparison_table() {
  return comparison_table({3, 4, 10}, {0.125, 0.05, 0.01, 0.001}, {0, 1});
}

void write_table_csv(std::ostream& out, const std::vector<ExponentRow>& rows) {
  out << "k,epsilon,d,c_buhrman,c_buhrman_est,c_ours\n";
  for (const auto& r : rows) {
    out << r.k << ',' << std::setprecision(12) << r.epsilon << ',' << r.d << ','
        << std::fixed << std::setprecision(7) << r.c_buhrman << ',' << r.c_buhrman_est << ','
        << r.c_ours << '\n';
    out << std::defaultfloat;
  }
}

std::string table_to_json(const std::vector<ExponentRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"k", r.k},
                   {"epsilon", r.epsilon},
                   {"d", r.d},
                   {"c_buhrman", r.c_buhrman},
                   {"c_buhrman_est", r.c_buhrman_est},
                   {"c_ours", r.c_ours}});
  }
  return arr.dump(2);
}

}  // namespace hamlow
