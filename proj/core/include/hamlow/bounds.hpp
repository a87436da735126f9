#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hamlow {

/// Binary entropy H(x) = -x log2 x - (1-x) log2(1-x), with H(0)=H(1)=0.
double binary_entropy(double x);

/// Entropy-governed exponent c = (1/2)(1 - H(eps/(2^{d+2} k))/2). The
/// entropy argument must stay within [0, 1/2].
double exponent_ours(int k, double epsilon, int d);

/// Rational exponent c = (1/2)(1 - eps/(2k + eps)).
double exponent_buhrman(int k, double epsilon);

/// Estimation-only variant c = (1/2)(1 - eps/(k + eps)).
double exponent_buhrman_estimation(int k, double epsilon);

/// Largest d >= 0 with (1/2) H(eps/(2^{d+2} k)) >= eps/(2k + eps), found by
/// an ascending scan; nullopt when even d = 0 fails.
std::optional<int> crossover_depth(int k, double epsilon);

struct ExponentRow {
  int k = 0;
  double epsilon = 0.0;
  int d = 0;
  double c_buhrman = 0.0;
  double c_buhrman_est = 0.0;
  double c_ours = 0.0;
};

/// Cross product of the parameter lists, one row per (k, epsilon, d).
std::vector<ExponentRow> comparison_table(const std::vector<int>& ks,
                                          const std::vector<double>& epsilons,
                                          const std::vector<int>& ds);

/// The published comparison grid: k in {3,4,10}, eps in {1/8,0.05,0.01,0.001},
/// d in {0,1}.
std::vector<ExponentRow> default_comparison_table();

/// CSV with header "k,epsilon,d,c_buhrman,c_buhrman_est,c_ours".
void write_table_csv(std::ostream& out, const std::vector<ExponentRow>& rows);

/// JSON array of row objects with the same field names.
std::string table_to_json(const std::vector<ExponentRow>& rows);

}  // namespace hamlow
