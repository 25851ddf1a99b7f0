#pragma once

#include <vector>

namespace toponet {

double mean_of(const std::vector<double>& v);
double stddev_of(const std::vector<double>& v);  // sample (n-1); 0 when n < 2
double median_of(std::vector<double> v);         // sorts a copy

// 1-based ranks with ties averaged, in input order.
std::vector<double> average_ranks(const std::vector<double>& values);

struct KruskalResult {
  double h = 0.0;
  double p = 1.0;
};

// Rank test for equal medians across >= 2 groups, tie-corrected; p from the
// chi-square approximation with (groups - 1) degrees of freedom. When every
// pooled value is identical the statistic degenerates to H = 0, p = 1.
KruskalResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

enum class Alternative { two_sided, greater, less };

struct MannWhitneyResult {
  double u = 0.0;  // U statistic of the first sample
  double p = 1.0;
  bool exact = false;
};

// U = #{(i,j): a_i > b_j} + ties/2. Exact enumeration of all label
// assignments when n_a + n_b <= 12, otherwise the normal approximation with
// tie and continuity corrections.
MannWhitneyResult mann_whitney(const std::vector<double>& a,
                               const std::vector<double>& b,
                               Alternative alt = Alternative::two_sided);

// Survival functions.
double chi_squared_sf(double x, int df);
double normal_sf(double z);

// Holm step-down adjustment; preserves input order.
std::vector<double> holm_adjust(const std::vector<double>& pvalues);

// NaN when either input has zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace toponet
