#pragma once

#include <cstdint>
#include <vector>

namespace hierlab::stats {

double mean(const std::vector<double>& xs);
double stddev(const std::vector<double>& xs);  // population std

double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

/// Least-squares slope of log(y) vs log(x). Pairs with x<=0 or y<=0 are skipped.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Continuous max-likelihood estimate of the power-law exponent for the tail
/// degrees k >= k_min: alpha = 1 + n / sum(log(k_i / (k_min - 0.5))).
double powerlaw_alpha_mle(const std::vector<int>& degrees, int k_min);

}  // namespace hierlab::stats
