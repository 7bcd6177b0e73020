#pragma once

#include <span>
#include <vector>

namespace mtkit {

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> xs);

/// Throws InputError on length mismatch or fewer than two points and
/// DegenerateInputError when either side is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct LogLinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;

  double predict(double n) const;
};

/// Least squares fit of score = intercept + slope * ln(n). Throws InputError for
/// non-positive n and DegenerateInputError when every n is equal. r_squared is 1 when
/// the scores are constant.
LogLinearFit loglinear_fit(std::span<const double> ns, std::span<const double> scores);

}  // namespace mtkit
