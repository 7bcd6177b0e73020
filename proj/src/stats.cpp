#include "mtkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mtkit/error.hpp"

namespace mtkit {

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    // Positions i..j (0-based) hold equal values; they share rank mean(i+1..j+1).
    double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

void check_pair(std::span<const double> xs, std::span<const double> ys, const char* what) {
  if (xs.size() != ys.size()) {
    throw InputError(std::string(what) + ": length mismatch (" + std::to_string(xs.size()) + " vs " +
                     std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 2) throw InputError(std::string(what) + ": need at least two points");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw InputError(std::string(what) + ": non-finite value at index " + std::to_string(i));
    }
  }
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys, "pearson");
  double mx = mean(xs), my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInputError("correlation undefined for constant input");
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys, "spearman");
  auto rx = average_ranks(xs);
  auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

double LogLinearFit::predict(double n) const { return intercept + slope * std::log(n); }

LogLinearFit loglinear_fit(std::span<const double> ns, std::span<const double> scores) {
  check_pair(ns, scores, "loglinear_fit");
  std::vector<double> xs(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(ns[i] > 0)) throw InputError("loglinear_fit: n must be positive (index " + std::to_string(i) + ")");
    xs[i] = std::log(ns[i]);
  }
  double mx = mean(xs), my = mean(scores);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx, dy = scores[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateInputError("loglinear_fit: all n are equal");
  LogLinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = scores[i] - fit.predict(ns[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
  return fit;
}

}  // namespace mtkit
