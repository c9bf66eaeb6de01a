#include "borngame/analysis.hpp"

#include <numeric>

namespace borngame {

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MeanEstimate mean_estimate(std::span<const double> xs) {
  if (xs.size() < 2) throw InsufficientData("need at least two samples");
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / (n - 1.0) / n)};
}

MeanEstimate batch_mean_estimate(std::span<const double> xs, int batches) {
  if (batches < 2) throw std::invalid_argument("need at least two batches");
  const std::size_t len = xs.size() / static_cast<std::size_t>(batches);
  if (len < 2) throw InsufficientData("series too short for batch means");
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    const auto batch = xs.subspan(static_cast<std::size_t>(b) * len, len);
    means.push_back(std::accumulate(batch.begin(), batch.end(), 0.0) / static_cast<double>(len));
  }
  const MeanEstimate between = mean_estimate(means);
  const double overall = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  return {overall, between.standard_error};
}

Vector<double> born_rule_prediction(const Vector<std::int64_t>& fortunes0) {
  if (fortunes0.size() == 0) throw std::invalid_argument("empty fortune vector");
  if ((fortunes0.array() < 0).any()) throw std::invalid_argument("fortunes must be non-negative");
  const std::int64_t total = fortunes0.sum();
  if (total == 0) throw std::invalid_argument("all fortunes are zero");
  return fortunes0.cast<double>() / static_cast<double>(total);
}

double binomial_deviation_se(std::int64_t successes, std::int64_t runs, double p) {
  const double freq = static_cast<double>(successes) / static_cast<double>(runs);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
  const double diff = std::abs(freq - p);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

Verdict compare_to_prediction(const EnsembleStats& stats, const Vector<double>& prediction,
                              double allowance, double sigmas) {
  if (prediction.size() != stats.freq.size()) throw std::invalid_argument("prediction size mismatch");
  Verdict v;
  v.prediction = prediction;
  const Index n = prediction.size();
  v.deviation.resize(n);
  v.tolerance.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double p = prediction(i);
    const double se = stats.runs > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(stats.runs)) : 0.0;
    v.deviation(i) = std::abs(stats.freq(i) - p);
    v.tolerance(i) = sigmas * se + allowance;
    v.pass.push_back(stats.runs > 0 && v.deviation(i) <= v.tolerance(i));
  }
  return v;
}

}  // namespace borngame
