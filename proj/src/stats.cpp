#include "dynmis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dynmis {

Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  s.max = xs.front();
  for (double x : xs) {
    sum += x;
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    s.std_err = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return s;
}

void Accumulator::add(double x) {
  max_ = count_ == 0 ? x : std::max(max_, x);
  ++count_;
  sum_ += x;
  sum_sq_ += x * x;
}

void Accumulator::merge(const Accumulator& other) {
  if (other.count_ == 0) return;
  max_ = count_ == 0 ? other.max_ : std::max(max_, other.max_);
  count_ += other.count_;
  sum_ += other.sum_;
  sum_sq_ += other.sum_sq_;
}

Summary Accumulator::summary() const {
  Summary s;
  s.count = count_;
  if (count_ == 0) return s;
  const auto n = static_cast<double>(count_);
  s.mean = sum_ / n;
  s.max = max_;
  if (count_ > 1) {
    const double var = std::max(0.0, (sum_sq_ - n * s.mean * s.mean) / (n - 1));
    s.std_err = std::sqrt(var / n);
  }
  return s;
}

double quantile(std::span<const double> xs, double q) {
  if (xs.empty()) return 0.0;
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

double pooled_std_err(const Summary& a, const Summary& b) {
  return std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
}

}  // namespace dynmis
