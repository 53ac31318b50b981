#pragma once

#include <cstddef>
#include <span>

namespace dynmis {

/// Sample mean, standard error of the mean, and maximum.
struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double std_err = 0.0;
  double max = 0.0;
};

Summary summarize(std::span<const double> xs);

/// Streaming version of summarize; merge() combines disjoint samples.
class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& other);
  Summary summary() const;
  std::size_t count() const { return count_; }

 private:
  std::size_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  double max_ = 0.0;
};

/// Empirical quantile by nearest rank; q in [0, 1].
double quantile(std::span<const double> xs, double q);

/// Standard error of the difference of two independent means.
double pooled_std_err(const Summary& a, const Summary& b);

}  // namespace dynmis
