#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace mgibbs {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Neumaier-compensated accumulator. Safe for alternating sums of mixed sign.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double v) : sum_(v) {}

  CompensatedSum& operator+=(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator+=(const CompensatedSum& other) {
    *this += other.sum_;
    *this += other.comp_;
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Fixed-shape pairwise reduction: the result depends only on the input order.
template <class T, class Combine>
T pairwise_reduce(std::vector<T> items, Combine combine, T identity) {
  if (items.empty()) return identity;
  std::size_t n = items.size();
  while (n > 1) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < n / 2; ++i) {
      items[i] = combine(items[2 * i], items[2 * i + 1]);
    }
    if (n % 2 == 1) items[n / 2] = items[n - 1];
    n = half;
  }
  return items.front();
}

inline double pairwise_sum(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  return pairwise_reduce(std::move(v), [](double a, double b) { return a + b; }, 0.0);
}

/// e^{-beta*E}; an infinite energy gives exactly 0.
inline double boltzmann(double energy, double beta) {
  if (energy == kInfinity) return 0.0;
  return std::exp(-beta * energy);
}

/// Mayer factor e^{-beta*phi} - 1; an infinite pair value gives exactly -1.
inline double mayer(double phi, double beta) {
  if (phi == kInfinity) return -1.0;
  return std::exp(-beta * phi) - 1.0;
}

/// |a - b| <= rtol * max(1, |a|, |b|). Quantities here are Boltzmann-scale, so a
/// unit floor keeps near-cancelling values from demanding impossible digits.
inline bool close_rel(double a, double b, double rtol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= rtol * scale;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace mgibbs
