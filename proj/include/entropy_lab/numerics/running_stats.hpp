#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace entropy_lab::numerics {

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double n = na + nb;
    const double delta = other.mean - mean;
    mean += delta * nb / n;
    m2 += other.m2 + delta * delta * na * nb / n;
    count += other.count;
  }

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double stderr_of_mean() const {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

/// Running means and co-moment of a pair (x, y).
struct PairedStats {
  RunningStats x;
  RunningStats y;
  double cxy = 0.0;

  void push(double a, double b) {
    const double dx = a - x.mean;
    x.push(a);
    y.push(b);
    cxy += dx * (b - y.mean);
  }

  void merge(const PairedStats& other) {
    if (other.x.count == 0) return;
    if (x.count == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(x.count);
    const double nb = static_cast<double>(other.x.count);
    const double n = na + nb;
    cxy += other.cxy + (other.x.mean - x.mean) * (other.y.mean - y.mean) * na * nb / n;
    x.merge(other.x);
    y.merge(other.y);
  }

  double covariance() const {
    return x.count > 1 ? cxy / static_cast<double>(x.count - 1) : 0.0;
  }

  /// Standard error of mean(x) - mean(y).
  double stderr_of_difference() const {
    if (x.count < 2) return 0.0;
    const double v = x.variance() + y.variance() - 2.0 * covariance();
    return std::sqrt(std::max(v, 0.0) / static_cast<double>(x.count));
  }
};

}  // namespace entropy_lab::numerics
