#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace vsw {

/// Correctly rounded floating-point summation (Shewchuk partials, as in Python's math.fsum).
/// The result does not depend on the order in which terms are added, which makes cell updates
/// independent of face ordering.
class ExactSum {
 public:
  void add(double x) {
    double* p = data();
    std::size_t i = 0;
    for (std::size_t j = 0; j < size_; ++j) {
      double y = p[j];
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) p[i++] = lo;
      x = hi;
    }
    size_ = i;
    push(x);
  }

  double value() const {
    const double* partials_ = data();
    std::size_t n = size_;
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    // Round-half-even correction when the remaining partials push past a tie.
    if (n > 0 && ((lo < 0 && partials_[n - 1] < 0) || (lo > 0 && partials_[n - 1] > 0))) {
      const double y = lo * 2;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

  void clear() { size_ = 0; }

 private:
  // Partials live inline; long cancellation chains spill to the heap.
  static constexpr std::size_t kInline = 12;

  double* data() { return heap_.empty() ? inline_.data() : heap_.data(); }
  const double* data() const { return heap_.empty() ? inline_.data() : heap_.data(); }

  void push(double x) {
    if (heap_.empty() && size_ == kInline) heap_.assign(inline_.begin(), inline_.end());
    if (heap_.empty()) {
      inline_[size_++] = x;
      return;
    }
    if (heap_.size() == size_) heap_.push_back(x);
    else heap_[size_] = x;
    ++size_;
  }

  std::array<double, kInline> inline_;
  std::vector<double> heap_;
  std::size_t size_ = 0;
};

template <int N>
class ExactSumVector {
 public:
  void add(const Eigen::Matrix<double, N, 1>& v) {
    for (int k = 0; k < N; ++k) sums_[k].add(v[k]);
  }
  void add(int k, double x) { sums_[k].add(x); }

  Eigen::Matrix<double, N, 1> value() const {
    Eigen::Matrix<double, N, 1> out;
    for (int k = 0; k < N; ++k) out[k] = sums_[k].value();
    return out;
  }

 private:
  std::array<ExactSum, N> sums_;
};

template <typename Range>
double exact_sum(const Range& values) {
  ExactSum s;
  for (double v : values) s.add(v);
  return s.value();
}

}  // namespace vsw
