#pragma once

#include <span>
#include <vector>

namespace escrate {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
/// slopes, clamped at the ends). On every interval where the data are
/// monotone the interpolant is monotone too.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  /// x must be strictly increasing with at least one point.
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  std::span<const double> xs() const { return x_; }
  std::span<const double> ys() const { return y_; }
  bool empty() const { return x_.empty(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

}  // namespace escrate
