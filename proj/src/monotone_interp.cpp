#include "escrate/monotone_interp.hpp"

#include <algorithm>
#include <cmath>

#include "escrate/errors.hpp"

namespace escrate {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.empty() || x_.size() != y_.size()) {
    fail(ErrorKind::DomainError, "interpolation table needs equal, nonempty columns");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      fail(ErrorKind::DomainError, "interpolation table holds a non-finite value");
    }
    if (i > 0 && !(x_[i] > x_[i - 1])) {
      fail(ErrorKind::DomainError, "interpolation abscissae must be strictly increasing");
    }
  }
  const std::size_t n = x_.size();
  slope_.assign(n, 0.0);
  if (n == 1) return;

  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    slope_[0] = slope_[1] = delta[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      // Weighted harmonic mean (Fritsch-Butland form).
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) {
      d = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(d) > std::abs(3.0 * d0)) {
      d = 3.0 * d0;
    }
    return d;
  };
  slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t MonotoneCubic::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  if (x_.size() == 1) return y_[0];
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] +
         h11 * h * slope_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  if (x_.size() == 1) return 0.0;
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s;
  const double d00 = (6.0 * s2 - 6.0 * s) / h;
  const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
  const double d01 = (-6.0 * s2 + 6.0 * s) / h;
  const double d11 = 3.0 * s2 - 2.0 * s;
  return d00 * y_[i] + d10 * slope_[i] + d01 * y_[i + 1] + d11 * slope_[i + 1];
}

}  // namespace escrate
