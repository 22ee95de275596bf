#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "escrate/errors.hpp"

namespace escrate::quadrature {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1]. Odd Kronrod nodes
// (index 1, 3, 5) are the Gauss nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Panel gauss_kronrod(const F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7K15) integration of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// error estimate meets max(abs_tol, rel_tol * |integral|). Integrable
/// endpoint singularities are tolerated because nodes never touch the
/// endpoints. The final sum runs over panels in left-to-right order, so the
/// result does not depend on the order in which panels were refined.
template <class F>
Result integrate(const F& f, double a, double b, const Options& opts = {}) {
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b))) {
    fail(ErrorKind::QuadratureFailure, "non-finite integration limits");
  }
  if (b < a) {
    Result r = integrate(f, b, a, opts);
    r.value = -r.value;
    return r;
  }

  auto by_error = [](const detail::Panel& x, const detail::Panel& y) {
    return x.error < y.error;
  };
  std::priority_queue<detail::Panel, std::vector<detail::Panel>,
                      decltype(by_error)>
      queue(by_error);
  detail::Panel first = detail::gauss_kronrod(f, a, b);
  double total = first.value;
  double error = first.error;
  queue.push(first);

  auto converged = [&] {
    return error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  };
  while (!converged()) {
    if (!std::isfinite(total) || !std::isfinite(error)) {
      fail(ErrorKind::QuadratureFailure, "integrand produced a non-finite value");
    }
    if (queue.size() >= opts.max_intervals) {
      fail(ErrorKind::QuadratureFailure,
           "no convergence on [" + std::to_string(a) + ", " +
               std::to_string(b) + "] after " +
               std::to_string(queue.size()) + " panels");
    }
    detail::Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      fail(ErrorKind::QuadratureFailure,
           "panel width reached machine resolution near " +
               std::to_string(worst.a));
    }
    queue.pop();
    detail::Panel left = detail::gauss_kronrod(f, worst.a, mid);
    detail::Panel right = detail::gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  std::vector<detail::Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const auto& x, const auto& y) { return x.a < y.a; });
  Result result;
  for (const auto& p : panels) {
    result.value += p.value;
    result.error += p.error;
  }
  result.intervals = panels.size();
  if (!std::isfinite(result.value)) {
    fail(ErrorKind::QuadratureFailure, "integrand produced a non-finite value");
  }
  return result;
}

}  // namespace escrate::quadrature
