// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <utility>

namespace uvnlos::detail {

/// Maximiser of a quasiconcave f on [a, b] and its value.
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters = 90) {
  const double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  double xb = 0.5 * (a + b);
  double fb = f(xb);
  if (f1 > fb) {
    xb = x1;
    fb = f1;
  }
  if (f2 > fb) {
    xb = x2;
    fb = f2;
  }
  return {xb, fb};
}

/// Boundary between `in` (pred true) and `out` (pred false).
template <class P>
double bisect_edge(P&& pred, double in, double out, int iters = 100) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (in + out);
    if (mid == in || mid == out) break;
    if (pred(mid)) in = mid;
    else out = mid;
  }
  return 0.5 * (in + out);
}

}  // namespace uvnlos::detail
