// SPDX-License-Identifier: Apache-2.0
#include "uvnlos/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "uvnlos/error.hpp"

namespace uvnlos {

namespace {

constexpr double kPi = 3.14159265358979323846;

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_eval(int n, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

QuadratureRule compute_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p = 0.0;
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre_eval(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_eval(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

QuadratureRule legendre_rule(int n) {
  if (n < 1) throw DomainError("n", "quadrature order must be at least 1");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_legendre(n)).first;
  return it->second;
}

QuadratureRule interval_rule(QuadratureKind kind, int n, double a, double b, bool clustered) {
  QuadratureRule base;
  if (kind == QuadratureKind::gauss) {
    base = legendre_rule(n);
  } else {
    if (n < 1) throw DomainError("n", "quadrature order must be at least 1");
    base.nodes.resize(n);
    base.weights.assign(n, 2.0 / n);
    for (int i = 0; i < n; ++i) base.nodes[i] = -1.0 + (2.0 * i + 1.0) / n;
  }
  QuadratureRule out;
  out.nodes.resize(base.nodes.size());
  out.weights.resize(base.nodes.size());
  const double len = b - a;
  for (size_t i = 0; i < base.nodes.size(); ++i) {
    const double s = 0.5 * (base.nodes[i] + 1.0);
    if (clustered) {
      out.nodes[i] = a + len * 0.5 * (1.0 - std::cos(kPi * s));
      out.weights[i] = 0.5 * base.weights[i] * len * 0.5 * kPi * std::sin(kPi * s);
    } else {
      out.nodes[i] = a + len * s;
      out.weights[i] = 0.5 * base.weights[i] * len;
    }
  }
  return out;
}

}  // namespace uvnlos
