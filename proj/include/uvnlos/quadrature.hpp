// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace uvnlos {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n - 1.
QuadratureRule legendre_rule(int n);

enum class QuadratureKind { midpoint, gauss };

/// Rule on [a, b]. With `clustered`, nodes follow x = a + (b - a)(1 - cos(pi s))/2
/// so that square-root endpoint behaviour is integrated smoothly.
QuadratureRule interval_rule(QuadratureKind kind, int n, double a, double b, bool clustered);

}  // namespace uvnlos
