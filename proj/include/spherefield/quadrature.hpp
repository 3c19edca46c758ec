#pragma once

#include <vector>

namespace spherefield {

/// Nodes and weights of a one-dimensional rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes in descending order (so that
/// theta = acos(node) is ascending). Exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// Clenshaw-Curtis rule on the n Chebyshev extreme points cos(pi j/(n-1)),
/// j = 0..n-1 (descending, poles included). Exact for degree n-1.
QuadratureRule clenshaw_curtis(int n);

}  // namespace spherefield
