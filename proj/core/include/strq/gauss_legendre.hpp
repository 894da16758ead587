#pragma once

#include <vector>

namespace strq {

// Gauss-Legendre rule on [-1, 1]: nodes in ascending order with matching
// weights. Nodes are found by Newton iteration on the Legendre recurrence;
// accurate to machine precision for n up to several hundred.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

}  // namespace strq
