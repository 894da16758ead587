#pragma once

#include <vector>

namespace strq {

// Normalized Poisson distribution over cognitive levels 0..max_level.
// probs[k] ∝ lambda^k / k!, computed with the ratio recurrence
// probs[k]/probs[k-1] = lambda/k (never through e^lambda or raw factorials),
// so it is stable for lambda up to and beyond 700.
struct TypePmf {
  double lambda = 1.0;
  int max_level = 0;
  std::vector<double> probs;
};

TypePmf normalized_poisson(double lambda, int max_level);

}  // namespace strq
