#include "strq/cognitive.hpp"

#include <stdexcept>

namespace strq {

TypePmf normalized_poisson(double lambda, int max_level) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("normalized_poisson: lambda must be positive");
  if (max_level < 0)
    throw std::invalid_argument("normalized_poisson: max_level must be >= 0");

  TypePmf pmf;
  pmf.lambda = lambda;
  pmf.max_level = max_level;
  pmf.probs.assign(max_level + 1, 0.0);

  // Unnormalized weights via the ratio recurrence, with periodic rescaling so
  // arbitrarily large (lambda, max_level) combinations cannot overflow.
  double w = 1.0;
  double sum = 0.0;
  pmf.probs[0] = w;
  sum = w;
  for (int k = 1; k <= max_level; ++k) {
    w *= lambda / k;
    pmf.probs[k] = w;
    sum += w;
    if (w > 1e250) {
      for (int i = 0; i <= k; ++i) pmf.probs[i] /= w;
      sum /= w;
      w = 1.0;
    }
  }
  for (double& p : pmf.probs) p /= sum;
  return pmf;
}

}  // namespace strq
