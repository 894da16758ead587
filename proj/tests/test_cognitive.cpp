#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "strq/cognitive.hpp"

using strq::normalized_poisson;
using strq::TypePmf;

TEST_CASE("lambda = 1, K = 2 gives the (0.4, 0.4, 0.2) anchor") {
  const TypePmf p = normalized_poisson(1.0, 2);
  REQUIRE(p.probs.size() == 3);
  CHECK(p.probs[0] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(p.probs[1] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(p.probs[2] == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("matches the direct ratio formula across the lambda range") {
  // p_k = (lambda^k / k!) / sum_j (lambda^j / j!), evaluated here through
  // ratios so the reference itself never overflows.
  for (double lam : {1e-3, 0.05, 1.0, 7.0, 50.0, 200.0, 700.0}) {
    for (int kmax : {1, 2, 5}) {
      const TypePmf p = normalized_poisson(lam, kmax);
      REQUIRE(static_cast<int>(p.probs.size()) == kmax + 1);
      double sum = 0.0;
      for (double v : p.probs) {
        CHECK(v > 0.0);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      for (int k = 1; k <= kmax; ++k)
        CHECK(p.probs[k] / p.probs[k - 1] ==
              doctest::Approx(lam / k).epsilon(1e-12));
    }
  }
}

TEST_CASE("lambda = 700, K = 2 stays finite and matches the closed form") {
  const TypePmf p = normalized_poisson(700.0, 2);
  // Denominator 1 + 700 + 700^2/2 = 245701.
  CHECK(p.probs[0] == doctest::Approx(1.0 / 245701.0).epsilon(1e-12));
  CHECK(p.probs[1] == doctest::Approx(700.0 / 245701.0).epsilon(1e-12));
  CHECK(p.probs[2] == doctest::Approx(245000.0 / 245701.0).epsilon(1e-12));
  CHECK(p.probs[0] == doctest::Approx(4.0699875051383593e-06).epsilon(1e-10));
  CHECK(p.probs[1] == doctest::Approx(2.8489912535968514e-03).epsilon(1e-10));
  CHECK(p.probs[2] == doctest::Approx(9.9714693875889804e-01).epsilon(1e-10));
}

TEST_CASE("extreme lambda values neither overflow nor denormalize the sum") {
  const TypePmf tiny = normalized_poisson(1e-8, 2);
  CHECK(tiny.probs[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::isfinite(tiny.probs[2]));
  const TypePmf huge = normalized_poisson(1e6, 2);
  CHECK(huge.probs[2] == doctest::Approx(1.0).epsilon(1e-5));
  double sum = huge.probs[0] + huge.probs[1] + huge.probs[2];
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  // Far beyond the double overflow point of e^lambda.
  const TypePmf vast = normalized_poisson(1e300, 5);
  CHECK(std::isfinite(vast.probs[5]));
  CHECK(vast.probs[5] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("monotone trends of the K = 2 pmf in lambda") {
  double prev0 = 2.0, prev2 = -1.0;
  for (double lam = 1e-3; lam <= 700.0; lam *= 2.3) {
    const TypePmf p = normalized_poisson(lam, 2);
    CHECK(p.probs[0] < prev0);
    CHECK(p.probs[2] > prev2);
    prev0 = p.probs[0];
    prev2 = p.probs[2];
  }
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(normalized_poisson(0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(normalized_poisson(-1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(normalized_poisson(1.0, -1), std::invalid_argument);
}

TEST_CASE("metadata fields echo the inputs") {
  const TypePmf p = normalized_poisson(3.5, 4);
  CHECK(p.lambda == 3.5);
  CHECK(p.max_level == 4);
}
