#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "borno/series.hpp"

using namespace borno;

namespace {

// Plain summation far past the point where terms matter.
double brute_tail(const Monomial& t, std::int64_t n, std::int64_t terms) {
  long double s = 0.0L;
  for (std::int64_t k = n + terms - 1; k >= n; --k) s += t(k);
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("geometric tails are exact") {
  const Monomial t{1.0, 0.0, 0.25};
  const auto e = tail_sum(t, 5);
  CHECK(e.exact());
  CHECK(e.hi == doctest::Approx(std::pow(0.25, 5) / 0.75).epsilon(1e-15));
  CHECK(tail_sum(t, 0).hi == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("polynomially weighted geometric tails") {
  for (double p : {-2.0, -0.5, 1.0, 3.0})
    for (double b : {0.3, 0.9}) {
      const Monomial t{2.0, p, b};
      const auto e = tail_sum(t, 3);
      const double ref = brute_tail(t, 3, 20000);
      CHECK(e.lo <= ref * (1 + 1e-13));
      CHECK(e.hi >= ref * (1 - 1e-13));
      CHECK(e.width() <= 1e-14 * ref);
    }
}

TEST_CASE("zeta tails bracket the Hurwitz value") {
  // sum_{j >= 1} j^-2 = pi^2 / 6
  const auto e = tail_sum(Monomial{1.0, -2.0, 1.0}, 0);
  const double z2 = std::numbers::pi * std::numbers::pi / 6.0;
  CHECK(e.lo <= z2 + 1e-15);
  CHECK(e.hi >= z2 - 1e-15);
  CHECK(e.width() < 1e-14);
  // integral bound: sum_{j > n} j^-2 <= 1/n
  for (std::int64_t n : {1, 10, 100}) CHECK(tail_sum(Monomial{1.0, -2.0, 1.0}, n).hi <= 1.0 / n);
}

TEST_CASE("divergent tails are infinite") {
  CHECK(std::isinf(tail_sum(Monomial{1.0, -1.0, 1.0}, 0).hi));
  CHECK(std::isinf(tail_sum(Monomial{1.0, 0.0, 1.5}, 0).hi));
  CHECK(tail_sum(Monomial{0.0, 5.0, 3.0}, 0).hi == 0.0);
}

TEST_CASE("tail suprema") {
  CHECK(tail_sup(Monomial{1.0, 0.0, 0.5}, 3) == 0.125);
  CHECK(std::isinf(tail_sup(Monomial{1.0, 1.0, 1.0}, 0)));
  const Monomial hump{1.0, 4.0, 0.5};
  double brute = 0.0;
  for (int k = 2; k < 200; ++k) brute = std::max(brute, hump(k));
  CHECK(tail_sup(hump, 2) == brute);
}

TEST_CASE("shift ratio bounds dominate observed ratios") {
  for (const Monomial t : {Monomial{1, 2.0, 0.7}, Monomial{1, -1.5, 0.9}, Monomial{3, 0.0, 0.5}})
    for (std::int64_t n : {0, 5, 50}) {
      const double bound = shift_ratio_bound(t, n, 2);
      for (std::int64_t k = n; k < n + 100; ++k) CHECK(t(k + 2) / t(k) <= bound * (1 + 1e-14));
      CHECK(shift_ratio_bound(t, n + 1, 2) <= bound);
    }
}

TEST_CASE("first index with a small tail") {
  // sum_{k > n} 4^-k = 4^-n / 3
  const std::int64_t n = first_tail_below(Monomial{1.0, 0.0, 0.25}, 1e-6, 1000);
  CHECK(std::pow(4.0, -n) / 3.0 <= 1e-6);
  CHECK(std::pow(4.0, -(n - 1)) / 3.0 > 1e-6);
  CHECK(first_tail_below(Monomial{1.0, -1.0, 1.0}, 1e-3, 1 << 20) == -1);
}
