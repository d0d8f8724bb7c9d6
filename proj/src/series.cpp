#include "borno/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "borno/error.hpp"

namespace borno {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Explicit terms summed before the Euler-Maclaurin remainder when b = 1.
constexpr std::int64_t kZetaTerms = 1000;
constexpr std::int64_t kMaxTerms = 50'000'000;

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Rounding allowance for a compensated sum of nonnegative terms.
double slack(double v) { return 4.0 * std::numeric_limits<double>::epsilon() * v; }

}  // namespace

Enclosure operator+(Enclosure a, Enclosure b) { return {a.lo + b.lo, a.hi + b.hi}; }

Enclosure operator*(double c, Enclosure a) { return {c * a.lo, c * a.hi}; }

double Monomial::operator()(std::int64_t k) const {
  if (c == 0.0) return 0.0;
  const double kk = static_cast<double>(k);
  return c * std::pow(kk + 1.0, p) * std::pow(b, kk);
}

Monomial operator*(const Monomial& x, const Monomial& y) { return {x.c * y.c, x.p + y.p, x.b * y.b}; }

Enclosure tail_sum(const Monomial& t, std::int64_t n) {
  if (t.c < 0.0 || t.b < 0.0) throw Error(ErrorKind::InvalidInput, "monomial needs c, b >= 0");
  if (n < 0) n = 0;
  if (t.c == 0.0) return {0.0, 0.0};
  if (t.b == 0.0) return n == 0 ? Enclosure{t.c, t.c} : Enclosure{0.0, 0.0};
  if (t.b > 1.0 || (t.b == 1.0 && t.p >= -1.0)) return {kInf, kInf};

  if (t.p == 0.0) {
    const double v = t.c * std::pow(t.b, static_cast<double>(n)) / (1.0 - t.b);
    return {v, v};
  }

  if (t.b == 1.0) {
    // sum_{j >= J} j^p: explicit head, then Euler-Maclaurin through the f'
    // term. For completely monotone f the remainder lies between 0 and the
    // f''' term.
    CompensatedSum acc;
    const std::int64_t stop = n + kZetaTerms;
    for (std::int64_t k = stop - 1; k >= n; --k) acc.add(std::pow(static_cast<double>(k) + 1.0, t.p));
    const double head = acc.value();
    const double j = static_cast<double>(stop) + 1.0;
    const double p = t.p;
    const double f = std::pow(j, p);
    const double integral = std::pow(j, p + 1.0) / (-p - 1.0);
    const double d1 = p * std::pow(j, p - 1.0);
    const double d3 = p * (p - 1.0) * (p - 2.0) * std::pow(j, p - 3.0);
    const double upper = integral + 0.5 * f - d1 / 12.0;
    const double lower = upper + d3 / 720.0;
    const double lo = head + lower, hi = head + upper;
    return {t.c * (lo - slack(lo)), t.c * (hi + slack(hi))};
  }

  // 0 < b < 1: sum until a geometric remainder bound is negligible.
  CompensatedSum acc;
  for (std::int64_t k = n; k < n + kMaxTerms; ++k) {
    acc.add(t(k));
    const double sum = acc.value();
    const double kk = static_cast<double>(k);
    // Ratios t(j+1)/t(j) for j > k are at most r.
    const double r = t.p > 0.0 ? std::pow((kk + 3.0) / (kk + 2.0), t.p) * t.b : t.b;
    if (r < 1.0) {
      const double rest = t(k + 1) / (1.0 - r);
      if (rest <= 1e-17 * sum || rest == 0.0) return {sum - slack(sum), sum + rest + slack(sum)};
    }
  }
  throw Error(ErrorKind::BudgetExceeded, "series tail did not settle within the term budget");
}

double tail_sup(const Monomial& t, std::int64_t n) {
  if (n < 0) n = 0;
  if (t.c == 0.0) return 0.0;
  if (t.b > 1.0) return kInf;
  if (t.b == 1.0) return t.p > 0.0 ? kInf : t(n);
  if (t.p <= 0.0 || t.b == 0.0) return t(n);
  // Unimodal in k with its peak near k* = p / (-ln b) - 1.
  const double peak = t.p / -std::log(t.b) - 1.0;
  double best = t(n);
  for (double k : {std::floor(peak), std::ceil(peak)})
    if (k >= static_cast<double>(n)) best = std::max(best, t(static_cast<std::int64_t>(k)));
  return best;
}

double shift_ratio_bound(const Monomial& t, std::int64_t n, std::int64_t a) {
  if (t.c == 0.0) return 0.0;
  const double ba = std::pow(t.b, static_cast<double>(a));
  if (t.p <= 0.0) return ba;
  // ((k + a + 1) / (k + 1))^p decreases in k, so take k = n.
  const double kk = static_cast<double>(std::max<std::int64_t>(n, 0));
  return std::pow((kk + static_cast<double>(a) + 1.0) / (kk + 1.0), t.p) * ba;
}

std::int64_t first_tail_below(const Monomial& t, double tol, std::int64_t cap) {
  // Tails are nonincreasing in n, so bisect on the first index that works.
  if (tail_sum(t, 1).hi <= tol) return 0;
  std::int64_t lo = 0;  // tail at lo + 1 is above tol
  std::int64_t hi = 1;
  while (tail_sum(t, hi + 1).hi > tol) {
    if (hi >= cap) return -1;
    lo = hi;
    hi = std::min(cap, hi * 2);
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (tail_sum(t, mid + 1).hi <= tol)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace borno
