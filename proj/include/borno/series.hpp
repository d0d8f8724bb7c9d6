#pragma once

#include <cstdint>

namespace borno {

/// Certified bracket lo <= value <= hi.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;

  bool exact() const { return lo == hi; }
  double width() const { return hi - lo; }
};

Enclosure operator+(Enclosure a, Enclosure b);
Enclosure operator*(double c, Enclosure a);  // c >= 0

/// t(k) = c (k + 1)^p b^k for integer k >= 0, with c >= 0 and b >= 0.
struct Monomial {
  double c = 1.0;
  double p = 0.0;
  double b = 1.0;

  double operator()(std::int64_t k) const;
};

Monomial operator*(const Monomial& x, const Monomial& y);

/// sum_{k >= n} t(k); hi = +inf when the series diverges.
Enclosure tail_sum(const Monomial& t, std::int64_t n);

/// sup_{k >= n} t(k), +inf when unbounded.
double tail_sup(const Monomial& t, std::int64_t n);

/// A bound on sup_{k >= n} t(k + a) / t(k) that is nonincreasing in n.
double shift_ratio_bound(const Monomial& t, std::int64_t n, std::int64_t a);

/// Smallest n >= 0 with tail_sum(t, n + 1).hi <= tol, or -1 if none below cap.
std::int64_t first_tail_below(const Monomial& t, double tol, std::int64_t cap);

}  // namespace borno
