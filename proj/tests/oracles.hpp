#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the branch-and-bound or gauge code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "borno/algebra.hpp"

namespace oracle {

using borno::AlgebraElement;
using borno::Complex;
using borno::Matrix;

struct Interval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::vector<int> witness;
};

inline double root(double x, int len) {
  if (x == 0.0) return 0.0;
  return len == 1 ? x : std::pow(x, 1.0 / len);
}

/// Enumerates every word up to depth. Products are built as prefix · g.
inline Interval exhaustive_jsr(const std::vector<AlgebraElement>& gens, int depth) {
  Interval out;
  std::vector<double> level_max(depth, 0.0);
  bool have_witness = false;
  std::vector<std::vector<std::pair<std::vector<int>, AlgebraElement>>> levels(depth);
  for (std::size_t i = 0; i < gens.size(); ++i)
    levels[0].push_back({{static_cast<int>(i)}, gens[i]});
  for (int l = 0; l < depth; ++l) {
    if (l > 0)
      for (const auto& [w, p] : levels[l - 1])
        for (std::size_t g = 0; g < gens.size(); ++g) {
          auto word = w;
          word.push_back(static_cast<int>(g));
          levels[l].push_back({word, borno::multiply(p, gens[g])});
        }
    for (const auto& [w, p] : levels[l]) {
      const double r = root(borno::spectral_radius_single(p), l + 1);
      if (!have_witness || r > out.lower) {
        out.lower = r;
        out.witness = w;
        have_witness = true;
      }
      level_max[l] = std::max(level_max[l], root(borno::norm(p), l + 1));
    }
    if (l > 0) levels[l - 1].clear();
  }
  for (double u : level_max) out.upper = std::min(out.upper, u);
  return out;
}

inline Matrix random_matrix(std::mt19937_64& rng, int n, bool complex_entries = true) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      m(r, c) = complex_entries ? Complex(normal(rng), normal(rng)) : Complex(normal(rng), 0.0);
  return m;
}

/// Gauge of a hull with linearly independent generators: the representation is
/// unique, so the gauge is the l1 norm of the least-squares coefficients.
inline double independent_hull_gauge(const std::vector<AlgebraElement>& gens,
                                      const AlgebraElement& x) {
  Eigen::MatrixXd g(x.real_coordinates().size(), static_cast<Eigen::Index>(gens.size()));
  for (std::size_t j = 0; j < gens.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = gens[j].real_coordinates();
  const Eigen::VectorXd lambda = g.colPivHouseholderQr().solve(x.real_coordinates());
  return lambda.cwiseAbs().sum();
}

/// max over t in [0, 1] of f(t) by dense sampling plus golden-section polish.
inline double maximize_on_unit_interval(const std::function<double(double)>& f) {
  double best_t = 0.0, best = f(0.0);
  const int n = 20000;
  for (int i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double v = f(t);
    if (v > best) { best = v; best_t = t; }
  }
  double a = std::max(0.0, best_t - 1.0 / n), b = std::min(1.0, best_t + 1.0 / n);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (f(c) > f(d)) b = d; else a = c;
  }
  return std::max(best, f(0.5 * (a + b)));
}

}  // namespace oracle
