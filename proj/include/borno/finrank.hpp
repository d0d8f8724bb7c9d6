#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "borno/series.hpp"
#include "borno/verdict.hpp"

namespace borno {

enum class AmbientKind { L1, L2, Sup };

const char* to_string(AmbientKind k);

/// Weighted l1, l2 or sup gauge on sequences, weight c (k+1)^p b^k with c, b > 0.
struct AmbientGauge {
  Monomial weight;
  AmbientKind kind = AmbientKind::L2;
};

/// Coordinate box {x : |x_k| <= a_k} with a_k = c (k+1)^p b^k, k >= 0.
struct CompactSetModel {
  Monomial envelope;

  bool is_zero() const { return envelope.c == 0.0; }
};

/// Throws InvalidInput unless the envelope is summable under the gauge (l1,
/// l2) or tends to zero against it (sup).
void require_precompact(const AmbientGauge& t, const CompactSetModel& s);

/// Diagonal operator x_k -> m(k) x_k: m(k) = head[k] below head.size(), and
/// tail_c (k+1)^tail_p tail_b^k beyond.
struct Multiplier {
  std::vector<double> head;
  double tail_c = 0.0;
  double tail_p = 0.0;
  double tail_b = 1.0;

  static Multiplier identity();
  static Multiplier zero();
  /// P_n: keeps coordinates k <= n, rank n + 1.
  static Multiplier truncation(std::int64_t n);
  static Multiplier diagonal(double c, double p, double b);

  double operator()(std::int64_t k) const;
  bool is_zero() const;
  /// Operator norm on any weighted l1/l2/sup gauge: sup_k |m(k)|.
  double norm() const;
  /// Number of nonzero coordinates, or -1 when infinite.
  std::int64_t rank() const;
};

Multiplier operator-(const Multiplier& a, const Multiplier& b);
Multiplier operator*(double s, const Multiplier& a);
bool operator==(const Multiplier& a, const Multiplier& b);

/// sup over the box of gauge_T(m x), attained at |x_k| = a_k.
Enclosure box_gauge(const AmbientGauge& t, const CompactSetModel& s, const Multiplier& m);

/// Gauge of a finitely supported vector.
double vector_gauge(const AmbientGauge& t, const std::vector<double>& x);

/// F_n for n = 0, 1, ...
struct OperatorFamily {
  enum class Kind { Truncation, Constant, Scaled };

  Kind kind = Kind::Truncation;
  Multiplier op;               // Constant, Scaled
  std::int64_t offset = 0;     // Truncation: F_n = P_{n + offset}
  double alpha = 0.0;          // Scaled: F_n = (alpha n + beta) op
  double beta = 1.0;
  /// Declared bound valid for every F_n; 0 means none declared.
  double declared_bound = 0.0;

  static OperatorFamily truncations(std::int64_t offset = 0);
  static OperatorFamily constant(Multiplier op);
  static OperatorFamily scaled(double alpha, double beta, Multiplier op);

  Multiplier at(std::int64_t n) const;
  /// sup_n ||F_n||, +inf when the family is not equibounded.
  double sup_norm() const;
  /// Coordinatewise limit operator, nullopt when none.
  std::optional<Multiplier> limit() const;
};

struct UniformReport {
  std::vector<Enclosure> rates;  // eps_n = sup over S of gauge_T((F_n - f) x)
  Enclosure limit_rate;          // gauge of (lim F_n - f) on S
  bool nonincreasing = false;
  Verdict verdict = Verdict::Inconclusive;
};

UniformReport uniform_convergence_on_set(const OperatorFamily& family, const Multiplier& f,
                                         const CompactSetModel& s, const AmbientGauge& t,
                                         std::int64_t count);

struct SamplingReport {
  int samples = 0;
  /// Largest measured gauge divided by the certified rate (0/0 counts as 0).
  double worst_ratio = 0.0;
  bool sound = false;
};

/// Measures gauge_T((F_n - f) x) at random points of S supported on the first
/// `support` coordinates and compares with the certified rates.
SamplingReport sample_rates(const OperatorFamily& family, const Multiplier& f, const CompactSetModel& s,
                            const AmbientGauge& t, const std::vector<Enclosure>& rates, int samples,
                            std::uint64_t seed, std::int64_t support = 128);

struct PointwiseReport {
  Verdict pointwise = Verdict::Inconclusive;
  Verdict uniform = Verdict::Inconclusive;
  /// Limit gauge of (lim F_n - f) x per sign pattern.
  std::vector<Enclosure> pattern_limits;
  UniformReport uniform_report;
};

/// Pointwise convergence on sign patterns x_k = s(k) a_k against uniform
/// convergence on S. Throws InvalidInput when the family is not equibounded
/// and InvariantViolation when the two verdicts disagree.
PointwiseReport pointwise_vs_uniform_check(const OperatorFamily& family, const Multiplier& f,
                                           const CompactSetModel& s, const AmbientGauge& t,
                                           std::int64_t count);

struct LocalApproxReport {
  /// T = t_scale times the unit ball of the ambient gauge contains S.
  double t_scale = 0.0;
  std::int64_t rank = 0;
  /// Certified rates of P_n for n = -1 (rank 0) up to the chosen n.
  std::vector<Enclosure> rates;
  Enclosure final_rate;
  std::string reduction;
};

/// Smallest rank r with ||(I - P_{r-1}) x||_T <= tol on S. Throws
/// BudgetExceeded, naming the required rank, when r exceeds the budget.
LocalApproxReport local_approx_property_check(const AmbientGauge& t, const CompactSetModel& s,
                                              double tol, std::int64_t rank_budget);

}  // namespace borno
