#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "borno/series.hpp"
#include "borno/verdict.hpp"

namespace borno {

enum class GaugeKind { L1, Sup };

const char* to_string(GaugeKind k);

/// gauge(x) = sum_k w(k)|x_k| or sup_k w(k)|x_k| with w(k) = c (k+1)^p b^k,
/// c > 0 and b > 0.
struct WeightedGauge {
  Monomial weight;
  GaugeKind kind = GaugeKind::L1;

  static WeightedGauge l1(Monomial w = {});
  static WeightedGauge sup(Monomial w = {});
};

/// Coordinate tail c (k+1)^p rho^k.
struct TailTerm {
  double c = 1.0;
  double p = 0.0;
  double rho = 0.5;

  double at(std::int64_t k) const;
  bool operator==(const TailTerm&) const = default;
};

/// Real sequence with an explicit head x_0..x_{F-1} and, for k >= F, a finite
/// sum of tail terms (F = head size). Tails are merged by (p, rho) and sorted,
/// so the zero vector has an empty head and no tails.
class ModelVector {
 public:
  ModelVector() = default;
  explicit ModelVector(std::vector<double> head, std::vector<TailTerm> tails = {});

  /// c e_k.
  static ModelVector unit(std::int64_t k, double c = 1.0);
  /// x_k = c (k+1)^p rho^k for every k.
  static ModelVector closed_form(TailTerm t);

  double operator[](std::int64_t k) const;
  const std::vector<double>& head() const { return head_; }
  const std::vector<TailTerm>& tails() const { return tails_; }
  std::int64_t tail_start() const { return static_cast<std::int64_t>(head_.size()); }

  bool is_zero() const { return head_.empty() && tails_.empty(); }
  bool finitely_supported() const { return tails_.empty(); }

  /// Same vector with the head materialized up to length len.
  ModelVector with_head(std::size_t len) const;
  /// Coordinates k <= n kept, the rest zeroed.
  ModelVector truncated(std::int64_t n) const;

 private:
  void normalize();

  std::vector<double> head_;
  std::vector<TailTerm> tails_;
};

ModelVector operator+(const ModelVector& a, const ModelVector& b);
ModelVector operator-(const ModelVector& a, const ModelVector& b);
ModelVector operator*(double s, const ModelVector& a);
/// Exact equality of the represented sequences.
bool operator==(const ModelVector& a, const ModelVector& b);

Enclosure gauge(const WeightedGauge& w, const ModelVector& x);
/// Gauge of the coordinates with index > n.
Enclosure tail_gauge(const WeightedGauge& w, const ModelVector& x, std::int64_t n);

enum class SupportModel { Tails, FinitelySupported, Zero };

const char* to_string(SupportModel s);

/// Countable disk family given by finitely many weighted gauges, and the
/// class of vectors the space admits.
struct ModelSpace {
  std::vector<WeightedGauge> disks;
  SupportModel support = SupportModel::Tails;
  /// Coordinates enumerated explicitly when scanning for witnesses.
  std::int64_t horizon = 64;

  const WeightedGauge& disk(std::size_t k) const;
  bool contains(const ModelVector& v) const;
};

/// Smallest c with S_inner ⊆ c S_outer; +inf when none.
double absorption_constant(const WeightedGauge& inner, const WeightedGauge& outer);

/// For any j, k some disk absorbs S_j and S_k after scaling.
bool is_directed(const ModelSpace& space);

struct SeqTerm {
  enum class Kind { Geometric, Linear, Truncation, Moving };

  Kind kind = Kind::Geometric;
  double c = 1.0;
  double r = 1.0;             // Geometric
  ModelVector v;              // Geometric, Linear, Truncation
  std::int64_t a = 1, s = 0;  // Truncation, Moving index a n + s

  /// c r^n v.
  static SeqTerm geometric(double c, double r, ModelVector v);
  /// c n v.
  static SeqTerm linear(double c, ModelVector v);
  /// c P_{a n + s}(u): the coordinates of u with index <= a n + s.
  static SeqTerm truncation(double c, ModelVector u, std::int64_t a = 1, std::int64_t s = 0);
  /// c e_{a n + s}.
  static SeqTerm moving(double c, std::int64_t a = 1, std::int64_t s = 0);

  ModelVector at(std::int64_t n) const;
};

/// x_n = prefix[n] for n < N, and the sum of the tail terms for n >= N.
class SequenceModel {
 public:
  SequenceModel() = default;
  SequenceModel(std::vector<ModelVector> prefix, std::vector<SeqTerm> tail);

  static SequenceModel constant(ModelVector v);

  ModelVector at(std::int64_t n) const;
  std::int64_t tail_start() const { return static_cast<std::int64_t>(prefix_.size()); }
  const std::vector<ModelVector>& prefix() const { return prefix_; }
  const std::vector<SeqTerm>& tail() const { return tail_; }

  /// j -> x_{a j + b}, a >= 1, b >= 0.
  SequenceModel subsequence(std::int64_t a, std::int64_t b) const;
  /// Coordinatewise limit, or nullopt when some term has none.
  std::optional<ModelVector> formal_limit() const;

 private:
  std::vector<ModelVector> prefix_;
  std::vector<SeqTerm> tail_;
};

SequenceModel operator+(const SequenceModel& x, const SequenceModel& y);
SequenceModel operator-(const SequenceModel& x, const SequenceModel& y);
SequenceModel operator*(double s, const SequenceModel& x);

struct NullTerm {
  enum class Kind { Geometric, InversePoly };

  Kind kind = Kind::Geometric;
  double a = 1.0;
  double q = 0.5;                      // a q^m
  double alpha = 1, beta = 1, p = 1;   // a / (alpha m + beta)^p

  double at(std::int64_t m) const;
  /// Bound on eps_m / eps_{m+1}, nonincreasing in m.
  double back_ratio(std::int64_t m) const;
};

/// Positive null sequence: a finite sum of geometric and inverse-polynomial
/// terms.
class NullSequence {
 public:
  NullSequence() = default;
  explicit NullSequence(std::vector<NullTerm> terms);

  static NullSequence geometric(double a, double q);
  static NullSequence inverse_poly(double a, double alpha, double beta, double p);
  static NullSequence zero() { return NullSequence(); }

  double at(std::int64_t m) const;
  double back_ratio(std::int64_t m) const;
  const std::vector<NullTerm>& terms() const { return terms_; }

  /// j -> eps_{a j + b}.
  NullSequence subsequence(std::int64_t a, std::int64_t b) const;
  /// Termwise square root; an upper bound for sqrt(eps) with several terms.
  NullSequence sqrt() const;
  std::string to_string() const;

 private:
  std::vector<NullTerm> terms_;
};

NullSequence operator+(const NullSequence& x, const NullSequence& y);
NullSequence operator*(double s, const NullSequence& x);

/// Explicit evaluations below this many indices; larger thresholds are
/// reported as inconclusive.
inline constexpr std::int64_t kExplicitBudget = 20000;

struct SequenceDecision {
  Decision decision = Decision::Inconclusive;
  /// Index from which the closed-form ratio argument carries the bound.
  std::int64_t threshold = -1;
  /// Violating pair (m, n) for Cauchy, (n, n) for convergence.
  std::int64_t witness_m = -1;
  std::int64_t witness_n = -1;
  Enclosure witness_gauge;
  double witness_eps = 0.0;
  /// Largest gauge bound divided by eps over the explicitly checked indices.
  double worst_ratio = 0.0;
  std::string note;
};

/// Decides gauge_S(x_n - x_m) <= eps_m for all n >= m.
SequenceDecision cauchy_check(const ModelSpace& space, const SequenceModel& x,
                              std::size_t disk, const NullSequence& eps);

/// Decides gauge_S(x_n - limit) <= eps_n for all n.
SequenceDecision convergence_check(const ModelSpace& space, const SequenceModel& x,
                                   const ModelVector& limit, std::size_t disk,
                                   const NullSequence& eps);

/// lambda(n) = c n^p b^n for n >= 1.
struct ScaleLaw {
  double c = 1.0;
  double p = 0.0;
  double b = 1.0;

  double operator()(std::int64_t n) const;
};

/// S_n for n = 1, 2, ...: the explicit disks first, then lambda(n) S_base.
struct DiskSequence {
  std::vector<std::size_t> explicit_disks;
  std::size_t base = 0;
  ScaleLaw scale;

  std::size_t disk_index(std::int64_t n) const;
  double scale_at(std::int64_t n) const;
};

struct MetrizabilityReport {
  Verdict verdict = Verdict::Inconclusive;
  std::size_t absorbing_disk = 0;
  /// S_n ⊆ c_n S_M for the explicit disks, in order.
  std::vector<double> absorption;
  /// S_base ⊆ c S_M; the scaled tail uses lambda(n) c.
  double base_absorption = 0.0;
  /// eps_n = 2^{-n} / c_n.
  std::vector<double> eps_head;
  /// Partial sums lie in multiple * S_M.
  double multiple = 0.0;
  std::string proof;

  double eps(std::int64_t n, const DiskSequence& seq) const;
};

MetrizabilityReport metrizability_scalars(const ModelSpace& space, const DiskSequence& seq);

struct SeriesReport {
  Verdict verdict = Verdict::Inconclusive;
  std::size_t absorbing_disk = 0;
  /// Infinite sums sum lambda_n x_n with |lambda_n| <= eps_n, x_n in S_n land in
  /// bound * S_M; +inf when the comparison series diverges.
  double bound = 0.0;
  std::string proof;
};

SeriesReport strengthened_series_check(const ModelSpace& space, const DiskSequence& seq,
                                       const NullSequence& eps);

struct DiskCompleteness {
  std::size_t disk = 0;
  bool symbolic_complete = false;  // every S-Cauchy sequence T-converges
  bool direct_complete = false;    // every battery sequence converges in the space
  std::size_t battery_size = 0;
  std::optional<SequenceModel> witness;
  NullSequence witness_eps;
  std::string note;
};

struct CompletenessReport {
  std::vector<DiskCompleteness> disks;
  bool complete = false;
  bool cross_validated = false;
};

CompletenessReport completeness_check(const ModelSpace& space);

struct CompletionElement {
  SequenceModel rep;
  NullSequence eps;
  std::int64_t threshold = -1;
};

struct Comparison {
  bool equal = false;
  /// Gauge of the difference of limits; lo > 0 separates.
  Enclosure separation;
};

/// Classes of Cauchy sequences of a model space modulo null sequences, with
/// respect to one disk.
class Completion {
 public:
  Completion(ModelSpace space, std::size_t disk);

  const ModelSpace& space() const { return space_; }
  std::size_t disk() const { return disk_; }

  /// Certifies rep as (S, eps)-Cauchy; throws InvalidInput otherwise.
  CompletionElement make(SequenceModel rep, NullSequence eps) const;
  CompletionElement embed(const ModelVector& v) const;
  /// Class of the truncations P_n(u) of a closed-form vector.
  CompletionElement from_limit(const ModelVector& u) const;

  CompletionElement add(const CompletionElement& x, const CompletionElement& y) const;
  CompletionElement scale(double s, const CompletionElement& x) const;
  Comparison compare(const CompletionElement& x, const CompletionElement& y) const;
  bool equal(const CompletionElement& x, const CompletionElement& y) const;
  Enclosure gauge_in_quotient(const CompletionElement& x) const;
  ModelVector limit(const CompletionElement& x) const;

 private:
  ModelSpace space_;
  std::size_t disk_;
};

/// Coordinate map between model spaces.
struct CoordinateMap {
  enum class Kind { Shift, Diagonal, Summation };

  Kind kind = Kind::Shift;
  Monomial diagonal;  // x_k -> d(k) x_k
  /// Declared gauge-to-gauge bound; checked when positive.
  double declared_bound = 0.0;

  static CoordinateMap shift(double declared = 0.0);
  static CoordinateMap diag(Monomial d, double declared = 0.0);
  static CoordinateMap summation(double declared = 0.0);

  ModelVector apply(const ModelVector& x) const;
};

/// The scalar line as a model space: one coordinate, gauge |x_0|.
ModelSpace scalar_space();

class ExtendedMap {
 public:
  ExtendedMap(CoordinateMap f, Completion source, Completion target, double bound);

  double bound() const { return bound_; }
  const Completion& target() const { return target_; }
  CompletionElement operator()(const CompletionElement& x) const;

 private:
  CoordinateMap f_;
  Completion source_;
  Completion target_;
  double bound_;
};

/// Symbolic gauge bound of f from disk of source to disk of target, +inf when
/// unbounded.
double map_bound(const CoordinateMap& f, const WeightedGauge& source,
                 const WeightedGauge& target);

/// Throws Error(Unbounded) when f has no finite bound or exceeds its declared
/// one.
ExtendedMap extend_map_to_completion(const CoordinateMap& f, const Completion& source,
                                     const Completion& target);

}  // namespace borno
