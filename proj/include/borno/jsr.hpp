#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "borno/algebra.hpp"
#include "borno/error.hpp"

namespace borno {

enum class RadiusStatus { Certified, DepthLimited };

const char* to_string(RadiusStatus s);

/// Certified enclosure of the spectral radius of a finite generator set.
///
/// lower is a witnessed eigenvalue bound: the witness word's product has
/// spectral radius lower^len. upper is min over completed levels of the
/// largest product norm, rooted, and is always a valid bound unless it is
/// +infinity. level_bounds[l-1] holds that level-l maximum.
struct RadiusEstimate {
  double lower = 0.0;
  double upper = kInfinity;
  std::vector<int> witness_word;
  int depth = 0;
  RadiusStatus status = RadiusStatus::DepthLimited;
  std::vector<double> level_bounds;

  double gap() const { return upper - lower; }
  bool operator==(const RadiusEstimate&) const = default;
};

/// Branch-and-bound over products of generators, level by level.
///
/// A word is not extended once every descendant is provably below the
/// current lower bound (norm of the word times the best known bound for the
/// remaining length, with a 1e-9 relative margin). Such subtrees can neither
/// raise the lower bound nor attain a level maximum, so the interval equals
/// the one obtained by enumerating every word. Stops when upper - lower is at
/// most gap_target or depth is reached.
RadiusEstimate jsr_estimate(const BoundedSet& s, int depth, double gap_target = 1e-3);

/// Relative slack used when comparing intervals that should agree.
inline constexpr double kIntervalSlack = 1e-9;

/// True when [a_lo, a_hi] and [b_lo, b_hi] overlap after relative slack.
bool intervals_intersect(double a_lo, double a_hi, double b_lo, double b_hi,
                         double slack = kIntervalSlack);

struct IdentityReport {
  Complex c;
  int n = 2;
  RadiusEstimate base;
  RadiusEstimate scaled;   // rho(cS)
  RadiusEstimate powered;  // rho(S^n)
  RadiusEstimate hull;     // disked-hull reading of S
  bool scaling_consistent = false;
  bool power_consistent = false;
  bool hull_consistent = false;
};

/// Checks rho(cS) = |c| rho(S), rho(S^n) = rho(S)^n and rho(hull S) = rho(S)
/// at interval precision. Throws InvariantViolation on inconsistency.
IdentityReport check_specrad_identities(const BoundedSet& s, Complex c, int n, int depth,
                                        double gap_target = 1e-3, int hull_depth = 6);

class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::vector<double> profile)
      : Error(ErrorKind::CapExceeded, what), profile_(std::move(profile)) {}
  const std::vector<double>& decay_profile() const { return profile_; }

 private:
  std::vector<double> profile_;
};

struct HullCertificate {
  Disk hull;
  double scale = 1.0;
  double closure_defect = 0.0;
  std::vector<AlgebraElement> generators;
  /// Largest product norm seen per product length.
  std::vector<double> decay_profile;
  /// max gauge(hull, s) / scale over s in S; at most 1 by construction.
  double containment = 0.0;
  /// Largest norm among products dropped as negligible (below 1e-12).
  double dropped_norm = 0.0;
};

/// Disked hull T of the products of r^{-1}S with T·T ⊆ (1 + defect)T and
/// S ⊆ rT. Products already absorbed by the current hull are not extended.
HullCertificate submultiplicative_hull(const BoundedSet& s, double r,
                                       std::size_t max_products = 512);

struct GridRadiusReport {
  RadiusEstimate global;
  std::vector<RadiusEstimate> profile;
  double max_lower = 0.0;
  double max_upper = 0.0;
};

/// rho(S) on a grid function algebra against the per-point fiber radii.
/// Throws InvariantViolation when the pointwise maximum formula fails.
GridRadiusReport jsr_grid_max(const BoundedSet& s, int depth, double gap_target = 1e-3);

struct KroneckerReport {
  RadiusEstimate left;
  RadiusEstimate right;
  RadiusEstimate product;
  double bound = 0.0;  // upper(left) * upper(right)
};

/// rho of the elementary tensors {a ⊗ b} against rho(S_A) rho(S_B).
KroneckerReport kronecker_bound_check(const BoundedSet& a, const BoundedSet& b, int depth,
                                      double gap_target = 1e-3);

/// a (n0 x n0) placed in the top-left corner of an n x n zero matrix.
AlgebraElement pad_corner(const AlgebraElement& a, int n);

struct DirectUnionReport {
  std::vector<int> dims;
  std::vector<RadiusEstimate> stages;
  bool agree = false;
};

/// Computes rho(S) in each corner-embedded stage M_k ⊆ M_n of the chain and
/// checks that the stages agree.
DirectUnionReport direct_union_liminf(const BoundedSet& s, const std::vector<int>& chain,
                                      int depth, double gap_target = 1e-3);

}  // namespace borno
