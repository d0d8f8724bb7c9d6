#pragma once

#include <string>
#include <vector>

#include "borno/algebra.hpp"
#include "borno/isoradial.hpp"
#include "borno/jsr.hpp"
#include "borno/maps.hpp"
#include "borno/verdict.hpp"

namespace borno {

/// omega_g(x, y) = g(xy) - g(x) g(y) over ordered generator pairs; entry
/// i * k + j belongs to (s_i, s_j).
struct CurvatureSet {
  std::vector<AlgebraElement> omegas;
  std::size_t generator_count = 0;

  BoundedSet as_set() const { return BoundedSet(omegas); }
};

CurvatureSet curvature(const LinearMap& g, const BoundedSet& s);

/// |g|_omega, the spectral radius of the curvature set.
RadiusEstimate curvature_radius(const LinearMap& g, const BoundedSet& s, int depth,
                                double gap_target = 1e-3);

struct MultiplicativityReport {
  Decision decision = Decision::Inconclusive;
  RadiusEstimate radius;
};

/// Yes iff the certified upper bound of |g|_omega is below 1, no iff the
/// lower bound is at least 1.
MultiplicativityReport is_approximately_multiplicative(const LinearMap& g, const BoundedSet& s,
                                                       int depth, double gap_target = 1e-3);

/// One approximation stage: f_n : A_n -> B and sigma_n : B -> A_n.
struct SigmaStage {
  int n = 0;
  LinearMap f;
  LinearMap sigma;
};

struct SigmaReport {
  std::vector<int> indices;
  std::vector<double> rates;  // eps_n = max_s gauge_T(f sigma_n s - s)
  double threshold = 0.0;
  bool nonincreasing = false;
  bool below_threshold = false;  // last rate <= threshold
  bool any_infinite = false;
  Verdict verdict = Verdict::Inconclusive;
};

SigmaReport sigma_approximation_check(const std::vector<SigmaStage>& stages, const BoundedSet& s,
                                      const Disk& t, double threshold);
/// Stages sharing one f.
SigmaReport sigma_approximation_check(const LinearMap& f, const std::vector<LinearMap>& sigmas,
                                      const BoundedSet& s, const Disk& t, double threshold);

struct HomotopyPoint {
  double t = 0.0;
  RadiusEstimate radius;
};

struct HomotopyConfig {
  int initial_points = 65;  // Chebyshev-Lobatto points on [0, 1]
  int depth = 8;
  double gap_target = 1e-3;
  /// Intervals whose bound exceeds the best lower bound by more than this
  /// (relative to max(1, lower)) are bisected.
  double refine_tol = 1e-7;
  int max_points = 4097;
};

/// Curvature of h_t = h0 + t (h1 - h0) certified on all of [0, 1].
struct HomotopyCertificate {
  std::vector<HomotopyPoint> points;
  /// Bound on rho(omega_{h_t}) for t between points[i] and points[i+1].
  std::vector<double> interval_bounds;
  double coefficient_norm_1 = 0.0;  // max pair norm of the t coefficient
  double coefficient_norm_2 = 0.0;  // max pair norm of the t^2 coefficient
  double sup_upper = 0.0;           // certified sup over [0, 1]
  double sup_lower = 0.0;           // best witnessed value
  bool refinement_capped = false;
  Verdict verdict = Verdict::Inconclusive;
};

HomotopyCertificate linear_homotopy_certificate(const LinearMap& h0, const LinearMap& h1,
                                                const BoundedSet& s,
                                                const HomotopyConfig& config = {});

/// Desk-scale data for the apple theorem: an isoradial candidate f : A -> B,
/// approximation stages back into A, and an approximately multiplicative
/// h : D -> B to be homotoped to f sigma_n h.
struct AppleProblem {
  std::string name;
  Homomorphism f;
  std::vector<AlgebraElement> sampling_basis;
  std::vector<SigmaStage> stages;
  BoundedSet sigma_set;
  Disk sigma_disk = Disk::norm_ball(1.0);
  double sigma_threshold = 1e-2;
  LinearMap h;
  BoundedSet homotopy_set;
};

struct AppleConfig {
  SamplerConfig sampler;
  int depth = 6;
  double tol = 1e-2;
  double gap_target = 1e-3;
  HomotopyConfig homotopy;
};

struct AppleReport {
  IsoradialReport isoradial;
  SigmaReport sigma;
  bool homotopy_built = false;
  HomotopyCertificate homotopy;
  Verdict verdict = Verdict::Inconclusive;
  std::string statement;
};

AppleReport apple_certificate(const AppleProblem& problem, const AppleConfig& config = {});

/// Circulant Fejér smoothing of order n on m circle points; its range is the
/// trigonometric polynomials of degree <= n.
LinearMap fejer_map(int n, int m);
/// Discrete Fejér weights w_k >= 0 (sum 1) of the circulant.
std::vector<double> fejer_weights(int n, int m);
/// sup |sigma_n s - s| <= L * sum_k w_k dist(theta_k, 0) for L-Lipschitz s.
double fejer_lipschitz_bound(int n, int m, double lipschitz);

/// Lipschitz constant declared for trig_fejer_problem's family.
inline constexpr double kFejerFamilyLipschitz = 0.1;

/// m = 256 circle points, f = identity, Fejér stages n = 1, 2, 4, ..., 64, the
/// family {0.2 sin, 0.2 cos, 0.2 |sin|} (Lipschitz constant 0.2).
AppleProblem trig_fejer_problem(int m = 256, int max_n = 64);
/// Restriction [0, 2] -> [0, 1] with extension by constants as sigma.
AppleProblem interval_restriction_problem();
/// Identity on M_n with identity stages.
AppleProblem identity_problem(int n = 2);

}  // namespace borno
