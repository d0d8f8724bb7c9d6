#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "borno/algebra.hpp"
#include "borno/jsr.hpp"
#include "borno/maps.hpp"
#include "borno/verdict.hpp"

namespace borno {

struct DensityProbe {
  AlgebraElement probe;
  AlgebraElement preimage;  // least-squares minimizer a*
  double gauge = 0.0;       // gauge_T(probe - f(a*)), +inf when T does not absorb it
};

/// Probe-based surrogate for local density of the range of f.
struct DensityReport {
  std::vector<DensityProbe> probes;
  double epsilon = 0.0;
  double worst_gauge = 0.0;
  bool pass = false;
};

DensityReport local_density_probe(const LinearMap& f, const std::vector<AlgebraElement>& probes,
                                  const Disk& t, double epsilon);

struct SamplerConfig {
  std::vector<int> sizes{1, 2, 3};
  int per_size = 32;
  std::uint64_t seed = 0xB00C;
  double delta = 0.05;
};

struct IsoradialSample {
  int size = 0;
  int index = 0;
  RadiusEstimate source;
  RadiusEstimate target;
  double scale = 1.0;         // (1 - delta) / target.upper
  double scaled_lower = 0.0;  // scale * source.lower
  double scaled_upper = 0.0;  // scale * source.upper
  double ratio = 1.0;         // source.lower / target.lower
  Verdict verdict = Verdict::Inconclusive;
};

struct IsoradialReport {
  std::vector<IsoradialSample> samples;
  double worst_ratio = 1.0;
  /// Certified: some sample has rho_source / rho_target at least this large.
  double worst_ratio_lower = 1.0;
  int passed = 0;
  int failed = 0;
  int inconclusive = 0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Samples bounded sets S as complex Gaussian combinations of sampling_basis,
/// rescales so that the certified upper bound of rho(f(S)) is 1 - delta and
/// checks rho(S) <= 1 + tol.
IsoradialReport isoradial_certificate(const Homomorphism& f,
                                      const std::vector<AlgebraElement>& sampling_basis,
                                      const SamplerConfig& config, int depth, double tol,
                                      double gap_target = 1e-3);

struct IsoradialFixture {
  std::string name;
  Homomorphism map;
  std::vector<AlgebraElement> sampling_basis;
  std::string description;
};

/// Trigonometric polynomials of degree <= d inside functions on m >= 4d
/// equally spaced circle points.
IsoradialFixture trig_poly_fixture(int d = 3, int m = 16);
/// Corner embedding M_k -> M_n.
IsoradialFixture matrix_tower_fixture(int k = 2, int n = 6);
/// Polynomials sampled on [0, 2] restricted to [0, 1]; not isoradial.
IsoradialFixture interval_restriction_fixture(int points = 9);

std::vector<IsoradialFixture> fixture_catalog();

/// Coefficients (c_{-d}, ..., c_d) -> sum_j c_j e^{ij theta} sampled on m circle points.
/// The source is the grid {-d, ..., d} with scalar fibers.
LinearMap trig_sampling_map(int d, int m);

}  // namespace borno
