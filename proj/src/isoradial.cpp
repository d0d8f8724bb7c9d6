#include "borno/isoradial.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "borno/error.hpp"
#include "borno/parallel.hpp"

namespace borno {

DensityReport local_density_probe(const LinearMap& f, const std::vector<AlgebraElement>& probes,
                                  const Disk& t, double epsilon) {
  DensityReport rep;
  rep.epsilon = epsilon;
  rep.pass = true;
  const Eigen::CompleteOrthogonalDecomposition<Matrix> lsq(f.action());
  for (const auto& b : probes) {
    if (!(b.descriptor() == f.target()))
      throw Error(ErrorKind::DescriptorMismatch, "probe lies in " + b.descriptor().to_string() +
                                                     ", map target is " + f.target().to_string());
    DensityProbe p;
    p.probe = b;
    p.preimage = AlgebraElement::from_coordinates(f.source_ptr(), lsq.solve(b.coordinates()));
    p.gauge = gauge(t, b - f(p.preimage));
    rep.worst_gauge = std::max(rep.worst_gauge, p.gauge);
    rep.pass = rep.pass && p.gauge <= epsilon;
    rep.probes.push_back(std::move(p));
  }
  return rep;
}

IsoradialReport isoradial_certificate(const Homomorphism& f,
                                      const std::vector<AlgebraElement>& sampling_basis,
                                      const SamplerConfig& config, int depth, double tol,
                                      double gap_target) {
  if (f.mult_defect() > kMultDefectTol)
    throw Error(ErrorKind::InvalidInput, "isoradial certificate needs a multiplicative map");
  if (sampling_basis.empty()) throw Error(ErrorKind::InvalidInput, "empty sampling basis");
  for (const auto& b : sampling_basis)
    if (!(b.descriptor() == f.source()))
      throw Error(ErrorKind::DescriptorMismatch, "sampling basis element lies in " +
                                                     b.descriptor().to_string() +
                                                     ", map source is " + f.source().to_string());

  // Draw every set up front so the sample stream is independent of scheduling.
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<IsoradialSample> samples;
  std::vector<BoundedSet> sets;
  for (int size : config.sizes)
    for (int i = 0; i < config.per_size; ++i) {
      std::vector<AlgebraElement> gens;
      for (int g = 0; g < size; ++g) {
        AlgebraElement x = AlgebraElement::zero(sampling_basis[0].descriptor_ptr());
        for (const auto& b : sampling_basis) {
          const double re = normal(rng), im = normal(rng);
          x = x + Complex(re, im) * b;
        }
        gens.push_back(std::move(x));
      }
      sets.emplace_back(std::move(gens));
      samples.push_back({size, i, {}, {}, 1.0, 0.0, 0.0, 1.0, Verdict::Inconclusive});
    }

  parallel_for(samples.size(), [&](std::size_t k) {
    IsoradialSample& s = samples[k];
    std::vector<AlgebraElement> images;
    for (const auto& g : sets[k].generators) images.push_back(f(g));
    s.source = jsr_estimate(sets[k], depth, gap_target);
    s.target = jsr_estimate(BoundedSet(std::move(images)), depth, gap_target);
    if (s.source.lower == 0.0 && s.target.lower == 0.0)
      s.ratio = 1.0;
    else
      s.ratio = s.target.lower > 0.0 ? s.source.lower / s.target.lower : kInfinity;
    if (s.target.upper == 0.0) {
      // f(S) is nilpotent; S must be as well.
      s.scale = kInfinity;
      s.scaled_lower = s.source.lower == 0.0 ? 0.0 : kInfinity;
      s.scaled_upper = s.source.upper == 0.0 ? 0.0 : kInfinity;
      s.verdict = s.source.upper <= tol ? Verdict::Pass
                  : s.source.lower > 0.0 ? Verdict::Fail : Verdict::Inconclusive;
      return;
    }
    if (std::isinf(s.target.upper)) {
      s.verdict = Verdict::Inconclusive;
      return;
    }
    s.scale = (1.0 - config.delta) / s.target.upper;
    s.scaled_lower = s.scale * s.source.lower;
    s.scaled_upper = s.scale * s.source.upper;
    if (s.scaled_upper <= 1.0 + tol)
      s.verdict = Verdict::Pass;
    else if (s.scaled_lower > 1.0 + tol)
      s.verdict = Verdict::Fail;
    else
      s.verdict = Verdict::Inconclusive;
  });

  IsoradialReport rep;
  rep.verdict = Verdict::Pass;
  for (const auto& s : samples) {
    rep.worst_ratio = std::max(rep.worst_ratio, s.ratio);
    if (s.target.upper > 0.0)
      rep.worst_ratio_lower = std::max(rep.worst_ratio_lower, s.source.lower / s.target.upper);
    switch (s.verdict) {
      case Verdict::Pass: ++rep.passed; break;
      case Verdict::Fail: ++rep.failed; break;
      case Verdict::Inconclusive: ++rep.inconclusive; break;
    }
    rep.verdict = combine(rep.verdict, s.verdict);
  }
  rep.samples = std::move(samples);
  return rep;
}

LinearMap trig_sampling_map(int d, int m) {
  if (d < 0 || m < 1) throw Error(ErrorKind::InvalidInput, "trig sampling needs d >= 0, m >= 1");
  std::vector<double> degrees;
  for (int j = -d; j <= d; ++j) degrees.push_back(j);
  const auto src = share(AlgebraDescriptor::grid(degrees, AlgebraDescriptor::matrix(1)));
  const auto tgt = share(AlgebraDescriptor::circle_grid(m, AlgebraDescriptor::matrix(1)));
  Matrix action(m, 2 * d + 1);
  for (int p = 0; p < m; ++p)
    for (int j = -d; j <= d; ++j)
      action(p, j + d) = std::polar(1.0, j * tgt->points()[p]);
  return LinearMap(src, tgt, std::move(action));
}

IsoradialFixture trig_poly_fixture(int d, int m) {
  if (m < 4 * d) throw Error(ErrorKind::InvalidInput, "trig fixture needs m >= 4d points");
  // Smooth functions sit inside the grid algebra with the same pointwise
  // product; S ranges over degree-d trigonometric polynomials.
  const LinearMap sample = trig_sampling_map(d, m);
  std::vector<AlgebraElement> basis;
  for (int j = 0; j <= 2 * d; ++j)
    basis.push_back(AlgebraElement::from_coordinates(sample.target_ptr(), sample.action().col(j)));
  return {"trig-poly", Homomorphism(LinearMap::identity(sample.target_ptr())), std::move(basis),
          "trigonometric polynomials of degree <= " + std::to_string(d) + " on " +
              std::to_string(m) + " circle points"};
}

IsoradialFixture matrix_tower_fixture(int k, int n) {
  Homomorphism f(corner_embedding(k, n));
  std::vector<AlgebraElement> basis;
  for (std::size_t i = 0; i < f.source().complex_dim(); ++i)
    basis.push_back(AlgebraElement::basis(f.map().source_ptr(), i));
  return {"matrix-tower", std::move(f), std::move(basis),
          "corner embedding M_" + std::to_string(k) + " -> M_" + std::to_string(n)};
}

IsoradialFixture interval_restriction_fixture(int points) {
  if (points < 3 || points % 2 == 0)
    throw Error(ErrorKind::InvalidInput, "interval fixture needs an odd point count >= 3");
  std::vector<double> wide, narrow;
  for (int i = 0; i < points; ++i) {
    const double t = 2.0 * i / (points - 1);
    wide.push_back(t);
    if (t <= 1.0) narrow.push_back(t);
  }
  const auto src = share(AlgebraDescriptor::grid(wide, AlgebraDescriptor::matrix(1)));
  const auto tgt = share(AlgebraDescriptor::grid(narrow, AlgebraDescriptor::matrix(1)));
  Matrix action = Matrix::Zero(static_cast<Eigen::Index>(narrow.size()), points);
  for (std::size_t i = 0; i < narrow.size(); ++i) action(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  CVector t(points);
  for (int i = 0; i < points; ++i) t(i) = wide[static_cast<std::size_t>(i)];
  return {"interval-restriction", Homomorphism(LinearMap(src, tgt, std::move(action))),
          {AlgebraElement::from_coordinates(src, t)},
          "functions on [0, 2] restricted to [0, 1], sampled along t"};
}

std::vector<IsoradialFixture> fixture_catalog() {
  std::vector<IsoradialFixture> out;
  out.push_back(trig_poly_fixture());
  out.push_back(matrix_tower_fixture());
  out.push_back(interval_restriction_fixture());
  return out;
}

}  // namespace borno
