#include "borno/approx_mult.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "borno/error.hpp"
#include "borno/parallel.hpp"

namespace borno {

namespace {

void require_in_source(const LinearMap& g, const BoundedSet& s) {
  if (s.generators.empty()) throw Error(ErrorKind::InvalidInput, "empty bounded set");
  if (!(s.descriptor() == g.source()))
    throw Error(ErrorKind::DescriptorMismatch, "set lies in " + s.descriptor().to_string() +
                                                   ", map source is " + g.source().to_string());
}

}  // namespace

CurvatureSet curvature(const LinearMap& g, const BoundedSet& s) {
  require_in_source(g, s);
  const std::size_t k = s.size();
  std::vector<AlgebraElement> images;
  for (const auto& x : s.generators) images.push_back(g(x));
  CurvatureSet out;
  out.generator_count = k;
  out.omegas.resize(k * k);
  parallel_for(k * k, [&](std::size_t idx) {
    const std::size_t i = idx / k, j = idx % k;
    out.omegas[idx] = g(multiply(s.generators[i], s.generators[j])) - multiply(images[i], images[j]);
  });
  return out;
}

RadiusEstimate curvature_radius(const LinearMap& g, const BoundedSet& s, int depth,
                                double gap_target) {
  return jsr_estimate(curvature(g, s).as_set(), depth, gap_target);
}

MultiplicativityReport is_approximately_multiplicative(const LinearMap& g, const BoundedSet& s,
                                                       int depth, double gap_target) {
  MultiplicativityReport rep;
  rep.radius = curvature_radius(g, s, depth, gap_target);
  if (rep.radius.upper < 1.0)
    rep.decision = Decision::Yes;
  else if (rep.radius.lower >= 1.0)
    rep.decision = Decision::No;
  return rep;
}

// ---------------------------------------------------------------------------
// sigma approximation

SigmaReport sigma_approximation_check(const std::vector<SigmaStage>& stages, const BoundedSet& s,
                                      const Disk& t, double threshold) {
  if (stages.empty()) throw Error(ErrorKind::InvalidInput, "no approximation stages");
  SigmaReport rep;
  rep.threshold = threshold;
  rep.rates.assign(stages.size(), 0.0);
  parallel_for(stages.size(), [&](std::size_t i) {
    const auto& st = stages[i];
    double worst = 0.0;
    for (const auto& x : s.generators) worst = std::max(worst, gauge(t, st.f(st.sigma(x)) - x));
    rep.rates[i] = worst;
  });
  for (const auto& st : stages) rep.indices.push_back(st.n);
  rep.nonincreasing = true;
  for (std::size_t i = 0; i < rep.rates.size(); ++i) {
    rep.any_infinite = rep.any_infinite || std::isinf(rep.rates[i]);
    if (i > 0 && rep.rates[i] > rep.rates[i - 1]) rep.nonincreasing = false;
  }
  rep.below_threshold = rep.rates.back() <= threshold;
  if (!rep.below_threshold || rep.any_infinite)
    rep.verdict = Verdict::Fail;
  else
    rep.verdict = rep.nonincreasing ? Verdict::Pass : Verdict::Inconclusive;
  return rep;
}

SigmaReport sigma_approximation_check(const LinearMap& f, const std::vector<LinearMap>& sigmas,
                                      const BoundedSet& s, const Disk& t, double threshold) {
  std::vector<SigmaStage> stages;
  for (std::size_t i = 0; i < sigmas.size(); ++i)
    stages.push_back({static_cast<int>(i + 1), f, sigmas[i]});
  return sigma_approximation_check(stages, s, t, threshold);
}

// ---------------------------------------------------------------------------
// linear homotopies

namespace {

// Pairwise curvature of h_t = h0 + t D as W0 + t W1 + t^2 W2.
struct CurvatureExpansion {
  std::vector<AlgebraElement> w0_at_0;  // curvature of h0
  std::vector<AlgebraElement> w_at_1;   // curvature of h1
  std::vector<AlgebraElement> w0, w1, w2;
  double c1 = 0.0, c2 = 0.0;
};

CurvatureExpansion expand(const LinearMap& h0, const LinearMap& h1, const BoundedSet& s) {
  const LinearMap d = h1 - h0;
  CurvatureExpansion e;
  e.w0_at_0 = curvature(h0, s).omegas;
  e.w_at_1 = curvature(h1, s).omegas;
  const std::size_t k = s.size();
  std::vector<AlgebraElement> a0, ad;
  for (const auto& x : s.generators) {
    a0.push_back(h0(x));
    ad.push_back(d(x));
  }
  e.w0 = e.w0_at_0;
  e.w1.resize(k * k);
  e.w2.resize(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t idx = i * k + j;
      e.w1[idx] = d(multiply(s.generators[i], s.generators[j])) - multiply(a0[i], ad[j]) -
                  multiply(ad[i], a0[j]);
      e.w2[idx] = Complex(-1.0) * multiply(ad[i], ad[j]);
      e.c1 = std::max(e.c1, norm(e.w1[idx]));
      e.c2 = std::max(e.c2, norm(e.w2[idx]));
    }
  return e;
}

struct Evaluated {
  double t = 0.0;
  RadiusEstimate radius;
  double slope = 0.0;  // max pair norm of W1 + 2 t W2
};

Evaluated evaluate(const CurvatureExpansion& e, double t, const HomotopyConfig& cfg) {
  Evaluated ev;
  ev.t = t;
  std::vector<AlgebraElement> gens;
  if (t == 0.0) {
    gens = e.w0_at_0;
  } else if (t == 1.0) {
    gens = e.w_at_1;
  } else {
    for (std::size_t i = 0; i < e.w0.size(); ++i)
      gens.push_back(e.w0[i] + Complex(t) * e.w1[i] + Complex(t * t) * e.w2[i]);
  }
  for (std::size_t i = 0; i < e.w1.size(); ++i)
    ev.slope = std::max(ev.slope, norm(e.w1[i] + Complex(2.0 * t) * e.w2[i]));
  ev.radius = jsr_estimate(BoundedSet(std::move(gens)), cfg.depth, cfg.gap_target);
  return ev;
}

// Bound on rho(omega_{h_t}) for t between anchor.t and far, from the anchor's
// level norms and an elementwise perturbation bound delta.
double half_interval_bound(const CurvatureExpansion& e, const Evaluated& anchor, double far) {
  const auto& lb = anchor.radius.level_bounds;
  if (lb.empty() || std::isinf(anchor.radius.upper)) return kInfinity;
  const double a = anchor.t;
  const double s = std::abs(far - a);
  const double delta_coeff = s * e.c1 + std::abs(far * far - a * a) * e.c2;
  const double delta_taylor = s * anchor.slope + s * s * e.c2;
  const double delta = std::min(delta_coeff, delta_taylor);
  if (delta == 0.0) return anchor.radius.upper;
  const double top = lb.front();  // largest generator norm
  double best = kInfinity;
  for (std::size_t l = 1; l <= lb.size(); ++l) {
    const double len = static_cast<double>(l);
    // ||prod (x_i + d_i)|| <= U^l + (top + delta)^l - top^l <= U^l + l delta (top + delta)^(l-1)
    const double v = std::pow(lb[l - 1], len) + len * delta * std::pow(top + delta, len - 1.0);
    best = std::min(best, std::pow(v, 1.0 / len));
  }
  return best;
}

}  // namespace

HomotopyCertificate linear_homotopy_certificate(const LinearMap& h0, const LinearMap& h1,
                                                const BoundedSet& s, const HomotopyConfig& cfg) {
  require_in_source(h0, s);
  if (!(h0.source() == h1.source()) || !(h0.target() == h1.target()))
    throw Error(ErrorKind::DescriptorMismatch, "homotopy endpoints have different signatures");
  if (cfg.initial_points < 2) throw Error(ErrorKind::InvalidInput, "homotopy needs >= 2 t points");

  const CurvatureExpansion e = expand(h0, h1, s);
  HomotopyCertificate cert;
  cert.coefficient_norm_1 = e.c1;
  cert.coefficient_norm_2 = e.c2;

  std::vector<double> ts;
  const int n = cfg.initial_points;
  for (int k = 0; k < n; ++k) ts.push_back(0.5 * (1.0 - std::cos(std::numbers::pi * k / (n - 1))));
  ts.front() = 0.0;
  ts.back() = 1.0;

  std::vector<Evaluated> pts(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) { pts[i] = evaluate(e, ts[i], cfg); });

  auto interval_bound = [&](std::size_t i) {
    const double mid = 0.5 * (pts[i].t + pts[i + 1].t);
    return std::max(half_interval_bound(e, pts[i], mid), half_interval_bound(e, pts[i + 1], mid));
  };

  std::vector<double> bounds;
  for (;;) {
    bounds.resize(pts.size() - 1);
    parallel_for(bounds.size(), [&](std::size_t i) { bounds[i] = interval_bound(i); });
    double grid_upper = 0.0;
    for (const auto& p : pts) grid_upper = std::max(grid_upper, p.radius.upper);
    const double threshold = grid_upper + cfg.refine_tol * std::max(1.0, grid_upper);

    std::vector<std::size_t> split;
    for (std::size_t i = 0; i < bounds.size(); ++i)
      if (bounds[i] > threshold && pts[i + 1].t - pts[i].t > 1e-15) split.push_back(i);
    if (split.empty() || std::isinf(grid_upper)) break;
    const std::size_t room = pts.size() < static_cast<std::size_t>(cfg.max_points)
                                 ? static_cast<std::size_t>(cfg.max_points) - pts.size()
                                 : 0;
    if (split.size() > room) {
      cert.refinement_capped = true;
      std::stable_sort(split.begin(), split.end(),
                       [&](std::size_t a, std::size_t b) { return bounds[a] > bounds[b]; });
      split.resize(room);
      std::sort(split.begin(), split.end());
    }
    if (split.empty()) break;

    std::vector<Evaluated> fresh(split.size());
    parallel_for(split.size(), [&](std::size_t i) {
      fresh[i] = evaluate(e, 0.5 * (pts[split[i]].t + pts[split[i] + 1].t), cfg);
    });
    std::vector<Evaluated> merged;
    merged.reserve(pts.size() + fresh.size());
    std::size_t f = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      merged.push_back(std::move(pts[i]));
      if (f < split.size() && split[f] == i) merged.push_back(std::move(fresh[f++]));
    }
    pts = std::move(merged);
  }

  cert.interval_bounds = bounds;
  for (const auto& p : pts) {
    cert.sup_upper = std::max(cert.sup_upper, p.radius.upper);
    cert.sup_lower = std::max(cert.sup_lower, p.radius.lower);
    cert.points.push_back({p.t, p.radius});
  }
  for (double b : bounds) cert.sup_upper = std::max(cert.sup_upper, b);
  if (cert.sup_upper < 1.0)
    cert.verdict = Verdict::Pass;
  else if (cert.sup_lower >= 1.0)
    cert.verdict = Verdict::Fail;
  return cert;
}

// ---------------------------------------------------------------------------
// apples

AppleReport apple_certificate(const AppleProblem& p, const AppleConfig& cfg) {
  AppleReport rep;
  rep.isoradial = isoradial_certificate(p.f, p.sampling_basis, cfg.sampler, cfg.depth, cfg.tol,
                                        cfg.gap_target);
  rep.sigma = sigma_approximation_check(p.stages, p.sigma_set, p.sigma_disk, p.sigma_threshold);
  if (rep.isoradial.verdict == Verdict::Pass && rep.sigma.verdict == Verdict::Pass) {
    const SigmaStage& last = p.stages.back();
    const LinearMap h1 = compose(last.f, compose(last.sigma, p.h));
    rep.homotopy = linear_homotopy_certificate(p.h, h1, p.homotopy_set, cfg.homotopy);
    rep.homotopy_built = true;
    rep.verdict = rep.homotopy.verdict;
  } else {
    rep.verdict = combine(rep.isoradial.verdict, rep.sigma.verdict);
  }
  std::ostringstream os;
  if (rep.verdict == Verdict::Pass)
    os << "hypotheses verified at desk scale: no isoradiality violation among "
       << rep.isoradial.samples.size() << " sampled sets, approximation rate "
       << rep.sigma.rates.back() << ", homotopy curvature at most " << rep.homotopy.sup_upper;
  else
    os << "certificate not established (isoradial " << to_string(rep.isoradial.verdict)
       << ", approximation " << to_string(rep.sigma.verdict)
       << (rep.homotopy_built ? std::string(", homotopy ") + to_string(rep.homotopy.verdict) : "")
       << ")";
  rep.statement = os.str();
  return rep;
}

std::vector<double> fejer_weights(int n, int m) {
  if (n < 0 || m < 1 || n >= m) throw Error(ErrorKind::InvalidInput, "Fejér order needs 0 <= n < m");
  std::vector<double> w(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / m;
    double v = 1.0;
    for (int j = 1; j <= n; ++j) v += 2.0 * (1.0 - static_cast<double>(j) / (n + 1)) * std::cos(j * theta);
    w[static_cast<std::size_t>(k)] = v / m;
  }
  return w;
}

LinearMap fejer_map(int n, int m) {
  const auto w = fejer_weights(n, m);
  const auto d = share(AlgebraDescriptor::circle_grid(m, AlgebraDescriptor::matrix(1)));
  Matrix c(m, m);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) c(p, q) = w[static_cast<std::size_t>(((p - q) % m + m) % m)];
  return LinearMap(d, d, std::move(c));
}

double fejer_lipschitz_bound(int n, int m, double lipschitz) {
  const auto w = fejer_weights(n, m);
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / m;
    total += std::abs(w[static_cast<std::size_t>(k)]) * std::min(theta, 2.0 * std::numbers::pi - theta);
  }
  return lipschitz * total;
}

AppleProblem trig_fejer_problem(int m, int max_n) {
  const auto d = share(AlgebraDescriptor::circle_grid(m, AlgebraDescriptor::matrix(1)));
  const LinearMap id = LinearMap::identity(d);
  std::vector<SigmaStage> stages;
  for (int n = 1; n <= max_n; n *= 2) stages.push_back({n, id, fejer_map(n, m)});
  CVector s(m), c(m), a(m);
  for (int p = 0; p < m; ++p) {
    const double th = d->points()[static_cast<std::size_t>(p)];
    s(p) = kFejerFamilyLipschitz * std::sin(th);
    c(p) = kFejerFamilyLipschitz * std::cos(th);
    a(p) = kFejerFamilyLipschitz * std::abs(std::sin(th));
  }
  BoundedSet family({AlgebraElement::from_coordinates(d, s), AlgebraElement::from_coordinates(d, c),
                     AlgebraElement::from_coordinates(d, a)});
  auto fx = trig_poly_fixture(3, m);
  return {"trig-fejer", std::move(fx.map), std::move(fx.sampling_basis), std::move(stages),
          family, Disk::norm_ball(1.0), 1e-2, id, family};
}

AppleProblem interval_restriction_problem() {
  auto fx = interval_restriction_fixture();
  const LinearMap f = fx.map.map();
  const auto narrow = f.target_ptr();
  const auto wide = f.source_ptr();
  // Extension by the value at 1.
  Matrix ext = Matrix::Zero(static_cast<Eigen::Index>(wide->complex_dim()),
                            static_cast<Eigen::Index>(narrow->complex_dim()));
  const auto last = static_cast<Eigen::Index>(narrow->complex_dim()) - 1;
  for (Eigen::Index i = 0; i < ext.rows(); ++i) ext(i, std::min(i, last)) = 1.0;
  LinearMap sigma(narrow, wide, std::move(ext));
  const AlgebraElement t = f(fx.sampling_basis.front());
  const LinearMap id = LinearMap::identity(narrow);
  return {"interval-restriction", std::move(fx.map), fx.sampling_basis, {{1, f, sigma}},
          BoundedSet({t}), Disk::norm_ball(1.0), 1e-2, id, BoundedSet({t})};
}

AppleProblem identity_problem(int n) {
  const auto d = share(AlgebraDescriptor::matrix(n));
  const LinearMap id = LinearMap::identity(d);
  std::vector<AlgebraElement> basis, half;
  for (std::size_t i = 0; i < d->complex_dim(); ++i) {
    basis.push_back(AlgebraElement::basis(d, i));
    half.push_back(Complex(0.5) * basis.back());
  }
  return {"identity", Homomorphism(id), basis, {{n, id, id}}, BoundedSet(basis),
          Disk::norm_ball(1.0), 1e-2, id, BoundedSet(half)};
}

}  // namespace borno
