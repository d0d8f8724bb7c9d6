#include "borno/jsr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "borno/parallel.hpp"

namespace borno {

const char* to_string(RadiusStatus s) {
  return s == RadiusStatus::Certified ? "certified" : "depth-limited";
}

namespace {

constexpr double kPruneMargin = 1e-9;
constexpr double kOverflow = 1e300;
// Products are renormalized by a power of two once their norm leaves this range.
constexpr int kScaleExponent = 100;

struct Node {
  std::vector<int> word;
  AlgebraElement product;
  int exponent = 0;  // true product = product * 2^exponent
  double norm = 0.0;
  double rho = 0.0;
};

// (x * 2^e)^(1/len)
double rooted(double x, int e, int len) {
  if (x == 0.0) return 0.0;
  if (e == 0) return len == 1 ? x : std::pow(x, 1.0 / len);
  return std::exp((std::log(x) + e * std::numbers::ln2) / len);
}

double log_value(double x, int e) {
  if (x == 0.0) return -kInfinity;
  return std::log(x) + e * std::numbers::ln2;
}

Node make_node(std::vector<int> word, AlgebraElement product, int exponent) {
  double n = norm(product);
  if (n != 0.0 && (n < std::ldexp(1.0, -kScaleExponent) || n > std::ldexp(1.0, kScaleExponent))) {
    int shift = 0;
    std::frexp(n, &shift);
    product = Complex(std::ldexp(1.0, -shift)) * product;
    exponent += shift;
    n = norm(product);
  }
  Node node{std::move(word), std::move(product), exponent, n, 0.0};
  node.rho = spectral_radius_single(node.product);
  return node;
}

}  // namespace

RadiusEstimate jsr_estimate(const BoundedSet& s, int depth, double gap_target) {
  if (s.generators.empty()) throw Error(ErrorKind::InvalidInput, "jsr needs a nonempty set");
  if (depth < 1) throw Error(ErrorKind::InvalidInput, "jsr depth must be >= 1");
  if (!(gap_target > 0.0)) throw Error(ErrorKind::InvalidInput, "gap target must be positive");

  const std::vector<AlgebraElement> gens = s.hull ? hull_probe_generators(s) : s.generators;
  const int k = static_cast<int>(gens.size());

  RadiusEstimate est;
  std::vector<double> log_level_max;  // log of max_{|w|=l} ||P_w||, l = 1..

  std::vector<Node> frontier(k);
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t i) {
    frontier[i] = make_node({static_cast<int>(i)}, gens[i], 0);
  });

  for (int level = 1; level <= depth; ++level) {
    if (frontier.empty()) break;
    est.depth = level;

    // Deterministic reductions over the level, in lexicographic word order.
    double level_max = 0.0;
    double log_max = -kInfinity;
    for (const auto& node : frontier) {
      if (log_value(node.norm, node.exponent) > std::log(kOverflow)) {
        est.upper = kInfinity;
        est.status = RadiusStatus::DepthLimited;
        return est;
      }
      const double r = rooted(node.rho, node.exponent, level);
      // Strict improvement only: ties keep the shorter, lexicographically first word.
      if (est.witness_word.empty() || r > est.lower) {
        est.lower = r;
        est.witness_word = node.word;
      }
      const double nr = rooted(node.norm, node.exponent, level);
      level_max = std::max(level_max, nr);
      log_max = std::max(log_max, log_value(node.norm, node.exponent));
    }
    est.level_bounds.push_back(level_max);
    log_level_max.push_back(log_max);
    est.upper = std::min(est.upper, level_max);

    if (est.upper - est.lower <= gap_target) {
      est.status = RadiusStatus::Certified;
      return est;
    }
    if (level == depth) break;

    // Best bound on log max_{|v|=j} ||P_v|| for j = 1..depth-level, using
    // completed levels and submultiplicativity beyond them.
    const int remaining = depth - level;
    std::vector<double> log_hat(remaining + 1, kInfinity);
    log_hat[0] = 0.0;
    for (int j = 1; j <= remaining; ++j) {
      if (j <= static_cast<int>(log_level_max.size())) log_hat[j] = log_level_max[j - 1];
      for (int a = 1; a < j; ++a) log_hat[j] = std::min(log_hat[j], log_hat[a] + log_hat[j - a]);
    }

    const double threshold = est.lower;
    std::vector<std::size_t> keep;
    keep.reserve(frontier.size());
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const double lp = log_value(frontier[i].norm, frontier[i].exponent);
      double log_bound = -kInfinity;
      for (int j = 1; j <= remaining; ++j)
        log_bound = std::max(log_bound, (lp + log_hat[j]) / (level + j));
      const double bound = std::exp(log_bound);
      if (bound * (1.0 + kPruneMargin) > threshold) keep.push_back(i);
    }

    std::vector<Node> next(keep.size() * static_cast<std::size_t>(k));
    parallel_for(next.size(), [&](std::size_t idx) {
      const Node& parent = frontier[keep[idx / k]];
      const int g = static_cast<int>(idx % k);
      std::vector<int> word = parent.word;
      word.push_back(g);
      next[idx] = make_node(std::move(word), multiply(parent.product, gens[g]), parent.exponent);
    });
    frontier = std::move(next);
  }
  est.status = est.upper - est.lower <= gap_target ? RadiusStatus::Certified
                                                   : RadiusStatus::DepthLimited;
  return est;
}

bool intervals_intersect(double a_lo, double a_hi, double b_lo, double b_hi, double slack) {
  auto le = [slack](double x, double y) { return x <= y + slack * std::max(1.0, std::abs(y)); };
  return le(a_lo, b_hi) && le(b_lo, a_hi);
}

IdentityReport check_specrad_identities(const BoundedSet& s, Complex c, int n, int depth,
                                        double gap_target, int hull_depth) {
  if (n != 2 && n != 3) throw Error(ErrorKind::InvalidInput, "power identity supports n in {2, 3}");
  IdentityReport rep;
  rep.c = c;
  rep.n = n;
  rep.base = jsr_estimate(s, depth, gap_target);
  rep.scaled = jsr_estimate(scale(c, s), depth, gap_target);
  rep.powered = jsr_estimate(power(s, n), std::max(1, (depth + n - 1) / n), gap_target);
  BoundedSet as_hull = s;
  as_hull.hull = true;
  rep.hull = jsr_estimate(as_hull, std::min(depth, hull_depth), gap_target);

  const double ac = std::abs(c);
  rep.scaling_consistent = intervals_intersect(ac * rep.base.lower, ac * rep.base.upper,
                                               rep.scaled.lower, rep.scaled.upper);
  rep.power_consistent =
      intervals_intersect(std::pow(rep.base.lower, n), std::pow(rep.base.upper, n),
                          rep.powered.lower, rep.powered.upper);
  rep.hull_consistent =
      intervals_intersect(rep.base.lower, rep.base.upper, rep.hull.lower, rep.hull.upper);
  if (!rep.scaling_consistent || !rep.power_consistent || !rep.hull_consistent) {
    std::ostringstream os;
    os << "spectral radius identities violated: scaling=" << rep.scaling_consistent
       << " power=" << rep.power_consistent << " hull=" << rep.hull_consistent;
    throw Error(ErrorKind::InvariantViolation, os.str());
  }
  return rep;
}

HullCertificate submultiplicative_hull(const BoundedSet& s, double r, std::size_t max_products) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "hull scale r must be positive");
  constexpr double kNegligible = 1e-12;
  constexpr double kAbsorbTol = 1e-9;

  std::vector<AlgebraElement> base;
  for (const auto& g : s.generators) base.push_back(Complex(1.0 / r) * g);

  HullCertificate cert{Disk::norm_ball(1.0), r, 0.0, {}, {}, 0.0, 0.0};
  std::vector<AlgebraElement> hull;
  auto absorbed = [&](const AlgebraElement& x) {
    return !hull.empty() && gauge(Disk::finite_hull(hull), x) <= 1.0 + kAbsorbTol;
  };
  auto record = [&](std::size_t len, double n) {
    if (cert.decay_profile.size() < len) cert.decay_profile.resize(len, 0.0);
    cert.decay_profile[len - 1] = std::max(cert.decay_profile[len - 1], n);
  };

  // Breadth-first over product length; only newly added products are extended.
  std::vector<AlgebraElement> layer;
  for (const auto& b : base) {
    const double n = norm(b);
    record(1, n);
    if (n < kNegligible) {
      cert.dropped_norm = std::max(cert.dropped_norm, n);
      continue;
    }
    if (!absorbed(b)) {
      hull.push_back(b);
      layer.push_back(b);
    }
  }
  std::size_t len = 1;
  while (!layer.empty()) {
    ++len;
    std::vector<AlgebraElement> next;
    for (const auto& p : layer) {
      for (const auto& b : base) {
        AlgebraElement q = multiply(p, b);
        const double n = norm(q);
        record(len, n);
        if (n < kNegligible) {
          cert.dropped_norm = std::max(cert.dropped_norm, n);
          continue;
        }
        if (absorbed(q)) continue;
        hull.push_back(q);
        next.push_back(std::move(q));
        if (hull.size() > max_products) {
          std::ostringstream os;
          os << "hull exceeded " << max_products << " products at length " << len
             << "; raise r above the radius or raise the cap";
          throw CapExceeded(os.str(), cert.decay_profile);
        }
      }
    }
    layer = std::move(next);
  }

  if (hull.empty()) hull.push_back(AlgebraElement::zero(s.descriptor_ptr()));
  cert.hull = Disk::finite_hull(hull);
  cert.generators = hull;

  for (const auto& x : hull)
    for (const auto& y : hull) {
      AlgebraElement xy = multiply(x, y);
      const double n = norm(xy);
      if (n < kNegligible) {
        cert.dropped_norm = std::max(cert.dropped_norm, n);
        continue;
      }
      cert.closure_defect = std::max(cert.closure_defect, gauge(cert.hull, xy) - 1.0);
    }
  for (const auto& b : base) {
    const double n = norm(b);
    if (n < kNegligible) continue;
    cert.containment = std::max(cert.containment, gauge(cert.hull, b));
  }
  return cert;
}

GridRadiusReport jsr_grid_max(const BoundedSet& s, int depth, double gap_target) {
  if (s.descriptor().kind() != AlgebraDescriptor::Kind::Grid)
    throw Error(ErrorKind::InvalidInput, "jsr_grid_max needs a grid function algebra");
  GridRadiusReport rep;
  rep.global = jsr_estimate(s, depth, gap_target);
  const std::size_t points = s.descriptor().grid_size();
  for (std::size_t p = 0; p < points; ++p) {
    std::vector<AlgebraElement> fibers;
    for (const auto& g : s.generators) fibers.push_back(g.fiber_at(p));
    rep.profile.push_back(jsr_estimate(BoundedSet(std::move(fibers), s.hull), depth, gap_target));
    rep.max_lower = std::max(rep.max_lower, rep.profile.back().lower);
    rep.max_upper = std::max(rep.max_upper, rep.profile.back().upper);
  }
  if (!intervals_intersect(rep.global.lower, rep.global.upper, rep.max_lower, rep.max_upper)) {
    std::ostringstream os;
    os << "pointwise maximum formula violated: global [" << rep.global.lower << ", "
       << rep.global.upper << "] vs profile [" << rep.max_lower << ", " << rep.max_upper << "]";
    throw Error(ErrorKind::InvariantViolation, os.str());
  }
  return rep;
}

KroneckerReport kronecker_bound_check(const BoundedSet& a, const BoundedSet& b, int depth,
                                      double gap_target) {
  if (a.descriptor().kind() != AlgebraDescriptor::Kind::Matrix ||
      b.descriptor().kind() != AlgebraDescriptor::Kind::Matrix)
    throw Error(ErrorKind::InvalidInput, "kronecker check needs matrix algebras");
  const int na = a.descriptor().dim();
  const int nb = b.descriptor().dim();
  auto desc = share(AlgebraDescriptor::matrix(na * nb, a.descriptor().norm()));
  std::vector<AlgebraElement> tensors;
  for (const auto& x : a.generators)
    for (const auto& y : b.generators) {
      Matrix k(na * nb, na * nb);
      for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) k.block(i * nb, j * nb, nb, nb) = x.block(0)(i, j) * y.block(0);
      tensors.emplace_back(desc, std::vector<Matrix>{std::move(k)});
    }
  KroneckerReport rep;
  rep.left = jsr_estimate(a, depth, gap_target);
  rep.right = jsr_estimate(b, depth, gap_target);
  rep.product = jsr_estimate(BoundedSet(std::move(tensors)), depth, gap_target);
  rep.bound = rep.left.upper * rep.right.upper;
  if (!(rep.product.lower <= rep.bound * (1.0 + kIntervalSlack) + kIntervalSlack)) {
    std::ostringstream os;
    os << "tensor radius bound violated: lower " << rep.product.lower << " > " << rep.bound;
    throw Error(ErrorKind::InvariantViolation, os.str());
  }
  return rep;
}

AlgebraElement pad_corner(const AlgebraElement& a, int n) {
  if (a.descriptor().kind() != AlgebraDescriptor::Kind::Matrix)
    throw Error(ErrorKind::InvalidInput, "corner padding needs a matrix algebra");
  const int k = a.descriptor().dim();
  if (n < k) throw Error(ErrorKind::InvalidInput, "corner padding target is smaller than source");
  Matrix m = Matrix::Zero(n, n);
  m.topLeftCorner(k, k) = a.block(0);
  return AlgebraElement(share(AlgebraDescriptor::matrix(n, a.descriptor().norm())), {m});
}

DirectUnionReport direct_union_liminf(const BoundedSet& s, const std::vector<int>& chain,
                                      int depth, double gap_target) {
  DirectUnionReport rep;
  rep.dims = chain;
  for (int n : chain) {
    std::vector<AlgebraElement> padded;
    for (const auto& g : s.generators) padded.push_back(pad_corner(g, n));
    rep.stages.push_back(jsr_estimate(BoundedSet(std::move(padded), s.hull), depth, gap_target));
  }
  rep.agree = true;
  for (std::size_t i = 1; i < rep.stages.size(); ++i) {
    const auto& a = rep.stages.front();
    const auto& b = rep.stages[i];
    const double tol = kIntervalSlack * std::max(1.0, a.upper);
    rep.agree = rep.agree && std::abs(a.lower - b.lower) <= tol &&
                (a.upper == b.upper || std::abs(a.upper - b.upper) <= tol);
  }
  return rep;
}

}  // namespace borno
