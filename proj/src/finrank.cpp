#include "borno/finrank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "borno/error.hpp"
#include "borno/parallel.hpp"

namespace borno {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Coordinates summed explicitly for sign-pattern limits.
constexpr std::int64_t kPatternCoords = 4096;

Monomial squared(const Monomial& m) { return {m.c * m.c, 2.0 * m.p, m.b * m.b}; }

// sum / sum of squares / sup of the monomial over k >= from, as the gauge kind needs.
Enclosure monomial_tail(AmbientKind kind, const Monomial& mu, std::int64_t from) {
  switch (kind) {
    case AmbientKind::L1: return tail_sum(mu, from);
    case AmbientKind::L2: return tail_sum(squared(mu), from);
    case AmbientKind::Sup: {
      const double v = tail_sup(mu, from);
      return {v, v};
    }
  }
  return {kInf, kInf};
}

// Accumulates y >= 0 into a partial sum, sum of squares or max.
double accumulate(AmbientKind kind, double acc, double y) {
  switch (kind) {
    case AmbientKind::L1: return acc + y;
    case AmbientKind::L2: return acc + y * y;
    case AmbientKind::Sup: return std::max(acc, y);
  }
  return acc;
}

Enclosure finish(AmbientKind kind, double head, Enclosure tail) {
  switch (kind) {
    case AmbientKind::L1: return {head + tail.lo, head + tail.hi};
    case AmbientKind::L2: return {std::sqrt(head + tail.lo), std::sqrt(head + tail.hi)};
    case AmbientKind::Sup: return {std::max(head, tail.lo), std::max(head, tail.hi)};
  }
  return {kInf, kInf};
}

// w(k) a(k) as one monomial.
Monomial weighted_envelope(const AmbientGauge& t, const CompactSetModel& s) { return t.weight * s.envelope; }

// Box gauge of (I - P_n), i.e. the envelope beyond coordinate n.
Enclosure envelope_tail(const AmbientGauge& t, const CompactSetModel& s, std::int64_t n) {
  if (s.is_zero()) return {0.0, 0.0};
  return finish(t.kind, 0.0, monomial_tail(t.kind, weighted_envelope(t, s), n + 1));
}

}  // namespace

const char* to_string(AmbientKind k) {
  switch (k) {
    case AmbientKind::L1: return "l1";
    case AmbientKind::L2: return "l2";
    case AmbientKind::Sup: return "sup";
  }
  return "unknown";
}

void require_precompact(const AmbientGauge& t, const CompactSetModel& s) {
  if (!(t.weight.c > 0.0 && t.weight.b > 0.0)) throw Error(ErrorKind::InvalidInput, "gauge weight needs c, b > 0");
  if (s.envelope.c < 0.0 || s.envelope.b < 0.0) throw Error(ErrorKind::InvalidInput, "envelope needs c, b >= 0");
  if (s.is_zero()) return;
  const Monomial mu = weighted_envelope(t, s);
  const bool ok = t.kind == AmbientKind::Sup ? (mu.b < 1.0 || (mu.b == 1.0 && mu.p < 0.0))
                                              : std::isfinite(monomial_tail(t.kind, mu, 0).hi);
  if (!ok) throw Error(ErrorKind::InvalidInput, "envelope is not precompact under the ambient gauge");
}

// ------------------------------------------------------------- multipliers

Multiplier Multiplier::identity() {
  Multiplier m;
  m.tail_c = 1.0;
  return m;
}

Multiplier Multiplier::zero() { return {}; }

Multiplier Multiplier::truncation(std::int64_t n) {
  Multiplier m;
  if (n >= 0) m.head.assign(static_cast<std::size_t>(n) + 1, 1.0);
  return m;
}

Multiplier Multiplier::diagonal(double c, double p, double b) {
  Multiplier m;
  m.tail_c = c;
  m.tail_p = p;
  m.tail_b = b;
  return m;
}

double Multiplier::operator()(std::int64_t k) const {
  if (k < static_cast<std::int64_t>(head.size())) return head[static_cast<std::size_t>(k)];
  if (tail_c == 0.0) return 0.0;
  const double kk = static_cast<double>(k);
  return tail_c * std::pow(kk + 1.0, tail_p) * std::pow(tail_b, kk);
}

bool Multiplier::is_zero() const {
  return tail_c == 0.0 && std::all_of(head.begin(), head.end(), [](double v) { return v == 0.0; });
}

double Multiplier::norm() const {
  double n = 0.0;
  for (double v : head) n = std::max(n, std::abs(v));
  if (tail_c != 0.0)
    n = std::max(n, tail_sup({std::abs(tail_c), tail_p, std::abs(tail_b)}, static_cast<std::int64_t>(head.size())));
  return n;
}

std::int64_t Multiplier::rank() const {
  if (tail_c != 0.0) return -1;
  return std::count_if(head.begin(), head.end(), [](double v) { return v != 0.0; });
}

Multiplier operator*(double s, const Multiplier& a) {
  Multiplier m = a;
  for (double& v : m.head) v *= s;
  m.tail_c *= s;
  return m;
}

Multiplier operator-(const Multiplier& a, const Multiplier& b) {
  const std::size_t len = std::max(a.head.size(), b.head.size());
  Multiplier m;
  m.head.resize(len);
  for (std::size_t k = 0; k < len; ++k) {
    const auto kk = static_cast<std::int64_t>(k);
    m.head[k] = a(kk) - b(kk);
  }
  if (a.tail_c == 0.0) {
    m.tail_c = -b.tail_c;
    m.tail_p = b.tail_p;
    m.tail_b = b.tail_b;
  } else if (b.tail_c == 0.0 || (a.tail_p == b.tail_p && a.tail_b == b.tail_b)) {
    m.tail_c = a.tail_c - b.tail_c;
    m.tail_p = a.tail_p;
    m.tail_b = a.tail_b;
  } else {
    throw Error(ErrorKind::Unsupported, "difference of multipliers with distinct tail shapes");
  }
  return m;
}

bool operator==(const Multiplier& a, const Multiplier& b) {
  try {
    return (a - b).is_zero();
  } catch (const Error&) {
    return false;
  }
}

Enclosure box_gauge(const AmbientGauge& t, const CompactSetModel& s, const Multiplier& m) {
  if (s.is_zero() || m.is_zero()) return {0.0, 0.0};
  double head = 0.0;
  for (std::size_t k = 0; k < m.head.size(); ++k) {
    const auto kk = static_cast<std::int64_t>(k);
    if (m.head[k] != 0.0) head = accumulate(t.kind, head, t.weight(kk) * std::abs(m.head[k]) * s.envelope(kk));
  }
  Enclosure tail{0.0, 0.0};
  if (m.tail_c != 0.0) {
    const Monomial mu = weighted_envelope(t, s) * Monomial{std::abs(m.tail_c), m.tail_p, std::abs(m.tail_b)};
    tail = monomial_tail(t.kind, mu, static_cast<std::int64_t>(m.head.size()));
  }
  return finish(t.kind, head, tail);
}

double vector_gauge(const AmbientGauge& t, const std::vector<double>& x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] != 0.0) acc = accumulate(t.kind, acc, t.weight(static_cast<std::int64_t>(k)) * std::abs(x[k]));
  return t.kind == AmbientKind::L2 ? std::sqrt(acc) : acc;
}

// ---------------------------------------------------------------- families

OperatorFamily OperatorFamily::truncations(std::int64_t offset) {
  OperatorFamily f;
  f.kind = Kind::Truncation;
  f.offset = offset;
  return f;
}

OperatorFamily OperatorFamily::constant(Multiplier op) {
  OperatorFamily f;
  f.kind = Kind::Constant;
  f.op = std::move(op);
  return f;
}

OperatorFamily OperatorFamily::scaled(double alpha, double beta, Multiplier op) {
  OperatorFamily f;
  f.kind = Kind::Scaled;
  f.alpha = alpha;
  f.beta = beta;
  f.op = std::move(op);
  return f;
}

Multiplier OperatorFamily::at(std::int64_t n) const {
  switch (kind) {
    case Kind::Truncation: return Multiplier::truncation(n + offset);
    case Kind::Constant: return op;
    case Kind::Scaled: return (alpha * static_cast<double>(n) + beta) * op;
  }
  return {};
}

double OperatorFamily::sup_norm() const {
  switch (kind) {
    case Kind::Truncation: return 1.0;
    case Kind::Constant: return op.norm();
    case Kind::Scaled:
      if (op.is_zero()) return 0.0;
      return alpha == 0.0 ? std::abs(beta) * op.norm() : kInf;
  }
  return kInf;
}

std::optional<Multiplier> OperatorFamily::limit() const {
  switch (kind) {
    case Kind::Truncation: return Multiplier::identity();
    case Kind::Constant: return op;
    case Kind::Scaled:
      if (op.is_zero()) return Multiplier::zero();
      if (alpha == 0.0) return beta * op;
      return std::nullopt;
  }
  return std::nullopt;
}

// ------------------------------------------------------------ convergence

UniformReport uniform_convergence_on_set(const OperatorFamily& family, const Multiplier& f,
                                         const CompactSetModel& s, const AmbientGauge& t,
                                         std::int64_t count) {
  require_precompact(t, s);
  UniformReport r;
  r.rates.resize(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  parallel_for(r.rates.size(), [&](std::size_t n) {
    r.rates[n] = box_gauge(t, s, family.at(static_cast<std::int64_t>(n)) - f);
  });
  r.nonincreasing = true;
  for (std::size_t n = 1; n < r.rates.size(); ++n)
    if (r.rates[n].hi > r.rates[n - 1].hi) r.nonincreasing = false;
  const auto lim = family.limit();
  if (!lim) {
    r.limit_rate = {kInf, kInf};
    r.verdict = Verdict::Fail;
    return r;
  }
  r.limit_rate = box_gauge(t, s, *lim - f);
  r.verdict = r.limit_rate.hi == 0.0 ? Verdict::Pass : Verdict::Fail;
  return r;
}

SamplingReport sample_rates(const OperatorFamily& family, const Multiplier& f, const CompactSetModel& s,
                            const AmbientGauge& t, const std::vector<Enclosure>& rates, int samples,
                            std::uint64_t seed, std::int64_t support) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::vector<double>> points(static_cast<std::size_t>(samples));
  for (auto& x : points) {
    x.resize(static_cast<std::size_t>(support));
    for (std::int64_t k = 0; k < support; ++k) x[static_cast<std::size_t>(k)] = s.envelope(k) * unit(rng);
  }
  std::vector<Multiplier> diffs;
  for (std::size_t n = 0; n < rates.size(); ++n) diffs.push_back(family.at(static_cast<std::int64_t>(n)) - f);

  std::vector<double> worst(points.size(), 0.0);
  std::vector<char> ok(points.size(), 1);
  parallel_for(points.size(), [&](std::size_t i) {
    std::vector<double> y(points[i].size());
    for (std::size_t n = 0; n < diffs.size(); ++n) {
      for (std::size_t k = 0; k < y.size(); ++k) y[k] = diffs[n](static_cast<std::int64_t>(k)) * points[i][k];
      const double g = vector_gauge(t, y);
      const double bound = rates[n].hi;
      if (g > bound * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) ok[i] = 0;
      worst[i] = std::max(worst[i], bound > 0.0 ? g / bound : (g > 0.0 ? kInf : 0.0));
    }
  });
  SamplingReport r;
  r.samples = samples;
  r.sound = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  for (double w : worst) r.worst_ratio = std::max(r.worst_ratio, w);
  return r;
}

PointwiseReport pointwise_vs_uniform_check(const OperatorFamily& family, const Multiplier& f,
                                           const CompactSetModel& s, const AmbientGauge& t,
                                           std::int64_t count) {
  const double sn = family.sup_norm();
  if (!std::isfinite(sn)) throw Error(ErrorKind::InvalidInput, "operator family is not equibounded");
  if (family.declared_bound > 0.0 && sn > family.declared_bound)
    throw Error(ErrorKind::InvalidInput, "operator family exceeds its declared bound");

  PointwiseReport r;
  r.uniform_report = uniform_convergence_on_set(family, f, s, t, count);
  r.uniform = r.uniform_report.verdict;

  const auto lim = family.limit();
  const Multiplier d = *lim - f;  // equibounded families have a limit
  const std::vector<std::vector<int>> patterns = {{1}, {1, -1}, {1, 0}, {0, 1}, {1, 0, -1}, {0, 0, 1, 1}};
  bool all_zero = true, some_positive = false;
  for (const auto& pat : patterns) {
    Enclosure e{0.0, 0.0};
    if (!d.is_zero() && !s.is_zero()) {
      double head = 0.0;
      for (std::int64_t k = 0; k < kPatternCoords; ++k) {
        if (pat[static_cast<std::size_t>(k) % pat.size()] == 0) continue;
        const double y = t.weight(k) * std::abs(d(k)) * s.envelope(k);
        if (y != 0.0) head = accumulate(t.kind, head, y);
      }
      // Beyond the explicit range, bound by the full box tail of d.
      Multiplier rest = d;
      rest.head.assign(static_cast<std::size_t>(kPatternCoords), 0.0);
      if (d.head.size() > rest.head.size())
        for (std::size_t k = rest.head.size(); k < d.head.size(); ++k) rest.head.push_back(d.head[k]);
      const Enclosure tail = box_gauge(t, s, rest);
      const double tail_raw = t.kind == AmbientKind::L2 ? tail.hi * tail.hi : tail.hi;
      e = finish(t.kind, head, {0.0, tail_raw});
    }
    r.pattern_limits.push_back(e);
    if (e.hi != 0.0) all_zero = false;
    if (e.lo > 0.0) some_positive = true;
  }
  r.pointwise = all_zero ? Verdict::Pass : (some_positive ? Verdict::Fail : Verdict::Inconclusive);
  if (r.pointwise != Verdict::Inconclusive && r.uniform != Verdict::Inconclusive && r.pointwise != r.uniform)
    throw Error(ErrorKind::InvariantViolation, "pointwise and uniform convergence disagree on an equibounded family");
  return r;
}

LocalApproxReport local_approx_property_check(const AmbientGauge& t, const CompactSetModel& s,
                                              double tol, std::int64_t rank_budget) {
  require_precompact(t, s);
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tolerance must be positive");
  LocalApproxReport r;
  r.t_scale = envelope_tail(t, s, -1).hi;
  r.reduction =
      "coordinate functionals separate points, so the local property on S with regularity gives the global one";
  const auto ok = [&](std::int64_t n) { return envelope_tail(t, s, n).hi <= tol; };

  // Smallest n >= -1 with rate(P_n) <= tol; rank = n + 1.
  constexpr std::int64_t kCap = std::int64_t{1} << 40;
  std::int64_t n = -1;
  if (!ok(-1)) {
    std::int64_t lo = -1, hi = 0;
    while (!ok(hi)) {
      if (hi >= kCap) throw Error(ErrorKind::BudgetExceeded, "required rank exceeds 2^40");
      lo = hi;
      hi = std::min(kCap, hi == 0 ? 1 : 2 * hi);
    }
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (ok(mid))
        hi = mid;
      else
        lo = mid;
    }
    n = hi;
  }
  r.rank = n + 1;
  if (r.rank > rank_budget)
    throw Error(ErrorKind::BudgetExceeded, "rank budget " + std::to_string(rank_budget) +
                                               " is insufficient; required rank " + std::to_string(r.rank));
  for (std::int64_t i = -1; i <= std::min<std::int64_t>(n, 255); ++i) r.rates.push_back(envelope_tail(t, s, i));
  r.final_rate = envelope_tail(t, s, n);
  return r;
}

}  // namespace borno
