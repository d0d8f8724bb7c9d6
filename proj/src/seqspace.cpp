#include "borno/seqspace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "borno/error.hpp"

namespace borno {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Monomial magnitude(const TailTerm& t) { return {std::abs(t.c), t.p, std::abs(t.rho)}; }

bool finite(double v) { return std::isfinite(v); }

// Gauge of the coordinates k >= start.
Enclosure gauge_from(const WeightedGauge& w, const ModelVector& x, std::int64_t start) {
  start = std::max<std::int64_t>(start, 0);
  const bool l1 = w.kind == GaugeKind::L1;
  const std::int64_t f = x.tail_start();
  double head = 0.0;
  for (std::int64_t k = start; k < f; ++k) {
    const double v = w.weight(k) * std::abs(x.head()[static_cast<std::size_t>(k)]);
    head = l1 ? head + v : std::max(head, v);
  }
  const auto combine = [&](Enclosure t) {
    return l1 ? Enclosure{head + t.lo, head + t.hi}
              : Enclosure{std::max(head, t.lo), std::max(head, t.hi)};
  };
  if (x.tails().empty()) return {head, head};

  const std::int64_t s = std::max(start, f);
  std::vector<Monomial> ms;
  for (const auto& t : x.tails()) ms.push_back(w.weight * magnitude(t));
  const auto tail_of = [&](const Monomial& m, std::int64_t from) {
    if (l1) return tail_sum(m, from);
    const double v = tail_sup(m, from);
    return Enclosure{v, v};
  };
  if (ms.size() == 1) return combine(tail_of(ms.front(), s));

  // Distinct tail terms cannot cancel asymptotically, so one divergent
  // magnitude makes the gauge infinite.
  for (const auto& m : ms)
    if (!finite(tail_of(m, s).hi)) return {kInf, kInf};

  double part = 0.0;
  std::int64_t k = s;
  for (std::int64_t len = 64;; len *= 2) {
    for (; k < s + len; ++k) {
      double v = 0.0;
      for (const auto& t : x.tails()) v += t.at(k);
      v = v == 0.0 ? 0.0 : w.weight(k) * std::abs(v);
      part = l1 ? part + v : std::max(part, v);
    }
    double rest = 0.0;
    for (const auto& m : ms) rest += tail_of(m, k).hi;
    if (rest <= 1e-16 * part || len >= (std::int64_t{1} << 20))
      return combine({part, l1 ? part + rest : std::max(part, rest)});
  }
}

}  // namespace

const char* to_string(GaugeKind k) { return k == GaugeKind::L1 ? "l1" : "sup"; }

const char* to_string(SupportModel s) {
  switch (s) {
    case SupportModel::Tails: return "tails";
    case SupportModel::FinitelySupported: return "finite";
    case SupportModel::Zero: return "zero";
  }
  return "unknown";
}

WeightedGauge WeightedGauge::l1(Monomial w) { return {w, GaugeKind::L1}; }
WeightedGauge WeightedGauge::sup(Monomial w) { return {w, GaugeKind::Sup}; }

double TailTerm::at(std::int64_t k) const {
  const double kk = static_cast<double>(k);
  return c * std::pow(kk + 1.0, p) * std::pow(rho, kk);
}

// ---------------------------------------------------------------- vectors

ModelVector::ModelVector(std::vector<double> head, std::vector<TailTerm> tails)
    : head_(std::move(head)), tails_(std::move(tails)) {
  normalize();
}

void ModelVector::normalize() {
  for (double v : head_)
    if (!finite(v)) throw Error(ErrorKind::InvalidInput, "non-finite coordinate");
  for (const auto& t : tails_)
    if (!finite(t.c) || !finite(t.p) || !finite(t.rho))
      throw Error(ErrorKind::InvalidInput, "non-finite tail term");
  std::erase_if(tails_, [](const TailTerm& t) { return t.c == 0.0; });
  if (std::any_of(tails_.begin(), tails_.end(), [](const TailTerm& t) { return t.rho == 0.0; })) {
    // rho = 0 only contributes at k = 0.
    if (head_.empty()) {
      double v = 0.0;
      for (const auto& t : tails_) v += t.at(0);
      head_.push_back(v);
    }
    std::erase_if(tails_, [](const TailTerm& t) { return t.rho == 0.0; });
  }
  std::sort(tails_.begin(), tails_.end(), [](const TailTerm& a, const TailTerm& b) {
    return a.p != b.p ? a.p < b.p : a.rho < b.rho;
  });
  std::vector<TailTerm> merged;
  for (const auto& t : tails_) {
    if (!merged.empty() && merged.back().p == t.p && merged.back().rho == t.rho)
      merged.back().c += t.c;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const TailTerm& t) { return t.c == 0.0; });
  tails_ = std::move(merged);
  if (tails_.empty())
    while (!head_.empty() && head_.back() == 0.0) head_.pop_back();
}

ModelVector ModelVector::unit(std::int64_t k, double c) {
  if (k < 0) throw Error(ErrorKind::InvalidInput, "negative coordinate index");
  std::vector<double> h(static_cast<std::size_t>(k) + 1, 0.0);
  h.back() = c;
  return ModelVector(std::move(h));
}

ModelVector ModelVector::closed_form(TailTerm t) { return ModelVector({}, {t}); }

double ModelVector::operator[](std::int64_t k) const {
  if (k < 0) return 0.0;
  if (k < tail_start()) return head_[static_cast<std::size_t>(k)];
  double v = 0.0;
  for (const auto& t : tails_) v += t.at(k);
  return v;
}

ModelVector ModelVector::with_head(std::size_t len) const {
  if (len <= head_.size() || tails_.empty()) return *this;
  ModelVector out = *this;
  for (std::size_t k = head_.size(); k < len; ++k) out.head_.push_back((*this)[static_cast<std::int64_t>(k)]);
  return out;
}

ModelVector ModelVector::truncated(std::int64_t n) const {
  if (n < 0) return {};
  const auto len = static_cast<std::size_t>(n) + 1;
  std::vector<double> h = with_head(len).head_;
  if (h.size() > len) h.resize(len);
  return ModelVector(std::move(h));
}

ModelVector operator+(const ModelVector& a, const ModelVector& b) {
  const std::size_t len = std::max(a.head().size(), b.head().size());
  std::vector<double> h = a.with_head(len).head();
  const std::vector<double> hb = b.with_head(len).head();
  h.resize(std::max(h.size(), hb.size()), 0.0);
  for (std::size_t k = 0; k < hb.size(); ++k) h[k] += hb[k];
  std::vector<TailTerm> t = a.tails();
  t.insert(t.end(), b.tails().begin(), b.tails().end());
  return ModelVector(std::move(h), std::move(t));
}

ModelVector operator*(double s, const ModelVector& a) {
  std::vector<double> h = a.head();
  for (double& v : h) v *= s;
  std::vector<TailTerm> t = a.tails();
  for (auto& term : t) term.c *= s;
  return ModelVector(std::move(h), std::move(t));
}

ModelVector operator-(const ModelVector& a, const ModelVector& b) { return a + (-1.0) * b; }

bool operator==(const ModelVector& a, const ModelVector& b) { return (a - b).is_zero(); }

Enclosure gauge(const WeightedGauge& w, const ModelVector& x) { return gauge_from(w, x, 0); }

Enclosure tail_gauge(const WeightedGauge& w, const ModelVector& x, std::int64_t n) {
  return gauge_from(w, x, n + 1);
}

// ----------------------------------------------------------------- spaces

const WeightedGauge& ModelSpace::disk(std::size_t k) const {
  if (k >= disks.size()) throw Error(ErrorKind::InvalidInput, "disk index out of range");
  return disks[k];
}

bool ModelSpace::contains(const ModelVector& v) const {
  switch (support) {
    case SupportModel::Tails: return true;
    case SupportModel::FinitelySupported: return v.finitely_supported();
    case SupportModel::Zero: return v.is_zero();
  }
  return false;
}

double absorption_constant(const WeightedGauge& inner, const WeightedGauge& outer) {
  const Monomial ratio{outer.weight.c / inner.weight.c, outer.weight.p - inner.weight.p,
                       outer.weight.b / inner.weight.b};
  if (inner.kind == GaugeKind::Sup && outer.kind == GaugeKind::L1) return tail_sum(ratio, 0).hi;
  return tail_sup(ratio, 0);
}

bool is_directed(const ModelSpace& space) {
  const std::size_t n = space.disks.size();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      bool found = false;
      for (std::size_t m = 0; m < n && !found; ++m)
        found = finite(absorption_constant(space.disks[j], space.disks[m])) &&
                finite(absorption_constant(space.disks[k], space.disks[m]));
      if (!found) return false;
    }
  return true;
}

// -------------------------------------------------------------- sequences

SeqTerm SeqTerm::geometric(double c, double r, ModelVector v) {
  SeqTerm t;
  t.kind = Kind::Geometric;
  t.c = c;
  t.r = r;
  t.v = std::move(v);
  return t;
}

SeqTerm SeqTerm::linear(double c, ModelVector v) {
  SeqTerm t;
  t.kind = Kind::Linear;
  t.c = c;
  t.v = std::move(v);
  return t;
}

SeqTerm SeqTerm::truncation(double c, ModelVector u, std::int64_t a, std::int64_t s) {
  if (a < 1) throw Error(ErrorKind::InvalidInput, "truncation step must be >= 1");
  SeqTerm t;
  t.kind = Kind::Truncation;
  t.c = c;
  t.v = std::move(u);
  t.a = a;
  t.s = s;
  return t;
}

SeqTerm SeqTerm::moving(double c, std::int64_t a, std::int64_t s) {
  if (a < 1) throw Error(ErrorKind::InvalidInput, "moving index step must be >= 1");
  SeqTerm t;
  t.kind = Kind::Moving;
  t.c = c;
  t.a = a;
  t.s = s;
  return t;
}

ModelVector SeqTerm::at(std::int64_t n) const {
  switch (kind) {
    case Kind::Geometric: return (c * std::pow(r, static_cast<double>(n))) * v;
    case Kind::Linear: return (c * static_cast<double>(n)) * v;
    case Kind::Truncation: return c * v.truncated(a * n + s);
    case Kind::Moving: {
      const std::int64_t k = a * n + s;
      return k < 0 ? ModelVector{} : ModelVector::unit(k, c);
    }
  }
  return {};
}

SequenceModel::SequenceModel(std::vector<ModelVector> prefix, std::vector<SeqTerm> tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  for (const auto& t : tail_)
    if (!finite(t.c) || !finite(t.r)) throw Error(ErrorKind::InvalidInput, "non-finite sequence term");
}

SequenceModel SequenceModel::constant(ModelVector v) {
  return SequenceModel({}, {SeqTerm::geometric(1.0, 1.0, std::move(v))});
}

ModelVector SequenceModel::at(std::int64_t n) const {
  if (n < 0) throw Error(ErrorKind::InvalidInput, "negative sequence index");
  if (n < tail_start()) return prefix_[static_cast<std::size_t>(n)];
  ModelVector out;
  for (const auto& t : tail_) out = out + t.at(n);
  return out;
}

SequenceModel SequenceModel::subsequence(std::int64_t a, std::int64_t b) const {
  if (a < 1 || b < 0) throw Error(ErrorKind::InvalidInput, "subsequence needs a >= 1, b >= 0");
  std::vector<ModelVector> prefix;
  for (std::int64_t j = 0; a * j + b < tail_start(); ++j) prefix.push_back(at(a * j + b));
  std::vector<SeqTerm> terms;
  for (const auto& t : tail_) {
    switch (t.kind) {
      case SeqTerm::Kind::Geometric:
        terms.push_back(SeqTerm::geometric(t.c * std::pow(t.r, static_cast<double>(b)),
                                           std::pow(t.r, static_cast<double>(a)), t.v));
        break;
      case SeqTerm::Kind::Linear:
        terms.push_back(SeqTerm::linear(t.c * static_cast<double>(a), t.v));
        if (b != 0) terms.push_back(SeqTerm::geometric(t.c * static_cast<double>(b), 1.0, t.v));
        break;
      case SeqTerm::Kind::Truncation:
        terms.push_back(SeqTerm::truncation(t.c, t.v, t.a * a, t.a * b + t.s));
        break;
      case SeqTerm::Kind::Moving:
        terms.push_back(SeqTerm::moving(t.c, t.a * a, t.a * b + t.s));
        break;
    }
  }
  return SequenceModel(std::move(prefix), std::move(terms));
}

std::optional<ModelVector> SequenceModel::formal_limit() const {
  ModelVector out;
  for (const auto& t : tail_) {
    if (t.c == 0.0) continue;
    switch (t.kind) {
      case SeqTerm::Kind::Geometric:
        if (t.v.is_zero() || std::abs(t.r) < 1.0) break;
        if (t.r != 1.0) return std::nullopt;
        out = out + t.c * t.v;
        break;
      case SeqTerm::Kind::Linear:
        if (!t.v.is_zero()) return std::nullopt;
        break;
      case SeqTerm::Kind::Truncation: out = out + t.c * t.v; break;
      case SeqTerm::Kind::Moving: break;
    }
  }
  return out;
}

SequenceModel operator+(const SequenceModel& x, const SequenceModel& y) {
  const std::int64_t n = std::max(x.tail_start(), y.tail_start());
  std::vector<ModelVector> prefix;
  for (std::int64_t i = 0; i < n; ++i) prefix.push_back(x.at(i) + y.at(i));
  std::vector<SeqTerm> terms = x.tail();
  terms.insert(terms.end(), y.tail().begin(), y.tail().end());
  return SequenceModel(std::move(prefix), std::move(terms));
}

SequenceModel operator*(double s, const SequenceModel& x) {
  std::vector<ModelVector> prefix;
  for (const auto& v : x.prefix()) prefix.push_back(s * v);
  std::vector<SeqTerm> terms = x.tail();
  for (auto& t : terms) t.c *= s;
  return SequenceModel(std::move(prefix), std::move(terms));
}

SequenceModel operator-(const SequenceModel& x, const SequenceModel& y) { return x + (-1.0) * y; }

// --------------------------------------------------------- null sequences

double NullTerm::at(std::int64_t m) const {
  const double mm = static_cast<double>(m);
  if (kind == Kind::Geometric) return a * std::pow(q, mm);
  return a / std::pow(alpha * mm + beta, p);
}

double NullTerm::back_ratio(std::int64_t m) const {
  if (kind == Kind::Geometric) return 1.0 / q;
  const double mm = static_cast<double>(m);
  return std::pow((alpha * (mm + 1.0) + beta) / (alpha * mm + beta), p);
}

NullSequence::NullSequence(std::vector<NullTerm> terms) {
  for (const auto& t : terms) {
    if (!(t.a >= 0.0) || !finite(t.a)) throw Error(ErrorKind::InvalidInput, "null term needs a >= 0");
    if (t.kind == NullTerm::Kind::Geometric && !(t.q > 0.0 && t.q <= 1.0))
      throw Error(ErrorKind::InvalidInput, "geometric null term needs 0 < q <= 1");
    if (t.kind == NullTerm::Kind::InversePoly && !(t.alpha >= 0.0 && t.beta > 0.0 && t.p >= 0.0))
      throw Error(ErrorKind::InvalidInput, "inverse-polynomial null term needs alpha >= 0, beta > 0, p >= 0");
    if (t.a > 0.0) terms_.push_back(t);
  }
}

NullSequence NullSequence::geometric(double a, double q) {
  NullTerm t;
  t.kind = NullTerm::Kind::Geometric;
  t.a = a;
  t.q = q;
  return NullSequence({t});
}

NullSequence NullSequence::inverse_poly(double a, double alpha, double beta, double p) {
  NullTerm t;
  t.kind = NullTerm::Kind::InversePoly;
  t.a = a;
  t.alpha = alpha;
  t.beta = beta;
  t.p = p;
  return NullSequence({t});
}

double NullSequence::at(std::int64_t m) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.at(m);
  return v;
}

double NullSequence::back_ratio(std::int64_t m) const {
  if (terms_.size() == 1) return terms_.front().back_ratio(m);
  // Every term is log-convex, hence so is the sum, and eps_m / eps_{m+1} is
  // itself nonincreasing.
  const double next = at(m + 1);
  return next > 0.0 ? at(m) / next : 1.0;
}

NullSequence NullSequence::subsequence(std::int64_t a, std::int64_t b) const {
  std::vector<NullTerm> out;
  for (auto t : terms_) {
    if (t.kind == NullTerm::Kind::Geometric) {
      t.a *= std::pow(t.q, static_cast<double>(b));
      t.q = std::pow(t.q, static_cast<double>(a));
    } else {
      t.beta += t.alpha * static_cast<double>(b);
      t.alpha *= static_cast<double>(a);
    }
    out.push_back(t);
  }
  return NullSequence(std::move(out));
}

NullSequence NullSequence::sqrt() const {
  std::vector<NullTerm> out;
  for (auto t : terms_) {
    t.a = std::sqrt(t.a);
    if (t.kind == NullTerm::Kind::Geometric)
      t.q = std::sqrt(t.q);
    else
      t.p *= 0.5;
    out.push_back(t);
  }
  return NullSequence(std::move(out));
}

std::string NullSequence::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (i) os << " + ";
    if (t.kind == NullTerm::Kind::Geometric)
      os << t.a << "*" << t.q << "^m";
    else
      os << t.a << "/(" << t.alpha << "*m+" << t.beta << ")^" << t.p;
  }
  return os.str();
}

NullSequence operator+(const NullSequence& x, const NullSequence& y) {
  std::vector<NullTerm> t = x.terms();
  t.insert(t.end(), y.terms().begin(), y.terms().end());
  return NullSequence(std::move(t));
}

NullSequence operator*(double s, const NullSequence& x) {
  if (!(s >= 0.0)) throw Error(ErrorKind::InvalidInput, "null sequences scale by s >= 0");
  std::vector<NullTerm> t = x.terms();
  for (auto& term : t) term.a *= s;
  return NullSequence(std::move(t));
}

// --------------------------------------------------------------- deciding

namespace {

// Upper bound B(m) on one term's contribution for m >= N, and a bound on
// B(m+1)/B(m) valid and nonincreasing for m >= regime.
struct TermBound {
  std::function<double(std::int64_t)> bound;
  std::function<double(std::int64_t)> ratio;
  std::int64_t regime = 0;
};

// Gauge of the part of u with index > K, as a sum of per-tail bounds so the
// shift ratios apply to it.
TermBound truncation_bound(const WeightedGauge& w, const ModelVector& u, double c,
                           std::int64_t a, std::int64_t s) {
  const bool l1 = w.kind == GaugeKind::L1;
  const double ac = std::abs(c);
  std::vector<Monomial> ms;
  for (const auto& t : u.tails()) ms.push_back(w.weight * magnitude(t));
  const std::int64_t f = u.tail_start();
  TermBound tb;
  tb.bound = [=](std::int64_t m) {
    const std::int64_t k = a * m + s;
    double head = 0.0;
    for (std::int64_t i = std::max<std::int64_t>(k + 1, 0); i < f; ++i) {
      const double v = w.weight(i) * std::abs(u.head()[static_cast<std::size_t>(i)]);
      head = l1 ? head + v : std::max(head, v);
    }
    double tail = 0.0;
    const std::int64_t from = std::max(k + 1, f);
    for (const auto& mono : ms) tail += l1 ? tail_sum(mono, from).hi : tail_sup(mono, from);
    return ac * (l1 ? head + tail : std::max(head, tail));
  };
  tb.ratio = [=](std::int64_t m) {
    double r = 0.0;
    for (const auto& mono : ms) r = std::max(r, shift_ratio_bound(mono, a * m + s + 1, a));
    return r;
  };
  // Past this index the head no longer contributes.
  const std::int64_t need = f - 1 - s;
  tb.regime = need <= 0 ? 0 : (need + a - 1) / a;
  return tb;
}

TermBound moving_bound(const WeightedGauge& w, double c, std::int64_t a, std::int64_t s,
                       bool cauchy) {
  const bool l1 = w.kind == GaugeKind::L1;
  const double ac = std::abs(c);
  const Monomial wt = w.weight;
  TermBound tb;
  tb.bound = [=](std::int64_t m) {
    const std::int64_t k = a * m + s;
    if (k < 0) return cauchy ? ac * tail_sup(wt, 0) : 0.0;
    const double here = wt(k);
    if (!cauchy) return ac * here;
    const double later = tail_sup(wt, k + 1);
    return ac * (l1 ? here + later : std::max(here, later));
  };
  tb.ratio = [=](std::int64_t m) { return shift_ratio_bound(wt, std::max<std::int64_t>(a * m + s, 0), a); };
  tb.regime = s >= 0 ? 0 : (-s + a - 1) / a;
  return tb;
}

TermBound geometric_bound(double g, double r, bool cauchy) {
  const double ar = std::abs(r);
  const double factor = cauchy && r < 0.0 ? 1.0 + ar : 1.0;
  TermBound tb;
  tb.bound = [=](std::int64_t m) {
    if (g == 0.0) return 0.0;
    return g * factor * std::pow(ar, static_cast<double>(m));
  };
  tb.ratio = [=](std::int64_t) { return ar; };
  return tb;
}

TermBound constant_bound(double g) {
  TermBound tb;
  tb.bound = [=](std::int64_t) { return g; };
  tb.ratio = [=](std::int64_t) { return g == 0.0 ? 0.0 : 1.0; };
  return tb;
}

TermBound infinite_bound() {
  TermBound tb;
  tb.bound = [](std::int64_t) { return kInf; };
  tb.ratio = [](std::int64_t) { return kInf; };
  return tb;
}

struct Engine {
  std::int64_t n0 = 0;                                 // tail start
  std::vector<TermBound> terms;
  const NullSequence* eps = nullptr;
  std::function<double(std::int64_t)> prefix_bound;    // m < n0
  std::function<bool(std::int64_t, SequenceDecision&)> witness;  // scan up to limit

  double total(std::int64_t m) const {
    double b = 0.0;
    for (const auto& t : terms) b += t.bound(m);
    return b;
  }

  SequenceDecision run(std::int64_t scan_limit) const {
    SequenceDecision d;
    std::int64_t fail_at = -1;
    bool unbounded = false;
    for (const auto& t : terms)
      if (!finite(t.bound(n0))) unbounded = true;

    if (!unbounded) {
      std::int64_t regime = n0;
      for (const auto& t : terms) regime = std::max(regime, t.regime);
      std::int64_t m = regime;
      const std::int64_t stop = regime + kExplicitBudget;
      for (; m <= stop; ++m) {
        double r = 0.0;
        for (const auto& t : terms) r = std::max(r, t.ratio(m));
        if (r * eps->back_ratio(m) <= 1.0) break;
      }
      if (m > stop) {
        d.note = "no ratio threshold within the explicit budget";
      } else {
        d.threshold = m;
        bool ok = true;
        for (std::int64_t i = n0; i <= m && ok; ++i) {
          const double b = total(i), e = eps->at(i);
          d.worst_ratio = std::max(d.worst_ratio, e > 0.0 ? b / e : (b > 0.0 ? kInf : 0.0));
          if (b > e) {
            ok = false;
            fail_at = i;
          }
        }
        for (std::int64_t i = 0; i < n0 && ok; ++i) {
          const double b = prefix_bound(i), e = eps->at(i);
          d.worst_ratio = std::max(d.worst_ratio, e > 0.0 ? b / e : (b > 0.0 ? kInf : 0.0));
          if (b > e) {
            ok = false;
            fail_at = i;
          }
        }
        if (ok) {
          d.decision = Decision::Yes;
          return d;
        }
        d.note = "closed-form bound exceeds eps at index " + std::to_string(fail_at);
      }
    } else {
      d.note = "gauge of the tail is unbounded";
    }

    if (witness(std::max(scan_limit, fail_at + 2), d)) {
      d.decision = Decision::No;
      d.note.clear();
      return d;
    }
    d.decision = Decision::Inconclusive;
    d.threshold = -1;
    return d;
  }
};

void require_in_space(const ModelSpace& space, const SequenceModel& x) {
  for (const auto& v : x.prefix())
    if (!space.contains(v)) throw Error(ErrorKind::InvalidInput, "sequence element outside the model space");
  for (const auto& t : x.tail()) {
    if (t.kind == SeqTerm::Kind::Moving) {
      if (space.support == SupportModel::Zero && t.c != 0.0)
        throw Error(ErrorKind::InvalidInput, "sequence element outside the model space");
      continue;
    }
    if (t.kind != SeqTerm::Kind::Truncation && !space.contains(t.v))
      throw Error(ErrorKind::InvalidInput, "sequence element outside the model space");
    if (t.kind == SeqTerm::Kind::Truncation && space.support == SupportModel::Zero && !t.v.is_zero())
      throw Error(ErrorKind::InvalidInput, "sequence element outside the model space");
  }
}

}  // namespace

SequenceDecision cauchy_check(const ModelSpace& space, const SequenceModel& x,
                              std::size_t disk, const NullSequence& eps) {
  const WeightedGauge& w = space.disk(disk);
  require_in_space(space, x);
  Engine e;
  e.n0 = x.tail_start();
  e.eps = &eps;
  for (const auto& t : x.tail()) {
    if (t.c == 0.0) continue;
    switch (t.kind) {
      case SeqTerm::Kind::Geometric: {
        if (t.r == 1.0 || t.v.is_zero()) break;
        if (std::abs(t.r) > 1.0) {
          e.terms.push_back(infinite_bound());
          break;
        }
        const double g = std::abs(t.c) * gauge(w, t.v).hi;
        e.terms.push_back(t.r == -1.0 ? constant_bound(2.0 * g) : geometric_bound(g, t.r, true));
        break;
      }
      case SeqTerm::Kind::Linear:
        if (!t.v.is_zero()) e.terms.push_back(infinite_bound());
        break;
      case SeqTerm::Kind::Truncation:
        e.terms.push_back(truncation_bound(w, t.v, t.c, t.a, t.s));
        break;
      case SeqTerm::Kind::Moving: e.terms.push_back(moving_bound(w, t.c, t.a, t.s, true)); break;
    }
  }
  e.prefix_bound = [&](std::int64_t m) {
    const ModelVector xm = x.at(m);
    double worst = 0.0;
    for (std::int64_t n = m + 1; n < e.n0; ++n) worst = std::max(worst, gauge(w, x.at(n) - xm).hi);
    return std::max(worst, gauge(w, x.at(e.n0) - xm).hi + e.total(e.n0));
  };
  e.witness = [&](std::int64_t limit, SequenceDecision& d) {
    // Adjacent pairs first, then widening gaps.
    for (std::int64_t gap = 1; gap <= 64; gap *= 2)
      for (std::int64_t m = 0; m <= limit; ++m) {
        const Enclosure g = gauge(w, x.at(m + gap) - x.at(m));
        const double em = eps.at(m);
        if (g.lo > em) {
          d.witness_m = m;
          d.witness_n = m + gap;
          d.witness_gauge = g;
          d.witness_eps = em;
          return true;
        }
      }
    return false;
  };
  return e.run(std::max(space.horizon, e.n0 + space.horizon));
}

SequenceDecision convergence_check(const ModelSpace& space, const SequenceModel& x,
                                   const ModelVector& limit, std::size_t disk,
                                   const NullSequence& eps) {
  const WeightedGauge& w = space.disk(disk);
  require_in_space(space, x);
  Engine e;
  e.n0 = x.tail_start();
  e.eps = &eps;
  ModelVector constant = (-1.0) * limit;
  for (const auto& t : x.tail()) {
    if (t.c == 0.0) continue;
    switch (t.kind) {
      case SeqTerm::Kind::Geometric: {
        if (t.v.is_zero()) break;
        if (t.r == 1.0) {
          constant = constant + t.c * t.v;
          break;
        }
        if (std::abs(t.r) > 1.0) {
          e.terms.push_back(infinite_bound());
          break;
        }
        const double g = std::abs(t.c) * gauge(w, t.v).hi;
        e.terms.push_back(t.r == -1.0 ? constant_bound(g) : geometric_bound(g, t.r, false));
        break;
      }
      case SeqTerm::Kind::Linear:
        if (!t.v.is_zero()) e.terms.push_back(infinite_bound());
        break;
      case SeqTerm::Kind::Truncation:
        constant = constant + t.c * t.v;
        e.terms.push_back(truncation_bound(w, t.v, t.c, t.a, t.s));
        break;
      case SeqTerm::Kind::Moving: e.terms.push_back(moving_bound(w, t.c, t.a, t.s, false)); break;
    }
  }
  if (!constant.is_zero()) e.terms.push_back(constant_bound(gauge(w, constant).hi));
  e.prefix_bound = [&](std::int64_t n) { return gauge(w, x.at(n) - limit).hi; };
  e.witness = [&](std::int64_t lim, SequenceDecision& d) {
    for (std::int64_t n = 0; n <= lim; ++n) {
      const Enclosure g = gauge(w, x.at(n) - limit);
      const double en = eps.at(n);
      if (g.lo > en) {
        d.witness_m = n;
        d.witness_n = n;
        d.witness_gauge = g;
        d.witness_eps = en;
        return true;
      }
    }
    return false;
  };
  return e.run(std::max(space.horizon, e.n0 + space.horizon));
}

}  // namespace borno
