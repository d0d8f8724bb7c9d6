#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "borno/error.hpp"
#include "borno/parallel.hpp"
#include "borno/seqspace.hpp"

namespace borno {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// lambda(k + 1) as a monomial in k.
Monomial shifted(const ScaleLaw& l) { return {l.c * l.b, l.p, l.b}; }

// Geometric eps = 2^j theta^m certifying x as S-Cauchy, smallest j first.
std::optional<NullSequence> certify(const ModelSpace& space, const SequenceModel& x,
                                    std::size_t disk) {
  for (double theta : {0.75, 0.9, 0.99})
    for (int j = -10; j <= 60; j += 2) {
      NullSequence eps = NullSequence::geometric(std::ldexp(1.0, j), theta);
      if (cauchy_check(space, x, disk, eps).decision == Decision::Yes) return eps;
    }
  return std::nullopt;
}

std::optional<std::size_t> absorbing_disk(const ModelSpace& space,
                                          const std::vector<std::size_t>& used) {
  for (std::size_t m = 0; m < space.disks.size(); ++m) {
    bool all = true;
    for (std::size_t k : used)
      all = all && std::isfinite(absorption_constant(space.disk(k), space.disks[m]));
    if (all) return m;
  }
  return std::nullopt;
}

std::vector<std::size_t> used_disks(const DiskSequence& seq) {
  std::vector<std::size_t> used = seq.explicit_disks;
  used.push_back(seq.base);
  return used;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------- metrizability

double ScaleLaw::operator()(std::int64_t n) const {
  const double nn = static_cast<double>(n);
  return c * std::pow(nn, p) * std::pow(b, nn);
}

std::size_t DiskSequence::disk_index(std::int64_t n) const {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "disk sequences start at n = 1");
  const auto k = static_cast<std::size_t>(n);
  return k <= explicit_disks.size() ? explicit_disks[k - 1] : base;
}

double DiskSequence::scale_at(std::int64_t n) const {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "disk sequences start at n = 1");
  return static_cast<std::size_t>(n) <= explicit_disks.size() ? 1.0 : scale(n);
}

double MetrizabilityReport::eps(std::int64_t n, const DiskSequence& seq) const {
  const double two = std::ldexp(1.0, static_cast<int>(-n));
  if (static_cast<std::size_t>(n) <= absorption.size()) return two / absorption[static_cast<std::size_t>(n) - 1];
  return two / (seq.scale(n) * base_absorption);
}

MetrizabilityReport metrizability_scalars(const ModelSpace& space, const DiskSequence& seq) {
  if (!(seq.scale.c > 0.0 && seq.scale.b > 0.0))
    throw Error(ErrorKind::InvalidInput, "scale law needs c > 0 and b > 0");
  MetrizabilityReport r;
  const auto used = used_disks(seq);
  for (std::size_t k : used) (void)space.disk(k);
  const auto m = absorbing_disk(space, used);
  if (!m) {
    r.verdict = Verdict::Inconclusive;
    r.proof = "no disk of the family absorbs every S_n; the family may be too small";
    return r;
  }
  r.absorbing_disk = *m;
  const WeightedGauge& target = space.disk(*m);
  for (std::size_t k : seq.explicit_disks) r.absorption.push_back(absorption_constant(space.disk(k), target));
  r.base_absorption = absorption_constant(space.disk(seq.base), target);
  const std::int64_t shown = static_cast<std::int64_t>(seq.explicit_disks.size()) + 8;
  for (std::int64_t n = 1; n <= shown; ++n) r.eps_head.push_back(r.eps(n, seq));
  r.multiple = 1.0;
  std::ostringstream os;
  os << "S_n ⊆ c_n S_" << *m << " with c_n read off the weight ratios";
  if (!seq.explicit_disks.empty()) os << " for n <= " << seq.explicit_disks.size();
  os << ", c_n = lambda(n) * " << fmt(r.base_absorption) << " beyond; eps_n = 2^-n / c_n gives "
     << "gauge_" << *m << "(sum_{n<=N} eps_n x_n) <= sum_n 2^-n <= 1";
  r.proof = os.str();
  r.verdict = Verdict::Pass;
  return r;
}

SeriesReport strengthened_series_check(const ModelSpace& space, const DiskSequence& seq,
                                       const NullSequence& eps) {
  SeriesReport r;
  const auto m = absorbing_disk(space, used_disks(seq));
  if (!m) {
    r.verdict = Verdict::Inconclusive;
    r.proof = "no disk of the family absorbs every S_n";
    return r;
  }
  r.absorbing_disk = *m;
  const WeightedGauge& target = space.disk(*m);
  const auto l = static_cast<std::int64_t>(seq.explicit_disks.size());
  double explicit_part = 0.0;
  for (std::int64_t n = 1; n <= l; ++n)
    explicit_part += eps.at(n) * absorption_constant(space.disk(seq.disk_index(n)), target);

  // sum_{n > L} eps_n lambda(n) as monomials in k = n - 1 >= L.
  const Monomial lam = shifted(seq.scale);
  double tail = 0.0;
  for (const auto& t : eps.terms()) {
    Monomial mono;
    if (t.kind == NullTerm::Kind::Geometric) {
      mono = {t.a * t.q * lam.c, lam.p, t.q * lam.b};
    } else if (t.alpha == 0.0) {
      mono = {t.a * std::pow(t.beta, -t.p) * lam.c, lam.p, lam.b};
    } else {
      // (alpha n + beta)^-p <= kappa n^-p for n > L, kappa from either end.
      const double first = static_cast<double>(l + 1);
      const double kappa = std::max(std::pow(first / (t.alpha * first + t.beta), t.p),
                                    std::pow(t.alpha, -t.p));
      mono = {t.a * kappa * lam.c, lam.p - t.p, lam.b};
    }
    tail += tail_sum(mono, l).hi;
  }
  const double base = absorption_constant(space.disk(seq.base), target);
  r.bound = explicit_part + (tail == 0.0 ? 0.0 : base * tail);
  std::ostringstream os;
  if (std::isfinite(r.bound)) {
    r.verdict = Verdict::Pass;
    os << "gauge_" << *m << "(sum_n lambda_n x_n) <= sum_n eps_n c_n <= " << fmt(r.bound);
  } else {
    r.verdict = Verdict::Fail;
    os << "comparison series sum_n eps_n c_n diverges";
  }
  r.proof = os.str();
  return r;
}

// ----------------------------------------------------------- completeness

CompletenessReport completeness_check(const ModelSpace& space) {
  CompletenessReport rep;
  rep.disks.resize(space.disks.size());
  parallel_for(space.disks.size(), [&](std::size_t k) {
    DiskCompleteness& d = rep.disks[k];
    d.disk = k;
    const WeightedGauge& w = space.disks[k];
    d.symbolic_complete = space.support != SupportModel::FinitelySupported;

    std::vector<SequenceModel> battery;
    if (space.support == SupportModel::Zero) {
      battery.push_back(SequenceModel::constant({}));
      battery.push_back(SequenceModel({ModelVector{}}, {}));
    } else {
      const double lambda = 0.5 / std::max(1.0, w.weight.b);
      const ModelVector u = ModelVector::closed_form({1.0, 0.0, lambda});
      const ModelVector e0 = ModelVector::unit(0), e1 = ModelVector::unit(1);
      battery.push_back(SequenceModel({}, {SeqTerm::truncation(1.0, u)}));
      battery.push_back(SequenceModel({}, {SeqTerm::geometric(1.0, 0.5, e0), SeqTerm::geometric(1.0, 1.0, e1)}));
      battery.push_back(SequenceModel::constant(e0 + 2.0 * ModelVector::unit(2)));
      battery.push_back(SequenceModel({}, {SeqTerm::truncation(1.0, u, 2, 1)}));
      battery.push_back(SequenceModel({e1}, {SeqTerm::geometric(1.0, -0.5, ModelVector::unit(3))}));
      if (space.support == SupportModel::Tails) {
        battery.push_back(SequenceModel::constant(u));
        battery.push_back(SequenceModel({}, {SeqTerm::geometric(1.0, 0.5, u)}));
      }
    }

    d.direct_complete = true;
    for (const auto& x : battery) {
      const auto eps = certify(space, x, k);
      if (!eps) continue;
      ++d.battery_size;
      const auto lim = x.formal_limit();
      // Limits are unique in a weighted model, so the formal limit is the only
      // candidate.
      const bool converges = lim && space.contains(*lim) &&
                             convergence_check(space, x, *lim, k, *eps).decision == Decision::Yes;
      if (!converges) {
        d.direct_complete = false;
        if (!d.witness) {
          d.witness = x;
          d.witness_eps = *eps;
        }
      }
    }
    if (d.battery_size == 0) d.direct_complete = false;
    if (d.symbolic_complete)
      d.note = space.support == SupportModel::Zero
                   ? "only the zero sequence is admitted"
                   : "S-Cauchy closed forms converge in S to their coordinatewise limit, which the model admits";
    else
      d.note = "the coordinatewise limit of the witness has infinite support";
  });
  rep.complete = std::all_of(rep.disks.begin(), rep.disks.end(),
                             [](const DiskCompleteness& d) { return d.symbolic_complete; });
  rep.cross_validated = std::all_of(rep.disks.begin(), rep.disks.end(), [](const DiskCompleteness& d) {
    return d.symbolic_complete == d.direct_complete;
  });
  return rep;
}

// ------------------------------------------------------------- completion

Completion::Completion(ModelSpace space, std::size_t disk) : space_(std::move(space)), disk_(disk) {
  (void)space_.disk(disk_);
}

CompletionElement Completion::make(SequenceModel rep, NullSequence eps) const {
  const SequenceDecision d = cauchy_check(space_, rep, disk_, eps);
  if (d.decision != Decision::Yes)
    throw Error(ErrorKind::InvalidInput, "representative is not certified Cauchy (" +
                                             std::string(to_string(d.decision)) + ")");
  if (!rep.formal_limit())
    throw Error(ErrorKind::InvalidInput, "representative has no coordinatewise limit");
  return {std::move(rep), std::move(eps), d.threshold};
}

CompletionElement Completion::embed(const ModelVector& v) const {
  if (!space_.contains(v)) throw Error(ErrorKind::InvalidInput, "vector outside the model space");
  return make(SequenceModel::constant(v), NullSequence::geometric(1.0, 0.5));
}

CompletionElement Completion::from_limit(const ModelVector& u) const {
  SequenceModel rep({}, {SeqTerm::truncation(1.0, u)});
  auto eps = certify(space_, rep, disk_);
  if (!eps) throw Error(ErrorKind::InvalidInput, "truncations of the vector are not certified Cauchy");
  return make(std::move(rep), std::move(*eps));
}

CompletionElement Completion::add(const CompletionElement& x, const CompletionElement& y) const {
  return make(x.rep + y.rep, x.eps + y.eps);
}

CompletionElement Completion::scale(double s, const CompletionElement& x) const {
  return make(s * x.rep, std::abs(s) * x.eps);
}

ModelVector Completion::limit(const CompletionElement& x) const {
  auto l = x.rep.formal_limit();
  if (!l) throw Error(ErrorKind::InvalidInput, "representative has no coordinatewise limit");
  return *l;
}

Comparison Completion::compare(const CompletionElement& x, const CompletionElement& y) const {
  const ModelVector d = limit(x) - limit(y);
  return {d.is_zero(), gauge(space_.disk(disk_), d)};
}

bool Completion::equal(const CompletionElement& x, const CompletionElement& y) const {
  return compare(x, y).equal;
}

Enclosure Completion::gauge_in_quotient(const CompletionElement& x) const {
  return gauge(space_.disk(disk_), limit(x));
}

// ------------------------------------------------------------------- maps

CoordinateMap CoordinateMap::shift(double declared) {
  CoordinateMap f;
  f.kind = Kind::Shift;
  f.declared_bound = declared;
  return f;
}

CoordinateMap CoordinateMap::diag(Monomial d, double declared) {
  CoordinateMap f;
  f.kind = Kind::Diagonal;
  f.diagonal = d;
  f.declared_bound = declared;
  return f;
}

CoordinateMap CoordinateMap::summation(double declared) {
  CoordinateMap f;
  f.kind = Kind::Summation;
  f.declared_bound = declared;
  return f;
}

ModelVector CoordinateMap::apply(const ModelVector& x) const {
  switch (kind) {
    case Kind::Shift: {
      std::vector<double> h;
      if (x.head().size() > 1) h.assign(x.head().begin() + 1, x.head().end());
      std::vector<TailTerm> t;
      for (const auto& term : x.tails()) {
        if (term.p != 0.0) throw Error(ErrorKind::Unsupported, "shift of a polynomially weighted tail");
        t.push_back({term.c * term.rho, 0.0, term.rho});
      }
      return ModelVector(std::move(h), std::move(t));
    }
    case Kind::Diagonal: {
      std::vector<double> h = x.head();
      for (std::size_t k = 0; k < h.size(); ++k) h[k] *= diagonal(static_cast<std::int64_t>(k));
      std::vector<TailTerm> t;
      for (const auto& term : x.tails())
        t.push_back({term.c * diagonal.c, term.p + diagonal.p, term.rho * diagonal.b});
      return ModelVector(std::move(h), std::move(t));
    }
    case Kind::Summation: {
      double v = 0.0;
      for (double c : x.head()) v += c;
      const auto f = static_cast<double>(x.tail_start());
      for (const auto& term : x.tails()) {
        if (std::abs(term.rho) >= 1.0) throw Error(ErrorKind::Unbounded, "summation of a divergent tail");
        if (term.p == 0.0) {
          v += term.c * std::pow(term.rho, f) / (1.0 - term.rho);
        } else {
          if (term.rho < 0.0) throw Error(ErrorKind::Unsupported, "summation of an alternating weighted tail");
          const Enclosure s = tail_sum({1.0, term.p, term.rho}, x.tail_start());
          v += term.c * 0.5 * (s.lo + s.hi);
        }
      }
      return ModelVector({v});
    }
  }
  return {};
}

ModelSpace scalar_space() {
  ModelSpace s;
  s.disks = {WeightedGauge::l1()};
  s.support = SupportModel::FinitelySupported;
  s.horizon = 1;
  return s;
}

namespace {

// sup_k mu(k), or sum_k mu(k) when a sup gauge feeds an l1 gauge.
double kind_bound(const Monomial& mu, GaugeKind source, GaugeKind target) {
  if (source == GaugeKind::Sup && target == GaugeKind::L1) return tail_sum(mu, 0).hi;
  return tail_sup(mu, 0);
}

}  // namespace

double map_bound(const CoordinateMap& f, const WeightedGauge& source, const WeightedGauge& target) {
  const Monomial& s = source.weight;
  const Monomial& t = target.weight;
  switch (f.kind) {
    case CoordinateMap::Kind::Shift: {
      // w_T(k) / w_S(k + 1), with ((k+1)/(k+2))^{p_S} <= max(1, 2^{-p_S}).
      const double fix = s.p >= 0.0 ? 1.0 : std::pow(2.0, -s.p);
      return kind_bound({t.c * fix / (s.c * s.b), t.p - s.p, t.b / s.b}, source.kind, target.kind);
    }
    case CoordinateMap::Kind::Diagonal: {
      const Monomial& d = f.diagonal;
      return kind_bound({t.c * std::abs(d.c) / s.c, t.p + d.p - s.p, t.b * std::abs(d.b) / s.b},
                        source.kind, target.kind);
    }
    case CoordinateMap::Kind::Summation:
      return kind_bound({1.0 / s.c, -s.p, 1.0 / s.b}, source.kind, GaugeKind::L1);
  }
  return kInf;
}

ExtendedMap::ExtendedMap(CoordinateMap f, Completion source, Completion target, double bound)
    : f_(std::move(f)), source_(std::move(source)), target_(std::move(target)), bound_(bound) {}

ExtendedMap extend_map_to_completion(const CoordinateMap& f, const Completion& source,
                                     const Completion& target) {
  const WeightedGauge& ws = source.space().disk(source.disk());
  const WeightedGauge& wt = target.space().disk(target.disk());
  const double beta = map_bound(f, ws, wt);
  if (!std::isfinite(beta)) throw Error(ErrorKind::Unbounded, "map has no finite gauge bound");
  if (f.declared_bound > 0.0 && beta > f.declared_bound * (1.0 + 1e-12))
    throw Error(ErrorKind::Unbounded, "map bound " + fmt(beta) + " exceeds the declared " +
                                          fmt(f.declared_bound));
  const double claimed = f.declared_bound > 0.0 ? f.declared_bound : beta;
  for (std::int64_t k = 0; k < source.space().horizon; ++k) {
    const ModelVector e = ModelVector::unit(k);
    if (gauge(wt, f.apply(e)).lo > claimed * gauge(ws, e).hi * (1.0 + 1e-12))
      throw Error(ErrorKind::InvariantViolation, "coordinate vector e_" + std::to_string(k) +
                                                     " violates the map bound");
  }
  return ExtendedMap(f, source, target, claimed);
}

CompletionElement ExtendedMap::operator()(const CompletionElement& x) const {
  const SequenceModel& rep = x.rep;
  std::int64_t n0 = rep.tail_start();
  std::vector<SeqTerm> terms;
  const ModelVector e0 = ModelVector::unit(0);
  // First n from which a + n s >= lo.
  const auto from = [](std::int64_t a, std::int64_t s, std::int64_t lo) {
    const std::int64_t need = lo - s;
    return need <= 0 ? std::int64_t{0} : (need + a - 1) / a;
  };
  for (const auto& t : rep.tail()) {
    switch (t.kind) {
      case SeqTerm::Kind::Geometric: terms.push_back(SeqTerm::geometric(t.c, t.r, f_.apply(t.v))); break;
      case SeqTerm::Kind::Linear: terms.push_back(SeqTerm::linear(t.c, f_.apply(t.v))); break;
      case SeqTerm::Kind::Truncation:
        if (f_.kind == CoordinateMap::Kind::Shift) {
          terms.push_back(SeqTerm::truncation(t.c, f_.apply(t.v), t.a, t.s - 1));
        } else if (f_.kind == CoordinateMap::Kind::Diagonal) {
          terms.push_back(SeqTerm::truncation(t.c, f_.apply(t.v), t.a, t.s));
        } else {
          // sum_{k <= K} u_k = sum u - sum_j c_j rho_j^{K+1} / (1 - rho_j) once K >= F - 1.
          const double total = f_.apply(t.v).head().empty() ? 0.0 : f_.apply(t.v).head().front();
          terms.push_back(SeqTerm::geometric(t.c * total, 1.0, e0));
          for (const auto& tt : t.v.tails()) {
            if (tt.p != 0.0) throw Error(ErrorKind::Unsupported, "partial sums of a polynomially weighted tail");
            const double coeff = -t.c * tt.c * std::pow(tt.rho, static_cast<double>(t.s + 1)) / (1.0 - tt.rho);
            terms.push_back(SeqTerm::geometric(coeff, std::pow(tt.rho, static_cast<double>(t.a)), e0));
          }
          n0 = std::max(n0, from(t.a, t.s, t.v.tail_start() - 1));
        }
        break;
      case SeqTerm::Kind::Moving:
        if (f_.kind == CoordinateMap::Kind::Shift) {
          terms.push_back(SeqTerm::moving(t.c, t.a, t.s - 1));
          n0 = std::max(n0, from(t.a, t.s, 1));
        } else if (f_.kind == CoordinateMap::Kind::Diagonal) {
          if (f_.diagonal.p != 0.0 || f_.diagonal.b != 1.0)
            throw Error(ErrorKind::Unsupported, "non-constant diagonal on a moving unit vector");
          terms.push_back(SeqTerm::moving(t.c * f_.diagonal.c, t.a, t.s));
          n0 = std::max(n0, from(t.a, t.s, 0));
        } else {
          terms.push_back(SeqTerm::geometric(t.c, 1.0, e0));
          n0 = std::max(n0, from(t.a, t.s, 0));
        }
        break;
    }
  }
  std::vector<ModelVector> prefix;
  for (std::int64_t n = 0; n < n0; ++n) prefix.push_back(f_.apply(rep.at(n)));
  return target_.make(SequenceModel(std::move(prefix), std::move(terms)), bound_ * x.eps);
}

}  // namespace borno
