#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "borno/error.hpp"
#include "borno/parallel.hpp"
#include "borno/seqspace.hpp"
#include "seq_cases.hpp"

using namespace borno;
using seqcases::space_of;

namespace {

ModelVector geo(double rho, double c = 1.0, double p = 0.0) { return ModelVector::closed_form({c, p, rho}); }

// Long-double gauge over the first `coords` coordinates.
long double brute_gauge(const WeightedGauge& w, const ModelVector& x, std::int64_t coords) {
  long double g = 0.0L;
  for (std::int64_t k = 0; k < coords; ++k) {
    const double xk = x[k];
    if (xk == 0.0) continue;
    const long double wk = w.weight.c * std::pow(k + 1.0L, static_cast<long double>(w.weight.p)) *
                           std::pow(static_cast<long double>(w.weight.b), static_cast<long double>(k));
    const long double t = wk * std::abs(static_cast<long double>(xk));
    g = w.kind == GaugeKind::Sup ? std::max(g, t) : g + t;
  }
  return g;
}

}  // namespace

TEST_CASE("model vectors normalize and compare exactly") {
  const ModelVector a({1.0, 2.0, 0.0, 0.0});
  CHECK(a.head().size() == 2);
  CHECK(ModelVector::unit(3, 2.0)[3] == 2.0);
  CHECK((a - a).is_zero());

  const ModelVector u = geo(0.5);
  CHECK(u[4] == 1.0 / 16.0);
  CHECK(u.with_head(5) == u);
  CHECK(u.with_head(5).head().size() == 5);
  CHECK(u.truncated(2) == ModelVector({1.0, 0.5, 0.25}));
  CHECK(u.truncated(-1).is_zero());

  // Equal tail terms merge; opposite ones cancel.
  const ModelVector m({}, {{1.0, 0.0, 0.5}, {2.0, 0.0, 0.5}});
  CHECK(m.tails().size() == 1);
  CHECK(m.tails().front().c == 3.0);
  CHECK((geo(0.5) + geo(0.5, -1.0)).is_zero());
  CHECK(!(geo(0.5) == geo(-0.5)));

  // rho = 0 only touches k = 0.
  const ModelVector z({}, {{2.0, 0.0, 0.0}, {1.0, 0.0, 0.5}});
  CHECK(z[0] == 3.0);
  CHECK(z[1] == 0.5);
  CHECK(z.tails().size() == 1);
}

TEST_CASE("gauges enclose brute-force sums") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::vector<WeightedGauge> ws = {WeightedGauge::l1(), WeightedGauge::sup(),
                                         WeightedGauge::l1({2.0, 1.0, 1.2}), WeightedGauge::sup({0.5, 2.0, 1.5}),
                                         WeightedGauge::l1({1.0, -2.0, 1.0})};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> head(static_cast<std::size_t>(rng() % 6));
    for (double& h : head) h = unit(rng);
    std::vector<TailTerm> tails;
    const int nt = static_cast<int>(rng() % 3);
    for (int j = 0; j < nt; ++j) tails.push_back({unit(rng), static_cast<double>(rng() % 3), 0.55 * unit(rng)});
    const ModelVector x(head, tails);
    for (const auto& w : ws) {
      const Enclosure e = gauge(w, x);
      const long double ref = brute_gauge(w, x, 4000);
      CHECK(e.lo <= static_cast<double>(ref) * (1 + 1e-12) + 1e-300);
      CHECK(e.hi >= static_cast<double>(ref) * (1 - 1e-12));
      CHECK(e.width() <= 1e-12 * std::max(1.0, static_cast<double>(ref)));
    }
  }
  // Geometric tail past n: sum_{k > 3} 2^-k = 1/8.
  CHECK(tail_gauge(WeightedGauge::l1(), geo(0.5), 3).hi == 0.125);
  CHECK(gauge(WeightedGauge::l1({1.0, 0.0, 2.0}), geo(0.5)).hi == seqcases::kInf);
}

TEST_CASE("absorption constants and directedness") {
  const auto l1 = WeightedGauge::l1(), sup = WeightedGauge::sup();
  CHECK(absorption_constant(l1, sup) == 1.0);
  CHECK(absorption_constant(sup, l1) == seqcases::kInf);
  // sup(1) ⊆ 2 l1(2^-k), the constant is sum 2^-k.
  CHECK(absorption_constant(sup, WeightedGauge::l1({1.0, 0.0, 0.5})) == 2.0);
  CHECK(absorption_constant(l1, WeightedGauge::l1({3.0, 0.0, 1.0})) == 3.0);

  ModelSpace s;
  s.disks = {l1, sup};
  CHECK(is_directed(s));
  // l1 with constant weight against sup with weight sqrt(k+1): neither absorbs.
  s.disks = {l1, WeightedGauge::sup({1.0, 0.5, 1.0})};
  CHECK(!is_directed(s));
}

TEST_CASE("cauchy examples") {
  const auto cases = seqcases::cauchy_cases();
  const auto& first = cases.front();
  CHECK(cauchy_check(first.space, first.x, 0, first.eps).decision == Decision::Yes);

  const ModelVector v = ModelVector::unit(2, 5.0);
  const auto l1 = space_of(WeightedGauge::l1());
  CHECK(cauchy_check(l1, SequenceModel::constant(v), 0, NullSequence::geometric(1e-12, 0.1)).decision ==
        Decision::Yes);

  const SequenceModel lin({}, {SeqTerm::linear(1.0, ModelVector::unit(1))});
  const auto d = cauchy_check(l1, lin, 0, NullSequence::geometric(2.0, 0.5));
  REQUIRE(d.decision == Decision::No);
  CHECK(d.witness_n == d.witness_m + 1);
  CHECK(d.witness_gauge.lo > d.witness_eps);
}

TEST_CASE("deciders agree with hand-derived bounds") {
  for (const auto& c : seqcases::cauchy_cases()) {
    CAPTURE(c.name);
    // The hand formula is the sup over n; brute force approaches it from below.
    for (std::int64_t m : {0, 1, 3, 7}) {
      long double best = 0.0L;
      for (std::int64_t n = m + 1; n <= m + 120; ++n) best = std::max(best, seqcases::brute_gauge(c, n, m, true));
      const double h = c.hand(m);
      if (std::isinf(h))
        CHECK(best > 50.0L);
      else
        CHECK(static_cast<double>(best) == doctest::Approx(h).epsilon(1e-12));
    }
    const auto d = cauchy_check(c.space, c.x, 0, c.eps);
    CHECK(d.decision == (seqcases::expected_yes(c) ? Decision::Yes : Decision::No));
    if (d.decision == Decision::No) {
      const long double g = seqcases::brute_gauge(c, d.witness_n, d.witness_m, true);
      CHECK(g > c.eps.at(d.witness_m));
    }
  }
  for (const auto& c : seqcases::convergence_cases()) {
    CAPTURE(c.name);
    for (std::int64_t n : {0, 2, 5})
      CHECK(static_cast<double>(seqcases::brute_gauge(c, n, 0, false)) == doctest::Approx(c.hand(n)).epsilon(1e-12));
    const auto d = convergence_check(c.space, c.x, c.limit, 0, c.eps);
    CHECK(d.decision == (seqcases::expected_yes(c) ? Decision::Yes : Decision::No));
  }
}

TEST_CASE("polynomial tails against inverse-polynomial eps stay undecided") {
  // The ratio argument needs a geometric margin; neither side has one here.
  const auto l1 = space_of(WeightedGauge::l1());
  const SequenceModel x({}, {SeqTerm::truncation(1.0, ModelVector::closed_form({1.0, -3.0, 1.0}))});
  const auto d = cauchy_check(l1, x, 0, NullSequence::inverse_poly(1.0, 1.0, 1.0, 2.0));
  CHECK(d.decision == Decision::Inconclusive);
  // A geometric tail beats an inverse-polynomial eps: 2^-m <= 4 / (m+1)^2.
  const SequenceModel y({}, {SeqTerm::geometric(1.0, 0.5, ModelVector::unit(0))});
  CHECK(cauchy_check(l1, y, 0, NullSequence::inverse_poly(4.0, 1.0, 1.0, 2.0)).decision == Decision::Yes);
  // 2^-1 > 1 / 2^2.
  CHECK(cauchy_check(l1, y, 0, NullSequence::inverse_poly(1.0, 1.0, 1.0, 2.0)).decision == Decision::No);
}

TEST_CASE("prefixes are checked exactly") {
  const auto l1 = space_of(WeightedGauge::l1());
  const ModelVector e0 = ModelVector::unit(0);
  // A jump of 10 inside the prefix breaks eps_0 = 2.
  const SequenceModel x({e0, 10.0 * e0}, {SeqTerm::geometric(1.0, 0.5, e0)});
  const auto d = cauchy_check(l1, x, 0, NullSequence::geometric(2.0, 0.5));
  CHECK(d.decision == Decision::No);
  CHECK(d.witness_m == 0);
  const SequenceModel y({e0, 0.5 * e0}, {SeqTerm::geometric(1.0, 0.5, e0)});
  CHECK(cauchy_check(l1, y, 0, NullSequence::geometric(2.0, 0.5)).decision == Decision::Yes);
}

TEST_CASE("subsequences stay Cauchy with the subsequence of eps") {
  for (const auto& c : seqcases::cauchy_cases()) {
    if (cauchy_check(c.space, c.x, 0, c.eps).decision != Decision::Yes) continue;
    CAPTURE(c.name);
    for (auto [a, b] : {std::pair<std::int64_t, std::int64_t>{2, 0}, {3, 1}, {1, 5}}) {
      const auto sub = c.x.subsequence(a, b);
      for (std::int64_t j = 0; j < 5; ++j) CHECK(sub.at(j) == c.x.at(a * j + b));
      const auto eps = c.eps.subsequence(a, b);
      CHECK(eps.at(3) == doctest::Approx(c.eps.at(3 * a + b)).epsilon(1e-14));
      CHECK(cauchy_check(c.space, sub, 0, eps).decision == Decision::Yes);
    }
  }
  const auto s = NullSequence::geometric(4.0, 0.25).sqrt();
  CHECK(s.at(3) == doctest::Approx(2.0 * 0.125));
  CHECK(NullSequence::inverse_poly(9.0, 1.0, 1.0, 4.0).sqrt().at(2) == doctest::Approx(3.0 / 9.0));
}

TEST_CASE("metrizability scalars") {
  const auto l1 = space_of(WeightedGauge::l1());
  // S_n = n * ball.
  DiskSequence grow;
  grow.scale = {1.0, 1.0, 1.0};
  const auto r = metrizability_scalars(l1, grow);
  REQUIRE(r.verdict == Verdict::Pass);
  CHECK(r.multiple == 1.0);
  for (std::int64_t n = 1; n <= 8; ++n) CHECK(r.eps(n, grow) == doctest::Approx(std::ldexp(1.0, -n) / n).epsilon(1e-15));
  // Partial sums with x_n = n e_{n mod 3} extreme in S_n stay in the unit ball.
  long double g = 0.0L;
  for (std::int64_t n = 1; n <= 60; ++n) g += r.eps(n, grow) * n;
  CHECK(g <= 1.0L);

  DiskSequence same;
  const auto s = metrizability_scalars(l1, same);
  CHECK(s.eps(3, same) == 0.125);

  ModelSpace mixed;
  mixed.disks = {WeightedGauge::l1(), WeightedGauge::sup()};
  DiskSequence both{{0, 1}, 0, {}};
  const auto mr = metrizability_scalars(mixed, both);
  CHECK(mr.verdict == Verdict::Pass);
  CHECK(mr.absorbing_disk == 1);

  mixed.disks = {WeightedGauge::l1(), WeightedGauge::sup({1.0, 0.5, 1.0})};
  CHECK(metrizability_scalars(mixed, both).verdict == Verdict::Inconclusive);
}

TEST_CASE("strengthened series check") {
  const auto l1 = space_of(WeightedGauge::l1());
  const auto r = strengthened_series_check(l1, DiskSequence{}, NullSequence::geometric(1.0, 0.25));
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.bound == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK(strengthened_series_check(l1, DiskSequence{}, NullSequence::zero()).bound == 0.0);
  CHECK(strengthened_series_check(l1, DiskSequence{}, NullSequence::zero()).verdict == Verdict::Pass);

  // Growing disks in a sup gauge against a constant eps.
  DiskSequence grow;
  grow.scale = {1.0, 1.0, 1.0};
  const auto f = strengthened_series_check(space_of(WeightedGauge::sup()), grow,
                                           NullSequence::inverse_poly(1.0, 0.0, 1.0, 1.0));
  CHECK(f.verdict == Verdict::Fail);

  // Explicit disks first: eps_n = 2^-n over S_n = n ball gives sum n 2^-n = 2.
  const auto g = strengthened_series_check(l1, grow, NullSequence::geometric(1.0, 0.5));
  CHECK(g.bound == doctest::Approx(2.0).epsilon(1e-12));
  const auto h = strengthened_series_check(l1, DiskSequence{{0, 0, 0}, 0, {1.0, 1.0, 1.0}},
                                           NullSequence::geometric(1.0, 0.5));
  CHECK(h.bound == doctest::Approx(0.5 + 0.25 + 0.125 + (2.0 - 0.5 - 0.5 - 0.375)).epsilon(1e-12));
}

TEST_CASE("completeness verdicts cross-validate") {
  const auto full = completeness_check(space_of(WeightedGauge::l1()));
  CHECK(full.complete);
  CHECK(full.cross_validated);

  const auto fin = completeness_check(space_of(WeightedGauge::l1(), SupportModel::FinitelySupported));
  CHECK(!fin.complete);
  CHECK(fin.cross_validated);
  REQUIRE(fin.disks.front().witness.has_value());
  // The witness is the partial-sum sequence of 2^-k.
  const auto& w = *fin.disks.front().witness;
  CHECK(w.at(3) == ModelVector({1.0, 0.5, 0.25, 0.125}));
  CHECK(!w.formal_limit()->finitely_supported());

  ModelSpace zero = space_of(WeightedGauge::l1(), SupportModel::Zero);
  const auto z = completeness_check(zero);
  CHECK(z.complete);
  CHECK(z.cross_validated);

  ModelSpace many;
  many.disks = {WeightedGauge::l1(), WeightedGauge::sup({1.0, 2.0, 1.0}), WeightedGauge::l1({1.0, 1.0, 1.5})};
  for (auto support : {SupportModel::Tails, SupportModel::FinitelySupported}) {
    many.support = support;
    const auto r = completeness_check(many);
    CHECK(r.cross_validated);
    CHECK(r.complete == (support == SupportModel::Tails));
  }
}

TEST_CASE("completion construction") {
  const ModelSpace fin = space_of(WeightedGauge::l1(), SupportModel::FinitelySupported);
  const Completion c(fin, 0);
  const ModelVector v({1.0, -2.0, 0.5});
  const auto ev = c.embed(v);
  CHECK(c.equal(ev, c.embed(v)));
  CHECK(c.gauge_in_quotient(ev).hi == gauge(WeightedGauge::l1(), v).hi);
  CHECK(c.gauge_in_quotient(ev).exact());
  CHECK(!c.equal(ev, c.embed(ModelVector({1.0}))));

  // Partial sums of 2^-k against the declared element, represented by P_{2n}.
  const ModelVector u = geo(0.5);
  const auto sums = c.make(SequenceModel({}, {SeqTerm::truncation(1.0, u)}), NullSequence::geometric(1.0, 0.5));
  const auto declared = c.from_limit(u);
  CHECK(c.equal(sums, declared));
  const auto evens = c.make(SequenceModel({}, {SeqTerm::truncation(1.0, u, 2, 0)}), NullSequence::geometric(1.0, 0.25));
  CHECK(c.equal(sums, evens));

  const auto other = c.from_limit(geo(1.0 / 3.0));
  const auto cmp = c.compare(declared, other);
  CHECK(!cmp.equal);
  CHECK(cmp.separation.lo == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cmp.separation.lo > 0.0);

  // Non-Cauchy representatives are refused.
  CHECK_THROWS_AS(c.make(SequenceModel({}, {SeqTerm::linear(1.0, ModelVector::unit(0))}),
                         NullSequence::geometric(1.0, 0.5)),
                  Error);
  CHECK_THROWS_AS(c.embed(u), Error);

  const auto s = c.add(declared, c.scale(-1.0, sums));
  CHECK(c.limit(s).is_zero());
  CHECK(c.gauge_in_quotient(c.scale(2.0, declared)).hi == doctest::Approx(4.0));
  CHECK(c.equal(c.add(c.embed(v), c.embed(v)), c.embed(2.0 * v)));
}

TEST_CASE("completing the completion changes nothing") {
  const Completion c(space_of(WeightedGauge::l1(), SupportModel::FinitelySupported), 0);
  const Completion cc(space_of(WeightedGauge::l1(), SupportModel::Tails), 0);
  for (const ModelVector& u : {geo(0.5), geo(-0.25, 3.0), geo(0.5) + ModelVector({2.0}), ModelVector({1.0, 1.0})}) {
    const auto x = c.from_limit(u);
    const ModelVector lim = c.limit(x);
    const auto y = cc.embed(lim);
    const auto x2 = cc.make(x.rep, x.eps);
    CHECK(cc.equal(y, x2));
    CHECK(cc.limit(cc.embed(cc.limit(y))) == lim);
    CHECK(cc.gauge_in_quotient(y).hi == c.gauge_in_quotient(x).hi);
  }
}

TEST_CASE("maps extend to the completion") {
  const ModelSpace fin = space_of(WeightedGauge::l1(), SupportModel::FinitelySupported);
  const Completion c(fin, 0);
  const ModelVector u = geo(0.5);

  const auto shift = extend_map_to_completion(CoordinateMap::shift(1.0), c, c);
  CHECK(shift.bound() == 1.0);
  const auto sx = shift(c.from_limit(u));
  CHECK(c.limit(sx) == 0.5 * u);

  CHECK_THROWS_AS(extend_map_to_completion(CoordinateMap::diag({1.0, 1.0, 1.0}), c, c), Error);
  try {
    extend_map_to_completion(CoordinateMap::diag({1.0, 1.0, 1.0}), c, c);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unbounded);
  }
  // A declared bound below the true one is refused.
  CHECK_THROWS_AS(extend_map_to_completion(CoordinateMap::diag({2.0, 0.0, 1.0}, 1.5), c, c), Error);

  const Completion scalars(scalar_space(), 0);
  const auto sum = extend_map_to_completion(CoordinateMap::summation(1.0), c, scalars);
  const auto val = scalars.limit(sum(c.from_limit(u)));
  CHECK(val[0] == 2.0);
  CHECK(scalars.limit(sum(c.embed(ModelVector({1.0, 2.0, 3.0}))))[0] == 6.0);

  // Null classes map to null classes.
  const auto diff = c.add(c.from_limit(u), c.scale(-1.0, c.make(SequenceModel({}, {SeqTerm::truncation(1.0, u, 3, 2)}),
                                                                 NullSequence::geometric(4.0, 0.125))));
  CHECK(scalars.limit(sum(diff)).is_zero());
  CHECK(c.limit(shift(diff)).is_zero());
}

TEST_CASE("per-disk completeness is thread-count independent") {
  ModelSpace many;
  many.disks = {WeightedGauge::l1(), WeightedGauge::sup({1.0, 2.0, 1.0}), WeightedGauge::l1({1.0, 1.0, 1.5}),
                WeightedGauge::sup({2.0, 0.0, 0.5})};
  many.support = SupportModel::FinitelySupported;
  set_thread_count(1);
  const auto a = completeness_check(many);
  set_thread_count(4);
  const auto b = completeness_check(many);
  REQUIRE(a.disks.size() == b.disks.size());
  for (std::size_t i = 0; i < a.disks.size(); ++i) {
    CHECK(a.disks[i].battery_size == b.disks[i].battery_size);
    CHECK(a.disks[i].witness_eps.to_string() == b.disks[i].witness_eps.to_string());
  }
}
