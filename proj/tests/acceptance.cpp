// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "borno/approx_mult.hpp"
#include "borno/finrank.hpp"
#include "borno/isoradial.hpp"
#include "borno/jsr.hpp"
#include "borno/json_io.hpp"
#include "borno/parallel.hpp"
#include "borno/seqspace.hpp"
#include "oracles.hpp"
#include "seq_cases.hpp"

using namespace borno;
using io::Json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  Json fingerprint = Json::object();  // every computed number, for the determinism check
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Json radius_fp(const RadiusEstimate& r) {
  return {io::number(r.lower), io::number(r.upper), r.witness_word, r.depth, io::numbers(r.level_bounds)};
}

AlgebraElement el(const Matrix& m) { return AlgebraElement::from_matrix(m); }

BoundedSet random_set(std::mt19937_64& rng, int max_count, int max_dim) {
  const int count = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_count));
  const int dim = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_dim));
  std::vector<AlgebraElement> gens;
  for (int i = 0; i < count; ++i) gens.push_back(el(oracle::random_matrix(rng, dim)));
  return BoundedSet(gens);
}

BoundedSet golden_pair() {
  Matrix a(2, 2), b(2, 2);
  a << 1, 1, 0, 1;
  b << 1, 0, 1, 1;
  return BoundedSet({el(a), el(b)});
}

DescriptorPtr scalars() { return share(AlgebraDescriptor::matrix(1)); }
LinearMap scalar_map(Complex c) { return LinearMap(scalars(), scalars(), Matrix::Constant(1, 1, c)); }
BoundedSet scalar_set(Complex v) { return BoundedSet({el(Matrix::Constant(1, 1, v))}); }

// ------------------------------------------------------------------ criteria

Outcome jsr_vs_brute_force() {
  Outcome o;
  std::mt19937_64 rng(0xACCE5501);
  double elapsed = 0.0;
  int mismatches = 0;
  for (int i = 0; i < 20; ++i) {
    const BoundedSet s = random_set(rng, 2, 3);
    const auto t0 = std::chrono::steady_clock::now();
    const RadiusEstimate est = jsr_estimate(s, 8, 1e-300);
    elapsed += seconds_since(t0);
    const auto ref = oracle::exhaustive_jsr(s.generators, est.depth);
    if (est.lower != ref.lower || est.upper != ref.upper || est.witness_word != ref.witness) ++mismatches;
    o.fingerprint["instances"].push_back(radius_fp(est));
  }
  o.pass = mismatches == 0 && elapsed < 5.0;
  o.detail = std::to_string(mismatches) + " mismatches in 20 instances, branch-and-bound " + fmt("%.2f", elapsed) + " s";
  return o;
}

Outcome golden_pair_radius() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const RadiusEstimate r = jsr_estimate(golden_pair(), 12);
  const double elapsed = seconds_since(t0);
  const auto ref = oracle::exhaustive_jsr(golden_pair().generators, 12);
  const double phi = std::numbers::phi;
  // Both are enclosures of the same number, so they must overlap.
  const bool consistent = r.lower <= ref.upper && ref.lower <= r.upper && r.lower <= phi * (1 + 1e-15) &&
                          phi <= r.upper * (1 + 1e-15);
  o.pass = r.lower >= 1.6180339 && r.upper <= 1.6190 && r.gap() < 1e-3 && elapsed < 10.0 && consistent &&
           ref.lower >= 1.6180339;
  o.detail = "[" + fmt("%.10f", r.lower) + ", " + fmt("%.10f", r.upper) + "], exhaustive length-12 lower " +
             fmt("%.10f", ref.lower) + ", " + fmt("%.3f", elapsed) + " s";
  o.fingerprint = radius_fp(r);
  return o;
}

Outcome specrad_identities() {
  Outcome o;
  std::mt19937_64 rng(0xACCE5503);
  std::normal_distribution<double> normal(0.0, 1.0);
  int violations = 0;
  for (int i = 0; i < 50; ++i) {
    const BoundedSet s = random_set(rng, 2, 3);
    const Complex c(normal(rng), normal(rng));
    const int n = 2 + static_cast<int>(rng() % 2);
    try {
      const IdentityReport r = check_specrad_identities(s, c, n, 6, 1e-3, 6);
      if (!r.scaling_consistent || !r.power_consistent || !r.hull_consistent) ++violations;
      o.fingerprint["instances"].push_back(
          {radius_fp(r.base), radius_fp(r.scaled), radius_fp(r.powered), radius_fp(r.hull)});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvariantViolation) throw;
      ++violations;
      o.fingerprint["instances"].push_back(e.what());
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(violations) + " violations in 50 instances";
  return o;
}

Outcome pointwise_max_formula() {
  Outcome o;
  std::mt19937_64 rng(0xACCE5504);
  int violations = 0;
  for (int i = 0; i < 20; ++i) {
    const int points = 2 + static_cast<int>(rng() % 3);
    const int dim = 1 + static_cast<int>(rng() % 3);
    const int count = 1 + static_cast<int>(rng() % 2);
    std::vector<double> xs;
    for (int p = 0; p < points; ++p) xs.push_back(0.5 * p);
    const auto grid = share(AlgebraDescriptor::grid(xs, AlgebraDescriptor::matrix(dim)));
    std::vector<AlgebraElement> gens;
    for (int g = 0; g < count; ++g) {
      std::vector<AlgebraElement> fibers;
      for (int p = 0; p < points; ++p) fibers.push_back(el(oracle::random_matrix(rng, dim)));
      gens.push_back(AlgebraElement::from_fibers(grid, fibers));
    }
    try {
      const GridRadiusReport r = jsr_grid_max(BoundedSet(gens), 6);
      if (!intervals_intersect(r.global.lower, r.global.upper, r.max_lower, r.max_upper)) ++violations;
      o.fingerprint["instances"].push_back({radius_fp(r.global), io::number(r.max_lower), io::number(r.max_upper)});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvariantViolation) throw;
      ++violations;
      o.fingerprint["instances"].push_back(e.what());
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(violations) + " violations in 20 grid instances";
  return o;
}

Outcome isoradial_fixtures() {
  Outcome o;
  std::ostringstream d;
  for (const auto& fx : fixture_catalog()) {
    const IsoradialReport r = isoradial_certificate(fx.map, fx.sampling_basis, SamplerConfig{}, 6, 1e-2);
    const bool negative = fx.name == "interval-restriction";
    const bool ok = negative ? (r.verdict == Verdict::Fail && r.worst_ratio >= 1.9)
                             : (r.verdict == Verdict::Pass && r.worst_ratio >= 1.0 - 1e-2 && r.worst_ratio <= 1.0 + 1e-2);
    o.pass = o.pass && ok;
    d << fx.name << " " << to_string(r.verdict) << " ratio " << fmt("%.6f", r.worst_ratio) << "; ";
    Json samples = Json::array();
    for (const auto& s : r.samples) samples.push_back({radius_fp(s.source), radius_fp(s.target), io::number(s.ratio)});
    o.fingerprint[fx.name] = {io::number(r.worst_ratio), io::number(r.worst_ratio_lower), samples};
  }
  o.detail = d.str();
  return o;
}

Outcome curvature_checks() {
  Outcome o;
  int bad_zero = 0, bad_scalar = 0, bad_scaling = 0;
  for (const auto& fx : fixture_catalog()) {
    const RadiusEstimate r = curvature_radius(fx.map.map(), BoundedSet(fx.sampling_basis), 6);
    if (r.lower != 0.0 || r.upper != 0.0) ++bad_zero;
    o.fingerprint["zero"].push_back(radius_fp(r));
  }
  const auto m2 = share(AlgebraDescriptor::matrix(2));
  std::vector<AlgebraElement> units;
  for (std::size_t i = 0; i < 4; ++i) units.push_back(AlgebraElement::basis(m2, i));
  const RadiusEstimate id = curvature_radius(LinearMap::identity(m2), BoundedSet(units), 6);
  if (id.lower != 0.0 || id.upper != 0.0) ++bad_zero;

  double worst_scalar = 0.0;
  for (double eps : {1e-3, 0.01, 0.1, 0.5, 1.0, -0.3}) {
    const RadiusEstimate r = curvature_radius(scalar_map(1.0 + eps), scalar_set(1.0), 6);
    const double expect = std::abs(eps * (1.0 + eps));
    worst_scalar = std::max({worst_scalar, std::abs(r.lower - expect), std::abs(r.upper - expect)});
    o.fingerprint["scalar"].push_back(radius_fp(r));
  }
  if (worst_scalar > 1e-9) ++bad_scalar;

  std::mt19937_64 rng(0xACCE5506);
  for (int i = 0; i < 20; ++i) {
    const LinearMap g(m2, m2, 0.5 * oracle::random_matrix(rng, 4));
    const BoundedSet s({el(0.5 * oracle::random_matrix(rng, 2)), el(0.5 * oracle::random_matrix(rng, 2))});
    const double t = 0.25 + 0.25 * static_cast<double>(rng() % 12);
    const RadiusEstimate base = curvature_radius(g, s, 6);
    const RadiusEstimate scaled = curvature_radius(g, scale(t, s), 6);
    if (!intervals_intersect(t * t * base.lower, t * t * base.upper, scaled.lower, scaled.upper)) ++bad_scaling;
    o.fingerprint["scaling"].push_back({radius_fp(base), radius_fp(scaled)});
  }
  o.pass = bad_zero == 0 && bad_scalar == 0 && bad_scaling == 0;
  o.detail = std::to_string(bad_zero) + " nonzero homomorphism intervals, scalar error " + fmt("%.2e", worst_scalar) +
             ", " + std::to_string(bad_scaling) + " scaling violations in 20";
  return o;
}

Outcome homotopy_soundness() {
  Outcome o;
  o.fingerprint = Json::array();
  // h_t = a + t (b - a) on scalars, S = {c}: omega = (q - q^2) c^2 with q = h_t.
  const double cases[][3] = {{1.0, 0.0, 1.0}, {1.0, 0.0, 3.0}, {1.0, 0.99, 1.0}, {0.0, 1.0, 2.0}, {0.3, 0.9, 1.0},
                             {1.2, 0.7, 1.5}, {-0.2, 0.4, 1.0}, {0.8, 1.1, 0.5}, {2.0, 1.0, 1.0}, {0.5, 0.5, 1.7}};
  double worst = 0.0;
  int wrong_verdicts = 0;
  for (const auto& c : cases) {
    const double a = c[0], b = c[1], s = c[2];
    const double expect = oracle::maximize_on_unit_interval([&](double t) {
      const double q = a + t * (b - a);
      return std::abs(q - q * q) * s * s;
    });
    const HomotopyCertificate cert = linear_homotopy_certificate(scalar_map(a), scalar_map(b), scalar_set(s));
    worst = std::max(worst, std::abs(cert.sup_upper - expect));
    if (cert.sup_upper < expect - 1e-12) worst = std::max(worst, 1.0);  // unsound
    if (cert.verdict != (expect < 1.0 ? Verdict::Pass : Verdict::Fail)) ++wrong_verdicts;
    o.fingerprint.push_back({io::number(cert.sup_upper), io::number(cert.sup_lower), cert.points.size()});
  }
  const auto pass_case = linear_homotopy_certificate(scalar_map(1.0), scalar_map(0.0), scalar_set(1.0));
  const auto fail_case = linear_homotopy_certificate(scalar_map(1.0), scalar_map(0.0), scalar_set(3.0));
  o.pass = worst <= 1e-6 && wrong_verdicts == 0 && pass_case.verdict == Verdict::Pass &&
           fail_case.verdict == Verdict::Fail;
  o.detail = "max deviation " + fmt("%.2e", worst) + " over 10 cases; rho(S)=1 " + to_string(pass_case.verdict) +
             ", rho(S)=3 " + to_string(fail_case.verdict);
  return o;
}

Outcome sigma_approximation() {
  Outcome o;
  const AppleProblem p = trig_fejer_problem();
  const SigmaReport f = sigma_approximation_check(p.stages, p.sigma_set, p.sigma_disk, p.sigma_threshold);
  double at64 = kInfinity;
  for (std::size_t i = 0; i < f.indices.size(); ++i)
    if (f.indices[i] == 64) at64 = f.rates[i];
  o.fingerprint["fejer"] = io::numbers(f.rates);

  std::mt19937_64 rng(0xACCE5508);
  Matrix a = Matrix::Zero(8, 8), b = Matrix::Zero(8, 8);
  a.topLeftCorner(4, 4) = oracle::random_matrix(rng, 4);
  b.topLeftCorner(4, 4) = oracle::random_matrix(rng, 4);
  std::vector<SigmaStage> stages;
  for (int n = 1; n <= 8; ++n) stages.push_back({n, corner_embedding(n, 8), corner_compression(8, n)});
  const SigmaReport t = sigma_approximation_check(stages, BoundedSet({el(a), el(b)}), Disk::norm_ball(1.0), 1e-12);
  bool tower_ok = true;
  for (std::size_t i = 0; i < t.rates.size(); ++i)
    if (t.indices[i] >= 4 && t.rates[i] != 0.0) tower_ok = false;
  o.fingerprint["tower"] = io::numbers(t.rates);

  o.pass = f.nonincreasing && at64 < 1e-2 && tower_ok;
  o.detail = std::string("Fejér rates ") + (f.nonincreasing ? "nonincreasing" : "NOT nonincreasing") +
             ", eps_64 = " + fmt("%.3e", at64) + "; tower rates " + (tower_ok ? "zero" : "NONZERO") +
             " from support size 4";
  return o;
}

Outcome sequence_machinery() {
  Outcome o;
  int cases = 0, disagreements = 0;
  for (const auto& c : seqcases::cauchy_cases()) {
    const SequenceDecision d = cauchy_check(c.space, c.x, 0, c.eps);
    ++cases;
    if (d.decision != (seqcases::expected_yes(c) ? Decision::Yes : Decision::No)) ++disagreements;
    o.fingerprint["cauchy"].push_back({to_string(d.decision), d.threshold, d.witness_m, d.witness_n});
  }
  for (const auto& c : seqcases::convergence_cases()) {
    const SequenceDecision d = convergence_check(c.space, c.x, c.limit, 0, c.eps);
    ++cases;
    if (d.decision != (seqcases::expected_yes(c) ? Decision::Yes : Decision::No)) ++disagreements;
    o.fingerprint["convergence"].push_back({to_string(d.decision), d.threshold, d.witness_n});
  }

  // Completeness: the symbolic and the direct reading must agree on every fixture.
  int unvalidated = 0, wrong_completeness = 0;
  std::vector<std::pair<ModelSpace, bool>> spaces;
  using seqcases::space_of;
  spaces.push_back({space_of(WeightedGauge::l1()), true});
  spaces.push_back({space_of(WeightedGauge::sup({1.0, 1.0, 1.0})), true});
  spaces.push_back({space_of(WeightedGauge::l1(), SupportModel::FinitelySupported), false});
  spaces.push_back({space_of(WeightedGauge::sup(), SupportModel::FinitelySupported), false});
  spaces.push_back({space_of(WeightedGauge::l1(), SupportModel::Zero), true});
  ModelSpace many;
  many.disks = {WeightedGauge::l1(), WeightedGauge::sup({1.0, 2.0, 1.0}), WeightedGauge::l1({1.0, 1.0, 1.5})};
  spaces.push_back({many, true});
  many.support = SupportModel::FinitelySupported;
  spaces.push_back({many, false});
  for (const auto& [space, complete] : spaces) {
    const CompletenessReport r = completeness_check(space);
    if (!r.cross_validated) ++unvalidated;
    if (r.complete != complete) ++wrong_completeness;
    o.fingerprint["completeness"].push_back({r.complete, r.cross_validated});
  }

  // Completion: completing again changes nothing, and the quotient gauge is
  // the gauge of the limit.
  int exactness = 0;
  const ModelSpace fin = space_of(WeightedGauge::l1(), SupportModel::FinitelySupported);
  const Completion c(fin, 0);
  const Completion cc(space_of(WeightedGauge::l1()), 0);
  const std::vector<ModelVector> limits = {ModelVector::closed_form({1.0, 0.0, 0.5}),
                                           ModelVector::closed_form({3.0, 0.0, -0.25}),
                                           ModelVector::closed_form({1.0, 1.0, 0.5}) + ModelVector({2.0}),
                                           ModelVector({1.0, 1.0})};
  for (const auto& u : limits) {
    const CompletionElement x = c.from_limit(u);
    const ModelVector lim = c.limit(x);
    const CompletionElement y = cc.embed(lim);
    if (!(lim == u)) ++exactness;
    if (!cc.equal(y, cc.make(x.rep, x.eps))) ++exactness;
    if (!(cc.limit(cc.embed(cc.limit(y))) == lim)) ++exactness;
    const Enclosure gq = c.gauge_in_quotient(x);
    const Enclosure gy = cc.gauge_in_quotient(y);
    const Enclosure gu = gauge(WeightedGauge::l1(), u);
    if (gq.lo != gy.lo || gq.hi != gy.hi || gq.lo != gu.lo || gq.hi != gu.hi) ++exactness;
    const Enclosure g2 = c.gauge_in_quotient(c.scale(2.0, x));
    if (g2.hi != 2.0 * gq.hi) ++exactness;
    if (!c.limit(c.add(x, c.scale(-1.0, x))).is_zero()) ++exactness;
    o.fingerprint["completion"].push_back({io::enclosure(gq), io::enclosure(gy), x.threshold});
  }

  o.pass = cases >= 10 && disagreements == 0 && unvalidated == 0 && wrong_completeness == 0 && exactness == 0;
  o.detail = std::to_string(disagreements) + " disagreements in " + std::to_string(cases) + " closed-form cases, " +
             std::to_string(unvalidated) + " unvalidated and " + std::to_string(wrong_completeness) +
             " wrong completeness verdicts in " + std::to_string(spaces.size()) + " spaces, " +
             std::to_string(exactness) + " completion inexactness";
  return o;
}

Outcome finite_rank_rates() {
  Outcome o;
  const AmbientGauge l2{{1.0, 0.0, 1.0}, AmbientKind::L2};
  const CompactSetModel box{{1.0, 0.0, 0.5}};
  const UniformReport u = uniform_convergence_on_set(OperatorFamily::truncations(), Multiplier::identity(), box, l2, 32);
  const double eps4 = u.rates.at(4).hi;
  const double expect = std::ldexp(1.0, -4) / std::sqrt(3.0);
  const SamplingReport s =
      sample_rates(OperatorFamily::truncations(), Multiplier::identity(), box, l2, u.rates, 1000, 0xACCE5510);
  o.pass = std::abs(eps4 - expect) <= 1e-12 && s.samples == 1000 && s.sound;
  o.detail = "eps_4 = " + fmt("%.15f", eps4) + " (error " + fmt("%.1e", std::abs(eps4 - expect)) + "), " +
             std::to_string(s.samples) + " samples, worst measured/certified " + fmt("%.6f", s.worst_ratio);
  std::vector<double> hi;
  for (const auto& e : u.rates) hi.push_back(e.hi);
  o.fingerprint = {io::numbers(hi), io::number(s.worst_ratio)};
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "JSR kernel vs brute force", jsr_vs_brute_force},
      {2, "golden pair", golden_pair_radius},
      {3, "spectral radius identities", specrad_identities},
      {4, "pointwise maximum formula", pointwise_max_formula},
      {5, "isoradial fixtures", isoradial_fixtures},
      {6, "curvature", curvature_checks},
      {7, "homotopy certificate soundness", homotopy_soundness},
      {8, "sigma approximation", sigma_approximation},
      {9, "sequence machinery", sequence_machinery},
      {10, "finite-rank rates", finite_rank_rates},
  };

  const unsigned max_threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<unsigned> counts = {1, 4, max_threads};
  std::vector<std::vector<std::string>> prints(criteria.size());
  bool all = true;

  for (std::size_t round = 0; round < counts.size(); ++round) {
    set_thread_count(counts[round]);
    for (std::size_t i = 0; i < criteria.size(); ++i) {
      Outcome o;
      try {
        o = criteria[i].run();
      } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
        o.fingerprint = o.detail;
      }
      prints[i].push_back(io::canonical_dump(o.fingerprint));
      if (round == 0) {
        std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", criteria[i].id, criteria[i].title,
                    o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
      }
    }
  }

  int differing = 0;
  std::string which;
  for (std::size_t i = 0; i < criteria.size(); ++i)
    if (!std::all_of(prints[i].begin(), prints[i].end(), [&](const std::string& p) { return p == prints[i][0]; })) {
      ++differing;
      which += " " + std::to_string(criteria[i].id);
    }
  const bool deterministic = differing == 0;
  std::printf("%s criterion 11: determinism: thread counts {1, 4, %u}: %d of 10 criteria differ%s\n",
              deterministic ? "PASS" : "FAIL", max_threads, differing, which.c_str());
  all = all && deterministic;
  return all ? 0 : 1;
}
