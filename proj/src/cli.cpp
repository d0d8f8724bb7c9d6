#include "borno/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "borno/approx_mult.hpp"
#include "borno/error.hpp"
#include "borno/finrank.hpp"
#include "borno/isoradial.hpp"
#include "borno/jsr.hpp"
#include "borno/parallel.hpp"
#include "borno/seqspace.hpp"

namespace borno::cli {

using io::Json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const char* verdict_of(Decision d) {
  switch (d) {
    case Decision::Yes: return "pass";
    case Decision::No: return "fail";
    case Decision::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

// Instance config with typed, defaulted lookups.
class Config {
 public:
  explicit Config(const Json& j) : j_(j) {}

  int integer(const char* key, int fallback, int lo, int hi) const {
    const auto v = io::get_int(j_, key, fallback, "config");
    if (v < lo || v > hi) bad(std::string("config.") + key + " out of range");
    return static_cast<int>(v);
  }
  std::uint64_t seed(std::uint64_t fallback) const {
    if (!j_.contains("seed")) return fallback;
    const auto v = io::get_int(j_, "seed", "config");
    if (v < 0) bad("config.seed must be non-negative");
    return static_cast<std::uint64_t>(v);
  }
  double real(const char* key, double fallback) const {
    const double v = io::get_double(j_, key, fallback, "config");
    if (!(v > 0.0)) bad(std::string("config.") + key + " must be positive");
    return v;
  }

 private:
  const Json& j_;
};

const Json& member(const Json& payload, const char* key) {
  const auto it = payload.find(key);
  if (it == payload.end()) bad(std::string("payload: missing field \"") + key + "\"");
  return *it;
}

Json radius_json(const RadiusEstimate& r) {
  return {{"lower", io::number(r.lower)},
          {"upper", io::number(r.upper)},
          {"witness_word", r.witness_word},
          {"depth", r.depth},
          {"status", to_string(r.status)},
          {"level_bounds", io::numbers(r.level_bounds)}};
}

// ------------------------------------------------------------------ commands

Json run_jsr(const Json& payload, const Config& cfg) {
  const BoundedSet s = io::bounded_set_from_json(payload);
  const RadiusEstimate r = jsr_estimate(s, cfg.integer("depth", 10, 1, 64), cfg.real("gap", 1e-3));
  Json out = radius_json(r);
  out["gap"] = io::number(r.gap());
  out["verdicts"] = {{"jsr", r.status == RadiusStatus::Certified ? "pass" : "inconclusive"}};
  return out;
}

Json run_hull(const Json& payload, const Config& cfg) {
  io::require_fields(payload, {"set", "r", "max_products"}, "payload");
  const BoundedSet s = io::bounded_set_from_json(member(payload, "set"));
  const double r = io::get_double(payload, "r", 1.0, "payload");
  const auto cap = io::get_int(payload, "max_products", 512, "payload");
  if (!(r > 0.0) || cap < 1) bad("payload: r must be positive and max_products at least 1");
  const HullCertificate h = submultiplicative_hull(s, r, static_cast<std::size_t>(cap));
  const double tol = cfg.real("tol", 1e-6);
  const bool ok = h.containment <= 1.0 + 1e-9 && h.closure_defect <= tol;
  return {{"scale", io::number(h.scale)},
          {"closure_defect", io::number(h.closure_defect)},
          {"containment", io::number(h.containment)},
          {"hull_generators", h.generators.size()},
          {"decay_profile", io::numbers(h.decay_profile)},
          {"dropped_norm", io::number(h.dropped_norm)},
          {"verdicts", {{"hull", ok ? "pass" : "inconclusive"}}}};
}

SamplerConfig sampler_config(const Config& cfg) {
  SamplerConfig sc;
  sc.per_size = cfg.integer("samples", sc.per_size, 1, 100000);
  sc.seed = cfg.seed(sc.seed);
  return sc;
}

Json isoradial_json(const IsoradialReport& r) {
  return {{"worst_ratio", io::number(r.worst_ratio)},
          {"worst_ratio_lower", io::number(r.worst_ratio_lower)},
          {"passed", r.passed},
          {"failed", r.failed},
          {"inconclusive", r.inconclusive},
          {"verdict", to_string(r.verdict)}};
}

Json run_isoradial(const Json& payload, const Config& cfg) {
  io::require_fields(payload, {"fixture", "map", "sampling_basis"}, "payload");
  std::optional<Homomorphism> f;
  std::vector<AlgebraElement> basis;
  std::string name;
  if (payload.contains("fixture")) {
    if (payload.contains("map") || payload.contains("sampling_basis")) bad("payload: give either fixture or map");
    name = payload["fixture"].is_string() ? payload["fixture"].get<std::string>() : "";
    for (auto& fx : fixture_catalog())
      if (fx.name == name) {
        f.emplace(fx.map);
        basis = std::move(fx.sampling_basis);
      }
    if (!f) bad("payload: unknown isoradial fixture \"" + name + "\"");
  } else {
    LinearMap map = io::linear_map_from_json(member(payload, "map"));
    const auto defect = check_multiplicative(map);
    if (defect.flagged)
      bad("map is not multiplicative (defect " + std::to_string(defect.mult_defect) + ")");
    f.emplace(std::move(map));
    if (payload.contains("sampling_basis")) {
      if (!payload["sampling_basis"].is_array() || payload["sampling_basis"].empty())
        bad("payload: sampling_basis must be a non-empty array");
      for (const auto& x : payload["sampling_basis"])
        basis.push_back(io::element_from_json(f->map().source_ptr(), x));
    } else {
      for (std::size_t i = 0; i < f->source().complex_dim(); ++i)
        basis.push_back(AlgebraElement::basis(f->map().source_ptr(), i));
    }
  }
  const IsoradialReport r = isoradial_certificate(*f, basis, sampler_config(cfg), cfg.integer("depth", 6, 1, 64),
                                                  cfg.real("tol", 1e-2), cfg.real("gap", 1e-3));
  Json out = isoradial_json(r);
  if (!name.empty()) out["fixture"] = name;
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"size", s.size},
                       {"index", s.index},
                       {"source", {io::number(s.source.lower), io::number(s.source.upper)}},
                       {"target", {io::number(s.target.lower), io::number(s.target.upper)}},
                       {"scale", io::number(s.scale)},
                       {"ratio", io::number(s.ratio)},
                       {"verdict", to_string(s.verdict)}});
  out["samples"] = samples;
  out["verdicts"] = {{"isoradial", to_string(r.verdict)}};
  return out;
}

Json run_apple(const Json& payload, const Config& cfg) {
  io::require_fields(payload, {"fixture", "sigmas", "h"}, "payload");
  const Json& fx = member(payload, "fixture");
  const std::string name = fx.is_string() ? fx.get<std::string>() : "";
  if (name != "trig-fejer" && name != "interval-restriction" && name != "identity")
    bad("payload: unknown apple fixture \"" + name + "\"");
  AppleProblem p = name == "trig-fejer"             ? trig_fejer_problem()
                   : name == "interval-restriction" ? interval_restriction_problem()
                                                    : identity_problem();

  if (payload.contains("sigmas")) {
    if (name != "trig-fejer") throw Error(ErrorKind::Unsupported, "sigma orders apply to the trig-fejer fixture only");
    const Json& sj = payload["sigmas"];
    io::require_fields(sj, {"orders"}, "sigmas");
    const Json& orders = member(sj, "orders");
    if (!orders.is_array() || orders.empty()) bad("sigmas: orders must be a non-empty array");
    const int m = static_cast<int>(p.f.source().grid_size());
    p.stages.clear();
    for (const auto& o : orders) {
      if (!o.is_number_integer() || o.get<int>() < 0 || o.get<int>() >= m) bad("sigmas: orders must be integers in [0, m)");
      p.stages.push_back({o.get<int>(), p.f.map(), fejer_map(o.get<int>(), m)});
    }
  }
  if (payload.contains("h")) {
    LinearMap h = io::linear_map_from_json(payload["h"]);
    if (!(h.source() == p.h.source()) || !(h.target() == p.h.target()))
      throw Error(ErrorKind::DescriptorMismatch, "h must map " + p.h.source().to_string() + " to " +
                                                     p.h.target().to_string());
    p.h = std::move(h);
  }

  AppleConfig ac;
  ac.sampler = sampler_config(cfg);
  ac.depth = cfg.integer("depth", ac.depth, 1, 64);
  ac.homotopy.depth = ac.depth;
  ac.homotopy.initial_points = cfg.integer("tgrid", ac.homotopy.initial_points, 2, 4097);
  ac.tol = cfg.real("tol", ac.tol);
  ac.gap_target = cfg.real("gap", ac.gap_target);
  ac.homotopy.gap_target = ac.gap_target;
  const AppleReport r = apple_certificate(p, ac);

  Json out;
  out["fixture"] = name;
  out["statement"] = r.statement;
  out["isoradial"] = isoradial_json(r.isoradial);
  out["sigma"] = {{"indices", r.sigma.indices},
                  {"rates", io::numbers(r.sigma.rates)},
                  {"threshold", io::number(r.sigma.threshold)},
                  {"nonincreasing", r.sigma.nonincreasing},
                  {"below_threshold", r.sigma.below_threshold},
                  {"verdict", to_string(r.sigma.verdict)}};
  out["verdicts"] = {{"isoradial", to_string(r.isoradial.verdict)}, {"sigma", to_string(r.sigma.verdict)}};
  out["homotopy"] = {{"built", r.homotopy_built}};
  if (r.homotopy_built) {
    std::vector<double> ts;
    for (const auto& pt : r.homotopy.points) ts.push_back(pt.t);
    out["homotopy"].update({{"sup_upper", io::number(r.homotopy.sup_upper)},
                            {"sup_lower", io::number(r.homotopy.sup_lower)},
                            {"points", ts.size()},
                            {"refinement_capped", r.homotopy.refinement_capped},
                            {"verdict", to_string(r.homotopy.verdict)}});
    out["verdicts"]["homotopy"] = to_string(r.homotopy.verdict);
  }
  out["verdicts"]["apple"] = to_string(r.verdict);
  return out;
}

std::size_t disk_index(const Json& payload, const ModelSpace& space) {
  const auto k = io::get_int(payload, "disk", 0, "payload");
  if (k < 0 || static_cast<std::size_t>(k) >= space.disks.size())
    bad("payload: disk " + std::to_string(k) + " out of range");
  return static_cast<std::size_t>(k);
}

Json decision_json(const SequenceDecision& d) {
  return {{"decision", to_string(d.decision)},
          {"threshold", d.threshold},
          {"witness", {d.witness_m, d.witness_n}},
          {"witness_gauge", io::enclosure(d.witness_gauge)},
          {"witness_eps", io::number(d.witness_eps)},
          {"worst_ratio", io::number(d.worst_ratio)},
          {"note", d.note}};
}

Json run_cauchy(const Json& payload, const Config&) {
  io::require_fields(payload, {"space", "seq", "disk", "eps", "limit"}, "payload");
  const ModelSpace space = io::space_from_json(member(payload, "space"));
  const SequenceModel x = io::sequence_from_json(member(payload, "seq"));
  const NullSequence eps = io::null_sequence_from_json(member(payload, "eps"));
  const std::size_t disk = disk_index(payload, space);
  const SequenceDecision c = cauchy_check(space, x, disk, eps);
  Json out = {{"disk", disk}, {"eps", eps.to_string()}, {"cauchy", decision_json(c)}};
  out["verdicts"] = {{"cauchy", verdict_of(c.decision)}};
  if (payload.contains("limit")) {
    const SequenceDecision v = convergence_check(space, x, io::vector_from_json(payload["limit"]), disk, eps);
    out["convergence"] = decision_json(v);
    out["verdicts"]["convergence"] = verdict_of(v.decision);
  }
  return out;
}

Json run_complete(const Json& payload, const Config&) {
  io::require_fields(payload, {"space", "seq", "disk", "eps"}, "payload");
  const ModelSpace space = io::space_from_json(member(payload, "space"));
  const CompletenessReport rep = completeness_check(space);
  Json disks = Json::array();
  for (const auto& d : rep.disks) {
    Json e = {{"disk", d.disk},
              {"symbolic_complete", d.symbolic_complete},
              {"direct_complete", d.direct_complete},
              {"battery_size", d.battery_size},
              {"note", d.note}};
    if (d.witness) e["witness"] = {{"seq", io::to_json(*d.witness)}, {"eps", d.witness_eps.to_string()}};
    disks.push_back(std::move(e));
  }
  Json out = {{"disks", disks}, {"complete", rep.complete}, {"cross_validated", rep.cross_validated}};
  out["verdicts"] = {{"cross_validation", rep.cross_validated ? "pass" : "fail"}};
  if (payload.contains("seq")) {
    const SequenceModel x = io::sequence_from_json(payload["seq"]);
    const NullSequence eps = io::null_sequence_from_json(member(payload, "eps"));
    const std::size_t disk = disk_index(payload, space);
    const SequenceDecision c = cauchy_check(space, x, disk, eps);
    Json el = {{"disk", disk}, {"eps", eps.to_string()}, {"cauchy", decision_json(c)}};
    if (c.decision == Decision::Yes) {
      const Completion comp(space, disk);
      const CompletionElement e = comp.make(x, eps);
      el["threshold"] = e.threshold;
      el["gauge"] = io::enclosure(comp.gauge_in_quotient(e));
      el["limit"] = io::to_json(comp.limit(e));
    }
    out["completion"] = el;
    out["verdicts"]["completion_element"] = verdict_of(c.decision);
  }
  return out;
}

Json run_approx(const Json& payload, const Config& cfg) {
  io::require_fields(payload, {"space", "set", "ops"}, "payload");
  const AmbientGauge t = io::ambient_from_json(member(payload, "space"));
  const CompactSetModel s = io::compact_set_from_json(member(payload, "set"));
  const Json& ops = member(payload, "ops");
  const OperatorFamily family = io::family_from_json(ops);
  const Multiplier f = ops.contains("target") ? io::multiplier_from_json(ops["target"]) : Multiplier::identity();
  const int count = cfg.integer("count", 32, 1, 1 << 20);

  const UniformReport u = uniform_convergence_on_set(family, f, s, t, count);
  std::vector<double> hi, lo;
  for (const auto& e : u.rates) {
    hi.push_back(e.hi);
    lo.push_back(e.lo);
  }
  Json out = {{"rates", io::numbers(hi)},
              {"rates_lo", io::numbers(lo)},
              {"limit_rate", io::enclosure(u.limit_rate)},
              {"nonincreasing", u.nonincreasing}};
  out["verdicts"] = {{"uniform", to_string(u.verdict)}};

  const SamplingReport sr = sample_rates(family, f, s, t, u.rates, cfg.integer("samples", 1000, 1, 1 << 24),
                                         cfg.seed(2024));
  out["sampling"] = {{"samples", sr.samples}, {"worst_ratio", io::number(sr.worst_ratio)}, {"sound", sr.sound}};
  out["verdicts"]["sampling"] = sr.sound ? "pass" : "fail";

  try {
    const PointwiseReport pw = pointwise_vs_uniform_check(family, f, s, t, count);
    Json limits = Json::array();
    for (const auto& e : pw.pattern_limits) limits.push_back(io::enclosure(e));
    out["pointwise"] = {{"pointwise", to_string(pw.pointwise)}, {"uniform", to_string(pw.uniform)},
                        {"pattern_limits", limits}};
    out["verdicts"]["pointwise_agreement"] = "pass";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidInput) throw;
    out["pointwise"] = {{"skipped", e.what()}};
    out["verdicts"]["pointwise_agreement"] = "inconclusive";
  }

  const double tol = cfg.real("tol", 1e-3);
  try {
    const LocalApproxReport la =
        local_approx_property_check(t, s, tol, cfg.integer("rank_budget", 1 << 20, 0, 1 << 30));
    out["local_approx"] = {{"tol", tol},
                           {"rank", la.rank},
                           {"final_rate", io::enclosure(la.final_rate)},
                           {"t_scale", io::number(la.t_scale)},
                           {"reduction", la.reduction}};
    out["verdicts"]["local_approx"] = "pass";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
    out["local_approx"] = {{"tol", tol}, {"note", e.what()}};
    out["verdicts"]["local_approx"] = "inconclusive";
  }
  return out;
}

using Runner = Json (*)(const Json&, const Config&);

Runner runner_for(const std::string& command) {
  if (command == "jsr") return run_jsr;
  if (command == "hull") return run_hull;
  if (command == "isoradial") return run_isoradial;
  if (command == "apple") return run_apple;
  if (command == "cauchy") return run_cauchy;
  if (command == "complete") return run_complete;
  if (command == "approx") return run_approx;
  bad("unknown command \"" + command + "\"");
}

}  // namespace

Json execute(const Json& instance) {
  io::require_schema(instance, "instance");
  io::require_fields(instance, {"schema", "command", "payload", "config"}, "instance");
  if (!instance.contains("command") || !instance["command"].is_string()) bad("instance: missing command");
  const std::string command = instance["command"].get<std::string>();
  const Runner run = runner_for(command);
  if (!instance.contains("payload") || !instance["payload"].is_object()) bad("instance: payload must be an object");
  const Json config = instance.value("config", Json::object());
  io::require_fields(config, {"depth", "gap", "tol", "seed", "samples", "tgrid", "count", "rank_budget"}, "config");

  const auto start = std::chrono::steady_clock::now();
  Json report = run(instance["payload"], Config(config));
  const auto stop = std::chrono::steady_clock::now();
  report["schema"] = io::kSchema;
  report["command"] = command;
  report["instance_digest"] = io::digest(instance);
  report["version"] = kVersion;
  report["wall_time_ms"] = std::chrono::duration<double, std::milli>(stop - start).count();
  return report;
}

int verdict_exit_code(const Json& report) {
  bool inconclusive = false;
  for (const auto& [name, v] : report.at("verdicts").items()) {
    if (v == "fail") return kSomeFail;
    if (v != "pass") inconclusive = true;
  }
  return inconclusive ? kInconclusive : kAllPass;
}

int error_exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::DescriptorMismatch:
    case ErrorKind::Unsupported:
    case ErrorKind::Unbounded: return kInputError;
    default: return kNumericalError;
  }
}

Json without_timing(Json report) {
  report.erase("wall_time_ms");
  return report;
}

// ------------------------------------------------------------------ fixtures

std::vector<std::string> fixture_names() {
  return {"golden-pair", "trig-poly", "matrix-tower", "interval-restriction", "trig-fejer", "completion-demo",
          "truncation-box"};
}

Json make_fixture(const std::string& name) {
  Json inst = {{"schema", io::kSchema}};
  if (name == "golden-pair") {
    const auto d = share(AlgebraDescriptor::matrix(2));
    Matrix a(2, 2), b(2, 2);
    a << 1, 1, 0, 1;
    b << 1, 0, 1, 1;
    inst["command"] = "jsr";
    inst["payload"] = io::to_json(BoundedSet({AlgebraElement(d, {a}), AlgebraElement(d, {b})}));
    inst["config"] = {{"depth", 12}, {"gap", 1e-3}};
    return inst;
  }
  for (const auto& fx : fixture_catalog()) {
    if (fx.name != name) continue;
    Json basis = Json::array();
    for (const auto& x : fx.sampling_basis) basis.push_back(io::to_json(x));
    inst["command"] = "isoradial";
    inst["payload"] = {{"map", io::to_json(fx.map.map())}, {"sampling_basis", basis}};
    inst["config"] = {{"depth", 6}, {"tol", 1e-2}};
    return inst;
  }
  if (name == "trig-fejer") {
    inst["command"] = "apple";
    inst["payload"] = {{"fixture", "trig-fejer"}};
    inst["config"] = {{"depth", 6}, {"tgrid", 65}, {"samples", 8}};
    return inst;
  }
  if (name == "completion-demo") {
    ModelSpace c00;
    c00.disks = {WeightedGauge::l1()};
    c00.support = SupportModel::FinitelySupported;
    // Partial sums of sum_k 2^-k e_k: Cauchy in l1 with eps_m = 2^-m, limit outside c00.
    const SequenceModel partial({}, {SeqTerm::truncation(1.0, ModelVector::closed_form({1.0, 0.0, 0.5}))});
    inst["command"] = "complete";
    inst["payload"] = {{"space", io::to_json(c00)},
                       {"seq", io::to_json(partial)},
                       {"disk", 0},
                       {"eps", io::to_json(NullSequence::geometric(1.0, 0.5))}};
    return inst;
  }
  if (name == "truncation-box") {
    inst["command"] = "approx";
    inst["payload"] = {{"space", {{"weight", io::to_json(Monomial{})}, {"kind", "l2"}}},
                       {"set", {{"envelope", io::to_json(Monomial{1.0, 0.0, 0.5})}}},
                       {"ops", {{"kind", "truncation"}, {"target", "identity"}}}};
    inst["config"] = {{"tol", 1e-3}, {"count", 32}};
    return inst;
  }
  bad("unknown fixture \"" + name + "\"");
}

std::string flatten_csv(const Json& report) {
  std::ostringstream os;
  os << "field,index,value\n";
  const auto scalar = [](const Json& v) { return v.is_primitive(); };
  const std::function<void(const Json&, const std::string&)> walk = [&](const Json& j, const std::string& path) {
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) walk(v, path.empty() ? k : path + "." + k);
    } else if (j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), scalar)) {
      for (std::size_t i = 0; i < j.size(); ++i)
        os << path << ',' << i << ',' << (j[i].is_string() ? j[i].get<std::string>() : io::canonical_dump(j[i]))
           << '\n';
    }
  };
  walk(report, "");
  return os.str();
}

// ---------------------------------------------------------------------- main

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(path + ": malformed JSON: " + e.what());
  }
}

// Schema-checked component file with the schema tag removed.
Json read_component(const std::string& path) {
  Json j = read_json(path);
  io::require_schema(j, path);
  j.erase("schema");
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text) || !out.flush()) bad("cannot write " + path);
}

struct Options {
  std::string input, out, csv, fixture, sigmas, h, space, seq, set, ops, eps, limit, name;
  std::optional<unsigned> threads;
  std::optional<int> depth, samples, tgrid, count, disk, rank_budget;
  std::optional<double> gap, tol, r;
  std::optional<std::int64_t> seed;
};

void common_flags(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Report path (default: stdout)");
  sub->add_option("--csv", o.csv, "Also write tabular fields as CSV");
  sub->add_option("--threads", o.threads, "Worker threads (default: BORNO_THREADS or all cores)")
      ->check(CLI::Range(1u, 1024u));
  sub->add_option("--depth", o.depth, "Search depth");
  sub->add_option("--gap", o.gap, "Target gap of radius intervals");
  sub->add_option("--tol", o.tol, "Tolerance");
  sub->add_option("--seed", o.seed, "Sampler seed");
}

// Input file: a full instance, or the command's payload component.
Json instance_from_input(const std::string& command, const std::string& path) {
  Json j = read_json(path);
  if (j.is_object() && j.contains("command")) {
    if (j["command"] != command) bad(path + ": instance is for command " + j["command"].dump());
    return j;
  }
  io::require_schema(j, path);
  j.erase("schema");
  return {{"schema", io::kSchema}, {"command", command}, {"payload", j}};
}

Json build_instance(const std::string& command, const Options& o) {
  Json inst;
  if (command == "run") {
    if (o.input.empty()) bad("run needs --input");
    inst = read_json(o.input);
  } else if (!o.input.empty()) {
    inst = instance_from_input(command, o.input);
    if (command == "hull" && !inst["payload"].contains("set")) inst["payload"] = {{"set", inst["payload"]}};
    if (command == "isoradial" && inst["payload"].contains("source")) inst["payload"] = {{"map", inst["payload"]}};
  } else {
    Json payload = Json::object();
    if (command == "isoradial") {
      if (o.fixture.empty()) bad("isoradial needs --fixture or --input");
      payload["fixture"] = o.fixture;
    } else if (command == "apple") {
      if (o.fixture.empty()) bad("apple needs --fixture or --input");
      payload["fixture"] = o.fixture;
      if (!o.sigmas.empty()) payload["sigmas"] = read_component(o.sigmas);
      if (!o.h.empty()) payload["h"] = read_component(o.h);
    } else if (command == "cauchy" || command == "complete") {
      if (o.space.empty()) bad(command + " needs --space or --input");
      payload["space"] = read_component(o.space);
      if (!o.seq.empty()) payload["seq"] = read_component(o.seq);
      if (!o.eps.empty()) payload["eps"] = o.eps.front() == '[' ? Json::parse(o.eps) : Json(o.eps);
      if (!o.limit.empty()) payload["limit"] = read_component(o.limit);
      if (o.disk) payload["disk"] = *o.disk;
    } else if (command == "approx") {
      if (o.space.empty() || o.set.empty() || o.ops.empty()) bad("approx needs --space, --set and --ops, or --input");
      payload = {{"space", read_component(o.space)}, {"set", read_component(o.set)}, {"ops", read_component(o.ops)}};
    } else {
      bad(command + " needs --input");
    }
    inst = {{"schema", io::kSchema}, {"command", command}, {"payload", payload}};
  }
  if (!inst.is_object()) bad("instance must be a JSON object");
  if (command == "hull" && o.r) inst["payload"]["r"] = *o.r;
  Json cfg = inst.value("config", Json::object());
  if (o.depth) cfg["depth"] = *o.depth;
  if (o.gap) cfg["gap"] = *o.gap;
  if (o.tol) cfg["tol"] = *o.tol;
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.samples) cfg["samples"] = *o.samples;
  if (o.tgrid) cfg["tgrid"] = *o.tgrid;
  if (o.count) cfg["count"] = *o.count;
  if (o.rank_budget) cfg["rank_budget"] = *o.rank_budget;
  if (!cfg.empty()) inst["config"] = cfg;
  return inst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"borno: certified spectral radii, isoradial maps and sequence-space checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto* run = app.add_subcommand("run", "Run an instance file");
  run->add_option("--input", o.input, "Instance JSON")->required();
  auto* jsr = app.add_subcommand("jsr", "Joint spectral radius enclosure");
  jsr->add_option("--input", o.input, "Instance or bounded-set JSON")->required();
  auto* hull = app.add_subcommand("hull", "Submultiplicative disked hull");
  hull->add_option("--input", o.input, "Instance or bounded-set JSON")->required();
  hull->add_option("--r", o.r, "Scale r with S in rT");
  auto* iso = app.add_subcommand("isoradial", "Isoradial certificate");
  auto* iso_src = iso->add_option_group("source");
  iso_src->add_option("--fixture", o.fixture, "Built-in fixture name");
  iso_src->add_option("--input", o.input, "Instance or map JSON");
  iso_src->require_option(1);
  iso->add_option("--samples", o.samples, "Samples per set size");
  auto* apple = app.add_subcommand("apple", "Apple certificate");
  apple->set_help_flag("--help", "Print this help message and exit");  // frees "h" for --h
  apple->add_option("--fixture", o.fixture, "trig-fejer, interval-restriction or identity");
  apple->add_option("--input", o.input, "Instance JSON")->excludes("--fixture");
  apple->add_option("--sigmas", o.sigmas, "Sigma stage orders JSON");
  apple->add_option("--h", o.h, "Replacement h map JSON");
  apple->add_option("--tgrid", o.tgrid, "Initial homotopy grid points");
  apple->add_option("--samples", o.samples, "Isoradial samples per set size");
  CLI::App* seqcmds[2] = {app.add_subcommand("cauchy", "Cauchy and convergence decisions"),
                          app.add_subcommand("complete", "Completeness and completion")};
  for (auto* sub : seqcmds) {
    sub->add_option("--input", o.input, "Instance JSON");
    sub->add_option("--space", o.space, "Model space JSON");
    sub->add_option("--seq", o.seq, "Sequence JSON");
    sub->add_option("--disk", o.disk, "Disk index");
    sub->add_option("--eps", o.eps, "Null sequence, e.g. geometric(1,0.5)+inverse_poly(1,1,1,2)");
  }
  seqcmds[0]->add_option("--limit", o.limit, "Limit vector JSON for the convergence check");
  auto* approx = app.add_subcommand("approx", "Finite-rank approximation rates");
  approx->add_option("--input", o.input, "Instance JSON");
  approx->add_option("--space", o.space, "Ambient gauge JSON");
  approx->add_option("--set", o.set, "Envelope JSON");
  approx->add_option("--ops", o.ops, "Operator family JSON");
  approx->add_option("--count", o.count, "Number of rates");
  approx->add_option("--samples", o.samples, "Sampled points");
  approx->add_option("--rank-budget", o.rank_budget, "Largest admissible rank");
  auto* fixture = app.add_subcommand("fixture", "Write a ready-made instance");
  fixture->add_option("name", o.name, "Fixture name")->required();
  fixture->add_option("--out", o.out, "Instance path (default: stdout)");
  fixture->footer("Fixtures: golden-pair trig-poly matrix-tower interval-restriction trig-fejer completion-demo "
                  "truncation-box");
  for (auto* sub : {run, jsr, hull, iso, apple, seqcmds[0], seqcmds[1], approx}) common_flags(sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    if (command == "fixture") {
      const std::string text = make_fixture(o.name).dump(2) + "\n";
      if (o.out.empty()) std::cout << text;
      else write_text(o.out, text);
      return kAllPass;
    }
    if (o.threads) set_thread_count(*o.threads);
    Json inst = build_instance(command, o);
    const Json report = execute(inst);
    const std::string text = report.dump(2) + "\n";
    if (o.out.empty()) std::cout << text;
    else write_text(o.out, text);
    if (!o.csv.empty()) write_text(o.csv, flatten_csv(report));
    return verdict_exit_code(report);
  } catch (const Error& e) {
    std::cerr << "borno: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return error_exit_code(e.kind());
  } catch (const Json::exception& e) {
    std::cerr << "borno: invalid-input: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "borno: numerical-failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace borno::cli
