#include "borno/json_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "borno/error.hpp"

namespace borno::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::InvalidInput, where + ": " + what);
}

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  require_object(j, where);
  const auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string get_string(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) bad(where, std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

double as_double(const Json& v, const std::string& where) {
  if (!v.is_number()) bad(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(where, "non-finite number");
  return x;
}

std::vector<double> double_array(const Json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(as_double(x, where));
  return out;
}

Complex as_complex(const Json& v, const std::string& where) {
  if (v.is_number()) return {as_double(v, where), 0.0};
  if (v.is_array() && v.size() == 2) return {as_double(v[0], where), as_double(v[1], where)};
  bad(where, "matrix entry must be a number or [re, im]");
}

Json complex_json(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return Json::array({z.real(), z.imag()});
}

NormKind norm_from_string(const std::string& s, const std::string& where) {
  if (s == "op2") return NormKind::Operator2;
  if (s == "maxrow") return NormKind::MaxRowSum;
  bad(where, "norm must be \"op2\" or \"maxrow\"");
}

void canonical(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {  // nlohmann objects iterate in key order
        if (!first) out += ',';
        first = false;
        out += Json(k).dump();
        out += ':';
        canonical(v, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        canonical(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      out += buf;
      break;
    }
    default: out += j.dump();
  }
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  canonical(j, out);
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::NumericalFailure, "SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string digest(const Json& j) { return sha256_hex(canonical_dump(j)); }

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json numbers(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

Json enclosure(const Enclosure& e) { return Json::array({number(e.lo), number(e.hi)}); }

void require_fields(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& [k, v] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; });
    if (!known) bad(where, "unknown field \"" + k + "\"");
  }
}

void require_schema(const Json& j, const std::string& where) {
  require_object(j, where);
  const auto it = j.find("schema");
  if (it == j.end() || !it->is_string() || it->get<std::string>() != kSchema)
    bad(where, std::string("expected \"schema\": \"") + kSchema + "\"");
}

double get_double(const Json& j, const char* key, const std::string& where) {
  return as_double(field(j, key, where), where + "." + key);
}

double get_double(const Json& j, const char* key, double fallback, const std::string& where) {
  require_object(j, where);
  return j.contains(key) ? get_double(j, key, where) : fallback;
}

std::int64_t get_int(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) bad(where, std::string("field \"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t get_int(const Json& j, const char* key, std::int64_t fallback, const std::string& where) {
  require_object(j, where);
  return j.contains(key) ? get_int(j, key, where) : fallback;
}

// ------------------------------------------------------------------ algebras

AlgebraDescriptor descriptor_from_json(const Json& j) {
  const std::string where = "descriptor";
  const std::string kind = get_string(j, "kind", where);
  if (kind == "matrix") {
    require_fields(j, {"kind", "dim", "norm"}, where);
    const auto dim = get_int(j, "dim", where);
    if (dim < 1 || dim > 4096) bad(where, "dim out of range");
    const NormKind norm = j.contains("norm") ? norm_from_string(get_string(j, "norm", where), where)
                                             : NormKind::Operator2;
    return AlgebraDescriptor::matrix(static_cast<int>(dim), norm);
  }
  if (kind == "direct_sum") {
    require_fields(j, {"kind", "summands"}, where);
    const Json& s = field(j, "summands", where);
    if (!s.is_array() || s.empty()) bad(where, "summands must be a non-empty array");
    std::vector<AlgebraDescriptor> parts;
    for (const auto& x : s) parts.push_back(descriptor_from_json(x));
    return AlgebraDescriptor::direct_sum(std::move(parts));
  }
  if (kind == "grid") {
    require_fields(j, {"kind", "points", "distances", "fiber"}, where);
    auto points = double_array(field(j, "points", where), where + ".points");
    auto fiber = descriptor_from_json(field(j, "fiber", where));
    if (j.contains("distances"))
      return AlgebraDescriptor::grid(std::move(points), double_array(j["distances"], where + ".distances"),
                                     std::move(fiber));
    return AlgebraDescriptor::grid(std::move(points), std::move(fiber));
  }
  if (kind == "circle_grid") {
    require_fields(j, {"kind", "m", "fiber"}, where);
    const auto m = get_int(j, "m", where);
    if (m < 1 || m > 65536) bad(where, "m out of range");
    return AlgebraDescriptor::circle_grid(static_cast<int>(m), descriptor_from_json(field(j, "fiber", where)));
  }
  bad(where, "unknown kind \"" + kind + "\"");
}

Json to_json(const AlgebraDescriptor& d) {
  switch (d.kind()) {
    case AlgebraDescriptor::Kind::Matrix:
      return {{"kind", "matrix"}, {"dim", d.dim()}, {"norm", to_string(d.norm())}};
    case AlgebraDescriptor::Kind::DirectSum: {
      Json s = Json::array();
      for (const auto& c : d.summands()) s.push_back(to_json(c));
      return {{"kind", "direct_sum"}, {"summands", s}};
    }
    case AlgebraDescriptor::Kind::Grid: {
      const std::size_t n = d.grid_size();
      bool euclidean = true;
      std::vector<double> dist;
      dist.reserve(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
          dist.push_back(d.distance(i, k));
          euclidean = euclidean && dist.back() == std::abs(d.points()[i] - d.points()[k]);
        }
      Json out = {{"kind", "grid"}, {"points", d.points()}, {"fiber", to_json(d.fiber())}};
      if (!euclidean) out["distances"] = dist;
      return out;
    }
  }
  return nullptr;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) bad(where, "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) bad(where, "ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = as_complex(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

AlgebraElement element_from_json(const DescriptorPtr& d, const Json& j) {
  const std::string where = "element";
  std::vector<Matrix> blocks;
  if (j.is_array()) {
    if (d->blocks().size() != 1) bad(where, "bare matrices need a single-block algebra; use {\"blocks\": [...]}");
    blocks.push_back(matrix_from_json(j, where));
  } else {
    require_fields(j, {"blocks"}, where);
    const Json& b = field(j, "blocks", where);
    if (!b.is_array()) bad(where, "blocks must be an array");
    for (const auto& x : b) blocks.push_back(matrix_from_json(x, where));
  }
  return AlgebraElement(d, std::move(blocks));
}

Json to_json(const AlgebraElement& a) {
  if (a.blocks().size() == 1) return to_json(a.block(0));
  Json b = Json::array();
  for (const auto& m : a.blocks()) b.push_back(to_json(m));
  return {{"blocks", b}};
}

BoundedSet bounded_set_from_json(const Json& j) {
  const std::string where = "set";
  require_fields(j, {"descriptor", "generators", "hull"}, where);
  const auto d = share(descriptor_from_json(field(j, "descriptor", where)));
  const Json& g = field(j, "generators", where);
  if (!g.is_array() || g.empty()) bad(where, "generators must be a non-empty array");
  std::vector<AlgebraElement> gens;
  for (const auto& x : g) gens.push_back(element_from_json(d, x));
  bool hull = false;
  if (j.contains("hull")) {
    if (!j["hull"].is_boolean()) bad(where, "hull must be a boolean");
    hull = j["hull"].get<bool>();
  }
  return BoundedSet(std::move(gens), hull);
}

Json to_json(const BoundedSet& s) {
  Json g = Json::array();
  for (const auto& x : s.generators) g.push_back(to_json(x));
  Json out = {{"descriptor", to_json(s.descriptor())}, {"generators", g}};
  if (s.hull) out["hull"] = true;
  return out;
}

LinearMap linear_map_from_json(const Json& j) {
  const std::string where = "map";
  require_fields(j, {"source", "target", "basis_action"}, where);
  const auto src = share(descriptor_from_json(field(j, "source", where)));
  const auto tgt = share(descriptor_from_json(field(j, "target", where)));
  Matrix a = matrix_from_json(field(j, "basis_action", where), where + ".basis_action");
  if (a.rows() != static_cast<Eigen::Index>(tgt->complex_dim()) ||
      a.cols() != static_cast<Eigen::Index>(src->complex_dim()))
    throw Error(ErrorKind::DescriptorMismatch, "map: basis_action must be " + std::to_string(tgt->complex_dim()) +
                                                   " x " + std::to_string(src->complex_dim()));
  return LinearMap(src, tgt, std::move(a));
}

Json to_json(const LinearMap& f) {
  return {{"source", to_json(f.source())}, {"target", to_json(f.target())}, {"basis_action", to_json(f.action())}};
}

// ---------------------------------------------------------- sequence spaces

Monomial monomial_from_json(const Json& j, const std::string& where) {
  require_fields(j, {"c", "p", "b"}, where);
  return {get_double(j, "c", 1.0, where), get_double(j, "p", 0.0, where), get_double(j, "b", 1.0, where)};
}

Json to_json(const Monomial& m) { return {{"c", m.c}, {"p", m.p}, {"b", m.b}}; }

ModelVector vector_from_json(const Json& j) {
  const std::string where = "vector";
  if (j.is_array()) return ModelVector(double_array(j, where));
  require_fields(j, {"head", "tails"}, where);
  std::vector<double> head;
  if (j.contains("head")) head = double_array(j["head"], where + ".head");
  std::vector<TailTerm> tails;
  if (j.contains("tails")) {
    if (!j["tails"].is_array()) bad(where, "tails must be an array");
    for (const auto& t : j["tails"]) {
      require_fields(t, {"c", "p", "rho"}, where + ".tails");
      tails.push_back({get_double(t, "c", 1.0, where), get_double(t, "p", 0.0, where), get_double(t, "rho", where)});
    }
  }
  return ModelVector(std::move(head), std::move(tails));
}

Json to_json(const ModelVector& v) {
  Json tails = Json::array();
  for (const auto& t : v.tails()) tails.push_back({{"c", t.c}, {"p", t.p}, {"rho", t.rho}});
  Json out = {{"head", v.head()}};
  if (!tails.empty()) out["tails"] = tails;
  return out;
}

ModelSpace space_from_json(const Json& j) {
  const std::string where = "space";
  require_fields(j, {"schema", "disks", "support", "horizon"}, where);
  ModelSpace s;
  const Json& d = field(j, "disks", where);
  if (!d.is_array() || d.empty()) bad(where, "disks must be a non-empty array");
  for (const auto& x : d) {
    require_fields(x, {"weight", "kind"}, where + ".disks");
    WeightedGauge g;
    g.weight = x.contains("weight") ? monomial_from_json(x["weight"], where + ".weight") : Monomial{};
    const std::string kind = x.contains("kind") ? get_string(x, "kind", where) : "l1";
    if (kind == "l1") g.kind = GaugeKind::L1;
    else if (kind == "sup") g.kind = GaugeKind::Sup;
    else bad(where, "disk kind must be \"l1\" or \"sup\"");
    if (!(g.weight.c > 0.0 && g.weight.b > 0.0)) bad(where, "disk weights need c > 0 and b > 0");
    s.disks.push_back(g);
  }
  if (j.contains("support")) {
    const std::string sup = get_string(j, "support", where);
    if (sup == "tails") s.support = SupportModel::Tails;
    else if (sup == "finite") s.support = SupportModel::FinitelySupported;
    else if (sup == "zero") s.support = SupportModel::Zero;
    else bad(where, "support must be \"tails\", \"finite\" or \"zero\"");
  }
  s.horizon = get_int(j, "horizon", s.horizon, where);
  if (s.horizon < 1 || s.horizon > 4096) bad(where, "horizon out of range");
  return s;
}

Json to_json(const ModelSpace& s) {
  Json disks = Json::array();
  for (const auto& g : s.disks) disks.push_back({{"weight", to_json(g.weight)}, {"kind", to_string(g.kind)}});
  return {{"disks", disks}, {"support", to_string(s.support)}, {"horizon", s.horizon}};
}

SequenceModel sequence_from_json(const Json& j) {
  const std::string where = "sequence";
  require_fields(j, {"schema", "prefix", "terms"}, where);
  std::vector<ModelVector> prefix;
  if (j.contains("prefix")) {
    if (!j["prefix"].is_array()) bad(where, "prefix must be an array");
    for (const auto& v : j["prefix"]) prefix.push_back(vector_from_json(v));
  }
  std::vector<SeqTerm> terms;
  const Json& t = field(j, "terms", where);
  if (!t.is_array()) bad(where, "terms must be an array");
  for (const auto& x : t) {
    const std::string tw = where + ".terms";
    const std::string kind = get_string(x, "kind", tw);
    const double c = get_double(x, "c", 1.0, tw);
    if (kind == "geometric") {
      require_fields(x, {"kind", "c", "r", "v"}, tw);
      terms.push_back(SeqTerm::geometric(c, get_double(x, "r", tw), vector_from_json(field(x, "v", tw))));
    } else if (kind == "linear") {
      require_fields(x, {"kind", "c", "v"}, tw);
      terms.push_back(SeqTerm::linear(c, vector_from_json(field(x, "v", tw))));
    } else if (kind == "truncation") {
      require_fields(x, {"kind", "c", "u", "a", "s"}, tw);
      terms.push_back(SeqTerm::truncation(c, vector_from_json(field(x, "u", tw)), get_int(x, "a", 1, tw),
                                          get_int(x, "s", 0, tw)));
    } else if (kind == "moving") {
      require_fields(x, {"kind", "c", "a", "s"}, tw);
      terms.push_back(SeqTerm::moving(c, get_int(x, "a", 1, tw), get_int(x, "s", 0, tw)));
    } else {
      bad(tw, "unknown term kind \"" + kind + "\"");
    }
  }
  return SequenceModel(std::move(prefix), std::move(terms));
}

Json to_json(const SequenceModel& x) {
  Json prefix = Json::array();
  for (const auto& v : x.prefix()) prefix.push_back(to_json(v));
  Json terms = Json::array();
  for (const auto& t : x.tail()) {
    switch (t.kind) {
      case SeqTerm::Kind::Geometric:
        terms.push_back({{"kind", "geometric"}, {"c", t.c}, {"r", t.r}, {"v", to_json(t.v)}});
        break;
      case SeqTerm::Kind::Linear: terms.push_back({{"kind", "linear"}, {"c", t.c}, {"v", to_json(t.v)}}); break;
      case SeqTerm::Kind::Truncation:
        terms.push_back({{"kind", "truncation"}, {"c", t.c}, {"u", to_json(t.v)}, {"a", t.a}, {"s", t.s}});
        break;
      case SeqTerm::Kind::Moving: terms.push_back({{"kind", "moving"}, {"c", t.c}, {"a", t.a}, {"s", t.s}}); break;
    }
  }
  Json out = {{"terms", terms}};
  if (!prefix.empty()) out["prefix"] = prefix;
  return out;
}

NullSequence null_sequence_from_json(const Json& j) {
  const std::string where = "eps";
  if (j.is_string()) return parse_null_sequence(j.get<std::string>());
  if (!j.is_array()) bad(where, "expected a term array or a descriptor string");
  NullSequence out;
  for (const auto& t : j) {
    const std::string kind = get_string(t, "kind", where);
    if (kind == "geometric") {
      require_fields(t, {"kind", "a", "q"}, where);
      out = out + NullSequence::geometric(get_double(t, "a", 1.0, where), get_double(t, "q", where));
    } else if (kind == "inverse_poly") {
      require_fields(t, {"kind", "a", "alpha", "beta", "p"}, where);
      out = out + NullSequence::inverse_poly(get_double(t, "a", 1.0, where), get_double(t, "alpha", 1.0, where),
                                             get_double(t, "beta", 1.0, where), get_double(t, "p", where));
    } else {
      bad(where, "unknown term kind \"" + kind + "\"");
    }
  }
  return out;
}

NullSequence parse_null_sequence(const std::string& desc) {
  const std::string where = "eps \"" + desc + "\"";
  std::string s;
  for (char ch : desc)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) bad(where, "empty descriptor");
  NullSequence out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t open = s.find('(', pos);
    const std::size_t close = s.find(')', pos);
    const std::string name = s.substr(pos, open == std::string::npos ? std::string::npos : open - pos);
    if (name == "zero" && (open == std::string::npos || s[pos + 4] == '+')) {
      pos += 4;
    } else {
      if (open == std::string::npos || close == std::string::npos || close < open) bad(where, "expected name(args)");
      std::vector<double> args;
      std::stringstream ss(s.substr(open + 1, close - open - 1));
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          std::size_t used = 0;
          args.push_back(std::stod(tok, &used));
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          bad(where, "bad number \"" + tok + "\"");
        }
      }
      if (name == "geometric" && args.size() == 2) out = out + NullSequence::geometric(args[0], args[1]);
      else if (name == "inverse_poly" && args.size() == 4)
        out = out + NullSequence::inverse_poly(args[0], args[1], args[2], args[3]);
      else bad(where, "expected geometric(a,q), inverse_poly(a,alpha,beta,p) or zero");
      pos = close + 1;
    }
    if (pos < s.size()) {
      if (s[pos] != '+') bad(where, "terms must be joined by '+'");
      ++pos;
      if (pos == s.size()) bad(where, "trailing '+'");
    }
  }
  return out;
}

Json to_json(const NullSequence& e) {
  Json out = Json::array();
  for (const auto& t : e.terms()) {
    if (t.kind == NullTerm::Kind::Geometric)
      out.push_back({{"kind", "geometric"}, {"a", t.a}, {"q", t.q}});
    else
      out.push_back({{"kind", "inverse_poly"}, {"a", t.a}, {"alpha", t.alpha}, {"beta", t.beta}, {"p", t.p}});
  }
  return out;
}

// ------------------------------------------------------------ finite rank

AmbientGauge ambient_from_json(const Json& j) {
  const std::string where = "ambient space";
  require_fields(j, {"schema", "weight", "kind"}, where);
  AmbientGauge t;
  if (j.contains("weight")) t.weight = monomial_from_json(j["weight"], where + ".weight");
  const std::string kind = j.contains("kind") ? get_string(j, "kind", where) : "l2";
  if (kind == "l1") t.kind = AmbientKind::L1;
  else if (kind == "l2") t.kind = AmbientKind::L2;
  else if (kind == "sup") t.kind = AmbientKind::Sup;
  else bad(where, "kind must be \"l1\", \"l2\" or \"sup\"");
  return t;
}

CompactSetModel compact_set_from_json(const Json& j) {
  const std::string where = "set";
  require_fields(j, {"schema", "envelope"}, where);
  return {monomial_from_json(field(j, "envelope", where), where + ".envelope")};
}

Multiplier multiplier_from_json(const Json& j) {
  const std::string where = "multiplier";
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "identity") return Multiplier::identity();
    if (s == "zero") return Multiplier::zero();
    bad(where, "expected \"identity\", \"zero\" or an object");
  }
  require_fields(j, {"head", "tail", "truncation"}, where);
  if (j.contains("truncation")) {
    if (j.size() != 1) bad(where, "truncation stands alone");
    return Multiplier::truncation(get_int(j, "truncation", where));
  }
  Multiplier m;
  if (j.contains("head")) m.head = double_array(j["head"], where + ".head");
  if (j.contains("tail")) {
    const Monomial t = monomial_from_json(j["tail"], where + ".tail");
    m.tail_c = t.c;
    m.tail_p = t.p;
    m.tail_b = t.b;
  }
  return m;
}

Json to_json(const Multiplier& m) {
  Json out = {{"head", m.head}};
  if (m.tail_c != 0.0) out["tail"] = {{"c", m.tail_c}, {"p", m.tail_p}, {"b", m.tail_b}};
  return out;
}

OperatorFamily family_from_json(const Json& j) {
  const std::string where = "ops";
  require_fields(j, {"schema", "kind", "offset", "op", "alpha", "beta", "declared_bound", "target"}, where);
  const std::string kind = get_string(j, "kind", where);
  OperatorFamily f;
  if (kind == "truncation") {
    f = OperatorFamily::truncations(get_int(j, "offset", 0, where));
  } else if (kind == "constant") {
    f = OperatorFamily::constant(multiplier_from_json(field(j, "op", where)));
  } else if (kind == "scaled") {
    f = OperatorFamily::scaled(get_double(j, "alpha", 0.0, where), get_double(j, "beta", 1.0, where),
                               multiplier_from_json(field(j, "op", where)));
  } else {
    bad(where, "kind must be \"truncation\", \"constant\" or \"scaled\"");
  }
  f.declared_bound = get_double(j, "declared_bound", 0.0, where);
  return f;
}

}  // namespace borno::io
