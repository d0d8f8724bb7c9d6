#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "borno/cli.hpp"
#include "borno/isoradial.hpp"
#include "borno/parallel.hpp"

using namespace borno;
using io::Json;
namespace fs = std::filesystem;

namespace {

int exit_code_of(const Json& inst) {
  try {
    return cli::verdict_exit_code(cli::execute(inst));
  } catch (const Error& e) {
    return cli::error_exit_code(e.kind());
  }
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("borno_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI binary; returns its exit status, or -1 when it is unavailable.
int run_cli(const std::string& args, const std::string& env = "") {
  const char* bin = std::getenv("BORNO_CLI");
  if (!bin) return -1;
  const std::string cmd = env + " '" + std::string(bin) + "' " + args + " >/dev/null 2>" + (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

}  // namespace

TEST_CASE("sha-256 test vectors") {
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("canonical form sorts keys and fixes float formatting") {
  const Json a = Json::parse(R"({"b": [1, 2.5, "x"], "a": {"z": true, "y": null}, "c": 0.1})");
  const Json b = Json::parse(R"({"c":0.1,"a":{"y":null,"z":true},"b":[1,2.5,"x"]})");
  CHECK(io::canonical_dump(a) == R"({"a":{"y":null,"z":true},"b":[1,2.5,"x"],"c":0.10000000000000001})");
  CHECK(io::digest(a) == io::digest(b));
  CHECK(io::digest(a) != io::digest(Json::parse(R"({"c":0.2})")));
  CHECK(io::number(INFINITY) == "inf");
  CHECK(io::number(-INFINITY) == "-inf");
  CHECK(io::number(1.5) == 1.5);
}

TEST_CASE("null sequence descriptors") {
  const NullSequence e = io::parse_null_sequence("geometric(2, 0.5) + inverse_poly(1,1,1,2)");
  CHECK(e.at(0) == 3.0);
  CHECK(e.at(3) == doctest::Approx(0.25 + 1.0 / 16.0));
  CHECK(io::parse_null_sequence("zero").terms().empty());
  for (const char* badly : {"", "geometric(1)", "geometric(1,0.5", "inverse_poly(1,1,1)", "geometric(1,2)",
                            "geometric(1,0.5)+", "foo(1,2)", "geometric(1,x)"})
    CHECK_THROWS_AS(io::parse_null_sequence(badly), Error);
  CHECK(io::to_json(e) == Json::parse(R"([{"kind":"geometric","a":2.0,"q":0.5},
                                            {"kind":"inverse_poly","a":1.0,"alpha":1.0,"beta":1.0,"p":2.0}])"));
}

TEST_CASE("model objects round-trip through JSON") {
  const std::vector<AlgebraDescriptor> ds = {
      AlgebraDescriptor::matrix(3, NormKind::MaxRowSum),
      AlgebraDescriptor::direct_sum({AlgebraDescriptor::matrix(1), AlgebraDescriptor::matrix(2)}),
      AlgebraDescriptor::grid({0.0, 0.5, 2.0}, AlgebraDescriptor::matrix(2)),
      AlgebraDescriptor::circle_grid(5, AlgebraDescriptor::matrix(1)),
  };
  for (const auto& d : ds) {
    const Json j = Json::parse(io::to_json(d).dump());
    CHECK(io::descriptor_from_json(j) == d);
  }

  const auto d = share(AlgebraDescriptor::direct_sum({AlgebraDescriptor::matrix(1), AlgebraDescriptor::matrix(2)}));
  CVector coords(5);
  coords << Complex(1, 2), 0.5, Complex(0, -1), 3, 1e-300;
  const AlgebraElement x = AlgebraElement::from_coordinates(d, coords);
  const AlgebraElement y = io::element_from_json(d, Json::parse(io::to_json(x).dump()));
  CHECK((x - y).is_zero());

  const LinearMap f = corner_embedding(1, 3);
  const LinearMap g = io::linear_map_from_json(Json::parse(io::to_json(f).dump()));
  CHECK(g.source() == f.source());
  CHECK(g.action() == f.action());

  const ModelVector v({1.0, -2.0}, {{3.0, 1.0, 0.5}, {1.0, 0.0, 0.25}});
  CHECK(io::vector_from_json(Json::parse(io::to_json(v).dump())) == v);

  const SequenceModel seq({ModelVector::unit(0)}, {SeqTerm::geometric(2.0, 0.5, v), SeqTerm::truncation(1.0, v, 2, 1),
                                                   SeqTerm::moving(0.5, 1, 3), SeqTerm::linear(1.0, ModelVector::unit(1))});
  const SequenceModel back = io::sequence_from_json(Json::parse(io::to_json(seq).dump()));
  for (std::int64_t n = 0; n < 12; ++n) CHECK(back.at(n) == seq.at(n));

  const Multiplier m = Multiplier::diagonal(2.0, 1.0, 0.5) - Multiplier::truncation(2);
  CHECK(io::multiplier_from_json(Json::parse(io::to_json(m).dump())) == m);
}

TEST_CASE("schema violations are input errors") {
  Json inst = cli::make_fixture("golden-pair");
  CHECK(exit_code_of(inst) == cli::kAllPass);

  Json extra = inst;
  extra["surprise"] = 1;
  CHECK(exit_code_of(extra) == cli::kInputError);

  Json wrong_schema = inst;
  wrong_schema["schema"] = "borno/0";
  CHECK(exit_code_of(wrong_schema) == cli::kInputError);

  Json unknown_config = inst;
  unknown_config["config"]["speed"] = 11;
  CHECK(exit_code_of(unknown_config) == cli::kInputError);

  Json unknown_payload = inst;
  unknown_payload["payload"]["colour"] = "red";
  CHECK(exit_code_of(unknown_payload) == cli::kInputError);

  Json unknown_command = inst;
  unknown_command["command"] = "solve";
  CHECK(exit_code_of(unknown_command) == cli::kInputError);

  Json ragged = inst;
  ragged["payload"]["generators"][0] = Json::parse("[[1, 1], [0]]");
  CHECK(exit_code_of(ragged) == cli::kInputError);

  Json mismatched = inst;
  mismatched["payload"]["generators"][0] = Json::parse("[[1, 1, 0], [0, 1, 0], [0, 0, 1]]");
  CHECK(exit_code_of(mismatched) == cli::kInputError);

  CHECK_THROWS_AS(cli::make_fixture("nope"), Error);
}

TEST_CASE("error kinds map to exit codes") {
  CHECK(cli::error_exit_code(ErrorKind::InvalidInput) == 3);
  CHECK(cli::error_exit_code(ErrorKind::DescriptorMismatch) == 3);
  CHECK(cli::error_exit_code(ErrorKind::Unsupported) == 3);
  CHECK(cli::error_exit_code(ErrorKind::NumericalFailure) == 4);
  CHECK(cli::error_exit_code(ErrorKind::CapExceeded) == 4);
  CHECK(cli::error_exit_code(ErrorKind::InvariantViolation) == 4);
  CHECK(cli::verdict_exit_code(Json::parse(R"({"verdicts":{"a":"pass","b":"inconclusive"}})")) == 2);
  CHECK(cli::verdict_exit_code(Json::parse(R"({"verdicts":{"a":"fail","b":"inconclusive"}})")) == 1);
  CHECK(cli::verdict_exit_code(Json::parse(R"({"verdicts":{"a":"pass"}})")) == 0);
}

TEST_CASE("every fixture validates and runs") {
  const std::map<std::string, int> expected = {
      {"golden-pair", 0},  {"trig-poly", 0},       {"matrix-tower", 0},   {"interval-restriction", 1},
      {"trig-fejer", 0},   {"completion-demo", 0}, {"truncation-box", 0},
  };
  CHECK(cli::fixture_names().size() == expected.size());
  for (const auto& name : cli::fixture_names()) {
    CAPTURE(name);
    // Through text, as a user would.
    const Json inst = Json::parse(cli::make_fixture(name).dump(2));
    const Json report = cli::execute(inst);
    CHECK(report["schema"] == io::kSchema);
    CHECK(report["instance_digest"] == io::digest(inst));
    CHECK(report["wall_time_ms"].get<double>() >= 0.0);
    CHECK(cli::verdict_exit_code(report) == expected.at(name));
  }
}

TEST_CASE("reports agree with direct library calls") {
  const Json g = cli::execute(cli::make_fixture("golden-pair"));
  CHECK(g["lower"].get<double>() >= 1.6180339);
  CHECK(g["upper"].get<double>() <= 1.6190);
  CHECK(g["witness_word"].size() >= 1);

  for (const char* name : {"trig-poly", "interval-restriction"}) {
    const Json r = cli::execute(cli::make_fixture(name));
    for (const auto& fx : fixture_catalog()) {
      if (fx.name != name) continue;
      const auto direct = isoradial_certificate(fx.map, fx.sampling_basis, SamplerConfig{}, 6, 1e-2);
      CHECK(r["worst_ratio"].get<double>() == direct.worst_ratio);
      CHECK(r["samples"].size() == direct.samples.size());
    }
  }

  const Json a = cli::execute(cli::make_fixture("truncation-box"));
  CHECK(std::abs(a["rates"][4].get<double>() - std::ldexp(1.0, -4) / std::sqrt(3.0)) <= 1e-12);
  CHECK(a["local_approx"]["rank"] == 11);

  const Json c = cli::execute(cli::make_fixture("completion-demo"));
  CHECK(c["complete"] == false);
  CHECK(c["cross_validated"] == true);
  CHECK(io::vector_from_json(c["completion"]["limit"]) == ModelVector::closed_form({1.0, 0.0, 0.5}));
}

TEST_CASE("reruns and thread counts give identical reports") {
  for (const char* name : {"golden-pair", "matrix-tower", "completion-demo", "truncation-box"}) {
    CAPTURE(name);
    const Json inst = cli::make_fixture(name);
    set_thread_count(1);
    const std::string one = io::canonical_dump(cli::without_timing(cli::execute(inst)));
    set_thread_count(4);
    const std::string four = io::canonical_dump(cli::without_timing(cli::execute(inst)));
    const std::string again = io::canonical_dump(cli::without_timing(cli::execute(inst)));
    CHECK(one == four);
    CHECK(four == again);
  }
}

TEST_CASE("csv flattening lists scalar arrays") {
  const Json r = Json::parse(R"({"rates":[0.5,"inf"],"sigma":{"indices":[1,2]},"note":"x","rows":[[1]]})");
  CHECK(cli::flatten_csv(r) == "field,index,value\nrates,0,0.5\nrates,1,inf\nsigma.indices,0,1\nsigma.indices,1,2\n");
}

TEST_CASE("command-line binary") {
  if (!std::getenv("BORNO_CLI")) {
    MESSAGE("BORNO_CLI not set; skipping binary checks");
    return;
  }
  const fs::path dir = scratch();
  const auto p = [&](const char* f) { return "'" + (dir / f).string() + "'"; };

  CHECK(run_cli("fixture golden-pair --out " + p("golden.json")) == 0);
  CHECK(run_cli("jsr --input " + p("golden.json") + " --out " + p("golden.report.json") + " --csv " + p("golden.csv")) == 0);
  const Json report = Json::parse(read_file(dir / "golden.report.json"));
  CHECK(report["lower"].get<double>() >= 1.618);
  for (const char* key : {"lower", "upper", "witness_word", "depth", "status", "wall_time_ms"}) CHECK(report.contains(key));
  CHECK(read_file(dir / "golden.csv").find("level_bounds,0,") != std::string::npos);

  CHECK(run_cli("run --input " + p("golden.json") + " --threads 1 --out " + p("t1.json")) == 0);
  CHECK(run_cli("run --input " + p("golden.json") + " --out " + p("t4.json"), "BORNO_THREADS=4") == 0);
  CHECK(cli::without_timing(Json::parse(read_file(dir / "t1.json"))) ==
        cli::without_timing(Json::parse(read_file(dir / "t4.json"))));

  CHECK(run_cli("run --input " + p("golden.json") + " --depth 1 --gap 1e-9 --out " + p("shallow.json")) == 2);

  CHECK(run_cli("fixture nope") == 3);
  write_file(dir / "bad.json", "{\"schema\": \"borno/1\", ");
  CHECK(run_cli("run --input " + p("bad.json")) == 3);
  CHECK(run_cli("run --input " + p("missing.json")) == 3);
  CHECK(run_cli("jsr --input " + p("golden.json") + " --depth notanumber") == 3);
  CHECK(run_cli("isoradial --fixture interval-restriction --out " + p("iso.json")) == 1);
  CHECK(Json::parse(read_file(dir / "iso.json"))["worst_ratio"].get<double>() >= 1.9);

  // Component files for the sequence and finite-rank commands.
  write_file(dir / "space.json", R"({"schema":"borno/1","disks":[{"weight":{"c":1,"p":0,"b":1},"kind":"l1"}]})");
  write_file(dir / "seq.json",
             R"({"schema":"borno/1","terms":[{"kind":"geometric","c":1,"r":0.5,"v":{"head":[0,1]}}]})");
  CHECK(run_cli("cauchy --space " + p("space.json") + " --seq " + p("seq.json") + " --disk 0 --eps 'geometric(1,0.5)'") == 0);
  CHECK(run_cli("cauchy --space " + p("space.json") + " --seq " + p("seq.json") + " --eps 'geometric(0.5,0.5)'") == 1);
  CHECK(run_cli("cauchy --space " + p("space.json") + " --seq " + p("seq.json") + " --disk 7 --eps 'geometric(1,0.5)'") == 3);
  CHECK(run_cli("complete --space " + p("space.json") + " --out " + p("complete.json")) == 0);
  CHECK(Json::parse(read_file(dir / "complete.json"))["complete"] == true);

  write_file(dir / "ambient.json", R"({"schema":"borno/1","kind":"l2"})");
  write_file(dir / "box.json", R"({"schema":"borno/1","envelope":{"c":1,"p":0,"b":0.5}})");
  write_file(dir / "ops.json", R"({"schema":"borno/1","kind":"truncation","target":"identity"})");
  write_file(dir / "stuck.json", R"({"schema":"borno/1","kind":"constant","op":"identity","target":"zero"})");
  CHECK(run_cli("approx --space " + p("ambient.json") + " --set " + p("box.json") + " --ops " + p("ops.json") +
                " --tol 1e-3 --out " + p("approx.json")) == 0);
  CHECK(Json::parse(read_file(dir / "approx.json"))["local_approx"]["rank"] == 11);
  CHECK(run_cli("approx --space " + p("ambient.json") + " --set " + p("box.json") + " --ops " + p("stuck.json")) == 1);
  write_file(dir / "noschema.json", R"({"kind":"l2"})");
  CHECK(run_cli("approx --space " + p("noschema.json") + " --set " + p("box.json") + " --ops " + p("ops.json")) == 3);

  // apple: the h replacement must match the fixture's h.
  write_file(dir / "h.json", "{\"schema\":\"borno/1\"," + io::to_json(corner_embedding(1, 2)).dump().substr(1));
  CHECK(run_cli("apple --fixture identity --h " + p("h.json")) == 3);
  CHECK(run_cli("apple --fixture identity --samples 2 --tgrid 5 --depth 4") == 0);
  CHECK(run_cli("apple --fixture nope") == 3);
}
