#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "lsllab/report.hpp"
#include "lsllab/rng.hpp"
#include "lsllab/runner.hpp"

using namespace lsl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("lsllab_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // one block boundary case: 64 a's
  CHECK(sha256_hex(std::string(64, 'a')) ==
        "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

TEST_CASE("doubles format with exact round trips") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-3.0) == "-3");
  SplitMix64 g(55);
  for (int k = 0; k < 1000; ++k) {
    double x = (g.next_open() - 0.5) * std::pow(10.0, double(g.next() % 40) - 20.0);
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("csv tables carry a schema line and reject ragged rows") {
  CsvTable t("demo", {"a", "b"});
  t.add_row({1.0, 2.0});
  t.add_row_mixed({"x", "y"});
  std::string s = t.str();
  CHECK(s.rfind("# lsl-lab csv v1 demo\na,b\n", 0) == 0);
  CHECK(t.row_count() == 2);
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(t.add_row_mixed({"1", "2", "3"}), std::invalid_argument);
  CHECK_THROWS_AS(CsvTable("demo", {}), std::invalid_argument);
}

TEST_CASE("config parser rejects strangers and bad ranges by name") {
  try {
    parse_config(R"({"kind":"simulate","seed":1,"bogus":2})");
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    CHECK(msg.find("bogus") != std::string::npos);
    CHECK(msg.find("accepted keys") != std::string::npos);
    CHECK(msg.find("replicates") != std::string::npos);
  }

  try {
    parse_config(R"({"kind":"simulate","seed":1,"regime":"power-log","alpha":1.0})");
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("open interval") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config(R"({"kind":"simulate"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"kind":"nope","seed":1})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config(R"({"kind":"moments","growth_case":1,"tail_beta":3.0})"),
      std::invalid_argument);  // classifier needs the case's square weight
  CHECK_THROWS_AS(
      parse_config(
          R"({"kind":"surrogate-limsup","seed":1,"family":"sqrt-exp","c":1.0,"budget":10,"snapshots":[9,5]})"),
      std::invalid_argument);  // snapshots must ascend
}

TEST_CASE("canonical config echo is a fixed point of the parser") {
  ExperimentConfig a =
      parse_config(R"({"kind":"simulate","seed":7,"m":100,"n":120})");
  CHECK(a.m == 100);
  CHECK(a.replicates == 100);  // default filled in
  ExperimentConfig b = parse_config(a.canonical_json);
  CHECK(b.canonical_json == a.canonical_json);
  CHECK(b.seed == 7);

  ExperimentConfig w = parse_config(
      R"({"kind":"subseq","family":"over-log","c":0.5,"i_max":100})");
  CHECK(w.warnings.size() == 1);
  CHECK(w.canonical_json.find("warnings") != std::string::npos);
}

TEST_CASE("experiments write manifests whose digests match the files") {
  TempDir dir("digest");
  ExperimentConfig cfg = parse_config(
      R"({"kind":"simulate","seed":5,"m":80,"n":80,"replicates":20})");
  RunManifest man = run_experiment(cfg, dir.path.string(), 1);
  CHECK(man.all_passed());
  REQUIRE(man.outputs.size() == 2);
  for (const auto& [name, digest] : man.outputs)
    CHECK(sha256_hex(slurp(dir.path / name)) == digest);
  CHECK(fs::exists(dir.path / "simulate_manifest.json"));
  std::string manifest = slurp(dir.path / "simulate_manifest.json");
  CHECK(manifest.find(kArtifactVersion) != std::string::npos);
  CHECK(manifest.find("\"seed\": 5") != std::string::npos);
}

TEST_CASE("thread count changes timing only, never bytes") {
  TempDir d1("threads1"), d3("threads3");
  ExperimentConfig cfg = parse_config(
      R"({"kind":"simulate","seed":9,"m":200,"n":150,"replicates":64})");
  run_experiment(cfg, d1.path.string(), 1);
  run_experiment(cfg, d3.path.string(), 3);
  CHECK(slurp(d1.path / "simulate.csv") == slurp(d3.path / "simulate.csv"));
  CHECK(slurp(d1.path / "simulate_summary.json") ==
        slurp(d3.path / "simulate_summary.json"));
}

TEST_CASE("surrogate experiment tracks a nondecreasing running maximum") {
  TempDir dir("surrogate");
  ExperimentConfig cfg = parse_config(
      R"({"kind":"surrogate-limsup","seed":3,"family":"sqrt-exp","c":0.25,"budget":80,"snapshots":[40,80]})");
  RunManifest man = run_experiment(cfg, dir.path.string(), 1);
  CHECK(man.all_passed());
  std::string csv = slurp(dir.path / "surrogate-limsup.csv");
  CHECK(csv.rfind("# lsl-lab csv v1 surrogate-limsup", 0) == 0);
  // snapshots are echoed into the summary in budget order
  std::string summary = slurp(dir.path / "surrogate-limsup_summary.json");
  CHECK(summary.find("\"snapshots\"") != std::string::npos);
}

TEST_CASE("appendix experiment emits the pinned column order") {
  TempDir dir("appendix");
  ExperimentConfig cfg = parse_config(
      R"({"kind":"verify-appendix","growth_case":3,"x_values":[1e4,1e5,1e6]})");
  RunManifest man = run_experiment(cfg, dir.path.string(), 1);
  CHECK(man.all_passed());
  std::string csv = slurp(dir.path / "verify-appendix.csv");
  CHECK(csv.rfind("# lsl-lab csv v1 verify-appendix\nx,numeric_M,closed_form,ratio\n",
                  0) == 0);
}
