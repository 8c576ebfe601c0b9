#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "secx/cli.hpp"
#include "secx/cra.hpp"
#include "secx/text_format.hpp"
#include "secx/validation.hpp"
#include "support/iso.hpp"

using namespace secx;
namespace fs = std::filesystem;

namespace {

const fs::path kFix = SECX_FIXTURES;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fix(const char* name) { return (kFix / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("secx_cli_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* name) const { return (path / name).string(); }
};

// Drops the " -> <file>" suffixes so that runs writing to different files compare.
std::string without_paths(const std::string& text) {
  std::istringstream in(text);
  std::string result;
  for (std::string line; std::getline(in, line);) result += line.substr(0, line.find(" -> ")) + '\n';
  return result;
}

int validate_file(const std::string& path) {
  return cli({"validate", "--typegraph", fix("cra.typegraph"), "--instance", path}).code;
}

}  // namespace

TEST_CASE("validate reports feasibility through the exit code") {
  const Run ok = cli({"validate", "--typegraph", fix("cra.typegraph"), "--instance", fix("fig2_g.instance")});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out == "0 violations\n");
  // The header reference is resolved next to the instance.
  CHECK(cli({"validate", "--instance", fix("fig2_h.instance")}).code == kExitOk);

  TempDir dir;
  std::ofstream(dir / "bad.instance") << "instance v1 typegraph=x\nnode 1 0\nnode 10 1\n";
  const Run bad = cli({"validate", "--typegraph", fix("cra.typegraph"), "--instance", dir / "bad.instance"});
  CHECK(bad.code == kExitViolations);
  CHECK(bad.out.find("2 violations") != std::string::npos);
}

TEST_CASE("malformed inputs and unknown flags exit with 2") {
  TempDir dir;
  std::ofstream(dir / "broken.instance") << "instance v1 typegraph=x\nnode 1 7\n";
  const Run broken =
      cli({"validate", "--typegraph", fix("cra.typegraph"), "--instance", dir / "broken.instance"});
  CHECK(broken.code == kExitMalformed);
  CHECK(broken.err.find("line 2") != std::string::npos);
  CHECK(cli({"validate", "--instance", dir / "missing.instance"}).code == kExitMalformed);
  CHECK(cli({"validate", "--instance", fix("fig2_g.instance"), "--bogus"}).code == kExitMalformed);
  CHECK(cli({"frobnicate"}).code == kExitMalformed);
  CHECK(cli({}).code == kExitMalformed);
  CHECK(cli({"crossover", "--g", fix("fig2_g.instance"), "--h", fix("fig2_h.instance"), "--seed", "x"})
            .code == kExitMalformed);
  CHECK(cli({"crossover", "--operator", "magic", "--g", fix("fig2_g.instance"), "--h",
             fix("fig2_h.instance")})
            .code == kExitMalformed);
}

TEST_CASE("crossover of different problem instances exits with 3") {
  const Run r = cli({"crossover", "--g", fix("fig2_g.instance"), "--h", fix("other_problem.instance")});
  CHECK(r.code == kExitPrecondition);
  CHECK(cli({"crossover", "--operator", "generic", "--g", fix("fig2_g.instance"), "--h",
             fix("other_problem.instance")})
            .code == kExitPrecondition);
}

TEST_CASE("forced secure crossover reproduces the worked example") {
  TempDir dir;
  const Run r = cli({"crossover", "--operator", "secure", "--g", fix("fig2_g.instance"), "--h",
                     fix("fig2_h.instance"), "--force", fix("secure_example.trace"), "--out",
                     dir / "o1.instance"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("offspring1 nodes=5 edges=4 violations=0 feasible") == 0);
  const auto tg = cra::type_graph();
  const auto o1 = load_instance(dir / "o1.instance", tg);
  CHECK(o1.typegraph_ref == "cra.typegraph");
  CHECK(testing::isomorphic(o1.graph, cra::fixtures().g1h2));
  CHECK(validate_file(dir / "o1.instance") == kExitOk);
}

TEST_CASE("forced generic crossover yields the infeasible second offspring") {
  TempDir dir;
  const Run r = cli({"crossover", "--operator", "generic", "--g", fix("fig2_g.instance"), "--h",
                     fix("fig2_h.instance"), "--force", fix("generic_example.trace"), "--out",
                     dir / "o1.instance", "--out2", dir / "o2.instance"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("offspring1 nodes=5 edges=4 violations=0 feasible") != std::string::npos);
  CHECK(r.out.find("offspring2 nodes=6 edges=5 violations=2 infeasible") != std::string::npos);
  CHECK(validate_file(dir / "o1.instance") == kExitOk);
  CHECK(validate_file(dir / "o2.instance") == kExitViolations);
}

TEST_CASE("recorded runs replay to identical files") {
  TempDir dir;
  for (const char* op : {"secure", "generic"}) {
    for (const char* seed : {"0", "5", "123456789"}) {
      const Run rec = cli({"crossover", "--operator", op, "--g", fix("fig2_g.instance"), "--h",
                           fix("fig2_h.instance"), "--seed", seed, "--second-offspring",
                           "--trace-out", dir / "t.trace", "--out", dir / "a1.instance", "--out2",
                           dir / "a2.instance"});
      REQUIRE(rec.code == kExitOk);
      const Run rep = cli({"replay", "--operator", op, "--g", fix("fig2_g.instance"), "--h",
                           fix("fig2_h.instance"), "--second-offspring", "--trace", dir / "t.trace",
                           "--out", dir / "b1.instance", "--out2", dir / "b2.instance"});
      REQUIRE(rep.code == kExitOk);
      CHECK(slurp(dir.path / "a1.instance") == slurp(dir.path / "b1.instance"));
      CHECK(slurp(dir.path / "a2.instance") == slurp(dir.path / "b2.instance"));
      CHECK(without_paths(rec.out) == without_paths(rep.out));
      // Feasibility as reported is what validate finds.
      const bool feasible = rec.out.find("offspring1 nodes=") != std::string::npos &&
                            rec.out.find(" feasible ->") < rec.out.find("offspring2");
      CHECK((validate_file(dir / "a1.instance") == kExitOk) == feasible);
    }
  }
}

TEST_CASE("replay rejects diverging or incomplete traces") {
  TempDir dir;
  std::ofstream(dir / "wrong.trace") << "decision hsub.node@999 1\n";
  const Run wrong = cli({"replay", "--g", fix("fig2_g.instance"), "--h", fix("fig2_h.instance"),
                         "--trace", dir / "wrong.trace"});
  CHECK(wrong.code == kExitMalformed);
  CHECK(wrong.err.find("trace mismatch") == 0);

  REQUIRE(cli({"crossover", "--g", fix("fig2_g.instance"), "--h", fix("fig2_h.instance"), "--seed", "3",
               "--trace-out", dir / "t.trace"})
              .code == kExitOk);
  const std::string full = slurp(dir.path / "t.trace");
  REQUIRE(!full.empty());
  std::ofstream(dir / "long.trace") << full << "decision extra@1 1\n";
  CHECK(cli({"replay", "--g", fix("fig2_g.instance"), "--h", fix("fig2_h.instance"), "--trace",
             dir / "long.trace"})
            .code == kExitMalformed);
  std::ofstream(dir / "garbage.trace") << "decision only-two\n";
  CHECK(cli({"replay", "--g", fix("fig2_g.instance"), "--h", fix("fig2_h.instance"), "--trace",
             dir / "garbage.trace"})
            .code == kExitMalformed);
}

TEST_CASE("ea runs from a JSON configuration") {
  TempDir dir;
  const Run r = cli({"ea", "--config", fix("ea_small.json"), "--out", dir / "h.csv", "--best-out",
                     dir / "best.instance"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("best fitness=") == 0);
  CHECK(r.out.find("feasible=yes") != std::string::npos);
  const std::string csv = slurp(dir.path / "h.csv");
  CHECK(csv.find("generation,best,mean,feasible_fraction,xover_feasible_rate,discards\n") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(validate_file(dir / "best.instance") == kExitOk);

  std::ofstream(dir / "bad.json") << R"({"population_size": 4, "colour": "blue"})";
  CHECK(cli({"ea", "--config", dir / "bad.json"}).code == kExitMalformed);
  std::ofstream(dir / "tiny.json") << R"({"population_size": 1})";
  CHECK(cli({"ea", "--config", dir / "tiny.json"}).code == kExitPrecondition);
  std::ofstream(dir / "notjson.json") << "{";
  CHECK(cli({"ea", "--config", dir / "notjson.json"}).code == kExitMalformed);
}

TEST_CASE("bench prints one row per arm") {
  const std::vector<std::string> args{"bench", "--arms", "secure,generic-discard,generic-keep",
                                      "--trials", "20", "--min-features", "5", "--max-features",
                                      "8", "--no-timing"};
  const Run a = cli(args);
  REQUIRE(a.code == kExitOk);
  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line ==
        "arm,trials,crossovers,offspring,feasible,feasible_rate,discards,us_per_crossover,best_fitness");
  std::getline(lines, line);
  CHECK(line.find("secure,20,20,20,20,1.0000,0,-,") == 0);
  std::getline(lines, line);
  CHECK(line.find("generic-discard,20,") == 0);
  std::getline(lines, line);
  CHECK(line.find("generic-keep,20,20,40,") == 0);
  CHECK(cli(args).out == a.out);
  CHECK(cli({"bench", "--arms", "secure,bogus"}).code == kExitMalformed);
  CHECK(cli({"bench", "--trials", "0"}).code == kExitPrecondition);
}

TEST_CASE("help exits cleanly") {
  const Run r = cli({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("crossover") != std::string::npos);
}
