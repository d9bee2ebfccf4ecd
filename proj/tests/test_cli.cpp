#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rectlab/boolmat.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = RECTLAB_TEST_WORKDIR;
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path work(const std::string& name) { return workdir() / name; }

Run run(const std::string& args) {
  const auto out = work("stdout.txt"), err = work("stderr.txt");
  const std::string cmd = std::string("\"") + RECTLAB_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("gen and stats on the k=3 permutahedron") {
  const auto path = work("perm3.bmat");
  REQUIRE(run("gen --permutahedron 3 -o " + path.string()).code == 0);
  CHECK(rectlab::read_matrix(path) == rectlab::gen_permutahedron(3));
  const auto r = run("stats " + path.string());
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["supp"] == 24);
  CHECK(j["z_max"] == 2);
  CHECK(j["z_per_column"] == json::array({2, 2, 2, 2, 2, 2}));
}

TEST_CASE("gen writes bmat to stdout and is seed-deterministic") {
  const auto a = run("gen --n 20 --p 0.3 --seed 9");
  REQUIRE(a.code == 0);
  CHECK(rectlab::parse_matrix(a.out) == rectlab::gen_bernoulli({20, 0.3, 9}));
  CHECK(run("gen --n 20 --lambda 14 --seed 9").out == a.out);
  CHECK(run("gen --n 20 --p 0.3 --seed 9 --bernoulli").out == a.out);
}

TEST_CASE("exact --all on the 4x4 identity") {
  const auto path = work("id4.bmat");
  write_file(path, rectlab::format_matrix(rectlab::BoolMatrix::identity(4)));
  const auto r = run("exact --all --witness " + path.string());
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["onerec"] == 1);
  CHECK(j["fool"] == 4);
  CHECK(j["rc"] == 4);
  CHECK(j["frc"] == 4.0);
  CHECK(j["frc_rational"] == "4");
  CHECK(j["witness"]["onerec"].contains("rows"));
  CHECK(j["witness"]["fool"].size() == 4);
  CHECK(j["witness"]["rc"].size() == 4);
  CHECK(j["witness"]["frc"]["value"] == "4");
  CHECK(j["witness"]["frc"]["weights"].size() == j["witness"]["frc"]["rects"].size());
}

TEST_CASE("exact refuses when a guard trips") {
  const auto path = work("id30.bmat");
  write_file(path, rectlab::format_matrix(rectlab::BoolMatrix::identity(30)));
  const auto r = run("exact --onerec " + path.string());
  CHECK(r.code == 3);
  const auto j = json::parse(r.err);
  CHECK(j["error"] == "size_guard");
  CHECK_FALSE(j["guard"].get<std::string>().empty());
  CHECK_FALSE(j["fallback"].get<std::string>().empty());
  CHECK(run("exact --fool --budget 1 --n 16 --p 0.6").code == 3);
}

TEST_CASE("bounds on the k=3 permutahedron") {
  const auto r = run("bounds --permutahedron 3");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["lb_supp_over_onerec"] == 4.0);
  CHECK(j["chain_violations"].empty());
  CHECK(j["onerec_exact"] == 6);
  const auto g = json::parse(run("bounds --n 12 --p 0.6 --seed 2").out);
  CHECK(g.contains("predicted"));
  CHECK(g["predicted"]["frc"].contains("regime"));
}

TEST_CASE("construct") {
  const auto path = work("id3.bmat");
  write_file(path, rectlab::format_matrix(rectlab::BoolMatrix::identity(3)));
  const auto r = run("construct --witness " + path.string());
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["fool_constructive"] == 3);
  CHECK(j["fool_verified"] == true);
  CHECK(j["rc_greedy"] == 3);
  CHECK(j["frc_certified_ub"] == 6.75);
  CHECK(j["frc_certified_ub_rational"] == "27/4");
  CHECK(json::parse(run("construct --q 0.5 " + path.string()).out)["frc_certified_ub"] == 8.0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("bogus").code == 2);
  CHECK(run("gen --n 10 --p 0.5 --lambda 3").code == 2);
  CHECK(run("gen --bernoulli --permutahedron 3").code == 2);
  CHECK(run("stats --nope").code == 2);
  CHECK(run("stats " + work("missing.bmat").string()).code != 0);
  const auto bad = work("bad.bmat");
  write_file(bad, "bmat 1\n2 2\n10\n0\n");
  const auto r = run("stats " + bad.string());
  CHECK(r.code == 2);
  CHECK(json::parse(r.err)["message"].get<std::string>().find("line 4") != std::string::npos);
  CHECK(run("gen --permutahedron 9").code == 3);
}

TEST_CASE("experiment subcommand writes byte-identical outputs") {
  const auto cfg = work("chain.json");
  write_file(cfg, R"({"name":"chain_small","n_values":[8],"p":[0.5],"trials":10,"master_seed":1})");
  const auto a = work("a.csv"), b = work("b.csv");
  REQUIRE(run("experiment " + cfg.string() + " -o " + a.string()).code == 0);
  REQUIRE(run("experiment " + cfg.string() + " -o " + b.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("experiment,n,p,trial,seed,metric,value,pred_lo,pred_hi,pass,runtime_ms\n", 0) == 0);
  const auto s = json::parse(slurp(a.string() + ".summary.json"));
  CHECK(s["experiment"] == "chain_small");
  const auto bad = work("bad.json");
  write_file(bad, R"({"name":"thm1_shape","n_values":[64],"p":[0.1],"trials":0})");
  CHECK(run("experiment " + bad.string()).code == 2);
}

TEST_CASE("pretty output is line oriented") {
  const auto r = run("stats --permutahedron 3 --pretty");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("supp  ") != std::string::npos);
  CHECK(r.out.find("24") != std::string::npos);
}
