// End-to-end checks of the command-line tool. The binary path arrives via the
// NETDESIGN_CLI environment variable (set by ctest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
  const char* p = std::getenv("NETDESIGN_CLI");
  REQUIRE_MESSAGE(p != nullptr, "NETDESIGN_CLI must point at the binary");
  return p;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const auto dir = fs::temp_directory_path() / "netdesign_test_cli";
  fs::create_directories(dir);
  const auto out_path = (dir / "stdout.txt").string();
  const std::string cmd =
      cli_path() + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  int code = -1;
  if (WIFEXITED(status)) code = WEXITSTATUS(status);
  return {code, buf.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path work_dir() {
  const auto dir = fs::temp_directory_path() / "netdesign_test_cli";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("gen-network writes the documented edge-list format") {
  const auto dir = work_dir();
  const auto g = (dir / "empty.txt").string();
  const RunResult r =
      run("gen-network --family er --n 10 --p 0 --seed 1 -o " + g);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("n=10 edges=0") != std::string::npos);
  CHECK(slurp(g) == "10\n");

  // Same command, same bytes.
  const auto g2 = (dir / "empty2.txt").string();
  run("gen-network --family er --n 10 --p 0 --seed 1 -o " + g2);
  CHECK(slurp(g) == slurp(g2));

  const RunResult bad =
      run("gen-network --family er --n 10 --p 1.5 --seed 1 -o " + g);
  CHECK(bad.exit_code == 2);

  // Argument-parser failures are validation errors too.
  const RunResult missing = run("gen-network --family er --n 10");
  CHECK(missing.exit_code == 2);
  const RunResult help = run("--help");
  CHECK(help.exit_code == 0);
}

TEST_CASE("design subcommand emits the documented JSON") {
  const auto dir = work_dir();
  const auto g = (dir / "n4.txt").string();
  run("gen-network --family er --n 4 --p 0 --seed 1 -o " + g);

  const RunResult balanced =
      run("design --network " + g + " --strategy balanced --seed 3");
  CHECK(balanced.exit_code == 0);
  const auto bj = nlohmann::json::parse(balanced.out);
  int n1 = 0;
  for (const auto& v : bj.at("z")) n1 += v.get<int>();
  CHECK(n1 == 2);
  CHECK(bj.at("strategy") == "balanced");
  CHECK(bj.at("seed") == 3);

  // Optimal search on an edgeless network lands on the balanced closed form:
  // with the default prior the integrated risk of any balanced split of 4
  // nodes is (1 + 0.5) * (1/2 + 1/2).
  const RunResult optimal =
      run("design --network " + g + " --strategy optimal --seed 3 --n-draws 200"
          " --max-iters 500 --restarts 2");
  CHECK(optimal.exit_code == 0);
  const auto oj = nlohmann::json::parse(optimal.out);
  CHECK(oj.at("objective").get<double>() == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("evaluate subcommand: metrics, decomposition, failure modes") {
  const auto dir = work_dir();
  const auto g = (dir / "n6.txt").string();
  run("gen-network --family er --n 6 --p 0.5 --seed 9 -o " + g);

  const RunResult r = run("evaluate --network " + g +
                          " --assignment [1,0,1,0,1,0] --metric mse-normal"
                          " --mu 1 --sigma2 1 --gamma2 1 --decompose");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& d = j.at("decomposition");
  const double total = d.at("bias_sq").get<double>() +
                       d.at("group_size_var").get<double>() +
                       d.at("net_var_treated").get<double>() +
                       d.at("net_var_control").get<double>() -
                       d.at("net_var_cross").get<double>();
  CHECK(j.at("mse_normal").get<double>() == doctest::Approx(total).epsilon(1e-10));

  const RunResult degenerate = run("evaluate --network " + g +
                                   " --assignment [1,1,1,1,1,1]");
  CHECK(degenerate.exit_code == 2);

  const RunResult bad_prior = run(
      "evaluate --network " + g +
      " --assignment [1,0,1,0,1,0] --metric imse-closed-form --r-sigma 1");
  CHECK(bad_prior.exit_code == 2);

  const RunResult fig = run(
      "evaluate --explicit-cov [[1,0.9,0],[0.9,1,0],[0,0,1]] --weights 1,0,-1");
  CHECK(fig.exit_code == 0);
  CHECK(nlohmann::json::parse(fig.out).at("contrast_variance").get<double>() ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("config supplies defaults and flags override it") {
  const auto dir = work_dir();
  const auto cfg_path = (dir / "cfg.json").string();
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"model": {"mu": 2.0, "sigma2": 4.0, "gamma2": 1.0},
               "family": {"name": "er", "p": 0.0}, "n_nodes": 8, "seed": 2})";
  }
  const auto g = (dir / "cfg_net.txt").string();
  const RunResult gen = run("gen-network --config " + cfg_path + " -o " + g);
  CHECK(gen.exit_code == 0);
  CHECK(gen.out.find("n=8 edges=0") != std::string::npos);

  // Config model plus a flag override: sigma2 comes from the flag.
  const RunResult r = run("evaluate --network " + g +
                          " --assignment [1,1,1,1,0,0,0,0] --config " + cfg_path +
                          " --sigma2 1.0");
  CHECK(r.exit_code == 0);
  // Edgeless, balanced: (sigma2 + gamma2) * (1/4 + 1/4) with mu irrelevant.
  CHECK(nlohmann::json::parse(r.out).at("mse_normal").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simulate subcommand writes schema-conformant reports") {
  const auto dir = work_dir();
  const auto out = (dir / "study").string();
  fs::remove_all(out);
  const RunResult r = run(
      "simulate --study comparative --family er --n 24 --reps 2 --seed 4"
      " --workers 2 -o " + out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("median relative iMSE") != std::string::npos);
  const std::string csv = slurp(fs::path(out) / "records.csv");
  CHECK(csv.rfind("replication_id,network_family,design_strategy,"
                  "design_prior_id,imse_true,relative_imse\n", 0) == 0);
  // misspec default grid comes from the documented ladder
  const auto misspec_out = (dir / "study_misspec").string();
  fs::remove_all(misspec_out);
  const RunResult m = run(
      "simulate --study misspec --family er --n 20 --reps 1 --seed 4"
      " --workers 2 -o " + misspec_out);
  CHECK(m.exit_code == 0);
  const std::string mj = slurp(fs::path(misspec_out) / "config.json");
  const auto parsed = nlohmann::json::parse(mj);
  CHECK(parsed.at("design_priors").size() == 10);
  CHECK(parsed.at("design_priors")[9].at("mu0").get<double>() == 50.0);
}
