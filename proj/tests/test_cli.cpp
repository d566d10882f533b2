#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "cli.hpp"
#include "minimax/stochastic.hpp"

using Catch::Approx;
using Json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "minimax");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = minimax::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_file(const std::string& name, const std::string& text) {
  std::ofstream(name) << text;
  return name;
}

const std::vector<std::string> kSmall{"--grid-size", "129", "--lp-grid-size", "65"};

std::vector<std::string> with_small(std::vector<std::string> args) {
  args.insert(args.end(), kSmall.begin(), kSmall.end());
  return args;
}

}  // namespace

TEST_CASE("price-bs reports the closed form and a Monte Carlo estimate") {
  const auto r = run({"price-bs", "--K", "1", "--c", "0.04", "--samples", "20000", "--seed", "3"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "price-bs");
  REQUIRE(j["results"].size() == 2);
  CHECK(j["results"][0]["method"] == "closed-form");
  CHECK(j["results"][0]["value"].get<double>() == Approx(0.079656).margin(5e-7));
  const auto& mc = j["results"][1];
  CHECK(mc["samples"] == 20000);
  CHECK(mc["seed"] == 3);
  CHECK(std::abs(mc["value"].get<double>() - 0.0796557) <= 4.0 * mc["stderr"].get<double>());

  const auto csv = run({"price-bs", "--samples", "0", "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("K,c,method,value,stderr,samples,seed\n", 0) == 0);
}

TEST_CASE("solve-game prices one round at sqrt(v)/2") {
  const auto r = run(with_small({"solve-game", "--n", "1", "--zeta", "0.5"}));
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["value"].get<double>() == Approx(std::sqrt(std::expm1(0.04)) / 2.0).epsilon(1e-10));
  CHECK(j["value"].get<double>() == Approx(0.101008).margin(1e-6));
  CHECK(j["gap"].get<double>() == Approx(j["value"].get<double>() - j["beta"].get<double>()));
  CHECK(j["zeta_condition"] == false);
}

TEST_CASE("solve-moment dumps the one-step law and certificate") {
  const auto r = run({"solve-moment", "--n", "1", "--zeta", "0.5"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  const double v = std::expm1(0.04);
  CHECK(j["value"].get<double>() == Approx(std::sqrt(v) / 2.0).epsilon(1e-12));
  REQUIRE(j["law"].size() == 2);
  CHECK(j["law"][0]["t"].get<double>() == Approx(-std::sqrt(v)).epsilon(1e-12));
  CHECK(j["certificate_ok"] == true);
  CHECK(run({"solve-moment", "--spot", "0"}).code == 2);
}

TEST_CASE("sweep on the identity payoff passes") {
  const auto r = run(with_small({"sweep", "--payoff", "identity", "--n-list", "4,16,64"}));
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  REQUIRE(j["rows"].size() == 3);
  for (const auto& row : j["rows"]) CHECK(std::abs(row["gap"].get<double>()) <= 1e-6);
  CHECK(j["check"]["status"] == "pass");
}

TEST_CASE("configuration errors exit with code 2") {
  const auto infeasible = run({"solve-game", "--n", "4", "--zeta", "0.05"});
  CHECK(infeasible.code == 2);
  CHECK(infeasible.err.find("exp(c/n) - 1") != std::string::npos);
  CHECK(infeasible.out.empty());

  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"bogus"}).err.find("unknown subcommand 'bogus'") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"price-bs", "--format", "xml"}).code == 2);
  CHECK(run({"price-bs", "--no-such-flag"}).code == 2);
  CHECK(run({"price-bs", "--c", "-1"}).code == 2);
  CHECK(run({"price-bs", "--payoff", "digital"}).code == 2);
  CHECK(run({"solve-game", "--n", "0"}).code == 2);
  const auto strategy = run(with_small({"hedge-sim", "--n", "2", "--strategy", "momentum"}));
  CHECK(strategy.code == 2);
  CHECK(strategy.err.find("momentum") != std::string::npos);

  const std::string bad = write_file("test_cli_bad.ini", "c = 0.04\nno_such_key = 3\n");
  CHECK(run({"price-bs", "--config", bad}).code == 2);
  std::remove(bad.c_str());
  CHECK(run({"price-bs", "--config", "no/such/config.ini"}).code == 2);
}

TEST_CASE("INI configuration is read and flags override it") {
  const std::string ini = write_file("test_cli_good.ini", "c = 0.09\nK = 1.2\nsamples = 0\n");
  const auto a = run({"price-bs", "--config", ini});
  REQUIRE(a.code == 0);
  CHECK(Json::parse(a.out)["results"][0]["value"].get<double>() ==
        Approx(minimax::bs_price_closed_form(1.2, 0.09)).epsilon(1e-15));
  const auto b = run({"price-bs", "--config", ini, "--K", "1"});
  REQUIRE(b.code == 0);
  CHECK(Json::parse(b.out)["results"][0]["K"] == 1.0);
  std::remove(ini.c_str());
}

TEST_CASE("dry run prints the resolved configuration") {
  const auto r = run({"sweep", "--dry-run", "--c", "0.09", "--n-list", "4,8"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["subcommand"] == "sweep");
  CHECK(j["c"] == 0.09);
  CHECK(j["n_list"] == Json::array({4, 8}));
}

TEST_CASE("output is byte-identical across worker counts and reruns") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           with_small({"solve-game", "--n", "6"}),
           with_small({"hedge-sim", "--n", "4", "--paths", "3000", "--seed", "9"}),
           with_small({"sample-adversary", "--n", "4", "--paths", "50", "--format", "csv"}),
           {"price-bs", "--samples", "30000", "--seed", "4"}}) {
    std::vector<std::string> one = args, three = args;
    one.insert(one.end(), {"--workers", "1"});
    three.insert(three.end(), {"--workers", "3"});
    const auto a = run(one);
    const auto b = run(three);
    const auto c = run(one);
    INFO(args.front());
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
  }
}

TEST_CASE("saved solutions and CSV exports") {
  const std::string bin = "test_cli_solution.bin";
  const std::string values = "test_cli_values.csv";
  const auto solved = run(with_small({"solve-game", "--n", "3", "--save", bin, "--values-csv", values}));
  REQUIRE(solved.code == 0);
  const auto loaded = run({"solve-game", "--load", bin});
  REQUIRE(loaded.code == 0);
  CHECK(Json::parse(loaded.out)["value"] == Json::parse(solved.out)["value"]);

  std::ifstream in(values);
  std::string header;
  std::getline(in, header);
  CHECK(header == "stage,price,value");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 4 * 129);

  const auto sampled = run({"sample-adversary", "--load", bin, "--paths", "5", "--format", "csv"});
  REQUIRE(sampled.code == 0);
  std::istringstream paths(sampled.out);
  std::size_t count = 0;
  for (std::string line; std::getline(paths, line);) {
    ++count;
    CHECK(line.rfind("1,", 0) == 0);
  }
  CHECK(count == 5);

  std::remove(bin.c_str());
  std::remove(values.c_str());
  CHECK(run({"solve-game", "--load", bin}).code != 0);
}

TEST_CASE("the installed binary reports exit codes") {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(MINIMAX_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("price-bs --samples 0") == 0);
  CHECK(status("solve-game --n 4 --zeta 0.05") == 2);
  CHECK(status("--help") == 0);
}
