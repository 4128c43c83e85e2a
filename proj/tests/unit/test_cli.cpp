#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fock/cli/commands.hpp"

using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "fock");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = fock::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("toeplitz matrix output") {
  const auto r = call({"--degree", "4", "--t", "2", "toeplitz", "--symbol", "exp(-abs(z)^2)"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["meta"]["command"] == "toeplitz");
  CHECK(j["meta"]["t"] == 2.0);
  CHECK(j["meta"]["degree"] == 4);
  CHECK(j["data"]["dimension"] == 5);
  CHECK(j["data"]["symbol"]["method"] == "closed-form");
  const auto& m = j["data"]["matrix"];
  for (int i = 0; i < 5; ++i) {
    CHECK(m[i][i][0].get<double>() == doctest::Approx(std::pow(3.0, -(i + 1.0))).epsilon(1e-13));
    if (i > 0) CHECK(m[i][i - 1][0].get<double>() == 0.0);
  }
}

TEST_CASE("spectrum with several degrees and a probe") {
  const auto r = call({"spectrum", "--symbol", "exp(-abs(z)^2)", "--degrees", "2,5", "--probe", "0.3"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  REQUIRE(j["data"]["sections"].size() == 2u);
  CHECK(j["data"]["sections"][1]["eigenvalues"].size() == 6u);
  CHECK(j["data"]["sections"][0]["singular_min"].get<double>() == doctest::Approx(0.05).epsilon(1e-10));
}

TEST_CASE("berezin writes a CSV mirror") {
  const auto path = std::filesystem::temp_directory_path() / "fock_cli_test_berezin.csv";
  const auto r = call({"berezin", "--symbol", "exp(-abs(z)^2)", "--steps", "5", "--csv", path.string(), "--w", "0.5",
                       "--z", "0.5i"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["data"]["curve"].size() == 5u);
  CHECK(j["data"]["curve"][0]["value"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(j["data"].contains("bivariate"));
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "radius,re,im,max_abs");
  int lines = 0;
  for (std::string line; std::getline(f, line);) ++lines;
  CHECK(lines == 5);
  std::filesystem::remove(path);
}

TEST_CASE("compactness and essential spectrum") {
  auto r = call({"compactness", "--symbol", "exp(-abs(z)^2)"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["data"]["compact"] == true);
  r = call({"compactness", "--symbol", "phase(z)"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["data"]["compact"] == false);
  r = call({"--degree", "5", "ess-spectrum", "--symbol", "phase(z)", "--directions", "16"});
  REQUIRE(r.code == 0);
  const auto v = json::parse(r.out)["data"]["values"];
  CHECK(v.size() == 16u);
  for (const auto& c : v) CHECK(std::hypot(c[0].get<double>(), c[1].get<double>()) == doctest::Approx(1.0));
  CHECK(call({"ess-spectrum", "--symbol", "re(z)/(1+abs(z)^2)"}).code == fock::cli::kExitUsage);
  r = call({"--degree", "5", "ess-spectrum", "--symbol", "re(z)/(1+abs(z)^2)", "--limit-symbol", "0"});
  CHECK(r.code == 0);
}

TEST_CASE("index of the phase symbol") {
  auto r = call({"index", "--symbol", "phase(z)"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["data"]["index"] == -1);
  CHECK(j["data"]["winding"] == 1);
  r = call({"index", "--symbol", "phase(z)", "--lambda", "2"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["data"]["index"] == 0);
  r = call({"index", "--symbol", "phase(z)", "--lambda", "1"});
  CHECK(r.code == fock::cli::kExitNumeric);
  j = json::parse(r.out);
  CHECK(j["error"]["type"] == "not-fredholm");
}

TEST_CASE("exit codes for bad input") {
  CHECK(call({}).code != 0);
  CHECK(call({"toeplitz"}).code == fock::cli::kExitUsage);
  CHECK(call({"frobnicate"}).code == fock::cli::kExitUsage);
  auto r = call({"toeplitz", "--symbol", "exp(z"});
  CHECK(r.code == fock::cli::kExitUsage);
  CHECK(r.err.find("expected one of") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(call({"toeplitz", "--symbol", "foo(z)"}).code == fock::cli::kExitUsage);
  CHECK(call({"--t", "-1", "toeplitz", "--symbol", "1"}).code == fock::cli::kExitUsage);
  CHECK(call({"--n", "7", "toeplitz", "--symbol", "1"}).code == fock::cli::kExitUsage);
  CHECK(call({"berezin", "--symbol", "1", "--w", "1"}).code == fock::cli::kExitUsage);
  CHECK(call({"index", "--symbol", "phase(z)", "--degrees", "a,b"}).code == fock::cli::kExitUsage);
}

TEST_CASE("output is deterministic and --out writes the same bytes") {
  const std::vector<std::string> args{"--degree", "6", "spectrum", "--symbol", "phase(z)*exp(-abs(z)^2) + 0.5"};
  const auto a = call(args), b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto path = std::filesystem::temp_directory_path() / "fock_cli_test_out.json";
  auto with_out = args;
  with_out.insert(with_out.begin(), {"--out", path.string()});
  const auto c = call(with_out);
  REQUIRE(c.code == 0);
  CHECK(c.out.empty());
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == a.out);
  std::filesystem::remove(path);
}

}
