#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "cheegerlab/cli.hpp"
#include "cheegerlab/io.hpp"

using namespace cheegerlab;
using io::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cheegerlab_test_" + name)).string();
}

}  // namespace

TEST_CASE("check command") {
  auto r = run({"check", "--bank", "shannon:64"});
  CHECK(r.code == exit_ok);
  const auto j = json::parse(r.out);
  CHECK(j["calderon"]["satisfied"] == true);
  CHECK(j["calderon"]["max_deviation"].get<double>() < 1e-12);

  CHECK(run({"check", "--bank", "zero:8"}).code == exit_check_failed);
  CHECK(run({"check", "--bank", "shannon-nolow:16"}).code == exit_check_failed);
  CHECK(run({"check", "--bank", "identity:8", "--require-si"}).code == exit_check_failed);

  const auto bad = temp_path("bad.json");
  io::write_file(bad, "{\"command\": \"check\", ");
  r = run({"--config", bad});
  CHECK(r.code == exit_config);
  CHECK(r.err.find("invalid JSON") != std::string::npos);
  CHECK(run({"check", "--bank", "nonsense:3"}).code == exit_config);
  CHECK(run({"frobnicate"}).code == exit_config);
  CHECK(run({"check", "--bank", "shannon:8", "--tol", "-1"}).code == exit_config);
  CHECK(run({"check", "--bogus"}).code == exit_config);
  std::remove(bad.c_str());
}

TEST_CASE("cheeger command") {
  auto r = run({"cheeger", "--bank", "shannon:16", "--signal", "bands:0,1", "--strategy", "product"});
  REQUIRE(r.code == exit_ok);
  auto j = json::parse(r.out);
  CHECK(j["result"]["value"].get<double>() == 0.0);
  CHECK(j["result"]["certified"] == true);

  r = run({"cheeger", "--bank", "shannon:16", "--signal", "bands:0,1", "--mode", "graph"});
  REQUIRE(r.code == exit_ok);
  j = json::parse(r.out);
  CHECK(j["result"]["value"].get<double>() == 0.0);
  CHECK(j["graph"]["vertices"].size() == 2);

  r = run({"cheeger", "--bank", "identity:4", "--signal", "delta:4:0"});
  REQUIRE(r.code == exit_ok);
  CHECK(json::parse(r.out)["result"]["value"].get<double>() == 1.0);

  CHECK(run({"cheeger", "--bank", "shannon:64", "--signal", "random:64"}).code == exit_budget);
  CHECK(run({"cheeger", "--bank", "random:5:4:1", "--signal", "random:5", "--budget", "100"}).code == exit_budget);
}

TEST_CASE("bounds command") {
  auto r = run({"bounds", "--bank", "random:5:4:2:real:3", "--signal", "random:5:3", "--samples", "60"});
  REQUIRE(r.code == exit_ok);
  auto j = json::parse(r.out);
  CHECK(j["field"] == "real");
  CHECK(j["cheeger"]["certified"] == true);

  r = run({"bounds", "--bank", "shannon:16", "--signal", "bands:0,1", "--samples", "30", "--budget", "65536"});
  REQUIRE(r.code == exit_ok);
  j = json::parse(r.out);
  CHECK(j["lower_bound"] == "inf");
  CHECK(j["verdict"] == "not stably retrievable");

  r = run({"bounds", "--bank", "overlap:16:0.25", "--signal", "random:16", "--field", "complex", "--samples", "10",
           "--budget", "65536", "--restarts", "2"});
  REQUIRE(r.code == exit_ok);
  CHECK(json::parse(r.out)["upper_bound"] == "inf");

  CHECK(run({"bounds", "--bank", "random:5:4:1:complex:3", "--signal", "random:5", "--field", "complex", "--bound",
             "real", "--samples", "10"})
            .code == exit_inapplicable);
}

TEST_CASE("ambiguity command") {
  const auto g_path = temp_path("g.json");
  auto r = run({"ambiguity", "--bank", "shannon:64", "--signal", "bands:0,1", "--signs", "1,-1", "--emit", g_path});
  REQUIRE(r.code == exit_ok);
  const auto j = json::parse(r.out);
  CHECK(j["certificate"]["modulus_residual"].get<double>() < 1e-9);
  CHECK(j["nontrivial"] == true);
  CHECK(j["propagation"]["consistent"] == true);
  const auto g = io::signal_from_json(io::parse_json(io::read_file(g_path)));
  const auto bank = build_shannon(64);
  CHECK(norm(subtract(g, subtract(bank.filter(0), bank.filter(1)))) < 1e-12);
  std::remove(g_path.c_str());

  r = run({"ambiguity", "--bank", "overlap:64:0.25", "--signal", "random:64", "--parts", "0,1;2,3,4,5", "--signs", "1,-1"});
  CHECK(r.code == exit_invalid_spec);
  CHECK(run({"ambiguity", "--bank", "shannon:64", "--signal", "bands:0,1", "--parts", "0;1", "--signs", "1,0.5"}).code ==
        exit_invalid_spec);

  const auto spec_path = temp_path("spec.json");
  io::write_file(spec_path, R"({"parts": [["psi1"], ["psi2"]], "signs": [[1, 0], [-1, 0]]})");
  r = run({"ambiguity", "--bank", "shannon:64", "--signal", "bands:0,1", "--spec", spec_path});
  CHECK(r.code == exit_ok);
  std::remove(spec_path.c_str());
}

TEST_CASE("sweep and witness commands") {
  const auto csv = temp_path("sweep.csv");
  auto r = run({"sweep", "--bank", "overlap:32:0.25", "--shifts", "0,4,16", "--budget", "200000", "--restarts", "2",
                "--csv", csv});
  REQUIRE(r.code == exit_ok);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const auto j = json::parse(line);
    CHECK(j.contains("quotient"));
    ++count;
  }
  CHECK(count == 3);
  CHECK(io::read_file(csv).rfind("shift,", 0) == 0);
  std::remove(csv.c_str());

  r = run({"witness", "--n", "64", "--eps", "0.05"});
  REQUIRE(r.code == exit_ok);
  const auto w = json::parse(r.out);
  CHECK(w["phase_distance"].get<double>() == doctest::Approx(1.0));
  CHECK(w["reached"] == true);
}

TEST_CASE("banks and signals round-trip through files") {
  const auto bank_path = temp_path("bank.json");
  const auto sig_json = temp_path("sig.json");
  const auto sig_csv = temp_path("sig.csv");
  REQUIRE(run({"transform", "--bank", "random:12:3:4:complex", "--signal", "random:12", "--field", "complex",
               "--save-bank", bank_path, "--save-signal", sig_json})
              .code == exit_ok);
  REQUIRE(run({"transform", "--bank", "random:12:3:4:complex", "--signal", "random:12", "--field", "complex",
               "--save-signal", sig_csv})
              .code == exit_ok);
  const auto bank = build_random_partition(12, 3, Field::complex, 4);
  const auto f = random_signal(12, Field::complex, 20240601);
  const auto bank2 = io::bank_from_json(io::parse_json(io::read_file(bank_path)));
  CHECK(bank2.labels() == bank.labels());
  CHECK(bank2.nu() == bank.nu());
  for (std::size_t l = 0; l < bank.size(); ++l) CHECK(bank2.profile(l).values() == bank.profile(l).values());
  CHECK(io::signal_from_json(io::parse_json(io::read_file(sig_json))).values() == f.values());
  CHECK(io::signal_from_csv(io::read_file(sig_csv)).values() == f.values());

  // the same command on the files reproduces the output byte for byte
  const auto a = run({"transform", "--bank", "random:12:3:4:complex", "--signal", "random:12", "--field", "complex"});
  const auto b = run({"transform", "--bank", bank_path, "--signal", sig_json});
  CHECK(a.out == b.out);
  for (const auto& p : {bank_path, sig_json, sig_csv}) std::remove(p.c_str());
}

TEST_CASE("config files mirror the flags and flags override them") {
  const auto cfg = temp_path("cfg.json");
  io::write_file(cfg, R"({"command": "cheeger", "bank": "random:5:4:3", "signal": "random:5", "seed": 9,
                          "strategy": "local", "restarts": 4})");
  const auto a = run({"--config", cfg});
  const auto b = run({"cheeger", "--bank", "random:5:4:3", "--signal", "random:5", "--seed", "9", "--strategy", "local",
                      "--restarts", "4"});
  REQUIRE(a.code == exit_ok);
  CHECK(a.out == b.out);
  const auto c = run({"--config", cfg, "--strategy", "exhaustive"});
  CHECK(json::parse(c.out)["result"]["strategy"] == "exhaustive");
  std::remove(cfg.c_str());
}

TEST_CASE("output does not depend on the thread count") {
  const std::vector<std::string> base{"cheeger", "--bank", "random:5:4:6", "--signal", "random:5"};
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  const auto a = run(one), b = run(four);
  REQUIRE(a.code == exit_ok);
  CHECK(a.out == b.out);
}
