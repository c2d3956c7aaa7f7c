#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "imdd/cli.hpp"
#include "imdd/constellation_io.hpp"

namespace fs = std::filesystem;
using imdd::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) {
  const fs::path dir = fs::path(IMDD_TEST_TMPDIR) / "cli_tmp";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("catalog export and evaluate") {
  const auto path = tmp("c4.json");
  REQUIRE(call({"catalog", "export", "--id", "c4", "--out", path.string()}).code == 0);
  const auto c = imdd::load_constellation(path);
  CHECK(c.size() == 4);
  const auto r = call({"evaluate", "--in", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("E_s: 0.75") != std::string::npos);
  CHECK(r.out.find("K: 6") != std::string::npos);
  CHECK(r.out.find("eta: 1\n") != std::string::npos);
  CHECK(r.out.find("inside") != std::string::npos);

  const auto ook = call({"catalog", "export", "--id", "ook"});
  CHECK(ook.code == 0);
  const auto j = nlohmann::json::parse(ook.out);
  CHECK(j["bandwidth_model"] == "baseband");
  CHECK(j["points"].size() == 2);
  CHECK(j["points"][0].size() == 1);

  const auto list = call({"catalog", "list"});
  CHECK(list.code == 0);
  CHECK(list.out.find("c-pe-8") != std::string::npos);
}

TEST_CASE("manifest accompanies every output") {
  const auto path = tmp("curve.csv");
  REQUIRE(call({"bound", "--id", "c4", "--snr-db", "0:4:1", "--out", path.string()}).code == 0);
  const auto m = nlohmann::json::parse(slurp(path.string() + ".manifest.json"));
  CHECK(m["subcommand"] == "bound");
  CHECK(m["outputs"].size() == 1);
  CHECK(m["outputs"][0]["sha256"].get<std::string>().size() == 64);
  CHECK(m.contains("tool_version"));
  CHECK(m.contains("wall_time_s"));
  CHECK(m["parameters"]["id"] == "c4");
  const auto first = m["outputs"][0]["sha256"];
  REQUIRE(call({"bound", "--id", "c4", "--snr-db", "0:4:1", "--out", path.string()}).code == 0);
  CHECK(nlohmann::json::parse(slurp(path.string() + ".manifest.json"))["outputs"][0]["sha256"] == first);
  CHECK(slurp(path).rfind("snr_db,ser_nn,ser_full\n", 0) == 0);
}

TEST_CASE("simulate output is reproducible") {
  const auto a = tmp("sim_a.csv");
  const auto b = tmp("sim_b.csv");
  const std::vector<std::string> base{"simulate", "--id", "c4", "--snr-db", "4:6:1", "--min-errors", "50",
                                      "--max-symbols", "1000000", "--seed", "7"};
  auto args = base;
  args.insert(args.end(), {"--out", a.string(), "--threads", "1"});
  REQUIRE(call(args).code == 0);
  args = base;
  args.insert(args.end(), {"--out", b.string(), "--threads", "3"});
  REQUIRE(call(args).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("snr_db,definition,errors,trials,ser,ci95\n", 0) == 0);
  const auto m = nlohmann::json::parse(slurp(a.string() + ".manifest.json"));
  CHECK(m["gaussian_method"] == "box-muller over philox4x32-10");
  CHECK(m["seeds"].size() >= 1);
}

TEST_CASE("reproduce table") {
  const auto r = call({"reproduce", "--target-ser", "1e-6"});
  CHECK(r.code == 0);
  CHECK(r.out.find("electrical,c4,ook,0.86") != std::string::npos);
  CHECK(r.out.find("optical,c-po-8,l8,0.46") != std::string::npos);
}

TEST_CASE("optimize writes a feasible constellation") {
  const auto path = tmp("opt.json");
  const auto report = tmp("opt_report.json");
  const auto r = call({"optimize", "--M", "4", "--objective", "electrical", "--starts", "20", "--seed", "3", "--out",
                       path.string(), "--report", report.string()});
  REQUIRE(r.code == 0);
  const auto c = imdd::load_constellation(path);
  CHECK(imdd::avg_electrical_energy(c) == doctest::Approx(0.75).epsilon(1e-6));
  const auto rep = nlohmann::json::parse(slurp(report));
  CHECK(rep["starts"] == 20);
}

TEST_CASE("lattice search") {
  const auto r = call({"lattice-search", "--M", "8", "--objective", "optical", "--hmax", "3"});
  REQUIRE(r.code == 0);
  const auto c = imdd::constellation_from_json(r.out);
  CHECK(imdd::avg_electrical_energy(c) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == imdd::cli::kUsage);
  CHECK(call({"frobnicate"}).code == imdd::cli::kUsage);
  CHECK(call({"evaluate", "--id", "c4", "--nope"}).code == imdd::cli::kUsage);
  CHECK(call({"optimize", "--M", "1"}).code == imdd::cli::kUsage);
  CHECK(call({"catalog", "export", "--id", "zzz"}).code == imdd::cli::kUsage);
  CHECK(call({"bound", "--id", "c4", "--snr-db", "x"}).code == imdd::cli::kUsage);
  CHECK(call({"lattice-search", "--M", "20", "--hmax", "1"}).code == imdd::cli::kInfeasible);
  CHECK(call({"lattice-search", "--M", "4", "--hmax", "100"}).code == imdd::cli::kResourceCap);
  const auto missing = call({"evaluate", "--in", tmp("does_not_exist.json").string()});
  CHECK(missing.code != 0);
  CHECK_FALSE(missing.err.empty());
  CHECK(call({"--version"}).code == 0);
}
