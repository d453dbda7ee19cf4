#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kDataDir = LSI_DATA_DIR;

struct Run {
  int code;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lsi_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const json& cfg) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << cfg.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run toolkit(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + LSI_TOOLKIT_PATH + "\" " + args + " >" +
                          (dir / "stdout.txt").string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

std::vector<json> read_jsonl(const fs::path& p) {
  std::vector<json> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string measure(const std::string& name) { return (kDataDir / "measures" / name).string(); }

}  // namespace

TEST_CASE("bounds writes one record per delta") {
  const auto dir = scratch("cardinality");
  const auto cfg = write_config(dir, {{"measures", {measure("bernoulli.json")}},
                                      {"delta", {0.25, 1.0, 4.0}}});
  const auto r = toolkit("bounds --config " + cfg.string() + " --out " + (dir / "out").string(), dir);
  CHECK(r.code == 0);
  const auto recs = read_jsonl(dir / "out" / "bounds.jsonl");
  REQUIRE(recs.size() == 3);
  CHECK(recs[0]["delta"] == 0.25);
  CHECK(recs[2]["delta"] == 4.0);
  for (const auto& rec : recs) {
    CHECK(rec["pass"] == true);
    CHECK(rec["measure"] == "bernoulli");
  }
}

TEST_CASE("point mass pushforward bound is the Gaussian constant") {
  const auto dir = scratch("pointmass");
  const auto cfg =
      write_config(dir, {{"measures", {measure("point_mass.json")}}, {"delta", {1.0}}});
  REQUIRE(toolkit("bounds --config " + cfg.string() + " --out " + (dir / "out").string(), dir)
              .code == 0);
  const auto recs = read_jsonl(dir / "out" / "bounds.jsonl");
  REQUIRE(recs.size() == 1);
  CHECK(std::abs(recs[0]["pushforward_bound"]["value"].get<double>() - 2.0) <= 1e-5);
}

TEST_CASE("config errors exit with status 2") {
  const auto dir = scratch("config_errors");
  {
    const auto cfg = write_config(dir, {{"measures", {measure("bernoulli.json")}},
                                        {"delta", json::array()}});
    const auto r = toolkit("bounds --config " + cfg.string(), dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("delta") != std::string::npos);
  }
  {
    const auto cfg = write_config(dir, {{"measures", {measure("bernoulli.json")}},
                                        {"delta", {1.0}},
                                        {"verify", {{"bound", "thm99"}}}});
    const auto r = toolkit("verify --config " + cfg.string(), dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("thm99") != std::string::npos);
  }
  {
    const auto cfg =
        write_config(dir, {{"measures", {measure("bernoulli.json")}}, {"delta", {1.0}}});
    CHECK(toolkit("verify --config " + cfg.string() + " --bound nope", dir).code == 2);
    CHECK(toolkit("bounds --config " + cfg.string() + " --format xml", dir).code == 2);
    CHECK(toolkit("bounds", dir).code == 2);
  }
  {
    std::ofstream(dir / "broken.json") << "{\n  \"atoms\": [\n    {\"x\": 0, \"w\": }\n  ]\n}\n";
    const auto cfg = write_config(dir, {{"measures", {(dir / "broken.json").string()}},
                                        {"delta", {1.0}}});
    const auto r = toolkit("bounds --config " + cfg.string(), dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("broken.json:3") != std::string::npos);
  }
}

TEST_CASE("transport tables") {
  const auto dir = scratch("transport");
  const auto cfg = write_config(
      dir, {{"measures", {measure("point_mass.json"), measure("bernoulli.json"),
                          measure("uniform.json")}},
            {"delta", {1.0}},
            {"transport", {{"points", 101}}}});
  REQUIRE(toolkit("transport --config " + cfg.string() + " --out " + (dir / "out").string(), dir)
              .code == 0);
  const auto pm = read_csv(dir / "out" / "transport" / "point_mass_delta_1.csv");
  REQUIRE(pm.size() == 101);
  for (const auto& row : pm) {
    REQUIRE(row.size() == 5);
    CHECK(std::abs(row[1] - row[0]) <= 1e-6);
  }
  CHECK(slurp(dir / "out" / "transport" / "point_mass_delta_1.csv").rfind(
            "x,T,T_prime,envelope_lo,envelope_hi\n", 0) == 0);
  for (const char* name : {"bernoulli_delta_1.csv", "uniform_delta_1.csv"}) {
    const auto rows = read_csv(dir / "out" / "transport" / name);
    REQUIRE(rows.size() == 101);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& mirror = rows[rows.size() - 1 - i];
      CHECK(rows[i][0] == doctest::Approx(-mirror[0]));
      CHECK(rows[i][1] == doctest::Approx(-mirror[1]).epsilon(1e-9));
    }
  }
}

TEST_CASE("verify with a zero constant fails") {
  const auto dir = scratch("verify_zero");
  const auto cfg = write_config(dir, {{"measures", {measure("bernoulli.json")}},
                                      {"delta", {1.0}},
                                      {"verify", {{"families", {"bump"}}}}});
  const auto r =
      toolkit("verify --config " + cfg.string() + " --c 0 --out " + (dir / "out").string(), dir);
  CHECK(r.code == 1);
  const auto recs = read_jsonl(dir / "out" / "verify.jsonl");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0]["all_pass"] == false);
  int positive = 0;
  for (const auto& m : recs[0]["members"]) {
    if (m["margin"].get<double>() > 0.0) ++positive;
  }
  CHECK(positive > 0);
}

TEST_CASE("csv reports and repeatable output") {
  const auto dir = scratch("determinism");
  const auto cfg = write_config(dir, {{"measures", {measure("asymmetric.json"),
                                                    measure("mixed.json")}},
                                      {"delta", {{"logspace", {{"min", 0.5}, {"max", 2.0},
                                                               {"count", 2}}}}},
                                      {"transport", {{"points", 201}}},
                                      {"verify", {{"families", {"exponential"}}}}});
  for (const char* out : {"a", "b"}) {
    CHECK(toolkit("sweep --config " + cfg.string() + " --jobs 2 --format csv --out " +
                      (dir / out).string(),
                  dir)
              .code == 0);
  }
  for (const char* f : {"bounds.csv", "verify.csv", "transport/mixed_delta_2.csv",
                        "transport/asymmetric_delta_0.5.csv"}) {
    const auto a = slurp(dir / "a" / f);
    CHECK_MESSAGE(!a.empty(), f);
    CHECK_MESSAGE(a == slurp(dir / "b" / f), f);
  }
  const auto bounds = slurp(dir / "a" / "bounds.csv");
  CHECK(std::count(bounds.begin(), bounds.end(), '\n') == 5);
}
