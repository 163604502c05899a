#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "catch2/catch_amalgamated.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int exit_code;
  fs::path out_dir;
};

fs::path fresh_dir(const std::string& tag) {
  auto dir = fs::temp_directory_path() / ("abtk_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run run_cli(const std::string& tag, const std::string& args) {
  Run r;
  r.out_dir = fresh_dir(tag);
  const std::string cmd = std::string(ABTK_CLI_PATH) + " " + args + " --out " + r.out_dir.string() +
                          " 2>" + (r.out_dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  r.exit_code = WEXITSTATUS(status);
  return r;
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return Json::parse(in);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

}  // namespace

TEST_CASE("holonomy job reports the Aharonov-Bohm phases") {
  auto dir = fresh_dir("potential_in");
  write_file(dir / "potential.json", R"({"weights":[
    {"edge":[0,1],"w":0.1},{"edge":[1,2],"w":0.2},{"edge":[2,3],"w":0.3},
    {"edge":[3,4],"w":0.4},{"edge":[4,5],"w":0.5},{"edge":[5,0],"w":0.6}]})");
  auto r = run_cli("holonomy", "--net circle:6 --potential " + (dir / "potential.json").string() +
                                   " --analyses holonomy");
  REQUIRE(r.exit_code == 0);
  Json j = read_json(r.out_dir / "holonomy.json");
  REQUIRE(j.contains("generators"));
  REQUIRE(j["generators"].size() == 1);
  CHECK_FALSE(j["topologically_trivial"].get<bool>());
  // one-winding row carries phase -2.1 (mod 2pi)
  bool found = false;
  for (const auto& row : j["loops"])
    if (row["winding"] == 1) {
      found = true;
      CHECK(std::abs(row["phase"].get<double>() - (-2.1)) < 1e-9);
    }
  CHECK(found);
  // the generator loop is oriented forward, so its phase is -2.1 mod 2pi
  CHECK(std::abs(j["generators"][0]["phase"].get<double>() - (-2.1)) < 1e-9);
}

TEST_CASE("statistics job reports the Fermi phase") {
  auto r = run_cli("stats", "--net circle:8 --analyses statistics");
  REQUIRE(r.exit_code == 0);
  Json j = read_json(r.out_dir / "statistics.json");
  CHECK(j["kappa"] == -1);
  CHECK(j["charge"] == 1);
}

TEST_CASE("pi1 job reports homology ranks") {
  auto r = run_cli("pi1_line", "--net line:5 --analyses pi1");
  REQUIRE(r.exit_code == 0);
  CHECK(read_json(r.out_dir / "pi1.json")["h1_rank"] == 0);

  auto r2 = run_cli("pi1_wedge", "--net wedge:6,6 --analyses pi1");
  REQUIRE(r2.exit_code == 0);
  CHECK(read_json(r2.out_dir / "pi1.json")["h1_rank"] == 2);
}

TEST_CASE("sector and roundtrip jobs run from a character") {
  auto r = run_cli("sector", "--net circle:6 --character 2.1 --analyses sector,roundtrip,validate");
  REQUIRE(r.exit_code == 0);
  Json sector = read_json(r.out_dir / "sector.json");
  CHECK(sector["charge"] == 1);
  CHECK(sector["kappa"] == -1);
  CHECK(sector["d"] == 1);
  CHECK(sector["tau"] == 1);
  CHECK_FALSE(sector["trivial"].get<bool>());
  Json rt = read_json(r.out_dir / "roundtrip.json");
  CHECK(rt["ok"].get<bool>());
  CHECK(read_json(r.out_dir / "validate.json")["valid"].get<bool>());
}

TEST_CASE("custom complexes and covers load from JSON") {
  auto dir = fresh_dir("custom_in");
  write_file(dir / "complex.json",
             R"({"vertices":[0,1,2,3,4,5],"edges":[[0,1],[1,2],[2,3],[3,4],[4,5],[5,0]]})");
  // the circle:6 cover, spelled out by hand
  std::string diamonds = R"({"diamonds":[)";
  bool first = true;
  for (int len = 1; len <= 3; ++len)
    for (int start = 0; start < 6; ++start) {
      if (!first) diamonds += ",";
      first = false;
      diamonds += "{\"id\":0,\"support\":[";
      for (int k = 0; k < len; ++k)
        diamonds += (k ? "," : "") + std::to_string((start + k) % 6);
      diamonds += "]}";
    }
  diamonds += "]}";
  write_file(dir / "cover.json", diamonds);
  auto r = run_cli("custom", "--complex " + (dir / "complex.json").string() + " --cover " +
                                 (dir / "cover.json").string() + " --analyses validate,pi1");
  REQUIRE(r.exit_code == 0);
  CHECK(read_json(r.out_dir / "pi1.json")["h1_rank"] == 1);
}

TEST_CASE("validation failures exit 1 with the report written") {
  auto dir = fresh_dir("badcover_in");
  write_file(dir / "complex.json", R"({"vertices":[0,1,2],"edges":[[0,1],[1,2]]})");
  write_file(dir / "cover.json",
             R"({"diamonds":[{"id":0,"support":[0]},{"id":1,"support":[0,1]}],"disjoint":[[0,1]]})");
  auto r = run_cli("badcover", "--complex " + (dir / "complex.json").string() + " --cover " +
                                   (dir / "cover.json").string() + " --analyses validate");
  CHECK(r.exit_code == 1);
  Json j = read_json(r.out_dir / "validate.json");
  CHECK_FALSE(j["valid"].get<bool>());
  bool conflict = false;
  for (const auto& v : j["violations"])
    conflict |= v["code"].get<std::string>().find("disjointness/comparability") !=
                std::string::npos;
  CHECK(conflict);
}

TEST_CASE("malformed input exits 2 naming file and field") {
  auto dir = fresh_dir("malformed_in");
  write_file(dir / "broken.json", R"({"vertices":[0,1,2]})");
  auto r = run_cli("malformed", "--complex " + (dir / "broken.json").string() +
                                    " --cover missing.json --analyses validate");
  CHECK(r.exit_code == 2);
  const std::string err = read_file(r.out_dir / "stderr.txt");
  CHECK(err.find("broken.json") != std::string::npos);
  CHECK(err.find("edges") != std::string::npos);

  auto r2 = run_cli("badnet", "--net circle:4 --analyses pi1");
  CHECK(r2.exit_code == 2);
  const std::string err2 = read_file(r2.out_dir / "stderr.txt");
  CHECK(err2.find("fixture too small") != std::string::npos);

  auto r3 = run_cli("badanalysis", "--net circle:6 --analyses nonsense");
  CHECK(r3.exit_code == 2);
}

TEST_CASE("reports are byte-deterministic") {
  const std::string args = "--net circle:6 --character 1.25 --analyses pi1,holonomy,sector";
  auto r1 = run_cli("det1", args);
  auto r2 = run_cli("det2", args);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  for (const std::string name : {"pi1.json", "holonomy.json", "sector.json"})
    CHECK(read_file(r1.out_dir / name) == read_file(r2.out_dir / name));
}

TEST_CASE("csv format mirrors the json leaves") {
  auto r = run_cli("csv", "--net circle:6 --character 2.1 --analyses sector --format csv");
  REQUIRE(r.exit_code == 0);
  const std::string csv = read_file(r.out_dir / "sector.csv");
  CHECK(csv.find("key,value") != std::string::npos);
  CHECK(csv.find("kappa,-1") != std::string::npos);
  CHECK(csv.find("tau,1") != std::string::npos);
}
