#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* cli_path() { return HYPERELL_CLI_PATH; }

fs::path work_dir() {
  fs::path d = fs::temp_directory_path() / "hyperell_cli_test";
  fs::create_directories(d);
  return d;
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::path p = work_dir() / name;
  std::ofstream f(p, std::ios::binary);
  f << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// returns the exit code; stdout is captured into `out`
int run(const std::string& args, std::string* out = nullptr) {
  fs::path cap = work_dir() / "stdout.txt";
  std::string cmd = std::string(cli_path()) + " " + args + " > " + cap.string() + " 2> " +
                    (work_dir() / "stderr.txt").string();
  int status = std::system(cmd.c_str());
  if (out) *out = slurp(cap);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("periods command reports the square lattice for y^2 = x^3 - x") {
  fs::path curve = write_file("lemn.json", "{\"f\": [0, -1, 0, 1]}\n");
  std::string out;
  int code = run("periods --curve " + curve.string() + " --json", &out);
  CHECK(code == 0);
  json j = json::parse(out);
  CHECK(j["version"] == "0.1.0");
  CHECK(j["genus"] == 1);
  double re = j["Z"][0][0][0].get<double>();
  double im = j["Z"][0][0][1].get<double>();
  CHECK(std::abs(re) < 1e-8);
  CHECK(std::abs(im - 1.0) < 1e-8);
  CHECK(j["pass"] == true);
  // no --timings flag: the report must not carry wall-clock noise
  CHECK(!j.contains("timings"));
}

TEST_CASE("repeated roots are rejected with exit code 2") {
  fs::path curve = write_file("cube.json", "{\"f\": [0, 0, 0, 1]}\n");
  CHECK(run("periods --curve " + curve.string() + " --json") == 2);
}

TEST_CASE("even degree input exits 2 before any kappa is computed") {
  fs::path curve = write_file("even.json", "{\"f\": [-1, 0, 0, 0, 1]}\n");
  std::string out;
  int code = run("kappa --curve " + curve.string() + " --json", &out);
  CHECK(code == 2);
  CHECK(out.find("kappa") == std::string::npos);
}

TEST_CASE("missing or malformed input files exit 2") {
  CHECK(run("periods --curve " + (work_dir() / "no_such_file.json").string()) == 2);
  fs::path bad = write_file("bad.json", "not json at all\n");
  CHECK(run("periods --curve " + bad.string()) == 2);
  fs::path nof = write_file("nof.json", "{\"g\": 2}\n");
  CHECK(run("periods --curve " + nof.string()) == 2);
}

TEST_CASE("period matrix is stable under doubling the quadrature nodes") {
  fs::path curve = write_file("g2.json", "{\"f\": [0, -1, 0, 0, 0, 1]}\n");
  std::string out32, out64;
  REQUIRE(run("periods --curve " + curve.string() + " --nodes 32 --json", &out32) == 0);
  REQUIRE(run("periods --curve " + curve.string() + " --nodes 64 --json", &out64) == 0);
  json a = json::parse(out32), b = json::parse(out64);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int part = 0; part < 2; ++part) {
        double da = a["Z"][i][j][part].get<double>();
        double db = b["Z"][i][j][part].get<double>();
        CHECK(std::abs(da - db) < 1e-9);
      }
}

TEST_CASE("an unachievable tolerance turns a passing check into exit code 1") {
  fs::path curve = write_file("g2b.json", "{\"f\": [0, -1, 0, 0, 0, 1]}\n");
  std::string out;
  int code = run("verify --curve " + curve.string() + " --which main --tol 1e-18 --json", &out);
  CHECK(code == 1);
  json j = json::parse(out);
  CHECK(j["pass"] == false);
  CHECK(j["checks"][0]["name"] == "main_theorem");
  CHECK(j["checks"][0]["pass"] == false);
  // the computation itself is fine, only the bar was raised
  CHECK(j["checks"][0]["residual"].get<double>() < 1e-6);
}

TEST_CASE("reports are byte-identical across runs with a fixed seed") {
  fs::path curve = write_file("g2c.json", "{\"f\": [0, -1, 0, 0, 0, 1]}\n");
  fs::path ra = work_dir() / "runA.json";
  fs::path rb = work_dir() / "runB.json";
  REQUIRE(run("report --curve " + curve.string() + " --seed 99 --out " + ra.string()) == 0);
  REQUIRE(run("report --curve " + curve.string() + " --seed 99 --out " + rb.string()) == 0);
  std::string sa = slurp(ra), sb = slurp(rb);
  REQUIRE(!sa.empty());
  CHECK(sa == sb);
}

TEST_CASE("explicit points given in the curve file are honored") {
  // p on the principal sheet at x = -1.7 + 1.1i, q given with both coordinates
  fs::path curve = write_file(
      "pts.json",
      "{\"f\": [0, -1, 0, 0, 0, 1], \"points\": {\"p\": [-1.7, 1.1], \"q\": [1.5, -0.8]}}\n");
  std::string out;
  int code = run("extension --curve " + curve.string() + " --json", &out);
  CHECK(code == 0);
  json j = json::parse(out);
  CHECK(j.contains("v_pp"));
  CHECK(j.contains("v_pq"));
  CHECK(j["pass"] == true);
}

TEST_CASE("verify runs the full battery on a genus two curve") {
  fs::path curve = write_file("g2d.json", "{\"f\": [0, -1, 0, 0, 0, 1]}\n");
  std::string out;
  int code = run("verify --curve " + curve.string() + " --json", &out);
  CHECK(code == 0);
  json j = json::parse(out);
  std::vector<std::string> names;
  for (const auto& c : j["checks"]) names.push_back(c["name"].get<std::string>());
  for (const char* want : {"higher_period_relation", "group_ring_relation", "kappa_canonical",
                           "theta_vanishing", "main_theorem", "third_kind_reciprocity"}) {
    bool found = false;
    for (const auto& n : names) found = found || n == want;
    CHECK_MESSAGE(found, "missing check: ", want);
  }
  CHECK(j["pass"] == true);
}
