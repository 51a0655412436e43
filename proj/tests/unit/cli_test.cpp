#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "maslovflow/cli/cli.hpp"

using maslovflow::cli::run;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "maslovflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / ("maslovflow_cli_test_" + std::string(name));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("verify a built-in scenario") {
  const Result r = invoke({"verify", "@S1"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["sf"] == 1);
  CHECK(doc["mas"] == 1);
  CHECK(doc["agree"] == true);
}

TEST_CASE("verify writes the report into the out directory") {
  const fs::path dir = scratch_dir("verify");
  const Result r = invoke({"verify", "@S4", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(dir / "S4.json");
  const auto doc = nlohmann::json::parse(in);
  CHECK(doc["sf"] == 0);
  CHECK(doc["mas"] == 0);
}

TEST_CASE("sf and maslov print integers") {
  const Result sf = invoke({"sf", "@S2"});
  CHECK(sf.code == 0);
  CHECK(sf.out == "-1\n");
  const Result mas = invoke({"maslov", "@S1"});
  CHECK(mas.code == 0);
  CHECK(mas.out == "1\n");
}

TEST_CASE("exit codes") {
  CHECK(invoke({"verify", "/nonexistent/config.json"}).code == 3);
  CHECK(invoke({"sf", "@S42"}).code == 3);
  CHECK(invoke({}).code == 3);
  CHECK(invoke({"frobnicate"}).code == 3);
  CHECK(invoke({"sweep", "--trials", "0"}).code == 3);
  CHECK(invoke({"trace", "@S1", "--what", "colours"}).code == 3);

  const fs::path dir = scratch_dir("codes");
  const fs::path bad = write(dir / "bad.json", R"x({"kind": "first_order", "m": 1, "j": [["s +* t"]]})x");
  const Result syntax = invoke({"verify", bad.string()});
  CHECK(syntax.code == 3);
  CHECK(syntax.err.find("offset 3") != std::string::npos);

  // expected values that the pipelines do not reproduce
  const fs::path wrong = write(dir / "wrong.json", R"x({
    "kind": "first_order", "m": 1, "T": 1, "j": [["1i"]], "b": [["0"]],
    "boundary": {"w_path": [["1"], ["exp(2i*pi*s)"]]},
    "expected": {"sf": 2, "mas": 2, "provenance": "deliberately wrong"}})x");
  CHECK(invoke({"verify", wrong.string()}).code == 1);

  // a boundary path that is not Lagrangian is a numerical failure
  const fs::path nonlag = write(dir / "nonlag.json", R"x({
    "kind": "pair_path", "J": [["1i", "0"], ["0", "1i"]], "lambda": [["1"], ["0"]], "mu": [["0"], ["1"]]})x");
  CHECK(invoke({"maslov", nonlag.string()}).code == 2);
}

TEST_CASE("scenarios and traces") {
  const Result list = invoke({"scenarios"});
  CHECK(list.code == 0);
  for (const char* name : {"@S1", "@S2", "@S3", "@S4", "@S5"}) CHECK(list.out.find(name) != std::string::npos);

  const Result tr = invoke({"trace", "@S1", "--what", "eigenphases", "--points", "5"});
  CHECK(tr.code == 0);
  CHECK(tr.out.rfind("s,coord_1\n", 0) == 0);
  CHECK(std::count(tr.out.begin(), tr.out.end(), '\n') == 6);
}

TEST_CASE("sweep") {
  const Result r = invoke({"sweep", "--seed", "3", "--trials", "1"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["seed"] == 3);
  CHECK(doc["all_passed"] == true);
}

TEST_CASE("batch") {
  const fs::path dir = scratch_dir("batch");
  const Result r = invoke({"batch", "@S1", "@S4", "--out", dir.string(), "--points", "9"});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "S1.json"));
  CHECK(fs::exists(dir / "S4_eigenvalues.csv"));
  CHECK(fs::exists(dir / "S4_eigenphases.csv"));
  std::ifstream in(dir / "summary.json");
  const auto doc = nlohmann::json::parse(in);
  CHECK(doc["scenarios"].size() == 2);
  CHECK(doc["exit"] == 0);
}
