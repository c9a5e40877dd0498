#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kSkt = SKT_BINARY;
const std::string kModels = SKT_SOURCE_DIR "/models/";

int run(const std::string& args) {
  const std::string cmd = kSkt + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "skt_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("--list") == 0);
  CHECK(run("verify --model sp2_s7 --params 1,2") == 0);
  CHECK(run("verify --model sp2_s7 --params 1,2 --mode rational") == 0);
  CHECK(run("verify --model su2_3ad") == 0);
  CHECK(run("verify --model cp3_nk") == 0);
  CHECK(run("verify --model s4_qk") == 0);
  CHECK(run("verify --model product_s3xs3") == 0);
  CHECK(run("verify --model sp2_s7 --params 1,1 --suite nk") == 1);
  CHECK(run("verify --model broken_acm") == 1);
  CHECK(run("verify --model broken_3ad") == 1);
  CHECK(run("verify --model broken_jacobi") == 2);
  CHECK(run("verify --model sp2_s7 --params 1,0") == 2);
  CHECK(run("verify --model no_such_model") == 2);
  CHECK(run("verify --model sp2_s7 --suite bogus") == 2);
  CHECK(run("verify") == 2);
  CHECK(run("tower --model sp2_s7") == 0);
  CHECK(run("tower --model sp2_s7 --mode rational") == 0);
  CHECK(run("tower --model su2_3ad") == 0);
}

TEST_CASE("model files on the command line") {
  CHECK(run("verify --model " + kModels + "sp2_s7_1_2.json") == 0);
  CHECK(run("verify --model " + kModels + "sp2_s7_1_1.json") == 1);
  CHECK(run("verify --model " + kModels + "broken_jacobi.json") == 2);
  CHECK(run("verify --model " + kModels + "broken_acm.json") == 1);
  CHECK(run("verify --model " + kModels + "cp3_nk_1.json --mode rational") == 0);
}

TEST_CASE("reports are deterministic") {
  auto a = scratch("a.json"), b = scratch("b.json");
  REQUIRE(run("verify --model sp2_s7 --params 1,2 --report " + a.string()) == 0);
  REQUIRE(run("verify --model sp2_s7 --params 1,2 --report " + b.string()) == 0);
  const std::string ra = slurp(a);
  CHECK(!ra.empty());
  CHECK(ra == slurp(b));

  auto doc = nlohmann::json::parse(ra);
  CHECK(doc["exit_code"] == 0);
  CHECK(doc["command"] == "verify");
  CHECK(doc.contains("suites"));

  auto r = scratch("refused.json");
  CHECK(run("verify --model sp2_s7 --params 1,1 --suite nk --report " + r.string()) == 1);
  CHECK(slurp(r).find("span(xi_1)-invariance") != std::string::npos);
}

TEST_CASE("export round trip") {
  auto out = scratch("exported.json");
  REQUIRE(run("export --model sp2_s7 --params 1,2 --out " + out.string()) == 0);
  CHECK(run("verify --model " + out.string()) == 0);
  CHECK(slurp(out) == slurp(kModels + "sp2_s7_1_2.json"));
}
