// Integration tests driving the qhdef binary end to end. The binary path
// comes from QHDEF_CLI_BIN (set by CMake next to this test).

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string cli_bin() {
  const char* p = std::getenv("QHDEF_CLI_BIN");
  REQUIRE_MESSAGE(p != nullptr, "QHDEF_CLI_BIN must point at the qhdef binary");
  return p;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + cli_bin() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (size_t pos = 0; (pos = text.find("\r\n", pos)) != std::string::npos; pos += 2) ++n;
  return n;
}

}  // namespace

TEST_CASE("verify: abelian double passes with exit 0") {
  CHECK(run("verify --space double --group t2 --samples 8 --no-timestamp "
            "--out /tmp/qhdef_t2.json") == 0);
  const std::string rep = slurp("/tmp/qhdef_t2.json");
  CHECK(rep.find("\"pass\": true") != std::string::npos);
  CHECK(rep.find("\"sign_convention\"") != std::string::npos);
  CHECK(rep.find("\"pairing_scale\"") != std::string::npos);
  CHECK(rep.find("timestamp") == std::string::npos);
}

TEST_CASE("verify: every space and group combination used in practice") {
  CHECK(run("verify --space tstar --group so3 --samples 4 --no-timestamp") == 0);
  CHECK(run("verify --space conjugacy --group su2 --samples 4 --no-timestamp") == 0);
  CHECK(run("verify --space orbit --group sl2r --samples 4 --no-timestamp") == 0);
  CHECK(run("verify --space moduli --genus 0 --boundaries 2 --group su2 --samples 2 "
            "--no-timestamp") == 0);
  CHECK(run("verify --space moduli --genus 1 --boundaries 1 --group su2 --samples 2 "
            "--no-timestamp") == 0);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("verify --space nowhere --samples 2") == 2);
  CHECK(run("verify --bogus-flag") == 2);
  CHECK(run("") == 2);
  CHECK(run("verify --space conjugacy --group su2 --element 1,2 --samples 2") == 2);
}

TEST_CASE("domain rejection exits 1") {
  CHECK(run("deform --family conjugacy --group su2 --element 7,0,0 --samples 2") == 1);
}

TEST_CASE("determinism: identical flags give byte-identical JSON and CSV") {
  const std::string flags =
      "deform --family double --group su2 --samples 4 --seed 11 --no-timestamp";
  CHECK(run(flags + " --out /tmp/qhdef_a.json --csv /tmp/qhdef_a.csv") == 0);
  CHECK(run(flags + " --out /tmp/qhdef_b.json --csv /tmp/qhdef_b.csv") == 0);
  CHECK(slurp("/tmp/qhdef_a.json") == slurp("/tmp/qhdef_b.json"));
  CHECK(slurp("/tmp/qhdef_a.csv") == slurp("/tmp/qhdef_b.csv"));
  CHECK(!slurp("/tmp/qhdef_a.json").empty());
}

TEST_CASE("QHDEF_SEED overrides --seed") {
  const std::string flags =
      "verify --space double --group su2 --samples 4 --seed 11 --no-timestamp";
  CHECK(run(flags + " --out /tmp/qhdef_s1.json") == 0);
  CHECK(run(flags + " --out /tmp/qhdef_s2.json", "QHDEF_SEED=99") == 0);
  CHECK(run("verify --space double --group su2 --samples 4 --seed 99 --no-timestamp "
            "--out /tmp/qhdef_s3.json") == 0);
  CHECK(slurp("/tmp/qhdef_s2.json") != slurp("/tmp/qhdef_s1.json"));
  // env value equals an explicit --seed with that value, except the echoed seed
  const std::string s2 = slurp("/tmp/qhdef_s2.json");
  const std::string s3 = slurp("/tmp/qhdef_s3.json");
  CHECK(s2 == s3);
}

TEST_CASE("CSV schema: header, |grid| x metrics data rows, slope footer") {
  const std::string grid = "1,0.5,0.25,0";
  CHECK(run("deform --family double --group t2 --samples 4 --no-timestamp --t-grid " + grid +
            " --out /tmp/qhdef_g.json --csv /tmp/qhdef_g.csv") == 0);
  const std::string csv = slurp("/tmp/qhdef_g.csv");
  // 1 header + 4 grid points x 6 metrics + 1 footer
  CHECK(count_lines(csv) == 1 + 4 * 6 + 1);
  CHECK(csv.rfind("t,metric,max_residual,mean_residual,samples\r\n", 0) == 0);
  CHECK(csv.find("nan,slope,") != std::string::npos);
  CHECK(csv.find("form_vs_limit") != std::string::npos);
  CHECK(csv.find("moment_continuity") != std::string::npos);
}

TEST_CASE("fuse: external fusion of two double families") {
  CHECK(run("fuse --family double --with double --group t2 --samples 4 --no-timestamp "
            "--out /tmp/qhdef_f.json") == 0);
  const std::string rep = slurp("/tmp/qhdef_f.json");
  CHECK(rep.find("\"family\": \"double(*)double\"") != std::string::npos);
  CHECK(rep.find("\"pass\": true") != std::string::npos);
  CHECK(run("fuse --family conjugacy --with double --samples 2") == 2);
}
