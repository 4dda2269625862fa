#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "robusthedge/market_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("robusthedge_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args, const std::string& env = "") {
    const fs::path out = dir_ / "out.txt";
    const std::string cmd = env + " " + ROBUSTHEDGE_CLI + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
  }

  std::string fixture(const std::string& name, int param = 0) {
    const fs::path p = dir_ / (name + std::to_string(param) + ".json");
    const CliResult r = run("fixture --name " + name + " --param " + std::to_string(param));
    EXPECT_EQ(r.code, 0);
    std::ofstream(p) << r.out;
    return p.string();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, FixtureOutputLoads) {
  const std::string b = fixture("B", 2);
  EXPECT_NO_THROW(robusthedge::load_market_path(b));
  EXPECT_EQ(run("--input " + b + " validate").code, 0);
}

TEST_F(Cli, PriceModes) {
  const std::string b = fixture("B", 2);
  const auto qs = nlohmann::json::parse(run("--input " + b + " price").out);
  EXPECT_EQ(qs["price"], "2/5");
  const auto mono = nlohmann::json::parse(run("--input " + b + " price --mode mono --prior pure:0").out);
  EXPECT_EQ(mono["price"], "1/3");
  const auto lower = nlohmann::json::parse(run("--input " + b + " price --mode lower").out);
  EXPECT_EQ(lower["price"], "2/5");
  const auto digital = nlohmann::json::parse(run("--input " + b + " price --claim digital:2").out);
  EXPECT_EQ(digital["price"], "1/3");
  EXPECT_NE(run("--input " + b + " --format table price").out.find("2/5"), std::string::npos);
}

TEST_F(Cli, DualSupportsAndConstruct) {
  const std::string b = fixture("B", 2);
  const auto dual = nlohmann::json::parse(run("--input " + b + " dual").out);
  EXPECT_EQ(dual["value"], "2/5");
  EXPECT_EQ(dual["evidence"]["gaps"].size(), 3u);
  const auto sup = nlohmann::json::parse(run("--input " + b + " supports").out);
  EXPECT_EQ(sup[""].size(), 3u);
  const CliResult family = run("--input " + b + " construct --what family");
  ASSERT_EQ(family.code, 0);
  const auto mf = robusthedge::load_market(family.out);
  EXPECT_EQ(mf.model.generators({}).size(), 2u);
  const CliResult pt = run("--input " + b + " construct --what ptilde");
  EXPECT_EQ(robusthedge::load_market(pt.out).model.generators({}).size(), 1u);
  EXPECT_EQ(run("--input " + b + " construct --what phat").code, 0);
  EXPECT_EQ(run("--input " + b + " construct --what repair --prior pure:1").code, 0);
}

TEST_F(Cli, ExitCodes) {
  const std::string a = fixture("A");
  const std::string b = fixture("B", 2);
  const std::string c = fixture("C");
  EXPECT_EQ(run("--input " + a + " verify-chain").code, 0);
  EXPECT_EQ(run("--input " + b + " verify-chain --format table").code, 0);
  EXPECT_EQ(run("--input " + c + " verify-chain").code, 3);
  EXPECT_EQ(run("--input " + c + " na").code, 3);
  EXPECT_EQ(run("--input " + c + " price").code, 3);
  EXPECT_EQ(run("--input " + a + " na").code, 0);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--input /nonexistent/file.json validate").code, 2);
  EXPECT_EQ(run("fixture --name Z").code, 2);
  EXPECT_EQ(run("--input " + b + " price --mode lower", "ROBUSTHEDGE_CAP=1").code, 4);
  EXPECT_EQ(run("verify-random --count 3 --seed 4").code, 0);

  const fs::path broken = dir_ / "broken.json";
  std::ofstream(broken) << "{\"horizon\": 1}";
  EXPECT_EQ(run("--input " + broken.string() + " validate").code, 2);
}

TEST_F(Cli, NaCertificate) {
  const std::string c = fixture("C");
  const auto j = nlohmann::json::parse(run("--input " + c + " na").out);
  EXPECT_EQ(j["na_holds"], false);
  EXPECT_EQ(j["node"], "");
  EXPECT_EQ(j["certificate"], nlohmann::json::array({"1"}));
}

TEST_F(Cli, OutputFile) {
  const fs::path out = dir_ / "a.json";
  EXPECT_EQ(run("fixture --name A --output " + out.string()).code, 0);
  EXPECT_NO_THROW(robusthedge::load_market_path(out.string()));
}
