#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "banditlab/cli.hpp"

using namespace banditlab;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "banditlab_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, SmokeSweepWritesOneRowPerGamma) {
  const fs::path out = scratch("s.csv");
  std::ostringstream err;
  ASSERT_EQ(cli_main({"sweep", "--arms", "5", "--horizon", "1000", "--prior", "uniform", "--iters",
                      "100", "--seed", "7", "--out", out.string()},
                     err),
            0)
      << err.str();
  const auto lines = lines_of(read_file(out));
  ASSERT_EQ(lines.size(), 22u);
  EXPECT_EQ(lines[0], "gamma,algo,K,T,iters,mean_regret,stderr");
  EXPECT_EQ(lines[1].rfind("0,ucb,5,1000,100,", 0), 0u);
  EXPECT_EQ(lines[21].rfind("1,ucb,5,1000,100,", 0), 0u);
}

TEST(Cli, SameSeedGivesByteIdenticalOutput) {
  const fs::path a = scratch("a.csv");
  const fs::path b = scratch("b.csv");
  std::ostringstream err;
  const std::vector<std::string> args = {"sweep", "--iters", "30", "--horizon", "200", "--seed", "3"};
  auto with_out = [&](const fs::path& p, const char* threads) {
    auto v = args;
    v.insert(v.end(), {"--out", p.string(), "--threads", threads});
    return v;
  };
  ASSERT_EQ(cli_main(with_out(a, "1"), err), 0);
  ASSERT_EQ(cli_main(with_out(b, "3"), err), 0);
  EXPECT_EQ(read_file(a), read_file(b));
}

TEST(Cli, InvalidInputsExitWithTwo) {
  std::ostringstream err;
  EXPECT_EQ(cli_main({"sweep", "--gamma", "1.5"}, err), 2);
  EXPECT_NE(err.str().find("gamma"), std::string::npos);
  EXPECT_EQ(cli_main({"sweep", "--frobnicate", "1"}, err), 2);
  EXPECT_EQ(cli_main({"teleport"}, err), 2);
  EXPECT_EQ(cli_main({}, err), 2);
  EXPECT_EQ(cli_main({"lifelong", "--config", "/nonexistent.conf"}, err), 2);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const fs::path conf = scratch("run.conf");
  {
    std::ofstream f(conf);
    f << "# small lifelong run\n"
         "episodes = 20\nhorizon = 100\niters = 3\nmeta = greedy\ngrid = 4\narms = 3\n";
  }
  const fs::path out = scratch("life.csv");
  std::ostringstream err;
  ASSERT_EQ(cli_main({"lifelong", "--config", conf.string(), "--episodes", "12", "--out",
                      out.string()},
                     err),
            0)
      << err.str();
  const auto lines = lines_of(read_file(out));
  ASSERT_EQ(lines.size(), 13u);
  EXPECT_EQ(lines[0], "episode,mean_lifelong_regret,stderr,n");
  EXPECT_EQ(lines[12].rfind("12,", 0), 0u);
  EXPECT_EQ(lines[12].substr(lines[12].rfind(',')), ",3");
}

TEST(Cli, NonstationaryRun) {
  const fs::path out = scratch("ns.csv");
  std::ostringstream err;
  ASSERT_EQ(cli_main({"nonstat", "--prior", "slow", "--episodes", "15", "--horizon", "50",
                      "--iters", "2", "--meta", "swgreedy", "--tau", "5", "--grid", "3", "--out",
                      out.string()},
                     err),
            0)
      << err.str();
  EXPECT_EQ(lines_of(read_file(out)).size(), 16u);
}

TEST(Cli, MortalCsvHasAgentColumn) {
  const fs::path out = scratch("m.csv");
  std::ostringstream err;
  ASSERT_EQ(cli_main({"mortal", "--agent", "pu,ag", "--L", "20", "--horizon", "300", "--iters",
                      "2", "--points", "10", "--out", out.string()},
                     err),
            0)
      << err.str();
  const auto lines = lines_of(read_file(out));
  ASSERT_EQ(lines.size(), 21u);
  EXPECT_EQ(lines[0], "t,mean_regret,stderr,n,agent");
  EXPECT_EQ(lines[10].substr(lines[10].rfind(',')), ",pu");
  EXPECT_EQ(lines[20].rfind("300,", 0), 0u);
  EXPECT_EQ(lines[20].substr(lines[20].rfind(',')), ",ag");
}
