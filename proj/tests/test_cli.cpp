#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polyarea/cli.hpp"

using namespace polyarea;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "polyarea");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("polyarea_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    write_file(dir_ / name, text);
    return path(name);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, VerifyReportsFeasibleAndCrossing) {
  const auto inst = write("sq.txt", "n 4\n0 0 0\n1 2 0\n2 2 2\n3 0 2\n");
  const auto good = write("good.sol", "instance sq\n0 1 2 3\n");
  const auto bow = write("bow.sol", "instance sq\n0 2 1 3\n");
  const auto ok = run_cli({"verify", inst, good});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "feasible area2=8 hull_area2=8\n");
  const auto bad = run_cli({"verify", inst, bow});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.out, "infeasible: edge 0-2 conflicts with edge 1-3\n");
  const auto perm = run_cli({"verify", inst, write("dup.sol", "instance sq\n0 1 2 9\n")});
  EXPECT_EQ(perm.code, 1);
  EXPECT_EQ(perm.out.rfind("infeasible:", 0), 0u);
}

TEST_F(CliTest, GenThenSolveMaxBeatsHalf) {
  const auto inst = path("uniform-200-7.txt");
  ASSERT_EQ(run_cli({"gen", "--type", "uniform", "-n", "200", "--seed", "7", "-o", inst}).code, 0);
  const auto res = run_cli({"solve", inst, "--max", "--algo", "approx-max", "--out-dir", dir_.string()});
  ASSERT_EQ(res.code, 0) << res.err;
  const auto cells = split(res.out.substr(0, res.out.size() - 1), ',');
  ASSERT_EQ(cells.size(), 7u);
  EXPECT_EQ(cells[0], "uniform-200-7");
  EXPECT_EQ(cells[1], "max");
  EXPECT_EQ(cells[2], "1");
  EXPECT_GT(std::stod(cells[3]), 0.5);
  EXPECT_TRUE(fs::exists(dir_ / "uniform-200-7.max.sol"));
  EXPECT_EQ(run_cli({"verify", inst, path("uniform-200-7.max.sol")}).code, 0);
}

TEST_F(CliTest, SolveDefaultsAndExplicitOutput) {
  const auto inst = path("u.txt");
  ASSERT_EQ(run_cli({"gen", "-n", "80", "--seed", "1", "-o", inst}).code, 0);
  for (const std::string obj : {"--min", "--max"}) {
    const auto sol = path("out" + obj + ".sol");
    const auto res = run_cli({"solve", inst, obj, "--moves", "2000", "-o", sol});
    ASSERT_EQ(res.code, 0) << res.err;
    EXPECT_EQ(run_cli({"verify", inst, sol}).code, 0);
  }
  const auto lo = split(run_cli({"solve", inst, "--min", "--moves", "2000", "-o", path("a.sol")}).out, ',');
  const auto hi = split(run_cli({"solve", inst, "--max", "--moves", "2000", "-o", path("b.sol")}).out, ',');
  EXPECT_LT(std::stod(lo[3]), std::stod(hi[3]));
}

TEST_F(CliTest, EveryAlgorithmChainProducesSimplePolygon) {
  const auto inst = write("small.txt", serialize_instance(oracle::random_instance(9, 40, 12)));
  for (const std::string algo :
       {"star", "approx-max", "greedy", "random", "exact", "greedy+hc", "random+sa", "star+hc+sa", "exact+hc"}) {
    const auto sol = path("s.sol");
    const auto res = run_cli({"solve", inst, "--min", "--algo", algo, "--moves", "500", "-o", sol});
    ASSERT_EQ(res.code, 0) << algo << ": " << res.err;
    EXPECT_EQ(run_cli({"verify", inst, sol}).code, 0) << algo;
  }
  const auto star = run_cli({"solve", inst, "--max", "--algo", "star", "--anchor", "999", "-o", path("x.sol")});
  EXPECT_EQ(star.code, 2);
}

TEST_F(CliTest, ExactMatchesCountAndBounds) {
  const auto inst = write("sc.txt", "n 5\n0 0 0\n1 2 0\n2 2 2\n3 0 2\n4 1 1\n");
  const auto count = run_cli({"count", inst});
  EXPECT_EQ(count.code, 0);
  EXPECT_EQ(count.out, "4\n");
  const auto bounds = run_cli({"bounds", inst});
  EXPECT_EQ(bounds.code, 0);
  EXPECT_EQ(bounds.out, "n=5 h_b=4 h_i=0 lower2=3 upper2=7 hull_area2=8\n");
  const auto res = run_cli({"solve", inst, "--min", "--algo", "exact", "-o", path("e.sol")});
  EXPECT_EQ(res.code, 0);
  EXPECT_EQ(res.out.substr(0, res.out.rfind(',')), "sc,min,1,0.750000,6,8");
  EXPECT_EQ(read_file(path("e.sol")), "instance sc\n0 1 2 3 4\n");
}

TEST_F(CliTest, ScoreDirectoryWithTotals) {
  fs::create_directories(dir_ / "inst");
  fs::create_directories(dir_ / "sol");
  write("inst/sc.txt", "n 5\n0 0 0\n1 2 0\n2 2 2\n3 0 2\n4 1 1\n");
  write("inst/sq.txt", "n 4\n0 0 0\n1 2 0\n2 2 2\n3 0 2\n");
  write("sol/sc.min.sol", "instance sc\n0 1 4 2 3\n");
  write("sol/sc.max.sol", "instance sc\n0 1 2 4 3\n");
  write("sol/sq.min.sol", "instance sq\n0 2 1 3\n");  // crossing, defaults to 1
  write("sol/sq.max.sol", "instance sq\n0 2 1 3\n");  // crossing, defaults to 0
  const auto res = run_cli({"score", "--instances", path("inst"), "--solutions", path("sol")});
  ASSERT_EQ(res.code, 0) << res.err;
  const std::string want =
      "instance_id,objective,feasible,score,area2,hull_area2,millis\n"
      "sc,max,1,0.750000,6,8,\n"
      "sc,min,1,0.750000,6,8,\n"
      "sq,max,0,0.000000,0,8,\n"
      "sq,min,0,1.000000,0,8,\n"
      "total,min,2,1.750000,,,\n"
      "total,max,2,0.750000,,,\n";
  // Drop the timing column before comparing.
  std::string got;
  for (const auto& line : split(res.out, '\n')) {
    if (line.empty()) continue;
    if (line.rfind("total", 0) == 0 || line.rfind("instance_id", 0) == 0) {
      got += line + "\n";
    } else {
      got += line.substr(0, line.rfind(',') + 1) + "\n";
    }
  }
  EXPECT_EQ(got, want);

  write("sol/zz.min.sol", "instance zz\n0 1 2\n");
  EXPECT_EQ(run_cli({"score", "--instances", path("inst"), "--solutions", path("sol")}).code, 3);
}

TEST_F(CliTest, ExitCodes) {
  const auto inst = write("sq.txt", "n 4\n0 0 0\n1 2 0\n2 2 2\n3 0 2\n");
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"nonsense"}).code, 2);
  EXPECT_EQ(run_cli({"solve", inst}).code, 2);                          // no objective
  EXPECT_EQ(run_cli({"solve", inst, "--min", "--max"}).code, 2);
  EXPECT_EQ(run_cli({"solve", inst, "--min", "--algo", "hc"}).code, 2);  // no constructor
  EXPECT_EQ(run_cli({"solve", inst, "--min", "--algo", "greedy+star"}).code, 2);
  EXPECT_EQ(run_cli({"solve", inst, "--min", "--algo", "magic"}).code, 2);
  EXPECT_EQ(run_cli({"solve", path("missing.txt"), "--min"}).code, 3);
  EXPECT_EQ(run_cli({"solve", write("bad.txt", "n 2\n0 0 0\n"), "--min"}).code, 3);
  EXPECT_EQ(run_cli({"solve", write("dup.txt", "n 3\n0 0 0\n1 1 1\n2 0 0\n"), "--min"}).code, 3);
  EXPECT_EQ(run_cli({"count", write("big.txt", serialize_instance(oracle::random_instance(11, 100, 1)))}).code, 2);
  EXPECT_EQ(run_cli({"verify", inst, write("other.sol", "instance zz\n0 1 2 3\n")}).code, 1);
  EXPECT_EQ(run_cli({"gen", "-n", "10", "--extent", "5"}).code, 2);
  EXPECT_EQ(run_cli({"gen", "--type", "edge", "-n", "10"}).code, 2);
  EXPECT_EQ(run_cli({"--version"}).code, 0);
  const auto help = run_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("solve"), std::string::npos);
}

TEST_F(CliTest, GenIsDeterministicAndNamed) {
  const auto a = run_cli({"gen", "-n", "50", "--seed", "3"});
  const auto b = run_cli({"gen", "-n", "50", "--seed", "3"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("n 50\n", 0), 0u);
  EXPECT_EQ(parse_instance(a.out).points, gen_uniform(50, 500, 3).points);
  const auto ortho = run_cli({"gen", "--type", "ortho", "-n", "9", "--gridlines", "3", "--even"});
  EXPECT_EQ(parse_instance(ortho.out).points, gen_ortho(9, 3, 0, 0, GenOptions{true}).points);
  const auto pgm = write("img.pgm", "P2\n3 3\n9\n0 0 0\n0 9 0\n0 0 0\n");
  const auto ill = run_cli({"gen", "--type", "illumination", "--raster", pgm, "-n", "1"});
  EXPECT_EQ(ill.out, "n 1\n0 1 1\n");
  EXPECT_EQ(run_cli({"gen", "--type", "illumination", "--raster", pgm, "-n", "2"}).code, 2);
}

TEST_F(CliTest, MoveCappedSolveIsByteIdenticalAcrossRunsAndThreads) {
  const auto inst = path("d.txt");
  ASSERT_EQ(run_cli({"gen", "-n", "300", "--seed", "5", "-o", inst}).code, 0);
  for (const std::string algo : {"greedy+hc", "approx-max+sa", "random+hc+sa"}) {
    std::vector<std::string> files;
    for (const std::string threads : {"1", "1", "4"}) {
      const auto sol = path("d" + std::to_string(files.size()) + ".sol");
      const auto res = run_cli({"solve", inst, "--min", "--algo", algo, "--moves", "3000", "--seed", "11",
                                "--restarts", "3", "--threads", threads, "-o", sol});
      ASSERT_EQ(res.code, 0) << res.err;
      files.push_back(read_file(sol));
    }
    EXPECT_EQ(files[0], files[1]) << algo;
    EXPECT_EQ(files[0], files[2]) << algo;
  }
}

TEST_F(CliTest, SvgExport) {
  const auto inst = write("sc.txt", "n 5\n0 0 0\n1 2 0\n2 2 2\n3 0 2\n4 1 1\n");
  const auto sol = write("sc.min.sol", "instance sc\n0 1 4 2 3\n");
  const auto res = run_cli({"svg", inst, "--solution", sol});
  EXPECT_EQ(res.code, 0);
  EXPECT_NE(res.out.find("class=\"polygon\""), std::string::npos);
  ASSERT_EQ(run_cli({"svg", inst, "--solution", sol, "-o", path("p.svg")}).code, 0);
  EXPECT_EQ(read_file(path("p.svg")), res.out);
  EXPECT_EQ(run_cli({"svg", inst, "--solution", write("x.sol", "instance sc\n0 2 1 3 4\n")}).code, 1);
}
