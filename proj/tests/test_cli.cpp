#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Run cli(const std::string& args) {
  const std::string cmd = std::string(XORLRC_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("xorlrc_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("gen prints G and H in text format") {
  const auto r = cli("gen --code simplex:3 --print");
  CHECK(r.status == 0);
  CHECK(r.out == "3 7\n1001101\n0101011\n0010111\n4 7\n1101000\n1010100\n0110010\n1110001\n");
}

TEST_CASE("usage errors exit 2") {
  CHECK(cli("").status == 2);
  CHECK(cli("frobnicate").status == 2);
  CHECK(cli("gen").status == 2);
  CHECK(cli("gen --code nope:3").status == 2);
  CHECK(cli("gen --code simplex:0").status == 2);
  CHECK(cli("plan --code simplex:3 --erased 9").status == 2);
  CHECK(cli("plan --code simplex:3 --erased 1,x").status == 2);
  CHECK(cli("verify --code simplex:3").status == 2);  // sampled without --seed
  CHECK(cli("simulate --code simplex:3 --trials 10 --max-erasures 2").status == 2);
  CHECK(cli("table --k 4 --format csv").status == 2);
  CHECK(cli("table").status == 2);
  CHECK(cli("verify --code simplex:3 --exhaustive --workers 0").status == 2);
}

TEST_CASE("plan and verify verdicts") {
  auto r = cli("plan --code simplex:3 --erased 0,1,3,5");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("# mode: sequential\nrepair 0 <- 2+4\n", 0) == 0);
  CHECK(cli("plan --code simplex:3 --erased 2,4,5,6").status == 1);
  r = cli("plan --code simplex:3 --erased 0,1 --r 2");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("# mode: parallel r=2\n", 0) == 0);
  CHECK(cli("plan --code simplex:3 --erased 0,1,3,5 --r 2").status == 1);

  r = cli("verify --code c2:4 --exhaustive");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("PASS easy-repair c2:4 exhaustive examined=512", 0) == 0);
  CHECK(cli("verify --code simplex:3 --exhaustive --r 2 --max-erasures 3").status == 0);
  r = cli("verify --code simplex:3 --exhaustive --r 2 --max-erasures 4");
  CHECK(r.status == 1);
  CHECK(r.out.find("counterexample: ") != std::string::npos);
}

TEST_CASE("table formats") {
  auto r = cli("table --k 4 --format tsv");
  CHECK(r.status == 0);
  CHECK(r.out ==
        "code\tn\td\td_over_n\nsimplex:4\t15\t8\t8/15\numx:4:2\t15\t6\t2/5\nc1:4\t10\t4\t2/5\num2p4\t9\t4\t4/9\n"
        "umx:4:4\t9\t3\t1/3\nc0:4:2=c1:4:2\t6\t2\t1/3\n");
  r = cli("table --k 6");
  CHECK(r.status == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 9);
}

TEST_CASE("distance and availability") {
  auto r = cli("distance --code um:2:2");
  CHECK(r.status == 0);
  CHECK(r.out.find("column_distance d_0: 4\n") != std::string::npos);
  CHECK(r.out.find("column_distance d_3: 6\n") != std::string::npos);
  r = cli("availability --code simplex:3 --r 2");
  CHECK(r.status == 0);
  CHECK(r.out.find("\nt\t0\t3\n") != std::string::npos);
}

TEST_CASE("encode, lose shards, repair, decode") {
  const auto dir = scratch("store");
  std::mt19937_64 rng(12);
  std::string payload(777, '\0');
  for (auto& ch : payload) ch = static_cast<char>(rng());
  {
    std::ofstream(dir / "in.bin", std::ios::binary) << payload;
  }
  const auto shards = dir / "shards";
  CHECK(cli("encode --code simplex:3 --in " + (dir / "in.bin").string() + " --dir " + shards.string()).status == 0);
  const auto original = slurp(shards / "shard_0003.bin");
  for (int i : {0, 1, 3, 5}) fs::remove(shards / ("shard_000" + std::to_string(i) + ".bin"));

  const auto r = cli("repair --code simplex:3 --dir " + shards.string() + " --missing 0,1,3,5");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("# mode: sequential\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
  CHECK(slurp(shards / "shard_0003.bin") == original);

  for (int i : {0, 2, 4, 6}) fs::remove(shards / ("shard_000" + std::to_string(i) + ".bin"));
  CHECK(cli("decode --dir " + shards.string() + " --out " + (dir / "out.bin").string()).status == 0);
  CHECK(slurp(dir / "out.bin") == payload);

  fs::remove(shards / "shard_0001.bin");
  CHECK(cli("decode --dir " + shards.string() + " --out " + (dir / "out2.bin").string()).status == 1);
  CHECK(cli("repair --code c1:4 --dir " + shards.string()).status == 2);
  fs::remove_all(dir);
}

TEST_CASE("seeded commands are reproducible") {
  const auto a = cli("simulate --code c2:4 --trials 500 --max-erasures 3 --seed 9");
  const auto b = cli("simulate --code c2:4 --trials 500 --max-erasures 3 --seed 9 --workers 4");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("trials: 500\n") != std::string::npos);
  const auto c = cli("verify --code um:2:1 --seed 3 --trials 2000");
  const auto d = cli("verify --code um:2:1 --seed 3 --trials 2000 --workers 4");
  CHECK(c.status == 0);
  CHECK(c.out == d.out);
}
