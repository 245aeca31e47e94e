#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "oracles.hpp"
#include "una/cli.hpp"
#include "una/tfidf.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "una");
  std::ostringstream out, err;
  const int code = una::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("una_cli_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name, const std::string& contents) const {
    const auto p = path / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p.string();
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string numbered_lines(int n) {
  std::string text;
  una::CounterRng rng(3);
  for (int i = 0; i < n; ++i) {
    text += "sentence " + std::to_string(i % 37) + " about w" + std::to_string(rng.below(50)) + " and w" +
            std::to_string(rng.below(90)) + "\n";
  }
  return text;
}

}  // namespace

TEST_CASE("fit") {
  TempDir dir;
  const auto corpus = dir.file("c.txt", "a b b\na c\n");
  auto r = run({"fit", "--corpus", corpus, "--output", dir.at("m.tfidf")});
  REQUIRE(r.code == 0);
  CHECK(r.out == "N=2 m=3\n");
  const auto model = una::load_model_file(dir.at("m.tfidf"));
  const auto ref = una::oracle::brute_force_tfidf({{"a", "b", "b"}, {"a", "c"}});
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(std::abs(model.max_score()[j] - ref.column_max[j]) <= 1e-12);
    CHECK(std::abs(model.idf()[j] - ref.idf[j]) <= 1e-12);
  }

  r = run({"fit", "--corpus", dir.at("missing.txt"), "--output", dir.at("m2")});
  CHECK(r.code == 1);
  CHECK(r.err.find("missing.txt") != std::string::npos);
  CHECK(r.out.empty());

  r = run({"fit", "--corpus", dir.file("empty.txt", ""), "--output", dir.at("m3")});
  CHECK(r.code == 2);

  r = run({"fit", "--corpus", corpus});
  CHECK(r.code == 2);
}

TEST_CASE("augment") {
  TempDir dir;
  const auto input = dir.file("in.txt", numbered_lines(320));
  REQUIRE(run({"fit", "--corpus", input, "--output", dir.at("m")}).code == 0);

  auto r = run({"augment", "--model", dir.at("m"), "--input", input, "--output", dir.at("a1"),
                "--seed", "42", "--batch-size", "64"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "batches=1 negatives=64 unaugmentable=0\n");
  const auto first = slurp(dir.at("a1"));
  std::istringstream lines(first);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    CHECK(line.rfind("5\t" + std::to_string(256 + count) + "\t", 0) == 0);
  }
  CHECK(count == 64);

  r = run({"augment", "--model", dir.at("m"), "--input", input, "--output", dir.at("a2"),
           "--seed", "42", "--batch-size", "64"});
  CHECK(slurp(dir.at("a2")) == first);

  r = run({"augment", "--model", dir.at("m"), "--input", input, "--output", dir.at("a3"), "--seed", "42",
           "--alpha", "1", "--batch-size", "100"});
  CHECK(r.out == "batches=4 negatives=320 unaugmentable=0\n");

  r = run({"augment", "--model", dir.at("m"), "--input", dir.file("oov.txt", "zzz qqq\n"), "--output", "-",
           "--alpha", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "1\t1\tzzz qqq\t#unaugmentable\nbatches=1 negatives=1 unaugmentable=1\n");

  for (const auto& bad : std::vector<std::vector<std::string>>{
           {"--beta", "1.5"}, {"--beta", "0"}, {"--radius", "0"}, {"--alpha", "0"}, {"--batch-size", "0"},
           {"--selection-mode", "sideways"}}) {
    std::vector<std::string> args{"augment", "--model", dir.at("m"), "--input", input, "--output", dir.at("x")};
    args.insert(args.end(), bad.begin(), bad.end());
    CHECK(run(args).code == 2);
  }

  r = run({"augment", "--model", dir.at("nope"), "--input", input, "--output", dir.at("x")});
  CHECK(r.code == 1);
}

TEST_CASE("augment reads flags from a config file") {
  TempDir dir;
  const auto input = dir.file("in.txt", numbered_lines(40));
  REQUIRE(run({"fit", "--corpus", input, "--output", dir.at("m")}).code == 0);
  const auto config = dir.file("sweep.ini", "[augment]\nalpha=1\nbatch-size=10\nbeta=0.3\n");
  auto r = run({"--config", config, "augment", "--model", dir.at("m"), "--input", input, "--output",
                dir.at("a")});
  REQUIRE(r.code == 0);
  CHECK(r.out == "batches=4 negatives=40 unaugmentable=0\n");

  r = run({"--config", config, "augment", "--model", dir.at("m"), "--input", input, "--output", dir.at("a"),
           "--alpha", "2"});
  CHECK(r.out == "batches=2 negatives=20 unaugmentable=0\n");
}

TEST_CASE("eval") {
  TempDir dir;
  const auto corpus = dir.file("c.txt", "red apple pie\ngreen pear tart\nblue plum jam\nold oak tree\n");
  REQUIRE(run({"fit", "--corpus", corpus, "--output", dir.at("m")}).code == 0);
  const auto pairs = dir.file("p.tsv",
                              "red apple pie\tred apple pie\t1\n"
                              "green pear tart\tblue plum jam\t0\n"
                              "old oak tree\told oak tree\t1\n"
                              "blue plum jam\tred apple pie\t0\n");
  auto r = run({"eval", "--pairs", pairs, "--model", dir.at("m"), "--dim", "64", "--encoder-seed", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("rho=", 0) == 0);
  CHECK(r.out.find(" n=4\n") != std::string::npos);
  CHECK(std::stod(r.out.substr(4)) > 0.0);

  r = run({"eval", "--pairs", dir.file("one.tsv", "a\tb\t1\n"), "--model", dir.at("m")});
  CHECK(r.code == 3);

  r = run({"eval", "--pairs", dir.file("bad.tsv", "a\tb\t1\nc\td\n"), "--model", dir.at("m")});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("loss-demo") {
  TempDir dir;
  const auto corpus = dir.file("c.txt", numbered_lines(200));
  std::string pair_text;
  for (int i = 0; i < 10; ++i) {
    pair_text += "sentence " + std::to_string(i) + " about w" + std::to_string(i) + "\tsentence " +
                 std::to_string(i) + " on w" + std::to_string(i) + "\n";
  }
  const auto pairs = dir.file("p.tsv", pair_text);
  auto r = run({"loss-demo", "--corpus", corpus, "--pairs", pairs, "--seed", "7"});
  REQUIRE(r.code == 0);
  double without = 0, with = 0;
  std::istringstream out(r.out);
  std::string line;
  while (std::getline(out, line)) {
    if (line.rfind("loss_without_una=", 0) == 0) without = std::stod(line.substr(17));
    if (line.rfind("loss_with_una=", 0) == 0) with = std::stod(line.substr(14));
  }
  CHECK(with >= without);
  CHECK(run({"loss-demo", "--corpus", corpus, "--pairs", pairs, "--seed", "7"}).out == r.out);
  CHECK(run({"loss-demo", "--corpus", corpus, "--pairs", pairs, "--seed", "7", "--tau", "0.05"}).out == r.out);
  CHECK(run({"loss-demo", "--corpus", corpus, "--pairs", pairs, "--seed", "7", "--tau", "1"}).out != r.out);

  r = run({"loss-demo", "--corpus", corpus, "--pairs", pairs, "--without-una"});
  CHECK(r.out.find("loss_with_una") == std::string::npos);

  r = run({"loss-demo", "--corpus", corpus, "--pairs", dir.file("one.tsv", "a\tb\n")});
  CHECK(r.code == 3);
  r = run({"loss-demo", "--corpus", dir.at("none.txt"), "--pairs", pairs});
  CHECK(r.code == 1);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
