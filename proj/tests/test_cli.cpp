#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "mlrules/model.hpp"
#include "testkit.hpp"

namespace fs = std::filesystem;
using mlrules::cli::run_cli;

namespace {

const std::string kF1 = MLRULES_TEST_DATA "/f1.arff";

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("mlrules-cli-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::size_t entries() const { return static_cast<std::size_t>(std::distance(fs::directory_iterator(path_), {})); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

}  // namespace

TEST_CASE("train writes a model and a summary") {
  TempDir tmp;
  const auto r = run({"train", "--data", kF1, "--labels", "last:4", "--metric", "precision", "--strategy", "auto",
                      "--no-negative-heads", "--model", tmp.file("m.txt")});
  REQUIRE(r.status == 0);
  CHECK(tmp.entries() == 1);
  const std::string model_text = slurp(tmp.file("m.txt"));
  CHECK(model_text.rfind("mlrules-model 1 metric=precision n=4 labels=l1,l2,l3,l4\n", 0) == 0);
  CHECK(r.out.find("rule 1: l3 ← cov=no  (3,0) h=1\n") != std::string::npos);
  CHECK(r.out.find("micro_precision 1.0000\n") != std::string::npos);

  const auto model = mlrules::parse_model(model_text, testkit::f1_dataset().attributes());
  REQUIRE_FALSE(model.rules.empty());
  CHECK(model.rules[0].train_h == mlrules::Rational(1));
}

TEST_CASE("summary can go to a file") {
  TempDir tmp;
  const auto r = run({"train", "--data", kF1, "--labels", "last:4", "--model", tmp.file("m.txt"), "--summary",
                      tmp.file("s.txt")});
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  CHECK(slurp(tmp.file("s.txt")).rfind("rules ", 0) == 0);
}

TEST_CASE("predict and evaluate read the model back") {
  TempDir tmp;
  REQUIRE(run({"train", "--data", kF1, "--labels", "last:4", "--metric", "precision", "--model", tmp.file("m.txt")})
              .status == 0);
  const auto p = run({"predict", "--data", kF1, "--labels", "last:4", "--model", tmp.file("m.txt")});
  REQUIRE(p.status == 0);
  std::istringstream rows(p.out);
  std::size_t count = 0;
  for (std::string line; std::getline(rows, line); ++count) {
    CHECK(line.size() == 7);
    for (std::size_t k = 0; k < line.size(); ++k) CHECK((k % 2 ? line[k] == ',' : (line[k] == '0' || line[k] == '1')));
  }
  CHECK(count == 6);

  const auto e = run({"evaluate", "--data", kF1, "--labels", "last:4", "--model", tmp.file("m.txt"), "--report",
                      tmp.file("r.txt")});
  REQUIRE(e.status == 0);
  const std::string report = slurp(tmp.file("r.txt"));
  CHECK(report.rfind("micro_precision ", 0) == 0);
  CHECK(report.find("label l4 ") != std::string::npos);

  const auto p2 = run({"predict", "--data", kF1, "--labels", "last:4", "--model", tmp.file("m.txt"), "--output",
                       tmp.file("p.txt")});
  CHECK(slurp(tmp.file("p.txt")) == p.out);
}

TEST_CASE("exit statuses") {
  TempDir tmp;
  CHECK(run({}).status == mlrules::cli::kBadArguments);
  CHECK(run({"fly"}).status == mlrules::cli::kBadArguments);
  CHECK(run({"train", "--data", kF1}).status == mlrules::cli::kBadArguments);
  CHECK(run({"train", "--data", kF1, "--labels", "last:4", "--metric", "accuracy", "--model", tmp.file("m")}).status ==
        mlrules::cli::kBadArguments);
  CHECK(run({"train", "--data", kF1, "--labels", "sideways", "--model", tmp.file("m")}).status ==
        mlrules::cli::kBadArguments);
  CHECK(run({"train", "--data", kF1, "--labels", "last:4", "--beta", "x", "--model", tmp.file("m")}).status ==
        mlrules::cli::kBadArguments);
  CHECK(run({"train", "--data", kF1, "--labels", "last:4", "--tau", "2", "--model", tmp.file("m")}).status ==
        mlrules::cli::kBadArguments);
  CHECK(run({"train", "--data", kF1, "--labels", "last:9", "--model", tmp.file("m")}).status ==
        mlrules::cli::kParseFailure);
  CHECK(run({"train", "--data", kF1, "--labels", "last:4", "--metric", "subset-accuracy", "--strategy",
             "decomposable", "--model", tmp.file("m")})
            .status == mlrules::cli::kIncompatible);
  CHECK(tmp.entries() == 0);
  CHECK(run({"--help"}).status == 0);
}

TEST_CASE("evaluating on a missing file writes no report") {
  TempDir tmp;
  REQUIRE(run({"train", "--data", kF1, "--labels", "last:4", "--model", tmp.file("m.txt")}).status == 0);
  const auto r = run({"evaluate", "--model", tmp.file("m.txt"), "--data", tmp.file("missing.arff"), "--labels",
                      "last:4", "--report", tmp.file("r.txt")});
  CHECK(r.status == mlrules::cli::kParseFailure);
  CHECK_FALSE(fs::exists(tmp.file("r.txt")));
  CHECK(r.err.find("missing.arff") != std::string::npos);
}

TEST_CASE("bad model files") {
  TempDir tmp;
  spit(tmp.file("bad.txt"), "mlrules-model 7 metric=precision n=4 labels=l1,l2,l3,l4\n");
  CHECK(run({"predict", "--data", kF1, "--labels", "last:4", "--model", tmp.file("bad.txt")}).status ==
        mlrules::cli::kParseFailure);
  spit(tmp.file("other.txt"), "mlrules-model 1 metric=precision n=2 labels=a,b\n");
  CHECK(run({"evaluate", "--data", kF1, "--labels", "last:4", "--model", tmp.file("other.txt")}).status ==
        mlrules::cli::kParseFailure);
  CHECK(run({"evaluate", "--data", kF1, "--labels", "last:4", "--model", tmp.file("none.txt")}).status ==
        mlrules::cli::kParseFailure);
}

TEST_CASE("benchmark on the covered fixture group") {
  const auto r = run({"benchmark", "--data", kF1, "--labels", "last:4", "--metric", "precision", "--strategies",
                      "exhaustive,pruned,decomposable", "--body", "cov=yes", "--no-negative-heads", "--no-timing"});
  REQUIRE(r.status == 0);
  CHECK(r.out ==
        "# metric=precision negatives=off bodies=1 examples=6 labels=4\n"
        "strategy      evaluated   pruned    best_h\n"
        "exhaustive    15          0         2/3\n"
        "pruned        10          7         2/3\n"
        "decomposable  4           0         2/3\n");
}

TEST_CASE("benchmark over the first refinement bodies") {
  const auto r = run({"benchmark", "--data", kF1, "--labels", "last:4", "--metric", "subset-accuracy",
                      "--strategies", "exhaustive,pruned", "--single-label-heads", "--no-timing"});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("bodies=3") != std::string::npos);
  CHECK(r.out.find("single-label") != std::string::npos);
  CHECK(r.out == run({"benchmark", "--data", kF1, "--labels", "last:4", "--metric", "subset-accuracy",
                      "--strategies", "exhaustive,pruned", "--single-label-heads", "--no-timing"})
                     .out);
  CHECK(run({"benchmark", "--data", kF1, "--labels", "last:4", "--metric", "subset-accuracy"}).status ==
        mlrules::cli::kIncompatible);
  CHECK(run({"benchmark", "--metric", "precision"}).status == mlrules::cli::kBadArguments);
  CHECK(run({"benchmark", "--data", kF1, "--labels", "last:4", "--strategies", "beam"}).status ==
        mlrules::cli::kBadArguments);
}

TEST_CASE("synthetic benchmark is reproducible from its seed") {
  const std::vector<std::string> args{"benchmark", "--synthetic", "15", "6", "--bodies", "10", "--seed", "5",
                                      "--metric", "hamming", "--no-timing"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("bodies=10 examples=15 labels=6") != std::string::npos);
  auto other = args;
  other[7] = "6";
  CHECK(run(other).out != a.out);
}

TEST_CASE("whole runs are byte-identical") {
  TempDir tmp;
  for (const char* name : {"a.txt", "b.txt"})
    REQUIRE(run({"train", "--data", kF1, "--labels", "last:4", "--model", tmp.file(name), "--summary",
                 tmp.file(std::string("s") + name)})
                .status == 0);
  CHECK(slurp(tmp.file("a.txt")) == slurp(tmp.file("b.txt")));
  CHECK(slurp(tmp.file("sa.txt")) == slurp(tmp.file("sb.txt")));
}
