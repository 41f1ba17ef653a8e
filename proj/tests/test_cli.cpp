#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "recode/bug_type.hpp"
#include "recode/report.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args, const testing::TempDir& dir) {
  const auto log = dir / "stdout.txt";
  const std::string cmd = "'" + std::string(RECODE_CLI) + "' " + args + " > '" + log.string() + "' 2> '" + (dir / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help lists the shared flags") {
    testing::TempDir d("cli-help");
    const auto r = cli("--help", d);
    CHECK(r.code == 0);
    for (const char* flag : {"--config", "--lexicons", "--jobs", "--seed", "--out", "--corpus", "--model", "--classifier",
                             "--plugin-cmd", "detect", "train", "classify", "augment", "gen-corpus", "evaluate"}) {
      CHECK_MESSAGE(r.out.find(flag) != std::string::npos, flag);
    }
  }

  TEST_CASE("missing corpus is an error") {
    testing::TempDir d("cli-missing");
    CHECK(cli("detect --corpus " + q(d / "nope") + " --out " + q(d / "r.csv"), d).code == 1);
    CHECK(cli("frobnicate", d).code != 0);
  }

  TEST_CASE("gen-corpus, detect and evaluate") {
    testing::TempDir d("cli-flow");
    const auto corpus = d / "corpus";
    REQUIRE(cli("gen-corpus --n 100 --seed 3 --out " + q(corpus), d).code == 0);
    CHECK(recode::list_bundles(corpus).size() == 100);
    CHECK(cli("validate --corpus " + q(corpus), d).code == 0);

    const auto r = cli("detect --corpus " + q(corpus) + " --out " + q(d / "results.csv") + " --jobs 2", d);
    CHECK(r.code == 0);
    CHECK(lines(slurp(d / "results.csv")) == 101);
    CHECK(fs::exists(d / "results.trace.json"));

    const auto e = cli("evaluate --corpus " + q(corpus) + " --jobs 2", d);
    REQUIRE(e.code == 0);
    const auto j = nlohmann::json::parse(e.out);
    CHECK(j.contains("accuracy"));
    CHECK(j["accuracy"].get<double>() >= 0.9);
  }

  TEST_CASE("a bad screenshot gives an error row and exit 2") {
    testing::TempDir d("cli-bad");
    const auto corpus = d / "corpus";
    REQUIRE(cli("gen-corpus --n 3 --out " + q(corpus), d).code == 0);
    std::ofstream(corpus / "r00001" / recode::kScreenshotFile, std::ios::binary) << "garbage";
    CHECK(cli("detect --corpus " + q(corpus) + " --out " + q(d / "r.csv"), d).code == 2);
    const auto csv = slurp(d / "r.csv");
    CHECK(lines(csv) == 4);
    CHECK(csv.find("\nr00001,,,,,,,,,,,error\n") != std::string::npos);
    CHECK(cli("validate --corpus " + q(corpus), d).code == 2);
  }

  TEST_CASE("seeded generation is reproducible") {
    testing::TempDir d("cli-seed");
    REQUIRE(cli("gen-corpus --n 5 --seed 9 --tier noisy --out " + q(d / "a"), d).code == 0);
    REQUIRE(cli("gen-corpus --n 5 --seed 9 --tier noisy --out " + q(d / "b"), d).code == 0);
    for (const auto& b : recode::list_bundles(d / "a")) {
      const auto name = b.filename();
      CHECK(slurp(b / recode::kDescriptionFile) == slurp(d / "b" / name / recode::kDescriptionFile));
      CHECK(slurp(b / recode::kScreenshotFile) == slurp(d / "b" / name / recode::kScreenshotFile));
    }
  }

  TEST_CASE("classify and augment") {
    testing::TempDir d("cli-text");
    const auto c = cli("classify --text 'the app crashes and closes'", d);
    CHECK(c.code == 0);
    CHECK(c.out.find("crash") != std::string::npos);

    std::ofstream(d / "in.jsonl") << "{\"text\":\"the app crashed on start\",\"bug_type\":\"crash\"}\n"
                                  << "{\"text\":\"the list is empty\",\"bug_type\":\"functional-defect\"}\n";
    nlohmann::json plan{{"seed", 1}, {"targets", nlohmann::json::object()}};
    plan["targets"]["crash"] = 3;
    std::ofstream(d / "plan.json") << plan.dump();
    const auto a = cli("augment --in " + q(d / "in.jsonl") + " --plan " + q(d / "plan.json") + " --out " + q(d / "out.jsonl"), d);
    CHECK(a.code == 0);
    CHECK(lines(slurp(d / "out.jsonl")) >= 3);
  }

  TEST_CASE("train writes a loadable model") {
    testing::TempDir d("cli-train");
    REQUIRE(cli("train --out " + q(d / "model.json"), d).code == 0);
    const auto j = nlohmann::json::parse(slurp(d / "model.json"));
    CHECK(j["format"] == "recode-baseline");
    CHECK(cli("classify --model " + q(d / "model.json") + " --text 'white screen'", d).code == 0);
  }
}
