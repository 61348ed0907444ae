#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "framescale/io.hpp"

namespace {

namespace stdfs = std::filesystem;

const std::string kCli = FRAMESCALE_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

stdfs::path work_dir() {
  const auto dir = stdfs::temp_directory_path() / "framescale_cli_tests";
  stdfs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  const auto out_file = work_dir() / "stdout.txt";
  const std::string command = kCli + " " + args + " > " + out_file.string() + " 2>&1";
  const int raw = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(raw);
  std::ifstream in(out_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  result.stdout_text = buf.str();
  return result;
}

std::string read_file(const stdfs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string strip_duration(const std::string& report) {
  return std::regex_replace(report, std::regex("\\s*\"durationSeconds\": [^\\n]*\\n"), "\n");
}

}  // namespace

TEST_CASE("scale produces a convergent report") {
  const auto out = (work_dir() / "onb3.json").string();
  const auto run = run_cli("scale --builtin onb3 --norm frobenius --out " + out);
  CHECK(run.exit_code == 0);

  const auto report = nlohmann::json::parse(read_file(out));
  CHECK(report["norm"] == "frobenius");
  CHECK(report["solution"]["residual"].get<double>() <= 1e-12);
  CHECK(report["solution"]["conditionNumber"].get<double>() == doctest::Approx(1.0));
  for (const auto& c : report["solution"]["scaling"])
    CHECK(c.get<double>() == doctest::Approx(1.0));
}

TEST_CASE("scale under the operator and condition norms") {
  const auto out = (work_dir() / "ex.json").string();
  auto run = run_cli("scale --builtin example-op-nonunique --norm operator --out " + out);
  CHECK(run.exit_code == 0);
  auto report = nlohmann::json::parse(read_file(out));
  CHECK(report["solution"]["residual"].get<double>() ==
        doctest::Approx(0.9428090415820634).epsilon(1e-6));

  run = run_cli("scale --builtin example-op-nonunique --norm condition --out " + out);
  CHECK(run.exit_code == 0);
  report = nlohmann::json::parse(read_file(out));
  CHECK(report["solution"]["conditionNumber"].get<double>() ==
        doctest::Approx(33.970562748477143).epsilon(1e-4));
}

TEST_CASE("infinite condition numbers serialize as inf") {
  const auto frame_path = (work_dir() / "flat.csv").string();
  std::ofstream(frame_path) << "v1,v2\n1,2\n0,0\n";
  const auto out = (work_dir() / "flat.json").string();
  const auto run =
      run_cli("scale --input " + frame_path + " --norm condition --out " + out);
  CHECK(run.exit_code == 0);
  const auto report = nlohmann::json::parse(read_file(out));
  CHECK(report["solution"]["conditionNumber"] == "inf");
}

TEST_CASE("reports are deterministic modulo duration") {
  const auto out = (work_dir() / "det.json").string();
  CHECK(run_cli("scale --builtin mercedes --norm operator --out " + out).exit_code == 0);
  const auto first = read_file(out);
  CHECK(run_cli("scale --builtin mercedes --norm operator --out " + out).exit_code == 0);
  const auto second = read_file(out);
  CHECK(strip_duration(first) == strip_duration(second));
  CHECK(first.find("durationSeconds") != std::string::npos);
}

TEST_CASE("analyze reports every requested check") {
  const auto out = (work_dir() / "analyze.json").string();
  const auto run = run_cli("analyze --builtin frob-singular --out " + out);
  CHECK(run.exit_code == 0);
  const auto report = nlohmann::json::parse(read_file(out));
  const auto& checks = report["checks"];
  CHECK(checks["scalable"]["scalable"] == false);
  CHECK(checks["spark"]["fullSpark"] == true);
  CHECK(checks["independence"]["independent"] == true);
  CHECK(checks["spreadCertificate"]["holds"] == false);
  CHECK(checks["invertibility"]["frobeniusOperatorInvertible"] == false);
  CHECK(checks["balance"]["withinTolerance"] == true);

  const auto sub = run_cli("analyze --builtin onb3 --checks scalable,thm17 --out " + out);
  CHECK(sub.exit_code == 0);
  const auto small = nlohmann::json::parse(read_file(out));
  CHECK(small["checks"]["scalable"]["scalable"] == true);
  CHECK(small["checks"]["spreadCertificate"]["holds"] == true);
  CHECK(!small["checks"].contains("invertibility"));

  CHECK(run_cli("analyze --builtin onb3 --checks nosuch").exit_code == 1);

  // deterministic reports on a seeded random frame
  const auto frame_path = (work_dir() / "seeded.csv").string();
  CHECK(run_cli("generate --kind random --n 3 --m 4 --seed 21 --out " + frame_path).exit_code ==
        0);
  CHECK(run_cli("analyze --input " + frame_path + " --out " + out).exit_code == 0);
  const auto first = read_file(out);
  CHECK(run_cli("analyze --input " + frame_path + " --out " + out).exit_code == 0);
  CHECK(strip_duration(first) == strip_duration(read_file(out)));
}

TEST_CASE("polytope subcommand") {
  const auto out = (work_dir() / "poly.json").string();
  const auto run = run_cli("polytope --builtin e1e2e1 --out " + out);
  CHECK(run.exit_code == 0);
  const auto report = nlohmann::json::parse(read_file(out));
  const auto& poly = report["polytope"];
  REQUIRE(poly["vertices"].size() == 2);
  CHECK(poly["supports"][0] == nlohmann::json::array({0, 1}));
  CHECK(poly["supports"][1] == nlohmann::json::array({1, 2}));

  CHECK(run_cli("polytope --builtin e1e2e1 --cap 2").exit_code == 1);
}

TEST_CASE("generate produces exact fixtures and is seed deterministic") {
  const auto run = run_cli("generate --kind builtin --name onb3");
  CHECK(run.exit_code == 0);
  CHECK(run.stdout_text == "v1,v2,v3\n1,0,0\n0,1,0\n0,0,1\n");

  const auto f1 = (work_dir() / "r1.csv").string();
  const auto f2 = (work_dir() / "r2.csv").string();
  CHECK(run_cli("generate --kind random --n 3 --m 5 --seed 11 --out " + f1).exit_code == 0);
  CHECK(run_cli("generate --kind random --n 3 --m 5 --seed 11 --out " + f2).exit_code == 0);
  CHECK(read_file(f1) == read_file(f2));

  // FRAMESCALE_SEED is the fallback when --seed is not given
  const auto f3 = (work_dir() / "r3.csv").string();
  setenv("FRAMESCALE_SEED", "11", 1);
  CHECK(run_cli("generate --kind random --n 3 --m 5 --out " + f3).exit_code == 0);
  unsetenv("FRAMESCALE_SEED");
  CHECK(read_file(f3) == read_file(f1));

  CHECK(run_cli("generate --kind nosuch").exit_code == 1);
}

TEST_CASE("generated witnesses close the pipeline") {
  const auto witness = (work_dir() / "witness.csv").string();
  CHECK(run_cli("generate --kind tightness-witness --n 2 --m 2 --epsilon 0.05 --seed 3 --out " +
                witness)
            .exit_code == 0);
  const auto out = (work_dir() / "witness.json").string();
  const auto run = run_cli("scale --input " + witness + " --norm operator --out " + out);
  CHECK(run.exit_code == 0);
  const auto report = nlohmann::json::parse(read_file(out));
  const double residual = report["solution"]["residual"].get<double>();
  CHECK(residual >= 0.95);
  CHECK(residual < 1.0);

  // extension round trip through files
  const auto extended = (work_dir() / "extended.csv").string();
  CHECK(run_cli("generate --kind extend --builtin frob-singular --extra 2 --seed 4 --out " +
                extended)
            .exit_code == 0);
  const auto parsed = framescale::parse_frame(read_file(extended), framescale::FrameFormat::kCsv);
  CHECK(parsed.count() == 6);
}

TEST_CASE("input errors exit with code 1") {
  CHECK(run_cli("scale --builtin nosuch").exit_code == 1);
  CHECK(run_cli("scale --input /nonexistent.csv").exit_code == 1);
  CHECK(run_cli("scale").exit_code == 1);
  CHECK(run_cli("scale --builtin onb3 --input also.csv").exit_code == 1);

  const auto bad = (work_dir() / "bad.csv").string();
  std::ofstream(bad) << "v1,v2\n1,0\n0,0\n";
  const auto run = run_cli("scale --input " + bad);
  CHECK(run.exit_code == 1);
  CHECK(run.stdout_text.find("column v2") != std::string::npos);
}

TEST_CASE("iteration caps exit with code 2") {
  const auto frame_path = (work_dir() / "cap.csv").string();
  CHECK(run_cli("generate --kind random --n 3 --m 5 --seed 77 --out " + frame_path).exit_code ==
        0);
  const auto run =
      run_cli("scale --input " + frame_path + " --norm operator --max-iterations 2");
  CHECK(run.exit_code == 2);
}
