#include "frameforge/cli.hpp"

#include "frameforge/constructors.hpp"
#include "frameforge/model.hpp"
#include "frameforge/report.hpp"

#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace frameforge;

namespace {

struct CliRun {
  int exit_code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.exit_code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// temp files keyed by test to stay parallel-safe under ctest
std::string write_temp(const std::string& key, const std::string& text) {
  const std::string path = "cli_test_" + key + ".frame";
  std::ofstream f(path);
  f << text;
  return path;
}

const char* kMercedes = "frame n=2 m=3\n1 0\n0 1\n1 1\n";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("analyze produces all verdicts and round-trips as a report") {
  const std::string path = write_temp("analyze", kMercedes);
  const CliRun text = run({"analyze", path});
  CHECK(text.exit_code == 0);
  CHECK(text.out.find("pr: HOLDS") != std::string::npos);
  CHECK(text.out.find("spark: 3") != std::string::npos);
  CHECK(text.out.find("lifting-number: 0") != std::string::npos);

  const CliRun canon = run({"analyze", path, "--format", "report"});
  CHECK(canon.exit_code == 0);
  const Report rep = parse_report(canon.out);
  const std::string* pr = Report::find(rep.verdicts, "pr");
  REQUIRE(pr != nullptr);
  CHECK(*pr == "HOLDS");
  CHECK(Report::find(rep.config, "seed") != nullptr);
  std::remove(path.c_str());
}

TEST_CASE("identical invocations are byte-identical") {
  const std::string path = write_temp("determinism", kMercedes);
  for (const std::string fmt : {"text", "report"}) {
    const CliRun a = run({"analyze", path, "--format", fmt, "--seed", "9"});
    const CliRun b = run({"analyze", path, "--format", fmt, "--seed", "9"});
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
  }
  std::remove(path.c_str());
}

TEST_CASE("failing verdicts still exit zero and carry witnesses") {
  const std::string path = write_temp("fails", "frame n=2 m=2\n1 0\n0 1\n");
  const CliRun r = run({"analyze", path});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("pr: FAILS") != std::string::npos);
  CHECK(r.out.find("pr-witness: I=1 rank-I=1 rank-Ic=1") != std::string::npos);
  CHECK(r.out.find("pr-certificate:") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("stdin is spelled dash") {
  // analyze reads the frame from stdin when the path is "-"
  std::istringstream fake_in{std::string(kMercedes)};
  auto* old = std::cin.rdbuf(fake_in.rdbuf());
  const CliRun r = run({"analyze", "-"});
  std::cin.rdbuf(old);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("cp: HOLDS") != std::string::npos);
}

TEST_CASE("usage problems exit 1") {
  CHECK(run({}).exit_code == 1);
  CHECK(run({"analyze"}).exit_code == 1);                    // missing file arg
  CHECK(run({"frobnicate", "x"}).exit_code == 1);            // unknown command
  CHECK(run({"analyze", "no_such_file.frame"}).exit_code == 1);
  CHECK(run({"construct", "an"}).exit_code == 1);            // missing --n
  CHECK(run({"construct", "wat", "--n", "3"}).exit_code == 1);
  const std::string path = write_temp("usage", kMercedes);
  CHECK(run({"analyze", path, "--format", "yaml"}).exit_code == 1);
  CHECK(run({"analyze", path, "--tol-rank", "2.0"}).exit_code == 1);
  CHECK(run({"certify", path, "1,banana", "1,0"}).exit_code == 1);
  CHECK(run({"delete-test", path}).exit_code == 1);          // missing --index
  std::remove(path.c_str());
}

TEST_CASE("module errors exit 2") {
  CHECK(run({"construct", "an", "--n", "2"}).exit_code == 2);  // degenerate curve
  const std::string path = write_temp("module", kMercedes);
  CHECK(run({"lift", path, "--k", "1"}).exit_code == 2);       // lifting number 0
  CHECK(run({"analyze", path, "--budget", "1"}).exit_code == 2);
  CHECK(run({"verify-seq", "seq kind=wat params=", "--levels", "default",
             "--claim", "none"})
            .exit_code == 2);
  std::remove(path.c_str());
  const CliRun err = run({"construct", "an", "--n", "2"});
  CHECK(err.out.empty());
  CHECK(err.err.find("error") != std::string::npos);
}

TEST_CASE("help exits zero") {
  const CliRun top = run({"--help"});
  CHECK(top.exit_code == 0);
  CHECK(top.out.find("analyze") != std::string::npos);
  CHECK(run({"analyze", "--help"}).exit_code == 0);
}

TEST_CASE("construct emits parseable frames and headers") {
  const CliRun fs = run({"construct", "full-spark", "--n", "3", "--m", "7"});
  CHECK(fs.exit_code == 0);
  const Frame f = parse_frame(fs.out);
  CHECK(f.dim == 3);
  CHECK(f.count() == 7);

  const CliRun an = run({"construct", "an", "--n", "4"});
  CHECK(an.exit_code == 0);
  CHECK(parse_frame(an.out).count() == 7);

  const CliRun pairs = run({"construct", "pairs", "--n", "5"});
  CHECK(parse_frame(pairs.out).count() == 10);

  const CliRun trap = run({"construct", "trap", "--levels", "3", "--part", "y",
                           "--seed", "5"});
  CHECK(trap.exit_code == 0);
  CHECK(trap.out == "seq kind=trap-y params=levels=3 seed=5\n");

  const CliRun riesz = run({"construct", "three-riesz", "--j", "2", "--levels",
                            "1", "--seed", "7"});
  CHECK(riesz.exit_code == 0);
  CHECK(riesz.out.rfind("seq kind=three-riesz params=j=2 levels=1 seed=", 0) == 0);

  const CliRun ffs = run({"construct", "ffs", "--m", "5", "--k-max", "2"});
  CHECK(ffs.exit_code == 0);
  CHECK(parse_frame(ffs.out).count() == 5);
}

TEST_CASE("seed comes from the environment unless given") {
  const std::string path = write_temp("seed", kMercedes);
  setenv("FRAMEFORGE_SEED", "12345", 1);
  const CliRun env = run({"analyze", path, "--format", "report"});
  CHECK(env.exit_code == 0);
  const Report rep = parse_report(env.out);
  const std::string* seed = Report::find(rep.config, "seed");
  REQUIRE(seed != nullptr);
  CHECK(*seed == "12345");

  const CliRun flag = run({"analyze", path, "--format", "report", "--seed", "6"});
  const std::string* s2 = Report::find(parse_report(flag.out).config, "seed");
  REQUIRE(s2 != nullptr);
  CHECK(*s2 == "6");

  setenv("FRAMEFORGE_SEED", "junk", 1);
  CHECK(run({"analyze", path}).exit_code == 1);
  unsetenv("FRAMEFORGE_SEED");
  std::remove(path.c_str());
}

TEST_CASE("output lands in the file given by --out") {
  const std::string path = write_temp("outfile", kMercedes);
  const std::string out_path = "cli_test_outfile.report";
  const CliRun r = run({"analyze", path, "--out", out_path, "--format", "report"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out_path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK_NOTHROW(parse_report(buf.str()));
  std::remove(path.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("verify-seq renders levels and divergences") {
  const CliRun r = run({"verify-seq", "seq kind=pairs params=", "--levels",
                        "4:6,5:10", "--claim", "pr-holds"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("levels-run: 2") != std::string::npos);
  CHECK(r.out.find("divergences: 2") != std::string::npos);
  CHECK(r.out.find("level 4: K=6 cp=FAILS pr=FAILS nr=FAILS") != std::string::npos);
  CHECK(r.out.find("level 4 note:") != std::string::npos);

  const CliRun defaults = run({"verify-seq", "seq kind=pairs params=",
                               "--levels", "default", "--max-level", "6",
                               "--claim", "pr-fails"});
  CHECK(defaults.exit_code == 0);
  CHECK(defaults.out.find("divergences: 0") != std::string::npos);
  CHECK(defaults.out.find("level 6: K=15") != std::string::npos);

  // a claim outside the accepted set is a flag mistake, not a module error
  CHECK(run({"verify-seq", "seq kind=pairs params=", "--levels", "4:6",
             "--claim", "sideways"})
            .exit_code == 1);
}

TEST_CASE("certify and delete-test verdict surface") {
  const std::string path = write_temp("certify", "frame n=2 m=2\n1 0\n0 1\n");
  const CliRun accept = run({"certify", path, "1,1", "1,-1"});
  CHECK(accept.exit_code == 0);
  CHECK(accept.out.find("certify: ACCEPT") != std::string::npos);
  const CliRun reject = run({"certify", path, "1,0", "0,1"});
  CHECK(reject.exit_code == 0);
  CHECK(reject.out.find("certify: REJECT") != std::string::npos);
  std::remove(path.c_str());

  const std::string pairs_path =
      write_temp("delete", serialize_frame(pairs_family(4)));
  const CliRun del = run({"delete-test", pairs_path, "--index", "1"});
  CHECK(del.exit_code == 0);
  CHECK(del.out.find("pr: FAILS") != std::string::npos);
  CHECK(del.out.find("analytic-accepted: ACCEPT") != std::string::npos);
  std::remove(pairs_path.c_str());
}

TEST_CASE("lift emits the lifted frame with its convention header") {
  const Tolerance tol;
  const std::string path =
      write_temp("lift", serialize_frame(full_spark_frame(2, 5, 21, tol)));
  const CliRun r = run({"lift", path, "--k", "1"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("# lift k=1", 0) == 0);
  CHECK(r.out.find("convention=append-last") != std::string::npos);
  const std::string body = r.out.substr(r.out.find('\n') + 1);
  CHECK(parse_frame(body).dim == 3);
  std::remove(path.c_str());
}

TEST_CASE("timings are opt-in and stay out of the canonical bytes") {
  const std::string path = write_temp("timings", kMercedes);
  const CliRun with = run({"analyze", path, "--timings"});
  CHECK(with.out.find("TIMINGS") != std::string::npos);
  const CliRun without = run({"analyze", path});
  CHECK(without.out.find("TIMINGS") == std::string::npos);
  const CliRun canon =
      run({"analyze", path, "--timings", "--format", "report"});
  CHECK(canon.out.find("TIMINGS") == std::string::npos);
  std::remove(path.c_str());
}

TEST_SUITE_END();
