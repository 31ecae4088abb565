// Drives the cubik binary end to end: exit codes, stdout/stderr split, and
// the normalize goldens over the corpus files.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef CUBIK_BIN
#error "CUBIK_BIN must be defined"
#endif
#ifndef CORPUS_DIR
#error "CORPUS_DIR must be defined"
#endif

namespace {

struct RunResult {
  int exitCode = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::string& argsAfterBin, const std::string& stdinData = {}) {
  static int counter = 0;
  std::string errFile = "/tmp/cubik_cli_err_" + std::to_string(++counter);
  std::string cmd = std::string(CUBIK_BIN) + " " + argsAfterBin + " 2>" + errFile;
  if (!stdinData.empty()) {
    std::string inFile = "/tmp/cubik_cli_in_" + std::to_string(counter);
    std::ofstream f(inFile);
    f << stdinData;
    f.close();
    cmd += " <" + inFile;
  }
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int rc = pclose(p);
  r.exitCode = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream ef(errFile);
  std::stringstream ss;
  ss << ef.rdbuf();
  r.err = ss.str();
  return r;
}

std::string corpus(const std::string& name) { return std::string(CORPUS_DIR) + "/" + name; }

}  // namespace

TEST_CASE("check accepts the corpus files") {
  const char* files[] = {"paths.cub", "partyck.cub", "concat.cub", "gsquare.cub",
                         "subtypes.cub", "coe.cub", "coe_ext.cub", "freeze_bot.cub"};
  for (const char* f : files) {
    RunResult r = run("check " + corpus(f));
    INFO(f << "\nstdout: " << r.out << "stderr: " << r.err);
    CHECK(r.exitCode == 0);
    CHECK(r.err.empty());
    CHECK(r.out.find("OK ") == 0);
  }
}

TEST_CASE("check reports typed diagnostics with stable codes") {
  RunResult bad = run("check " + corpus("partyck_bad.cub"));
  CHECK(bad.exitCode == 1);
  CHECK(bad.err.find("error[E-FACE-DISAGREE]") != std::string::npos);
  CHECK(bad.err.find("partyck_bad.cub:") != std::string::npos);
  CHECK(bad.out.find("OK vwall") == 0);  // earlier declaration still reported

  RunResult frz = run("check " + corpus("freeze_bad.cub"));
  CHECK(frz.exitCode == 1);
  CHECK(frz.err.find("error[E-FREEZE-VIOLATION]") != std::string::npos);
}

TEST_CASE("exit codes: parse, io, unknown name, empty file") {
  std::ofstream("/tmp/cubik_parse_err.cub") << "def broken ( : U => U\n";
  CHECK(run("check /tmp/cubik_parse_err.cub").exitCode == 2);
  CHECK(run("check /tmp/this_file_does_not_exist.cub").exitCode == 3);
  CHECK(run("normalize " + corpus("paths.cub") + " --def nonexistent").exitCode == 4);
  std::ofstream("/tmp/cubik_empty.cub") << "";
  RunResult empty = run("check /tmp/cubik_empty.cub");
  CHECK(empty.exitCode == 0);
  CHECK(empty.out.empty());
  CHECK(empty.err.empty());
}

TEST_CASE("normalize goldens are byte-exact") {
  struct Golden {
    const char* file;
    const char* def;
    const char* expected;
  } goldens[] = {
      {"paths.cub", "ap0", "a\n"},
      {"paths.cub", "ap1", "b\n"},
      {"subtypes.cub", "outS_inS_test", "u\n"},
      {"subtypes.cub", "inS_outS_test", "u\n"},
      {"subtypes.cub", "outS_face_test", "v\n"},
      {"coe.cub", "coe_id", "u\n"},
      {"coe.cub", "fill0", "u\n"},
      {"coe.cub", "fill1", "coe BOT (\\^y. P y) u\n"},
      {"coe.cub", "fwd_at_1", "u\n"},
      {"coe.cub", "fwd_gen", "coe r = 1 (\\^x. P (r \\/ x)) u\n"},
      {"concat.cub", "concat_top", "q @ 1\n"},
      {"coe_ext.cub", "coe_ext_at0", "a 1\n"},
  };
  for (const Golden& g : goldens) {
    RunResult r = run("normalize " + corpus(g.file) + " --def " + std::string(g.def));
    INFO(g.file << " --def " << g.def << "\nstderr: " << r.err);
    CHECK(r.exitCode == 0);
    CHECK(r.out == g.expected);
  }
}

TEST_CASE("checking is order-independent for independent declarations") {
  RunResult a = run("check " + corpus("reorder_a.cub"));
  RunResult b = run("check " + corpus("reorder_b.cub"));
  CHECK(a.exitCode == 0);
  CHECK(b.exitCode == 0);
}

TEST_CASE("repl session") {
  std::string input =
      ":infer 0\n"
      ":assume x y : I\n"
      ":conv ~(x /\\ y) == ~x \\/ ~y : I\n"
      ":conv x == ~x : I\n"
      ":assume A : U\n"
      ":assume f : (v : A) -> A\n"
      ":conv \\v. f v == f : (v : A) -> A\n"
      ":norm ~(~x)\n"
      ":check f : (v : A) -> A\n"
      ":bogus\n"
      ":quit\n";
  RunResult r = run("repl", input);
  CHECK(r.exitCode == 0);
  std::string expected =
      "I\n"
      "ok\n"
      "yes\n"
      "no\n"
      "ok\n"
      "ok\n"
      "yes\n"
      "x\n"
      "ok\n"
      "commands: :check E : T | :infer E | :norm E | :conv A == B : T | "
      ":assume x y : T | :load FILE | :quit\n";
  CHECK(r.out == expected);
}

TEST_CASE("repl reports errors and keeps going") {
  std::string input =
      ":infer missing\n"
      ":check 0 : 1\n"
      ":infer 0\n"
      ":quit\n";
  RunResult r = run("repl", input);
  CHECK(r.exitCode == 0);
  CHECK(r.err.find("error[E-UNBOUND-VAR]") != std::string::npos);
  CHECK(r.out == "I\n");
}

TEST_CASE("repl loads files into the session") {
  std::string input = ":load " + corpus("paths.cub") + "\n" +
                      ":assume A0 : U\n"
                      ":assume a0 : A0\n"
                      ":norm ap0 A0 a0 a0 (refl A0 a0)\n"
                      ":quit\n";
  RunResult r = run("repl", input);
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("OK Path\n") != std::string::npos);
  CHECK(r.out.rfind("a0\n") == r.out.size() - 3);
}
