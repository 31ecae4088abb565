// cubik: check .cub files, normalize definitions, or run an interactive
// session.
//
//   cubik check FILE
//   cubik normalize FILE --def NAME
//   cubik repl
//
// Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
// 1 type error, 2 parse error, 3 I/O error, 4 unknown definition.
// Set CUBIK_TRACE=1 for a free-form reduction trace on stderr.

#include <fstream>
#include <iostream>
#include <sstream>

#include "cubik/driver.hpp"
#include "cubik/eval.hpp"
#include "cubik/parse.hpp"
#include "cubik/pretty.hpp"
#include "cubik/tyck.hpp"

namespace {

using namespace cubik;

constexpr const char* kUsage =
    "usage:\n"
    "  cubik check FILE\n"
    "  cubik normalize FILE --def NAME\n"
    "  cubik repl\n";

bool readFile(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

void printDiag(const Diagnostic& d) {
  std::cerr << d.file << ":" << d.line << ":" << d.col << ": error[" << d.code
            << "]: " << d.message << "\n";
  if (!d.witness.empty()) std::cerr << "  counterexample substitution: " << d.witness << "\n";
}

// Returns 0/1/2/3; on success fills the outputs.
int loadAndCheck(const std::string& path, Context& ctx, SourceFile& sf, bool printOk) {
  std::string text;
  if (!readFile(path, text)) {
    std::cerr << path << ": cannot read file\n";
    return 3;
  }
  try {
    sf = parseFile(std::move(text), path);
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.line << ":" << e.col << ": error[E-PARSE]: " << e.message
              << "\n";
    return 2;
  }
  CheckOutcome outcome = checkSource(ctx, sf);
  for (const CheckEvent& ev : outcome.events) {
    if (ev.ok) {
      if (printOk) std::cout << "OK " << ev.name << "\n";
    } else {
      printDiag(ev.diag);
    }
  }
  return outcome.allOk ? 0 : 1;
}

int cmdCheck(const std::string& path) {
  Context ctx;
  SourceFile sf;
  return loadAndCheck(path, ctx, sf, true);
}

int cmdNormalize(const std::string& path, const std::string& name) {
  Context ctx;
  SourceFile sf;
  int rc = loadAndCheck(path, ctx, sf, false);
  if (rc != 0) return rc;
  const Decl* d = findDecl(sf, name);
  if (!d) {
    std::cerr << path << ": error[E-UNKNOWN-NAME]: no definition named '" << name << "'\n";
    return 4;
  }
  Context local = declContext(ctx, *d);
  TermPtr nf = rnf(local, d->body, d->resultType);
  std::cout << pretty(nf) << "\n";
  return 0;
}

constexpr const char* kReplUsage =
    "commands: :check E : T | :infer E | :norm E | :conv A == B : T | "
    ":assume x y : T | :load FILE | :quit";

int cmdRepl() {
  Context ctx;
  std::string line;
  while (std::getline(std::cin, line)) {
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    size_t last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line.empty()) continue;

    auto rest = [&](size_t n) { return line.substr(n); };
    try {
      if (line == ":quit" || line == ":q") return 0;
      if (line.rfind(":check ", 0) == 0) {
        auto [t, tyTerm] = parseExprColonExpr(rest(7));
        TermPtr ty = checkType(ctx, tyTerm);
        check(ctx, t, ty);
        std::cout << "ok\n";
      } else if (line.rfind(":infer ", 0) == 0) {
        TermPtr t = parseExpr(rest(7));
        TermPtr ty = infer(ctx, t);
        std::cout << pretty(rnf(ctx, ty, univ())) << "\n";
      } else if (line.rfind(":norm ", 0) == 0) {
        TermPtr t = parseExpr(rest(6));
        TermPtr ty = infer(ctx, t);
        std::cout << pretty(rnf(ctx, t, ty)) << "\n";
      } else if (line.rfind(":conv ", 0) == 0) {
        auto [a, b, tyTerm] = parseConvQuery(rest(6));
        TermPtr ty = checkType(ctx, tyTerm);
        check(ctx, a, ty);
        check(ctx, b, ty);
        std::cout << (convert(ctx, a, b, ty) ? "yes" : "no") << "\n";
      } else if (line.rfind(":assume ", 0) == 0) {
        auto [names, tyTerm] = parseAssume(rest(8));
        TermPtr ty = checkType(ctx, tyTerm);
        bool iv = as<tm::ITy>(ty) != nullptr;
        for (const Name& n : names) ctx.push(n, tyTerm, iv);
        std::cout << "ok\n";
      } else if (line.rfind(":load ", 0) == 0) {
        SourceFile sf;
        loadAndCheck(rest(6), ctx, sf, true);
      } else {
        std::cout << kReplUsage << "\n";
      }
    } catch (const ParseError& e) {
      std::cerr << "error[E-PARSE]: " << e.message << " (at " << e.line << ":" << e.col
                << ")\n";
    } catch (const TypeError& e) {
      std::cerr << "error[" << errCodeString(e.code) << "]: " << e.message << "\n";
      if (!e.witness.empty())
        std::cerr << "  counterexample substitution: " << e.witness << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << kUsage;
    return 1;
  }
  const std::string& cmd = args[0];
  if (cmd == "check" && args.size() == 2) return cmdCheck(args[1]);
  if (cmd == "normalize" && args.size() == 4 && args[2] == "--def")
    return cmdNormalize(args[1], args[3]);
  if (cmd == "repl" && args.size() == 1) return cmdRepl();
  std::cerr << kUsage;
  return 1;
}
