#include <doctest.h>

#include "csmgen/cli.hpp"
#include "support.hpp"

#include <filesystem>
#include <fstream>

#include <unistd.h>

using namespace testing;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = csm::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string stdlib(const std::string& file) { return std::string(CSMGEN_STDLIB_DIR) + "/" + file; }

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("csmgen_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }

    std::string write(const std::string& name, const std::string& text) const {
        auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
        ++n;
    return n;
}

const char* counter_system = "EXTERNAL inc, dec\nINSTANCE C(2, inc, dec, under, over, c0, c1):COUNTER\n";

}  // namespace

TEST_CASE("check: a clean library prints nothing") {
    auto r = run({"check", stdlib("counter.csml")});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(r.err.empty());
}

TEST_CASE("check: diagnostics go to standard output with positions") {
    auto file = std::string(CSMGEN_FIXTURE_DIR) + "/semantic/dup_formal.csml";
    auto r = run({"check", file});
    CHECK(r.code == 1);
    CHECK(r.out == file + ":2:17: E_DUP_FORMAL: formal identifier x is used more than once\n");
}

TEST_CASE("check: systems and flat listings") {
    TempDir tmp;
    CHECK(run({"check", tmp.write("ok.csms", counter_system)}).code == 0);
    auto bad = run({"check", tmp.write("bad.csms", "INSTANCE C(2, inc, dec, u, o, c0, c1):COUNTER\n")});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("E_INPUT_NOT_GENERATED") != std::string::npos);
    CHECK(run({"check", tmp.write("ok.csmf", "AUTOMATON A.B\n  STATES (S)\n  init S\n")}).code == 0);
    auto flat = run({"check", tmp.write("bad.csmf", "AUTOMATON A.B\n  STATES (S)\n  TRANS S --{ 1 }--> T\n")});
    CHECK(flat.code == 1);
    CHECK(flat.out.find("E_UNKNOWN_STATE") != std::string::npos);
}

TEST_CASE("expand: COUNTER flat listing") {
    auto r = run({"expand", stdlib("counter.csml"), "--module", "COUNTER", "--bind", "N=3", "--format", "flat"});
    CHECK(r.code == 0);
    CHECK(count(r.out, "\n  STATES ") == 5);
    CHECK(count(r.out, "\n  TRANS ") == 11);
    CHECK(r.out.rfind("EXTERNAL dec, inc\nAUTOMATON COUNTER.AUTOMATON\n", 0) == 0);
}

TEST_CASE("expand: instance names, explicit signals, output file and DOT") {
    TempDir tmp;
    auto out = tmp.path("c.dot");
    auto r = run({"expand", "--module", "COUNTER", "--bind", "N=1", "--as", "Q", "--signals", "i, d, u, o, k0",
                  "--format", "dot", "-o", out});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    auto dot = read_file(out);
    CHECK(dot.rfind("digraph \"Q.AUTOMATON\"", 0) == 0);
    CHECK(dot.find("s[0] / k0") != std::string::npos);
    CHECK(run({"dot", "--module", "COUNTER", "--bind", "N=1", "--as", "Q", "--signals", "i,d,u,o,k0"}).out == dot);
}

TEST_CASE("expand: systems and flat re-expansion") {
    TempDir tmp;
    auto sys = tmp.write("c.csms", counter_system);
    auto r = run({"expand", "--system", sys});
    CHECK(r.code == 0);
    CHECK(r.out.find("AUTOMATON C.AUTOMATON") != std::string::npos);
    auto flat = tmp.write("c.csmf", r.out);
    CHECK(run({"expand", flat}).out == r.out);
}

TEST_CASE("expand: diagnostics go to standard error") {
    auto r = run({"expand", "--module", "X"});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("E_HEADER_ONLY") != std::string::npos);

    auto sw = run({"expand", "--module", "SWITCH", "--bind", "N=1"});
    CHECK(sw.code == 1);
    CHECK(sw.err.find("E_EMPTY_SHORTCUT_SET") != std::string::npos);

    auto unbound = run({"expand", "--module", "COUNTER"});
    CHECK(unbound.code == 1);
    CHECK(unbound.err.find("E_UNBOUND_ID") != std::string::npos);
}

TEST_CASE("usage errors exit with 2 and name the flag") {
    auto bind = run({"expand", "--module", "COUNTER", "--bind", "N=x"});
    CHECK(bind.code == 2);
    CHECK(bind.err.find("--bind") != std::string::npos);
    CHECK(run({"expand", "--module", "COUNTER", "--bind", "N=-1"}).code == 2);
    auto format = run({"expand", "--module", "COUNTER", "--bind", "N=1", "--format", "svg"});
    CHECK(format.code == 2);
    CHECK(format.err.find("--format") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"check"}).code == 2);
    CHECK(run({"check", "/nonexistent/file.csml"}).code == 2);
    auto module = run({"expand", "--module", "NOPE", "--bind", "N=1"});
    CHECK(module.code == 2);
    CHECK(module.err.find("--module") != std::string::npos);
    CHECK(run({"expand"}).code == 2);
    CHECK(run({"explore", "--module", "COUNTER", "--bind", "N=1"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("determinism: overlaps exit 1 with witnesses") {
    auto r = run({"determinism", stdlib("set_counter.csml"), "--module", "SET_COUNTER", "--bind", "N=2"});
    CHECK(r.code == 1);
    CHECK(r.out.find("overlap at s[1] between s[1] --{ inc*~dec }--> OVER and s[1] --{ set[1] }--> s[1] "
                     "witness {inc, set[1]}") != std::string::npos);
    auto clean = run({"determinism", "--module", "DETERMINISTIC_COUNTER", "--bind", "N=2"});
    CHECK(clean.code == 0);
    CHECK(clean.out == "DETERMINISTIC_COUNTER.AUTOMATON: deterministic\n");
}

TEST_CASE("simulate: trace files") {
    TempDir tmp;
    auto sys = tmp.write("c.csms", counter_system);
    auto trace = tmp.write("t.trace", "inc\n\ninc, dec\ninc\ninc\n");
    auto r = run({"simulate", "--system", sys, "--trace", trace});
    CHECK(r.code == 0);
    CHECK(r.out == "INIT (s[0])\n"
                   "STEP 1 {inc} (s[1]) {c1}\n"
                   "STEP 2 {} (s[1]) {c1}\n"
                   "STEP 3 {dec, inc} (s[1]) {c1}\n"
                   "STEP 4 {inc} (OVER) {over}\n"
                   "STEP 5 {inc} (OVER) {over}\n");

    auto bad = run({"simulate", "--system", sys, "--trace", tmp.write("b.trace", "inc\nset[0]\n")});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("E_NOT_EXTERNAL") != std::string::npos);
    auto malformed = run({"simulate", "--system", sys, "--trace", tmp.write("m.trace", "inc\n1x\n")});
    CHECK(malformed.code == 1);
    CHECK(malformed.err.find(":2:1: E_PARSE") != std::string::npos);
    CHECK(run({"simulate", "--system", sys}).code == 2);
}

TEST_CASE("explore: report and budget") {
    TempDir tmp;
    auto sys = tmp.write("c.csms", counter_system);
    auto r = run({"explore", "--system", sys, "--depth", "2"});
    CHECK(r.code == 0);
    CHECK(count(r.out, "STATE ") == 4);
    CHECK(r.out.find("EDGE (s[0]) --{inc}--> (s[1])") != std::string::npos);
    auto budget = run({"explore", "--system", sys, "--depth", "5", "--budget", "2"});
    CHECK(budget.code == 1);
    CHECK(budget.err.find("E_BUDGET_EXCEEDED") != std::string::npos);
}

TEST_CASE("output is deterministic across runs") {
    std::vector<std::string> args{"expand", "--module", "DETERMINISTIC_COUNTER", "--bind", "N=3"};
    CHECK(run(args).out == run(args).out);
    args.push_back("--format");
    args.push_back("dot");
    CHECK(run(args).out == run(args).out);
}
