#include "support.hpp"

#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>

using namespace testsupport;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    std::string cmd = std::string(CYCLIC_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string tmp(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "cyclic_cli_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_CASE("cli: check") {
    CHECK(cli("check " + corpus("S.proof") + " --system cb").code == 0);
    Run e = cli("check " + corpus("E.proof") + " --system cb");
    CHECK(e.code == 1);
    CHECK(e.out.find("left-leaning") != std::string::npos);
    CHECK(e.out.find("witness=") != std::string::npos);
    CHECK(cli("check " + corpus("E.proof") + " --system cnb").code == 0);
    CHECK(cli("check " + corpus("I.proof") + " --system bminus").code == 0);
    CHECK(cli("check " + corpus("I.proof") + " --system cnb").code == 1);
    std::string json = tmp("E.json");
    CHECK(cli("check " + corpus("E.proof") + " --system cnb --json " + json).code == 0);
    CHECK(cyclic::read_file(json).find("\"class\"") != std::string::npos);
}

TEST_CASE("cli: eval") {
    CHECK(cli("eval " + corpus("S.proof") + " --normals 7").out == "8\n");
    Run i = cli("eval " + corpus("I.proof") + " --normals 1 --fuel 1000");
    CHECK(i.out == "fuel-exhausted\n");
    CHECK(i.code == 1);
    CHECK(cli("eval " + corpus("C.proof") + " --normals 2,3 --safes 1").out == "30\n");
    CHECK(cli("eval " + corpus("NB.term") + " --term ex --normals 1 --safes 3").out == "12\n");
    CHECK(cli("eval " + corpus("S.proof") + " --normals 1,2").code == 2);
    CHECK(cli("eval " + corpus("S.proof") + " --normals x").code == 2);
}

TEST_CASE("cli: compile then check and translate then eval-pp") {
    std::string ex = tmp("ex.proof");
    CHECK(cli("compile " + corpus("NB.term") + " --term ex --target circular -o " + ex).code == 0);
    CHECK(cli("check " + ex + " --system cnb").code == 0);
    CHECK(cli("eval " + ex + " --normals 2 --safes 1").out == "16\n");
    std::string cat = tmp("cat.proof");
    CHECK(cli("compile " + corpus("B.term") + " --term cat --target derivation -o " + cat).code == 0);
    CHECK(cli("eval " + cat + " --normals 5 --safes 1").out == "13\n");
    std::string s = tmp("S.pp");
    CHECK(cli("translate " + corpus("S.proof") + " -o " + s).code == 0);
    CHECK(cli("eval-pp " + s + " --normals 9").out == "10\n");
    CHECK(cli("eval-pp " + s + " --normals 9 --guard-mode strict").out == "10\n");
    CHECK(cli("translate " + corpus("I.proof")).code == 1);
}

TEST_CASE("cli: cyclenf, dot and bounds") {
    std::string dot = tmp("C.dot");
    CHECK(cli("cyclenf " + corpus("C.proof") + " --dot " + dot).code == 0);
    std::string text = cyclic::read_file(dot);
    std::size_t count = 0;
    for (std::size_t p = text.find(": dis("); p != std::string::npos; p = text.find(": dis(", p + 1)) ++count;
    CHECK(count == 2);
    CHECK(cli("export-dot " + corpus("S.proof")).out.find("digraph") == 0);
    Run b = cli("bound " + corpus("NB.term") + " --term ex");
    CHECK(b.code == 0);
    CHECK(b.out.find("polynomial = false") != std::string::npos);
    Run v1 = cli("verify-bound " + corpus("B.term") + " --term rep --samples 50 --seed 4");
    Run v2 = cli("verify-bound " + corpus("B.term") + " --term rep --samples 50 --seed 4");
    CHECK(v1.code == 0);
    CHECK(v1.out == v2.out);
}

TEST_CASE("cli: exit codes are total") {
    std::string junk = tmp("junk.proof");
    cyclic::write_file(junk, "proof X root 1\nnode 1 : s0 seq => N premises [9]\n");
    CHECK(cli("check " + junk).code == 2);
    cyclic::write_file(junk, "garbage");
    CHECK(cli("check " + junk).code == 2);
    CHECK(cli("eval " + junk).code == 2);
    CHECK(cli("").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("check /nonexistent/file").code == 2);
    CHECK(cli("check " + corpus("S.proof") + " --system zz").code == 2);
    CHECK(cli("bound " + corpus("B.term") + " --term nope").code == 2);
}
