#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <gmpxx.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

using Rat = mpq_class;

#ifndef ZETADYN_CLI_PATH
#error "ZETADYN_CLI_PATH must point at the command-line binary"
#endif
#ifndef ZETADYN_MAPS_DIR
#error "ZETADYN_MAPS_DIR must point at the example map configs"
#endif

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(ZETADYN_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int raw = pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string maps(const std::string& name) {
    return std::string(ZETADYN_MAPS_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("zeta command emits the expected rational functions") {
    RunResult fib = run("zeta --map " + maps("fibonacci.cfg") + " --order 6");
    CHECK(fib.status == 0);
    CHECK(fib.out.find("num: 1 / den: 1 -1 -1") != std::string::npos);
    CHECK(fib.out.find("cross_check = pass") != std::string::npos);

    RunResult c2 = run("zeta --map " + maps("circle2.cfg") + " --order 6");
    CHECK(c2.status == 0);
    CHECK(c2.out.find("num: 1 -1 / den: 1 -2") != std::string::npos);

    RunResult tor = run("zeta --map " + maps("toral_fib.cfg") + " --order 8");
    CHECK(tor.status == 0);
    CHECK(tor.out.find("num: 1 -2 1 / den: 1 -3 1") != std::string::npos);
}

TEST_CASE("count command cross-checks methods") {
    RunResult r = run("count --map " + maps("circle2.cfg") + " --n-max 6");
    CHECK(r.status == 0);
    CHECK(r.out.find("N_6 = 63 [bruteforce]  63 [cover]") != std::string::npos);
    CHECK(r.out.find("agree = pass") != std::string::npos);

    RunResult csv = run("count --map " + maps("fibonacci.cfg") + " --n-max 5 --csv");
    CHECK(csv.status == 0);
    CHECK(csv.out.find("n,N_n[trace],N_n[bruteforce]") != std::string::npos);
    CHECK(csv.out.find("5,11,11") != std::string::npos);
}

TEST_CASE("entropy command passes on the built-in maps") {
    for (const char* cfg : {"circle2.cfg", "fibonacci.cfg", "fullshift2.cfg",
                            "toral_fib.cfg"}) {
        RunResult r = run("entropy --map " + maps(cfg));
        CHECK(r.status == 0);
        CHECK(r.out.find("pass = pass") != std::string::npos);
    }
}

TEST_CASE("shadow command certifies generated and file orbits") {
    RunResult gen = run("shadow --map " + maps("circle2.cfg") + " --seed 7");
    CHECK(gen.status == 0);
    CHECK(gen.out.find("pass = pass") != std::string::npos);

    // an exact orbit from a file shadows itself with zero error
    std::string orbit = "/tmp/zetadyn_cli_exact_orbit.txt";
    {
        std::ofstream f(orbit);
        Rat t(1, 7);
        for (int i = 0; i < 20; ++i) {
            f << t.get_str() << "\n";
            t = t * 2;
            t -= t.get_num() / t.get_den();  // mod 1
        }
    }
    RunResult file = run("shadow --map " + maps("circle2.cfg") + " --orbit " + orbit);
    CHECK(file.status == 0);
    CHECK(file.out.find("max_error = 0") != std::string::npos);
}

TEST_CASE("cover command verifies the default covers") {
    RunResult c = run("cover --map " + maps("circle2.cfg"));
    CHECK(c.status == 0);
    CHECK(c.out.find("diameter = pass") != std::string::npos);
    CHECK(c.out.find("markov = pass") != std::string::npos);
    CHECK(c.out.find("I_2 =") != std::string::npos);

    RunResult s = run("cover --map " + maps("fibonacci.cfg") + " --mesh 1/8");
    CHECK(s.status == 0);
    CHECK(s.out.find("depth = 3") != std::string::npos);
}

TEST_CASE("machine output is byte-identical across runs") {
    for (const std::string& args :
         {std::string("zeta --map ") + maps("circle2.cfg") + " --json",
          std::string("count --map ") + maps("toral_fib.cfg") + " --csv",
          std::string("shadow --map ") + maps("circle2.cfg") + " --seed 42 --json",
          std::string("entropy --map ") + maps("circle2.cfg") + " --json"}) {
        RunResult a = run(args);
        RunResult b = run(args);
        CHECK(a.status == 0);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
    // different seed, different orbit
    RunResult s1 = run("shadow --map " + maps("circle2.cfg") + " --seed 1 --json");
    RunResult s2 = run("shadow --map " + maps("circle2.cfg") + " --seed 2 --json");
    CHECK(s1.out != s2.out);
}

TEST_CASE("bad inputs exit nonzero with a diagnostic") {
    RunResult missing = run("zeta --map /nonexistent.cfg");
    CHECK(missing.status == 2);
    CHECK(missing.out.find("error:") != std::string::npos);

    std::string bad = "/tmp/zetadyn_cli_bad.cfg";
    {
        std::ofstream f(bad);
        f << "kind circle\nk 1\n";
    }
    RunResult r = run("zeta --map " + bad);
    CHECK(r.status == 2);
    CHECK(r.out.find("error:") != std::string::npos);

    RunResult shadow_sft = run("shadow --map " + maps("fibonacci.cfg"));
    CHECK(shadow_sft.status == 2);
}
