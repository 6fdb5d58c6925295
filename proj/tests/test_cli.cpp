#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tdpp/cli.hpp"
#include "tdpp/network.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace tdpp;

namespace {

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data_path(const std::string& name) {
    return std::string(TDPP_DATA_DIR) + "/" + name;
}

// Scratch file helper; files land in the test working directory.
struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& content) : path(name) {
        std::ofstream f(path, std::ios::binary);
        f << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("the demo topology constant matches the shipped data file") {
    CHECK(read_file(data_path("fig3.topo")) == std::string(fig3_topology_text()));
}

TEST_CASE("route subcommand") {
    SUBCASE("five-node walkthrough routes and purifies") {
        const CliRun run = cli({"route", data_path("fig3.topo"), "--pair", "s:d"});
        CHECK(run.exit_code == 0);
        CHECK(run.out.find("path=s,r2,r3,d") != std::string::npos);
        CHECK(run.out.find("fpur=0.927362") != std::string::npos);
        CHECK(run.out.find("status=success") != std::string::npos);
    }

    SUBCASE("unreachable pair exits 2 with no_path") {
        TempFile topo("cli_island.topo",
                      "node a 2\nnode b 2\nnode island 2\nedge a b 1 0.9\n");
        const CliRun run = cli({"route", topo.path, "--pair", "a:island"});
        CHECK(run.exit_code == 2);
        CHECK(run.out.find("status=no_path") != std::string::npos);
    }

    SUBCASE("missing topology exits 1") {
        const CliRun run = cli({"route", "no_such_file.topo", "--pair", "a:b"});
        CHECK(run.exit_code == 1);
        CHECK(run.err.find("error:") == 0);
    }

    SUBCASE("malformed topology names the line") {
        TempFile topo("cli_broken.topo", "node a 2\nedge a a 3\n");
        const CliRun run = cli({"route", topo.path, "--pair", "a:a"});
        CHECK(run.exit_code == 1);
        CHECK(run.err.find("line 2") != std::string::npos);
    }

    SUBCASE("baseline algorithm flag") {
        const CliRun run = cli({"route", data_path("fig3.topo"), "--pair", "s:d", "--algorithm",
                                "hop_baseline", "--threshold", "0.4"});
        CHECK(run.exit_code == 0);
        CHECK(run.out.find("path=s,r1,d") != std::string::npos);
    }

    SUBCASE("unknown flag is rejected") {
        const CliRun run = cli({"route", data_path("fig3.topo"), "--pair", "s:d", "--bogus"});
        CHECK(run.exit_code == 1);
    }
}

TEST_CASE("experiment subcommand") {
    const std::string config_text = "topology = " + data_path("fig3.topo") +
                                    "\n"
                                    "pairs = s:d\n"
                                    "trials = 1\n"
                                    "capacity = 4\n"
                                    "threshold = 0.3\n"
                                    "state_factor = off\n"
                                    "k = 2\n";

    SUBCASE("single point gives one data row") {
        TempFile config("cli_single.conf", config_text);
        const CliRun run = cli({"experiment", "--config", config.path});
        CHECK(run.exit_code == 0);
        int lines = 0;
        for (char c : run.out) lines += (c == '\n');
        CHECK(lines == 2);  // header + one row
        CHECK(run.out.find("4,tdpp,") != std::string::npos);
    }

    SUBCASE("sweep rows are capacities times algorithms") {
        TempFile config("cli_sweep.conf", config_text);
        const CliRun run =
            cli({"experiment", "--config", config.path, "--capacity",
                 "10,20,30,40,50,60,70,80,90", "--algorithm", "tdpp,hop_baseline"});
        CHECK(run.exit_code == 0);
        int lines = 0;
        for (char c : run.out) lines += (c == '\n');
        CHECK(lines == 19);  // header + 18 rows
    }

    SUBCASE("identical configs give byte-identical files") {
        TempFile config("cli_repeat.conf", config_text);
        const CliRun once = cli({"experiment", "--config", config.path, "--out", "cli_a.csv"});
        const CliRun twice = cli({"experiment", "--config", config.path, "--out", "cli_b.csv"});
        CHECK(once.exit_code == 0);
        CHECK(twice.exit_code == 0);
        CHECK(read_file("cli_a.csv") == read_file("cli_b.csv"));
        CHECK(!read_file("cli_a.csv").empty());
        std::remove("cli_a.csv");
        std::remove("cli_b.csv");
    }

    SUBCASE("unknown config key exits 1 naming the key") {
        TempFile config("cli_bad.conf", config_text + "volume = 11\n");
        const CliRun run = cli({"experiment", "--config", config.path});
        CHECK(run.exit_code == 1);
        CHECK(run.err.find("volume") != std::string::npos);
    }

    SUBCASE("missing topology is an input error") {
        const CliRun run = cli({"experiment"});
        CHECK(run.exit_code == 1);
    }
}

TEST_CASE("validate subcommand") {
    SUBCASE("a fresh routing log validates") {
        const CliRun route = cli({"route", data_path("fig3.topo"), "--pair", "s:d"});
        TempFile log("cli_ok.log", route.out);
        const CliRun run = cli({"validate", data_path("fig3.topo"), log.path});
        CHECK(run.exit_code == 0);
        CHECK(run.out.find("all constraints satisfied") != std::string::npos);
    }

    SUBCASE("doubled edge use beyond capacity exits 3 with a 13g line") {
        TempFile topo("cli_cap1.topo", "node a 2\nnode b 2\nedge a b 1 0.9\n");
        const CliRun route = cli({"route", topo.path, "--pair", "a:b", "--threshold", "0.3"});
        REQUIRE(route.exit_code == 0);
        TempFile log("cli_double.log", route.out + route.out);  // same success twice
        const CliRun run = cli({"validate", topo.path, log.path});
        CHECK(run.exit_code == 3);
        CHECK(run.out.find("CONSTRAINT 13g AT a-b") != std::string::npos);
    }

    SUBCASE("log referencing unknown nodes exits 1") {
        TempFile log("cli_ghost.log",
                     "pair=s:ghost path=s,ghost dmax=0.5 fsel=0.8 pedge=none fpur=na "
                     "purify=no bound=yes e2e=0.8 status=success\n");
        const CliRun run = cli({"validate", data_path("fig3.topo"), log.path});
        CHECK(run.exit_code == 1);
    }

    SUBCASE("unparseable log exits 1") {
        TempFile log("cli_garbled.log", "this is not a log\n");
        const CliRun run = cli({"validate", data_path("fig3.topo"), log.path});
        CHECK(run.exit_code == 1);
    }
}

TEST_CASE("demo-pump subcommand") {
    SUBCASE("default trajectory matches the reference values") {
        const CliRun run = cli({"demo-pump"});
        CHECK(run.exit_code == 0);
        CHECK(run.out.find("round 1") != std::string::npos);
        CHECK(run.out.find("round 3") != std::string::npos);
        CHECK(run.out.find("DEVIATION") == std::string::npos);
        CHECK(run.out.find("after 3 rounds") != std::string::npos);
    }

    SUBCASE("strong inputs converge in one round") {
        const CliRun run = cli({"demo-pump", "--a", "0.9", "--b", "0.9", "--threshold", "0.8"});
        CHECK(run.exit_code == 0);
        CHECK(run.out.find("after 1 rounds") != std::string::npos);
    }

    SUBCASE("weak inputs report non-convergence") {
        const CliRun run = cli({"demo-pump", "--a", "0.3", "--b", "0.3", "--threshold", "0.999",
                                "--max-rounds", "5"});
        CHECK(run.exit_code == 0);
        CHECK(run.out.find("not converged after 5 rounds") != std::string::npos);
    }

    SUBCASE("invalid inputs exit 1") {
        const CliRun run = cli({"demo-pump", "--a", "1.4"});
        CHECK(run.exit_code == 1);
    }
}

TEST_CASE("demo-fig3 subcommand") {
    const CliRun run = cli({"demo-fig3"});
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("path=s,r2,r3,d") != std::string::npos);
    CHECK(run.out.find("FAIL") == std::string::npos);
    CHECK(run.out.find("ok:   purified fidelity is 0.92 within 0.01") != std::string::npos);
}
