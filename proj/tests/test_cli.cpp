#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

// Runs the installed CLI with the given arguments, capturing stdout+stderr.
CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string("'") + QCCP_CLI_PATH + "' " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe))
        res.output.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

// Strips the wall-clock line so timing noise does not break comparisons.
std::string without_wall_ms(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("\"wall_ms\"") == std::string::npos) out << line << '\n';
    return out.str();
}

}  // namespace

TEST_CASE("running without a subcommand reports usage and exits 64") {
    const CliResult res = run_cli("");
    CHECK(res.exit_code == 64);
    CHECK(res.output.find("subcommand is required") != std::string::npos);
}

TEST_CASE("unknown flags exit 64") {
    CHECK(run_cli("--frobnicate").exit_code == 64);
    CHECK(run_cli("optimize-qs --dim 2 --frobnicate").exit_code == 64);
}

TEST_CASE("help exits 0") {
    const CliResult res = run_cli("--help");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("optimize-qs") != std::string::npos);
}

TEST_CASE("validation failures exit 2") {
    CHECK(run_cli("optimize-qs --dim 40 --restarts 1").exit_code == 2);
    CHECK(run_cli("classical --dim 6 --exact").exit_code == 2);
    CHECK(run_cli("evaluate --strategy /nonexistent/file.json").exit_code == 2);
    CHECK(run_cli("optimize-bell --dim 11 --restarts 1").exit_code == 2);
}

TEST_CASE("reference verification passes for every bundled dimension") {
    const CliResult res = run_cli("verify-appendix");
    CHECK(res.exit_code == 0);
    for (int d = 6; d <= 10; ++d)
        CHECK(res.output.find("d=" + std::to_string(d)) != std::string::npos);
    CHECK(res.output.find("PASS") != std::string::npos);
    CHECK(res.output.find("FAIL") == std::string::npos);
}

TEST_CASE("verification with an absurd tolerance fails with exit 2") {
    const CliResult res = run_cli("verify-appendix --dim 6 --tolerance 1e-12");
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("FAIL") != std::string::npos);
}

TEST_CASE("exact classical solve emits the known d = 2 value") {
    const CliResult res = run_cli("classical --dim 2 --exact --format json");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("\"value\": 0.5") != std::string::npos);
    CHECK(res.output.find("\"witness\"") != std::string::npos);
}

TEST_CASE("optimizer output is byte deterministic for a fixed seed") {
    const std::string cmd =
        "optimize-qs --dim 2 --restarts 2 --iters 30 --seed 5 --format json";
    const CliResult a = run_cli(cmd);
    const CliResult b = run_cli(cmd);
    const CliResult c = run_cli(cmd + " --threads 3");
    REQUIRE(a.exit_code == 0);
    CHECK(without_wall_ms(a.output) == without_wall_ms(b.output));
    CHECK(without_wall_ms(a.output) == without_wall_ms(c.output));
    // Different seeds explore different restarts.
    const CliResult d = run_cli(
        "optimize-qs --dim 2 --restarts 2 --iters 30 --seed 6 --format json");
    CHECK(without_wall_ms(a.output) != without_wall_ms(d.output));
}

TEST_CASE("results can be mirrored into a file") {
    const std::string path = "/tmp/qccp_cli_out_test.json";
    std::remove(path.c_str());
    const CliResult res = run_cli(
        "classical --dim 3 --exact --format json --out " + path);
    REQUIRE(res.exit_code == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == res.output);
    std::remove(path.c_str());
}

TEST_CASE("evaluate round trips an optimizer-produced strategy") {
    const std::string path = "/tmp/qccp_cli_eval_test.json";
    // Produce a strategy document by parsing the optimizer's JSON would need
    // jq; instead serialize through the evaluate pipeline: build a known
    // document here.
    const std::string doc = R"({
      "dimension": 2, "model": "prepare-measure",
      "states": [
        {"x0": 0, "x": 0, "ket": [[1, 0], [0, 0]]},
        {"x0": 0, "x": 1, "ket": [[1, 0], [0, 0]]},
        {"x0": 1, "x": 0, "ket": [[0, 0], [1, 0]]},
        {"x0": 1, "x": 1, "ket": [[0, 0], [1, 0]]}
      ],
      "measurements": [
        {"y": 0, "operators": [{"kind": "kets", "kets": [[[1,0],[0,0]]]},
                                {"kind": "kets", "kets": [[[0,0],[1,0]]]}]},
        {"y": 1, "operators": [{"kind": "kets", "kets": [[[1,0],[0,0]]]},
                                {"kind": "kets", "kets": [[[0,0],[1,0]]]}]}
      ]})";
    std::ofstream out(path);
    out << doc;
    out.close();
    const CliResult res = run_cli("evaluate --strategy " + path + " --format json");
    CHECK(res.exit_code == 0);
    // Identity encoding/decoding scores 1/2 at d = 2.
    CHECK(res.output.find("0.5") != std::string::npos);
    std::remove(path.c_str());
}
