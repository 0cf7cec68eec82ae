#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"

namespace {

std::string g_cli;
std::string g_data;

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

RunResult run(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return g_data + "/" + name; }

// value of "key v" (text mode) or "key":v (json mode); nan when absent
double field(const std::string& out, const std::string& key) {
    size_t pos = out.find(key + " ");
    size_t skip = key.size() + 1;
    if (pos == std::string::npos) {
        pos = out.find("\"" + key + "\":");
        skip = key.size() + 3;
    }
    if (pos == std::string::npos) return std::nan("");
    return std::strtod(out.c_str() + pos + skip, nullptr);
}

}  // namespace

TEST_CASE("fidelity of identical states is one") {
    RunResult r = run("fidelity --input " + data("density_identity_half.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("program fidelity") != std::string::npos);
    CHECK(r.output.find("status optimal") != std::string::npos);
    CHECK(field(r.output, "value") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fidelity of commuting states matches the diagonal formula") {
    RunResult r = run("fidelity --input " + data("density_diag.json"));
    CHECK(r.exit_code == 0);
    CHECK(field(r.output, "value") == doctest::Approx(0.9659258262890683).epsilon(1e-6));
}

TEST_CASE("json output is machine readable and reproducible") {
    const std::string args = "fidelity --json --input " + data("density_diag.json");
    RunResult r1 = run(args);
    CHECK(r1.exit_code == 0);
    CHECK(r1.output.find("\"program\":\"fidelity\"") != std::string::npos);
    CHECK(r1.output.find("\"certificate\"") != std::string::npos);
    CHECK(field(r1.output, "value") == doctest::Approx(0.9659258262890683).epsilon(1e-6));
    CHECK(field(r1.output, "gap") <= 1e-7);
    RunResult r2 = run(args);
    CHECK(r1.output == r2.output);
}

TEST_CASE("diamond norm of the swap choi matrix") {
    RunResult r = run("diamond --input " + data("choi_swap.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("program choi") != std::string::npos);
    CHECK(field(r.output, "value") == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("diamond norm cross-checks against the oracles") {
    RunResult r = run("diamond --oracle --input " + data("choi_swap.json"));
    CHECK(r.exit_code == 0);
    CHECK(field(r.output, "ascent") >= 2.0 - 1e-5);
    // swap is not PSD, so the cp shortcut must decline
    CHECK(r.output.find("oracle cp null") != std::string::npos);

    RunResult tp = run("diamond --oracle --input " + data("stinespring_tp.json"));
    CHECK(tp.exit_code == 0);
    CHECK(field(tp.output, "value") == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(field(tp.output, "cp") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(field(tp.output, "ascent") <= 1.0 + 1e-6);
}

TEST_CASE("stinespring inputs run through the max-fidelity form") {
    RunResult r = run("diamond --input " + data("stinespring_tp.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("program maxfid-stinespring") != std::string::npos);
    CHECK(field(r.output, "value") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("spectral norm of swap equals its trace-norm cousin") {
    RunResult r = run("cb-spectral --input " + data("choi_swap.json"));
    CHECK(r.exit_code == 0);
    CHECK(field(r.output, "value") == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("diagnose reports margins and flags the zero map") {
    RunResult r = run("diagnose --input " + data("stinespring_zero.json"));
    CHECK(r.exit_code == 0);
    CHECK(field(r.output, "epsilon") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(field(r.output, "r-bound") == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(r.output.find("degenerate-zero-map true") != std::string::npos);

    RunResult c = run("diagnose --json --input " + data("choi_swap.json"));
    CHECK(c.exit_code == 0);
    CHECK(field(c.output, "epsilon") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(field(c.output, "r_bound") == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(c.output.find("\"interior_point_check\":true") != std::string::npos);
}

TEST_CASE("malformed inputs exit with code one and a useful message") {
    RunResult t = run("fidelity --input " + data("truncated.json"));
    CHECK(t.exit_code == 1);
    CHECK(t.output.find("invalid JSON") != std::string::npos);

    RunResult m = run("fidelity --input " + data("missing_field.json"));
    CHECK(m.exit_code == 1);
    CHECK(m.output.find("\"matrices.Q\"") != std::string::npos);

    RunResult h = run("fidelity --input " + data("bad_hermitian.json"));
    CHECK(h.exit_code == 1);
    CHECK(h.output.find("Hermitian") != std::string::npos);

    RunResult missing = run("fidelity --input " + data("does_not_exist.json"));
    CHECK(missing.exit_code == 1);
    CHECK(missing.output.find("cannot open") != std::string::npos);

    // kind mismatch: a channel is not a density pair
    RunResult k = run("fidelity --input " + data("choi_swap.json"));
    CHECK(k.exit_code == 1);
    CHECK(k.output.find("density-pair") != std::string::npos);
}

TEST_CASE("usage errors are input errors") {
    CHECK(run("").exit_code == 1);
    CHECK(run("frobnicate --input x.json").exit_code == 1);
    CHECK(run("fidelity").exit_code == 1);  // --input is required
    CHECK(run("fidelity --input a.json --tol -3").exit_code == 1);
    CHECK(run("--help").exit_code == 0);
}

TEST_CASE("iteration-starved solves exit with code two") {
    RunResult r = run("fidelity --max-iter 1 --input " + data("density_diag.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("status max-iterations") != std::string::npos);
}

TEST_CASE("trace lines go to stderr and do not disturb json output") {
    RunResult r = run("fidelity --trace --json --input " + data("density_diag.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("iter 0 alpha") != std::string::npos);
    // combined output still contains exactly one json object line
    const size_t brace = r.output.find("{\"");
    REQUIRE(brace != std::string::npos);
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: test_cli <path-to-cli> <data-dir>\n");
        return 2;
    }
    g_cli = argv[1];
    g_data = argv[2];
    doctest::Context ctx;
    return ctx.run();
}
